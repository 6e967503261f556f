#pragma once

#include <map>
#include <string>

#include "ieswpt/types.hpp"

namespace ieswpt {

enum class FormulaId { Eq2, Eq3a, Eq3b, Eq3c, Eq4, Eq5a, Eq5b, Eq5c };

const char* to_string(FormulaId id);

/// Closed-form overall charge time with the terms it was assembled from.
struct TocBreakdown {
    double t_oc_s = 0.0;
    RegimeReport regime;
    FormulaId formula_id = FormulaId::Eq2;
    // named terms summing to t_oc_s: full_cycles / final_cycle / stagger
    std::map<std::string, double> components;
};

/// A = Q_IES/(P_R-P_B), B = Q_IES/P_B, C = A+B, K_L = floor(Q_C/(P_B*C)),
/// C' = (Q_C - K_L*P_B*C)/P_B. Constant-profile quantities.
PhaseDurations phase_durations(const ReceiverSpec& spec);

/// Largest receiver count with zero standby at t_d = 0: floor((A+B)/A),
/// which reduces to floor(P_R/P_B) independent of Q_IES.
long n_max(const ReceiverSpec& spec);

/// Standby iff (n-1)*A + n*T_d > B (tie -> no standby; n = 1 never waits).
/// The final-cycle case follows the condition column:
///   a: C' <= (B - n*T_d)/(n-1);  b: ... < C' <= A;  c: A < C'.
RegimeReport classify_regime(const ReceiverSpec& spec, int n);

/// Overall charge time, constant profile.
/// No standby: Q_C/P_B + (n-1)(A + T_d).
/// Standby:    K_L*n*(A+T_d) + final-cycle term per case a/b/c.
TocBreakdown t_oc_analytic(const ReceiverSpec& spec, int n);

/// Upper bound on the overall charge time:
/// no-standby regime Q_C/P_B + C; standby regime n*(A+T_d)*(Q_C/Q_IES + 1).
double t_oc_upper_bound(const ReceiverSpec& spec, int n);

/// The standby-regime bound as a function of the buffer capacity, used as
/// the sizing objective: n*(q/(P_R-P_B) + T_d)*(Q_C/q + 1).
double standby_bound_at(const ReceiverSpec& spec, int n, double q_ies_j);

/// Sequential charging without buffering: n receivers back to back.
/// Constant profile: n*(1-s0)*Q_C/P_B. Piecewise3: n*(end - offset(s0)).
double conventional_t_oc(const ReceiverSpec& spec, int n,
                         const ChargeProfile& profile, double initial_soc);

}  // namespace ieswpt
