#pragma once

#include <optional>
#include <vector>

#include "ieswpt/types.hpp"
#include "ieswpt/analytic.hpp"

namespace ieswpt {

/// Raised by minimize_bound when t_d = 0: the bound is then monotone in
/// Q_IES and its infimum sits at Q_IES -> 0, so there is no interior
/// minimizer to report.
class DegenerateObjective : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class OptimizeMethod { ClosedForm, GoldenSection, GridScan };

const char* to_string(OptimizeMethod m);

struct CurvePoint {
    double q_ies_j = 0.0;
    double t_oc_s = 0.0;
    long k_l = -1;                       // Analytic evaluator only
    std::optional<FormulaId> formula_id; // Analytic evaluator only
};

struct OptimizationResult {
    double q_star_j = 0.0;
    double t_star_s = 0.0;
    OptimizeMethod method = OptimizeMethod::ClosedForm;
    bool at_upper_limit = false;  // minimizer clamped to the search limit
    std::vector<CurvePoint> curve;
};

/// Closed-form and golden-section minimization of the standby-regime bound
/// over Q_IES in (0, Q_C). Both land on q* = sqrt(T_d*Q_C*(P_R-P_B)) when
/// it is interior; they must agree within 0.5%.
struct BoundMinimization {
    OptimizationResult closed_form;
    OptimizationResult golden_section;
};

BoundMinimization minimize_bound(const ReceiverSpec& spec, int n);

enum class CurveEvaluator { Analytic, EventSim };

/// Evaluates the overall charge time at every grid point (strictly
/// increasing, inside (0, Q_C)) and returns the argmin plus the full
/// curve. The Analytic evaluator also records K_L and the formula case
/// per point. Grid points run concurrently.
OptimizationResult grid_search_qies(const ValidatedScenario& s,
                                    const std::vector<double>& q_grid,
                                    CurveEvaluator evaluator);

/// Default sizing grid: 400 log-spaced points in [Q_C*1e-7, Q_C*0.5].
std::vector<double> default_qies_grid(double q_c_j, int points = 400);

}  // namespace ieswpt
