#include "ieswpt/analytic.hpp"

#include <algorithm>
#include <cmath>

#include "ieswpt/profile.hpp"

namespace ieswpt {

namespace {

// floor() that forgives values sitting a hair under an integer, so exact
// ratios like p_r/p_b = 2 computed through a/b arithmetic stay exact.
long floor_tol(double x) {
    double f = std::floor(x);
    if (x - f > 1.0 - 1e-9) f += 1.0;
    return static_cast<long>(f);
}

}  // namespace

const char* to_string(FormulaId id) {
    switch (id) {
        case FormulaId::Eq2: return "Eq2";
        case FormulaId::Eq3a: return "Eq3a";
        case FormulaId::Eq3b: return "Eq3b";
        case FormulaId::Eq3c: return "Eq3c";
        case FormulaId::Eq4: return "Eq4";
        case FormulaId::Eq5a: return "Eq5a";
        case FormulaId::Eq5b: return "Eq5b";
        case FormulaId::Eq5c: return "Eq5c";
    }
    return "?";
}

PhaseDurations phase_durations(const ReceiverSpec& spec) {
    PhaseDurations d;
    d.a_s = spec.q_ies_j / (spec.p_r_w - spec.p_b_w);
    d.b_s = spec.q_ies_j / spec.p_b_w;
    d.c_s = d.a_s + d.b_s;
    d.k_l = floor_tol(spec.q_c_j / (spec.p_b_w * d.c_s));
    d.c_prime_s = std::max(0.0, (spec.q_c_j - static_cast<double>(d.k_l) * spec.p_b_w * d.c_s) /
                                    spec.p_b_w);
    return d;
}

long n_max(const ReceiverSpec& spec) {
    const PhaseDurations d = phase_durations(spec);
    return floor_tol((d.a_s + d.b_s) / d.a_s);
}

RegimeReport classify_regime(const ReceiverSpec& spec, int n) {
    const PhaseDurations d = phase_durations(spec);
    RegimeReport rep;
    rep.n_max = n_max(spec);
    if (n <= 1) {
        // a lone receiver is served whenever it needs power
        rep.standby = false;
        rep.final_case = FinalCase::None;
        return rep;
    }
    const double occupancy = (n - 1) * d.a_s + n * spec.t_d_s;
    rep.standby = occupancy > d.b_s;
    if (rep.standby) {
        const double case_a_limit = (d.b_s - n * spec.t_d_s) / (n - 1);
        if (d.c_prime_s <= case_a_limit) {
            rep.final_case = FinalCase::A;
        } else if (d.c_prime_s <= d.a_s) {
            rep.final_case = FinalCase::B;
        } else {
            rep.final_case = FinalCase::C;
        }
    }
    return rep;
}

TocBreakdown t_oc_analytic(const ReceiverSpec& spec, int n) {
    const PhaseDurations d = phase_durations(spec);
    const double td = spec.t_d_s;
    TocBreakdown out;
    out.regime = classify_regime(spec, n);

    if (!out.regime.standby) {
        const double stagger = (n - 1) * (d.a_s + td);
        out.components["full_cycles"] = static_cast<double>(d.k_l) * d.c_s;
        out.components["final_cycle"] = d.c_prime_s;
        out.components["stagger"] = stagger;
        out.t_oc_s = spec.q_c_j / spec.p_b_w + stagger;
        out.formula_id = td == 0.0 ? FormulaId::Eq2 : FormulaId::Eq4;
        return out;
    }

    const double full = static_cast<double>(d.k_l) * n * (d.a_s + td);
    out.components["full_cycles"] = full;
    switch (out.regime.final_case) {
        case FinalCase::A:
            out.components["final_cycle"] = (d.b_s - td) + d.c_prime_s;
            out.components["stagger"] = 0.0;
            out.formula_id = td == 0.0 ? FormulaId::Eq3a : FormulaId::Eq5a;
            break;
        case FinalCase::B:
            out.components["final_cycle"] = n * d.c_prime_s;
            out.components["stagger"] = (n - 1) * td;
            out.formula_id = td == 0.0 ? FormulaId::Eq3b : FormulaId::Eq5b;
            break;
        default:
            out.components["final_cycle"] = d.c_prime_s;
            out.components["stagger"] = (n - 1) * (d.a_s + td);
            out.formula_id = td == 0.0 ? FormulaId::Eq3c : FormulaId::Eq5c;
            break;
    }
    out.t_oc_s = full + out.components["final_cycle"] + out.components["stagger"];
    return out;
}

double t_oc_upper_bound(const ReceiverSpec& spec, int n) {
    const PhaseDurations d = phase_durations(spec);
    const RegimeReport rep = classify_regime(spec, n);
    if (!rep.standby) {
        return spec.q_c_j / spec.p_b_w + d.c_s;
    }
    return standby_bound_at(spec, n, spec.q_ies_j);
}

double standby_bound_at(const ReceiverSpec& spec, int n, double q_ies_j) {
    const double a = q_ies_j / (spec.p_r_w - spec.p_b_w);
    return n * (a + spec.t_d_s) * (spec.q_c_j / q_ies_j + 1.0);
}

double conventional_t_oc(const ReceiverSpec& spec, int n,
                         const ChargeProfile& profile, double initial_soc) {
    if (profile.kind == ChargeProfile::Kind::Constant) {
        return n * (1.0 - initial_soc) * spec.q_c_j / spec.p_b_w;
    }
    DemandModel dm(profile, spec.q_c_j);
    const double offset = dm.time_at_energy(initial_soc * dm.total_energy_j());
    return n * (dm.end_time_s() - offset);
}

}  // namespace ieswpt
