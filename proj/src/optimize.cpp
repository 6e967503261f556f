#include "ieswpt/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "ieswpt/sim.hpp"
#include "parallel.hpp"

namespace ieswpt {

const char* to_string(OptimizeMethod m) {
    switch (m) {
        case OptimizeMethod::ClosedForm: return "closed_form";
        case OptimizeMethod::GoldenSection: return "golden_section";
        case OptimizeMethod::GridScan: return "grid_scan";
    }
    return "?";
}

namespace {

// Golden-section minimum of a unimodal f on [lo, hi]; stops when the
// bracket width drops below rel_tol of its midpoint.
double golden_section(const std::function<double(double)>& f, double lo, double hi,
                      double rel_tol) {
    constexpr double inv_phi = 0.6180339887498949;
    double x1 = hi - inv_phi * (hi - lo);
    double x2 = lo + inv_phi * (hi - lo);
    double f1 = f(x1);
    double f2 = f(x2);
    while (hi - lo > rel_tol * 0.5 * (lo + hi)) {
        if (f1 <= f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace

BoundMinimization minimize_bound(const ReceiverSpec& spec, int n) {
    if (spec.t_d_s <= 0.0) {
        throw DegenerateObjective(
            "with t_d = 0 the bound decreases monotonically toward q_ies -> 0; "
            "there is no interior optimum to report");
    }
    auto objective = [&](double q) { return standby_bound_at(spec, n, q); };

    const double q_c = spec.q_c_j;
    const double lo = q_c * 1e-12;
    const double hi = q_c * (1.0 - 1e-12);

    BoundMinimization out;
    double q_closed = std::sqrt(spec.t_d_s * q_c * (spec.p_r_w - spec.p_b_w));
    const bool clipped = q_closed >= q_c;
    if (clipped) q_closed = hi;
    out.closed_form.q_star_j = q_closed;
    out.closed_form.t_star_s = objective(q_closed);
    out.closed_form.method = OptimizeMethod::ClosedForm;
    out.closed_form.at_upper_limit = clipped;

    const double q_golden = golden_section(objective, lo, hi, 1e-6);
    out.golden_section.q_star_j = q_golden;
    out.golden_section.t_star_s = objective(q_golden);
    out.golden_section.method = OptimizeMethod::GoldenSection;
    out.golden_section.at_upper_limit = clipped;
    return out;
}

OptimizationResult grid_search_qies(const ValidatedScenario& s,
                                    const std::vector<double>& q_grid,
                                    CurveEvaluator evaluator) {
    if (q_grid.empty()) throw std::invalid_argument("q_ies grid is empty");
    const double q_c = s.receiver().q_c_j;
    for (std::size_t i = 0; i < q_grid.size(); ++i) {
        if (!(q_grid[i] > 0.0) || !(q_grid[i] < q_c)) {
            throw std::invalid_argument("q_ies grid values must lie in (0, q_c)");
        }
        if (i > 0 && !(q_grid[i] > q_grid[i - 1])) {
            throw std::invalid_argument("q_ies grid must be strictly increasing");
        }
    }
    if (evaluator == CurveEvaluator::Analytic &&
        s.profile().kind != ChargeProfile::Kind::Constant) {
        throw std::invalid_argument("the analytic evaluator requires the constant profile");
    }

    OptimizationResult out;
    out.method = OptimizeMethod::GridScan;
    out.curve.resize(q_grid.size());
    detail::parallel_for(q_grid.size(), [&](std::size_t i) {
        ScenarioSpec pt = s.spec();
        pt.receiver.q_ies_j = q_grid[i];
        CurvePoint& cp = out.curve[i];
        cp.q_ies_j = q_grid[i];
        if (evaluator == CurveEvaluator::Analytic) {
            const TocBreakdown toc = t_oc_analytic(pt.receiver, pt.n);
            cp.t_oc_s = toc.t_oc_s;
            cp.k_l = phase_durations(pt.receiver).k_l;
            cp.formula_id = toc.formula_id;
        } else {
            cp.t_oc_s = run_event_sim(validate_spec(pt), false).t_oc_s;
        }
    });

    std::size_t best = 0;
    for (std::size_t i = 1; i < out.curve.size(); ++i) {
        if (out.curve[i].t_oc_s < out.curve[best].t_oc_s) best = i;
    }
    out.q_star_j = out.curve[best].q_ies_j;
    out.t_star_s = out.curve[best].t_oc_s;
    return out;
}

std::vector<double> default_qies_grid(double q_c_j, int points) {
    const double lo = std::log(q_c_j * 1e-7);
    const double hi = std::log(q_c_j * 0.5);
    std::vector<double> grid(points);
    for (int i = 0; i < points; ++i) {
        const double f = points > 1 ? static_cast<double>(i) / (points - 1) : 0.0;
        grid[i] = std::exp(lo + f * (hi - lo));
    }
    return grid;
}

}  // namespace ieswpt
