#include "ieswpt/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "ieswpt/analytic.hpp"
#include "parallel.hpp"

namespace ieswpt {

const char* to_string(SweepAxis a) {
    switch (a) {
        case SweepAxis::QIes: return "q_ies";
        case SweepAxis::N: return "n";
        case SweepAxis::PR: return "p_r";
        case SweepAxis::InitialSoc: return "initial_soc";
    }
    return "?";
}

const char* to_string(Evaluator e) {
    switch (e) {
        case Evaluator::Analytic: return "analytic";
        case Evaluator::Bound: return "bound";
        case Evaluator::EventSim: return "sim";
        case Evaluator::Conventional: return "conventional";
    }
    return "?";
}

const char* csv_column(Evaluator e) {
    switch (e) {
        case Evaluator::Analytic: return "t_oc_analytic_s";
        case Evaluator::Bound: return "t_oc_bound_s";
        case Evaluator::EventSim: return "t_oc_sim_s";
        case Evaluator::Conventional: return "t_oc_conventional_s";
    }
    return "?";
}

std::string fmt_g9(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

std::string fmt_f9(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9f", v);
    return buf;
}

ScenarioSpec scenario_at(const SweepRequest& req, double value) {
    ScenarioSpec s = req.base;
    switch (req.axis) {
        case SweepAxis::QIes:
            s.receiver.q_ies_j = req.ratio_mode ? value * s.receiver.q_c_j : value;
            break;
        case SweepAxis::N: {
            const double r = std::round(value);
            if (std::abs(value - r) > 1e-9) {
                throw std::invalid_argument("n axis values must be integers");
            }
            s.n = static_cast<int>(r);
            break;
        }
        case SweepAxis::PR:
            s.receiver.p_r_w = value;
            break;
        case SweepAxis::InitialSoc:
            s.initial_soc = value;
            break;
    }
    return s;
}

std::vector<SweepRow> run_sweep(const SweepRequest& req) {
    if (req.values.empty()) throw std::invalid_argument("sweep needs at least one value");
    for (std::size_t i = 1; i < req.values.size(); ++i) {
        if (!(req.values[i] > req.values[i - 1])) {
            throw std::invalid_argument("sweep values must be strictly increasing");
        }
    }
    if (req.evaluators.empty()) throw std::invalid_argument("sweep needs an evaluator");

    const bool constant_base =
        req.base.profile.kind == ChargeProfile::Kind::Constant;
    for (Evaluator e : req.evaluators) {
        if (!constant_base && (e == Evaluator::Analytic || e == Evaluator::Bound)) {
            throw ValidationError(
                {"analytic and bound evaluators require the constant profile"});
        }
    }

    // validate every point up front so a bad point fails before any work runs
    std::vector<ScenarioSpec> points(req.values.size());
    for (std::size_t i = 0; i < req.values.size(); ++i) {
        points[i] = scenario_at(req, req.values[i]);
        validate_spec(points[i]);
    }

    std::vector<SweepRow> rows(points.size());
    detail::parallel_for(points.size(), [&](std::size_t i) {
        const ScenarioSpec& pt = points[i];
        SweepRow& row = rows[i];
        row.axis_value = req.values[i];
        row.q_ies_j = pt.receiver.q_ies_j;
        if (constant_base) {
            const PhaseDurations d = phase_durations(pt.receiver);
            const RegimeReport rep = classify_regime(pt.receiver, pt.n);
            row.k_l = d.k_l;
            row.regime = rep.standby ? std::string("standby_") + to_string(rep.final_case)
                                     : "no_standby";
        }
        for (Evaluator e : req.evaluators) {
            switch (e) {
                case Evaluator::Analytic:
                    row.t_oc_analytic_s = t_oc_analytic(pt.receiver, pt.n).t_oc_s;
                    break;
                case Evaluator::Bound:
                    row.t_oc_bound_s = t_oc_upper_bound(pt.receiver, pt.n);
                    break;
                case Evaluator::EventSim: {
                    const SimResult r = run_event_sim(validate_spec(pt), false);
                    row.t_oc_sim_s = r.t_oc_s;
                    row.standby_total_s = r.total_standby_s;
                    break;
                }
                case Evaluator::Conventional:
                    row.t_oc_conventional_s =
                        conventional_t_oc(pt.receiver, pt.n, pt.profile, pt.initial_soc);
                    break;
            }
        }
    });
    return rows;
}

void write_sweep_csv(const SweepRequest& req, const std::vector<SweepRow>& rows,
                     std::ostream& out) {
    const bool with_abs = req.ratio_mode && req.axis == SweepAxis::QIes;
    out << "axis_value";
    if (with_abs) out << ",q_ies_j";
    for (Evaluator e : req.evaluators) out << "," << csv_column(e);
    out << ",regime,k_l,standby_total_s\n";

    auto cell = [&](const std::optional<double>& v) -> std::string {
        return v ? fmt_g9(*v) : std::string();
    };
    for (const SweepRow& row : rows) {
        out << fmt_g9(row.axis_value);
        if (with_abs) out << "," << fmt_g9(row.q_ies_j);
        for (Evaluator e : req.evaluators) {
            out << ",";
            switch (e) {
                case Evaluator::Analytic: out << cell(row.t_oc_analytic_s); break;
                case Evaluator::Bound: out << cell(row.t_oc_bound_s); break;
                case Evaluator::EventSim: out << cell(row.t_oc_sim_s); break;
                case Evaluator::Conventional: out << cell(row.t_oc_conventional_s); break;
            }
        }
        out << "," << row.regime;
        out << ",";
        if (row.k_l) out << *row.k_l;
        out << "," << cell(row.standby_total_s);
        out << "\n";
    }
}

void write_trace_csv(const std::vector<EventRecord>& trace, std::ostream& out) {
    out << "time_s,receiver,event,ies_energy_j,battery_energy_j\n";
    for (const EventRecord& rec : trace) {
        out << fmt_f9(rec.time_s) << ",";
        if (rec.receiver >= 0) out << rec.receiver;
        out << "," << to_string(rec.kind) << "," << fmt_g9(rec.ies_energy_j) << ","
            << fmt_g9(rec.battery_energy_j) << "\n";
    }
}

}  // namespace ieswpt
