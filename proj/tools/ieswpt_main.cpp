#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ieswpt/analytic.hpp"
#include "ieswpt/config.hpp"
#include "ieswpt/optimize.hpp"
#include "ieswpt/profile.hpp"
#include "ieswpt/sim.hpp"
#include "ieswpt/sweep.hpp"

namespace {

using namespace ieswpt;

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 2;    // validation / configuration problems
constexpr int kExitInternal = 3;   // guard trips, ledger violations

struct GridFlags {
    double min = 0.0;
    double max = 0.0;
    int count = 0;
    bool log_spacing = false;
    std::vector<double> values;
};

std::vector<double> materialize(const GridFlags& g) {
    if (!g.values.empty()) return g.values;
    std::vector<double> out;
    if (g.count <= 0) return out;
    if (g.count == 1) {
        out.push_back(g.min);
        return out;
    }
    for (int i = 0; i < g.count; ++i) {
        const double f = static_cast<double>(i) / (g.count - 1);
        if (g.log_spacing) {
            out.push_back(std::exp(std::log(g.min) + f * (std::log(g.max) - std::log(g.min))));
        } else {
            out.push_back(g.min + f * (g.max - g.min));
        }
    }
    return out;
}

ScenarioSpec scenario_from(const std::string& config_path) {
    if (config_path.empty()) return default_scenario();
    return load_config(config_path);
}

void print_kv(const std::string& key, const std::string& value) {
    std::cout << key << "=" << value << "\n";
}
void print_kv(const std::string& key, double value) { print_kv(key, fmt_g9(value)); }

void print_scenario(const ScenarioSpec& s) {
    print_kv("scenario.p_b_w", s.receiver.p_b_w);
    print_kv("scenario.p_r_w", s.receiver.p_r_w);
    print_kv("scenario.q_c_j", s.receiver.q_c_j);
    print_kv("scenario.q_ies_j", s.receiver.q_ies_j);
    print_kv("scenario.t_d_s", s.receiver.t_d_s);
    print_kv("scenario.n", std::to_string(s.n));
    print_kv("scenario.profile",
             s.profile.kind == ChargeProfile::Kind::Constant ? "constant" : "piecewise3");
    if (s.profile.kind == ChargeProfile::Kind::Piecewise3) {
        print_kv("scenario.profile_scale", s.profile.scale);
    }
    print_kv("scenario.initial_soc", s.initial_soc);
}

int cmd_analyze(const std::string& config_path) {
    const ScenarioSpec s = scenario_from(config_path);
    validate_spec(s);
    if (s.profile.kind != ChargeProfile::Kind::Constant) {
        std::cerr << "analyze requires the constant profile; use simulate for piecewise3\n";
        return kExitInvalid;
    }
    print_scenario(s);
    const PhaseDurations d = phase_durations(s.receiver);
    print_kv("phase.a_s", d.a_s);
    print_kv("phase.b_s", d.b_s);
    print_kv("phase.c_s", d.c_s);
    print_kv("phase.k_l", std::to_string(d.k_l));
    print_kv("phase.c_prime_s", d.c_prime_s);
    const RegimeReport rep = classify_regime(s.receiver, s.n);
    print_kv("regime.standby", rep.standby ? "true" : "false");
    print_kv("regime.final_case", to_string(rep.final_case));
    print_kv("regime.n_max", std::to_string(rep.n_max));
    const TocBreakdown toc = t_oc_analytic(s.receiver, s.n);
    print_kv("toc.formula", to_string(toc.formula_id));
    print_kv("toc.t_oc_s", toc.t_oc_s);
    for (const auto& [name, value] : toc.components) {
        print_kv("toc.component." + name + "_s", value);
    }
    print_kv("bound.t_oc_s", t_oc_upper_bound(s.receiver, s.n));
    print_kv("conventional.t_oc_s",
             conventional_t_oc(s.receiver, s.n, s.profile, s.initial_soc));
    return kExitOk;
}

int cmd_simulate(const std::string& config_path, double dt) {
    const ScenarioSpec s = scenario_from(config_path);
    const ValidatedScenario v = validate_spec(s);
    print_scenario(s);
    const SimResult r = run_event_sim(v, true);
    print_kv("sim.t_oc_s", r.t_oc_s);
    print_kv("sim.total_standby_s", r.total_standby_s);
    print_kv("sim.switch_count", std::to_string(r.switch_count));
    print_kv("sim.tx_busy_fraction", r.tx_busy_fraction);
    for (std::size_t i = 0; i < r.per_receiver_finish_s.size(); ++i) {
        print_kv("sim.finish_s." + std::to_string(i), r.per_receiver_finish_s[i]);
    }
    const LedgerReport ledger = energy_ledger_check(r, v);
    print_kv("ledger.max_residual_j", ledger.max_residual_j);
    print_kv("ledger.ok", ledger.ok ? "true" : "false");
    print_kv("conventional.t_oc_s",
             conventional_t_oc(s.receiver, s.n, s.profile, s.initial_soc));
    if (dt > 0.0) {
        const SimResult o = run_fixed_step(v, dt);
        print_kv("oracle.dt_s", dt);
        print_kv("oracle.t_oc_s", o.t_oc_s);
        print_kv("oracle.total_standby_s", o.total_standby_s);
        print_kv("oracle.delta_t_oc_s", o.t_oc_s - r.t_oc_s);
    }
    if (!ledger.ok) {
        std::cerr << "energy ledger violation: " << ledger.detail << "\n";
        return kExitInternal;
    }
    return kExitOk;
}

int cmd_optimize(const std::string& config_path, const GridFlags& grid_flags,
                 const std::string& evaluator_name, const std::string& out_path) {
    const ScenarioSpec s = scenario_from(config_path);
    const ValidatedScenario v = validate_spec(s);
    print_scenario(s);

    if (s.receiver.t_d_s > 0.0) {
        const BoundMinimization bm = minimize_bound(s.receiver, s.n);
        print_kv("bound.q_star_j", bm.closed_form.q_star_j);
        print_kv("bound.t_star_s", bm.closed_form.t_star_s);
        print_kv("bound.q_star_golden_j", bm.golden_section.q_star_j);
        print_kv("bound.t_star_golden_s", bm.golden_section.t_star_s);
        print_kv("bound.at_upper_limit", bm.closed_form.at_upper_limit ? "true" : "false");
        print_kv("bound.agreement_rel",
                 std::abs(bm.golden_section.q_star_j - bm.closed_form.q_star_j) /
                     bm.closed_form.q_star_j);
    } else {
        std::cerr << "t_d = 0: the bound has no interior minimum "
                     "(smaller q_ies is always better); skipping bound minimization\n";
    }

    CurveEvaluator evaluator;
    if (evaluator_name == "analytic") {
        evaluator = CurveEvaluator::Analytic;
    } else if (evaluator_name == "sim") {
        evaluator = CurveEvaluator::EventSim;
    } else {
        std::cerr << "--evaluator must be analytic or sim\n";
        return kExitInvalid;
    }

    GridFlags g = grid_flags;
    std::vector<double> grid = materialize(g);
    if (grid.empty()) grid = default_qies_grid(s.receiver.q_c_j);

    const OptimizationResult scan = grid_search_qies(v, grid, evaluator);
    print_kv("grid.evaluator", evaluator_name);
    print_kv("grid.points", std::to_string(scan.curve.size()));
    print_kv("grid.q_star_j", scan.q_star_j);
    print_kv("grid.t_star_s", scan.t_star_s);

    if (!out_path.empty()) {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) {
            std::cerr << "cannot open output file '" << out_path << "'\n";
            return kExitInvalid;
        }
        out << "q_ies_j,t_oc_s,k_l,formula\n";
        for (const CurvePoint& cp : scan.curve) {
            out << fmt_g9(cp.q_ies_j) << "," << fmt_g9(cp.t_oc_s) << ",";
            if (cp.k_l >= 0) out << cp.k_l;
            out << ",";
            if (cp.formula_id) out << to_string(*cp.formula_id);
            out << "\n";
        }
    }
    return kExitOk;
}

int cmd_sweep(const std::string& config_path, const std::string& axis_name,
              GridFlags grid_flags, const std::string& evaluators_csv, bool ratio,
              const std::string& out_path) {
    SweepRequest req;
    req.base = scenario_from(config_path);
    req.ratio_mode = ratio;

    if (axis_name == "q_ies") {
        req.axis = SweepAxis::QIes;
    } else if (axis_name == "n") {
        req.axis = SweepAxis::N;
    } else if (axis_name == "p_r") {
        req.axis = SweepAxis::PR;
    } else if (axis_name == "initial_soc") {
        req.axis = SweepAxis::InitialSoc;
    } else {
        std::cerr << "--axis must be one of q_ies, n, p_r, initial_soc\n";
        return kExitInvalid;
    }

    req.values = materialize(grid_flags);
    if (req.values.empty() && req.axis == SweepAxis::PR &&
        req.base.profile.kind == ChargeProfile::Kind::Piecewise3) {
        req.values = {4.2, 6.0, 8.0};  // default receive powers for the practical profile
    }
    if (req.values.empty()) {
        std::cerr << "sweep needs --values or --min/--max/--count\n";
        return kExitInvalid;
    }

    const std::map<std::string, Evaluator> names = {
        {"analytic", Evaluator::Analytic},
        {"bound", Evaluator::Bound},
        {"sim", Evaluator::EventSim},
        {"conventional", Evaluator::Conventional},
    };
    if (evaluators_csv.empty()) {
        if (req.base.profile.kind == ChargeProfile::Kind::Constant) {
            req.evaluators = {Evaluator::Analytic, Evaluator::Bound, Evaluator::EventSim,
                              Evaluator::Conventional};
        } else {
            req.evaluators = {Evaluator::EventSim, Evaluator::Conventional};
        }
    } else {
        std::string rest = evaluators_csv;
        while (!rest.empty()) {
            const auto comma = rest.find(',');
            const std::string name = rest.substr(0, comma);
            rest = comma == std::string::npos ? "" : rest.substr(comma + 1);
            const auto it = names.find(name);
            if (it == names.end()) {
                std::cerr << "unknown evaluator '" << name << "'\n";
                return kExitInvalid;
            }
            req.evaluators.push_back(it->second);
        }
    }

    const std::vector<SweepRow> rows = run_sweep(req);
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
        std::cerr << "cannot open output file '" << out_path << "'\n";
        return kExitInvalid;
    }
    write_sweep_csv(req, rows, out);
    std::cerr << "wrote " << rows.size() << " rows to " << out_path << "\n";
    return kExitOk;
}

int cmd_trace(const std::string& config_path, const std::string& out_path) {
    const ScenarioSpec s = scenario_from(config_path);
    const ValidatedScenario v = validate_spec(s);
    const SimResult r = run_event_sim(v, true);
    const LedgerReport ledger = energy_ledger_check(r, v);
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
        std::cerr << "cannot open output file '" << out_path << "'\n";
        return kExitInvalid;
    }
    write_trace_csv(r.trace, out);
    std::cerr << "wrote " << r.trace.size() << " events to " << out_path << "\n";
    if (!ledger.ok) {
        std::cerr << "energy ledger violation: " << ledger.detail << "\n";
        return kExitInternal;
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"charge-time analysis for buffer-assisted time-division wireless charging"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "ieswpt 0.1.0");

    std::string config_path;
    double dt = 0.0;
    GridFlags grid;
    std::string axis_name;
    std::string evaluators_csv;
    std::string evaluator_name = "analytic";
    std::string out_path;
    bool ratio = false;
    long seed = 0;  // reserved

    auto add_config = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "scenario config file (defaults apply)");
    };
    auto add_grid = [&](CLI::App* cmd) {
        cmd->add_option("--min", grid.min, "axis minimum");
        cmd->add_option("--max", grid.max, "axis maximum");
        cmd->add_option("--count", grid.count, "number of axis points");
        cmd->add_flag("--log", grid.log_spacing, "log-spaced axis points");
        cmd->add_option("--values", grid.values, "explicit axis values")->delimiter(',');
    };

    CLI::App* analyze = app.add_subcommand("analyze", "closed-form phase/regime/charge-time report");
    add_config(analyze);

    CLI::App* simulate = app.add_subcommand("simulate", "event-driven protocol simulation");
    add_config(simulate);
    simulate->add_option("--dt", dt, "also run the fixed-step cross-check at this step");
    simulate->add_option("--seed", seed, "reserved");

    CLI::App* optimize = app.add_subcommand("optimize", "buffer sizing: bound minimum + grid scan");
    add_config(optimize);
    add_grid(optimize);
    optimize->add_option("--evaluator", evaluator_name, "grid evaluator: analytic | sim");
    optimize->add_option("--out", out_path, "write the scanned curve as CSV");

    CLI::App* sweep = app.add_subcommand("sweep", "parameter sweep to CSV");
    add_config(sweep);
    add_grid(sweep);
    sweep->add_option("--axis", axis_name, "q_ies | n | p_r | initial_soc")->required();
    sweep->add_option("--evaluators", evaluators_csv,
                      "comma list of analytic,bound,sim,conventional");
    sweep->add_flag("--ratio", ratio, "q_ies values are fractions of q_c");
    sweep->add_option("--out", out_path, "output CSV path")->required();
    sweep->add_option("--seed", seed, "reserved");

    CLI::App* trace = app.add_subcommand("trace", "write the event trace as CSV");
    add_config(trace);
    trace->add_option("--out", out_path, "output CSV path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInvalid;
    }

    try {
        if (app.got_subcommand(analyze)) return cmd_analyze(config_path);
        if (app.got_subcommand(simulate)) return cmd_simulate(config_path, dt);
        if (app.got_subcommand(optimize))
            return cmd_optimize(config_path, grid, evaluator_name, out_path);
        if (app.got_subcommand(sweep))
            return cmd_sweep(config_path, axis_name, grid, evaluators_csv, ratio, out_path);
        if (app.got_subcommand(trace)) return cmd_trace(config_path, out_path);
    } catch (const ValidationError& e) {
        std::cerr << e.what() << "\n";
        return kExitInvalid;
    } catch (const ConfigParseError& e) {
        std::cerr << e.what() << "\n";
        return kExitInvalid;
    } catch (const std::invalid_argument& e) {
        std::cerr << e.what() << "\n";
        return kExitInvalid;
    } catch (const SimulationError& e) {
        std::cerr << e.what() << "\n";
        return kExitInternal;
    }
    return kExitOk;
}
