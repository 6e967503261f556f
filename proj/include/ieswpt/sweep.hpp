#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "ieswpt/sim.hpp"
#include "ieswpt/types.hpp"

namespace ieswpt {

enum class SweepAxis { QIes, N, PR, InitialSoc };
enum class Evaluator { Analytic, Bound, EventSim, Conventional };

const char* to_string(SweepAxis a);
const char* to_string(Evaluator e);
const char* csv_column(Evaluator e);

/// One parameter sweep: vary `axis` over `values` on top of `base`,
/// computing each requested evaluator per point. With ratio_mode the
/// QIes axis values are Q_IES/Q_C fractions.
struct SweepRequest {
    SweepAxis axis = SweepAxis::QIes;
    std::vector<double> values;
    std::vector<Evaluator> evaluators;
    ScenarioSpec base;
    bool ratio_mode = false;
};

struct SweepRow {
    double axis_value = 0.0;
    double q_ies_j = 0.0;  // absolute joules (reported in ratio mode)
    std::optional<double> t_oc_analytic_s;
    std::optional<double> t_oc_bound_s;
    std::optional<double> t_oc_sim_s;
    std::optional<double> t_oc_conventional_s;
    std::string regime;           // empty for piecewise scenarios
    std::optional<long> k_l;      // empty for piecewise scenarios
    std::optional<double> standby_total_s;  // EventSim only
};

/// Materializes the scenario at one axis value. Throws ValidationError if
/// the point does not validate.
ScenarioSpec scenario_at(const SweepRequest& req, double value);

/// Runs every point (concurrently; results in axis order). Requires values
/// strictly increasing and every point validatable; Analytic/Bound
/// evaluators require the constant profile.
std::vector<SweepRow> run_sweep(const SweepRequest& req);

/// CSV emission: header then one row per point, axis order. Numbers print
/// with 9 significant digits, comma separator, LF line ends. Evaluator
/// columns appear in request order; absent values print empty.
void write_sweep_csv(const SweepRequest& req, const std::vector<SweepRow>& rows,
                     std::ostream& out);

/// Trace CSV: time_s,receiver,event,ies_energy_j,battery_energy_j with
/// time at 9 decimal places.
void write_trace_csv(const std::vector<EventRecord>& trace, std::ostream& out);

/// printf-style %.9g / %.9f helpers shared by the CSV writers and the CLI.
std::string fmt_g9(double v);
std::string fmt_f9(double v);

}  // namespace ieswpt
