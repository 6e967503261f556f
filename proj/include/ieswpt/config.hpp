#pragma once

#include <string>

#include "ieswpt/types.hpp"

namespace ieswpt {

/// Parses the flat key=value scenario format. Recognized keys:
///   p_b_w, p_r_w, q_c, q_ies, t_d_s, n, profile, profile_scale, initial_soc
/// q_c and q_ies take an optional J or Wh suffix (default J); profile is
/// `constant` or `piecewise3`. `#` starts a comment. Unknown or duplicate
/// keys are errors. Missing keys fall back to the defaults of
/// default_scenario(). The result is validated before returning.
ScenarioSpec parse_config(const std::string& text);

/// parse_config over a file's contents.
ScenarioSpec load_config(const std::string& path);

/// Canonical config text for a scenario; load_config(emit) round-trips to
/// an identical scenario.
std::string emit_config(const ScenarioSpec& s);

/// Reference parameter set: P_B=1 W, P_R=4.2 W, Q_C=1 Wh, Q_IES=3.4 J,
/// T_d=1 ms, n=3, constant profile, SOC 0.
ScenarioSpec default_scenario();

}  // namespace ieswpt
