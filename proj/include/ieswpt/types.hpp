#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace ieswpt {

/// Raised when a scenario violates the model's parameter constraints.
/// Carries every violation found, not just the first.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(std::vector<std::string> violations);
    const std::vector<std::string>& violations() const { return violations_; }

private:
    std::vector<std::string> violations_;
};

/// Raised on malformed configuration input; line is 1-based.
class ConfigParseError : public std::runtime_error {
public:
    ConfigParseError(int line, const std::string& what_arg);
    int line() const { return line_; }

private:
    int line_;
};

/// Raised when the simulator trips its non-termination guard.
class SimulationError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Battery power demand over accumulated charging time.
///
/// Constant: fixed draw until the battery capacity is met.
/// Piecewise3: three linear segments (rising ramp to a 4.2*scale peak at
/// 2400 s, steep falloff to 3600 s, shallow tail to 7200 s). The segment
/// coefficients are fixed; `scale` multiplies the whole curve. A Piecewise3
/// battery is full when the curve's total energy (12960*scale J) has been
/// delivered, regardless of the nominal capacity.
struct ChargeProfile {
    enum class Kind { Constant, Piecewise3 };

    Kind kind = Kind::Constant;
    double constant_power_w = 1.0;  // Constant only
    double scale = 1.0;             // Piecewise3 only

    static ChargeProfile constant(double power_w) {
        return ChargeProfile{Kind::Constant, power_w, 1.0};
    }
    static ChargeProfile piecewise3(double scale = 1.0) {
        return ChargeProfile{Kind::Piecewise3, 0.0, scale};
    }

    bool operator==(const ChargeProfile&) const = default;
};

/// Per-receiver parameters, all SI (watts, joules, seconds).
struct ReceiverSpec {
    double p_b_w = 1.0;     // battery demand while charging (constant case)
    double p_r_w = 4.2;     // received power while coupled
    double q_c_j = 3600.0;  // battery capacity
    double q_ies_j = 3.4;   // buffer (IES) capacity
    double t_d_s = 1e-3;    // receiver switching delay

    bool operator==(const ReceiverSpec&) const = default;
};

/// A fleet of n identical receivers plus the demand profile they run.
struct ScenarioSpec {
    ReceiverSpec receiver;
    int n = 3;
    ChargeProfile profile = ChargeProfile::constant(1.0);
    double initial_soc = 0.0;  // fraction in [0, 1), same for every receiver

    bool operator==(const ScenarioSpec&) const = default;
};

/// Immutable scenario that passed validation. All engines and analytic
/// routines take this; construct via validate_spec().
class ValidatedScenario {
public:
    const ScenarioSpec& spec() const { return spec_; }
    const ReceiverSpec& receiver() const { return spec_.receiver; }
    int n() const { return spec_.n; }
    const ChargeProfile& profile() const { return spec_.profile; }
    double initial_soc() const { return spec_.initial_soc; }

private:
    friend ValidatedScenario validate_spec(const ScenarioSpec& s);
    explicit ValidatedScenario(ScenarioSpec s) : spec_(std::move(s)) {}
    ScenarioSpec spec_;
};

/// Checks the model constraints (0 < P_B < P_R, 0 < Q_IES < Q_C, T_d >= 0,
/// n >= 1, SOC in [0,1), constant profile power == P_B) and returns the
/// frozen scenario. Throws ValidationError listing every violation.
ValidatedScenario validate_spec(const ScenarioSpec& s);

/// Cycle structure of one receiver under the constant profile.
struct PhaseDurations {
    double a_s = 0.0;        // coupled phase: IES fills at P_R - P_B
    double b_s = 0.0;        // decoupled phase: IES feeds battery at P_B
    double c_s = 0.0;        // full cycle, a + b
    long k_l = 0;            // whole cycles before the final partial one
    double c_prime_s = 0.0;  // battery-charging time of the final cycle
};

enum class FinalCase { None, A, B, C };

/// Whether a fleet of n receivers incurs standby time, and which final-cycle
/// shape applies when it does.
struct RegimeReport {
    bool standby = false;
    FinalCase final_case = FinalCase::None;
    long n_max = 0;  // largest n with zero standby at t_d = 0
};

const char* to_string(FinalCase c);

}  // namespace ieswpt
