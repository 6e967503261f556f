#include "ieswpt/types.hpp"

#include <cmath>
#include <sstream>

namespace ieswpt {

namespace {

std::string join_violations(const std::vector<std::string>& vs) {
    std::ostringstream os;
    os << "constraint violation";
    if (vs.size() > 1) os << "s";
    os << ": ";
    for (std::size_t i = 0; i < vs.size(); ++i) {
        if (i) os << "; ";
        os << vs[i];
    }
    return os.str();
}

}  // namespace

ValidationError::ValidationError(std::vector<std::string> violations)
    : std::runtime_error(join_violations(violations)), violations_(std::move(violations)) {}

ConfigParseError::ConfigParseError(int line, const std::string& what_arg)
    : std::runtime_error("config line " + std::to_string(line) + ": " + what_arg),
      line_(line) {}

const char* to_string(FinalCase c) {
    switch (c) {
        case FinalCase::None: return "none";
        case FinalCase::A: return "a";
        case FinalCase::B: return "b";
        case FinalCase::C: return "c";
    }
    return "?";
}

ValidatedScenario validate_spec(const ScenarioSpec& s) {
    std::vector<std::string> v;
    const ReceiverSpec& r = s.receiver;

    auto finite_positive = [&](double x, const char* name) {
        if (!std::isfinite(x) || x <= 0.0) {
            v.push_back(std::string(name) + " must be a positive finite number");
            return false;
        }
        return true;
    };

    const bool pb_ok = finite_positive(r.p_b_w, "p_b_w");
    const bool pr_ok = finite_positive(r.p_r_w, "p_r_w");
    const bool qc_ok = finite_positive(r.q_c_j, "q_c");
    const bool qi_ok = finite_positive(r.q_ies_j, "q_ies");

    if (pb_ok && pr_ok && r.p_b_w >= r.p_r_w) {
        v.push_back("p_b_w must be < p_r_w (the buffer can never fill otherwise)");
    }
    if (qc_ok && qi_ok && r.q_ies_j >= r.q_c_j) {
        v.push_back("q_ies must be < q_c");
    }
    if (!std::isfinite(r.t_d_s) || r.t_d_s < 0.0) {
        v.push_back("t_d_s must be >= 0");
    }
    if (s.n < 1) {
        v.push_back("n must be >= 1");
    }
    if (!std::isfinite(s.initial_soc) || s.initial_soc < 0.0 || s.initial_soc >= 1.0) {
        v.push_back("initial_soc must be in [0, 1)");
    }
    if (s.profile.kind == ChargeProfile::Kind::Constant) {
        if (s.profile.constant_power_w != r.p_b_w) {
            v.push_back("constant profile power must equal p_b_w");
        }
    } else {
        if (!std::isfinite(s.profile.scale) || s.profile.scale <= 0.0) {
            v.push_back("profile_scale must be a positive finite number");
        }
    }

    if (!v.empty()) throw ValidationError(std::move(v));
    return ValidatedScenario(s);
}

}  // namespace ieswpt
