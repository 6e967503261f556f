#include "ieswpt/config.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

namespace ieswpt {

namespace {

std::string trim(const std::string& in) {
    const auto a = in.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = in.find_last_not_of(" \t\r");
    return in.substr(a, b - a + 1);
}

double parse_number(const std::string& v, int line, const std::string& key) {
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    if (end == v.c_str() || *end != '\0') {
        throw ConfigParseError(line, "bad number for " + key + ": '" + v + "'");
    }
    return x;
}

// value with optional J / Wh suffix; joules by default
double parse_energy(const std::string& v, int line, const std::string& key) {
    std::string num = v;
    double factor = 1.0;
    if (num.size() >= 2 && num.compare(num.size() - 2, 2, "Wh") == 0) {
        factor = 3600.0;
        num = trim(num.substr(0, num.size() - 2));
    } else if (!num.empty() && num.back() == 'J') {
        num = trim(num.substr(0, num.size() - 1));
    }
    return parse_number(num, line, key) * factor;
}

struct Entry {
    std::string value;
    int line;
};

}  // namespace

ScenarioSpec default_scenario() {
    ScenarioSpec s;
    s.receiver = ReceiverSpec{1.0, 4.2, 3600.0, 3.4, 1e-3};
    s.n = 3;
    s.profile = ChargeProfile::constant(s.receiver.p_b_w);
    s.initial_soc = 0.0;
    return s;
}

ScenarioSpec parse_config(const std::string& text) {
    static const char* known[] = {"p_b_w",   "p_r_w",         "q_c",
                                  "q_ies",   "t_d_s",         "n",
                                  "profile", "profile_scale", "initial_soc"};
    std::map<std::string, Entry> entries;

    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        if (hash != std::string::npos) raw = raw.substr(0, hash);
        const std::string line = trim(raw);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigParseError(line_no, "expected key=value, got '" + line + "'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        bool ok = false;
        for (const char* k : known) ok = ok || key == k;
        if (!ok) throw ConfigParseError(line_no, "unknown key '" + key + "'");
        if (entries.count(key)) {
            throw ConfigParseError(line_no, "duplicate key '" + key + "'");
        }
        if (value.empty()) throw ConfigParseError(line_no, "empty value for '" + key + "'");
        entries[key] = Entry{value, line_no};
    }

    ScenarioSpec s = default_scenario();
    auto take = [&](const char* key) -> const Entry* {
        auto it = entries.find(key);
        return it == entries.end() ? nullptr : &it->second;
    };

    if (const Entry* e = take("p_b_w")) s.receiver.p_b_w = parse_number(e->value, e->line, "p_b_w");
    if (const Entry* e = take("p_r_w")) s.receiver.p_r_w = parse_number(e->value, e->line, "p_r_w");
    if (const Entry* e = take("q_c")) s.receiver.q_c_j = parse_energy(e->value, e->line, "q_c");
    if (const Entry* e = take("q_ies")) s.receiver.q_ies_j = parse_energy(e->value, e->line, "q_ies");
    if (const Entry* e = take("t_d_s")) s.receiver.t_d_s = parse_number(e->value, e->line, "t_d_s");
    if (const Entry* e = take("n")) {
        const double v = parse_number(e->value, e->line, "n");
        if (v != std::floor(v)) throw ConfigParseError(e->line, "n must be an integer");
        s.n = static_cast<int>(v);
    }
    double scale = 1.0;
    const Entry* scale_e = take("profile_scale");
    if (scale_e) scale = parse_number(scale_e->value, scale_e->line, "profile_scale");
    if (const Entry* e = take("profile")) {
        if (e->value == "constant") {
            if (scale_e) {
                throw ConfigParseError(scale_e->line,
                                       "profile_scale applies to profile=piecewise3 only");
            }
            s.profile = ChargeProfile::constant(s.receiver.p_b_w);
        } else if (e->value == "piecewise3") {
            s.profile = ChargeProfile::piecewise3(scale);
        } else {
            throw ConfigParseError(e->line, "profile must be constant or piecewise3");
        }
    } else {
        if (scale_e) {
            throw ConfigParseError(scale_e->line,
                                   "profile_scale applies to profile=piecewise3 only");
        }
        s.profile = ChargeProfile::constant(s.receiver.p_b_w);
    }
    if (const Entry* e = take("initial_soc")) {
        s.initial_soc = parse_number(e->value, e->line, "initial_soc");
    }

    validate_spec(s);
    return s;
}

ScenarioSpec load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigParseError(0, "cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string emit_config(const ScenarioSpec& s) {
    char buf[64];
    std::ostringstream out;
    auto num = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    out << "p_b_w=" << num(s.receiver.p_b_w) << "\n";
    out << "p_r_w=" << num(s.receiver.p_r_w) << "\n";
    out << "q_c=" << num(s.receiver.q_c_j) << "J\n";
    out << "q_ies=" << num(s.receiver.q_ies_j) << "J\n";
    out << "t_d_s=" << num(s.receiver.t_d_s) << "\n";
    out << "n=" << s.n << "\n";
    if (s.profile.kind == ChargeProfile::Kind::Piecewise3) {
        out << "profile=piecewise3\n";
        out << "profile_scale=" << num(s.profile.scale) << "\n";
    } else {
        out << "profile=constant\n";
    }
    out << "initial_soc=" << num(s.initial_soc) << "\n";
    return out.str();
}

}  // namespace ieswpt
