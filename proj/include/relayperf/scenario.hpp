#pragma once

// Scenario files: flat "key = value" text with dotted section keys.
//
//   # Fig. 6 style setup
//   hop1.m = 2
//   hop1.beta = 3
//   balance.ratios = 2, 0.5
//   sweep.axis = gamma1_db
//   sweep.points = 0:2.5:25
//
// Lists are comma separated; "start:step:stop" expands to an inclusive range.

#include <charconv>
#include <cstddef>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "relayperf/errors.hpp"

namespace relayperf {

/// Malformed or inconsistent scenario input.
class config_error : public domain_error {
  public:
    using domain_error::domain_error;
};

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double x) { return 10.0 * std::log10(x); }

struct HopConfig {
    std::vector<double> m{2.0};  // more than one value only for the gain sweep
    double beta = 3.0;
    double mean_snr_db = 10.0;
};

struct ScenarioConfig {
    HopConfig hop1;
    HopConfig hop2;
    std::vector<double> balance_ratios;  // γ̄2/γ̄1; empty: use hop2.mean_snr_db as given
    std::string relay_mode = "semi-blind";
    double relay_C = 0.0;
    int pade_A = 7;
    bool pade_lower_on_unstable = false;
    std::string moment_source = "oracle";
    std::uint64_t trials = 10'000'000;
    std::uint64_t seed = 1;
    unsigned shards = 8;
    unsigned threads = 0;
    std::string sweep_axis = "gamma1_db";
    std::vector<double> sweep_points{0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0};
    double gamma_th_db = 0.0;
    std::vector<std::string> schemes{"bdpsk", "bpsk"};
    std::size_t quadrature_start_order = 25;
    std::size_t quadrature_max_order = 200;
    double quadrature_tolerance = 1e-8;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline std::string where(const std::string& origin, int line, const std::string& key) {
    std::ostringstream os;
    os << origin;
    if (line > 0) os << ":" << line;
    os << ": " << key;
    return os.str();
}

inline double parse_real(std::string_view text, const std::string& ctx) {
    text = trim(text);
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    double v = 0.0;
    const auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || p != text.data() + text.size() || text.empty()) {
        throw config_error(ctx + ": '" + std::string(text) + "' is not a number");
    }
    if (!std::isfinite(v)) throw config_error(ctx + ": value must be finite");
    return v;
}

inline std::uint64_t parse_unsigned(std::string_view text, const std::string& ctx) {
    text = trim(text);
    // accept plain integers and exact scientific forms such as 1e7
    std::uint64_t v = 0;
    const auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec == std::errc{} && p == text.data() + text.size() && !text.empty()) return v;
    const double d = parse_real(text, ctx);
    if (d < 0.0 || d != std::floor(d) || d > 1.8e19) {
        throw config_error(ctx + ": '" + std::string(text) + "' is not a nonnegative integer");
    }
    return static_cast<std::uint64_t>(d);
}

inline std::vector<double> parse_list(std::string_view text, const std::string& ctx) {
    std::vector<double> out;
    text = trim(text);
    if (text.empty()) throw config_error(ctx + ": empty list");
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto comma = text.find(',', start);
        const auto item = trim(text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
        if (item.empty()) throw config_error(ctx + ": empty list entry");
        if (item.find(':') != std::string_view::npos) {
            const auto c1 = item.find(':');
            const auto c2 = item.find(':', c1 + 1);
            if (c2 == std::string_view::npos) throw config_error(ctx + ": ranges are written start:step:stop");
            const double a = parse_real(item.substr(0, c1), ctx);
            const double step = parse_real(item.substr(c1 + 1, c2 - c1 - 1), ctx);
            const double b = parse_real(item.substr(c2 + 1), ctx);
            if (!(step > 0.0) || b < a) throw config_error(ctx + ": range needs a positive step and stop >= start");
            const auto n = static_cast<long>(std::floor((b - a) / step + 1e-9));
            if (n > 100000) throw config_error(ctx + ": range has too many points");
            for (long i = 0; i <= n; ++i) out.push_back(a + step * double(i));
        } else {
            out.push_back(parse_real(item, ctx));
        }
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

inline std::vector<std::string> parse_words(std::string_view text) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        const auto comma = text.find(',', start);
        const auto item = trim(text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
        if (!item.empty()) out.emplace_back(item);
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

inline bool parse_bool(std::string_view text, const std::string& ctx) {
    text = trim(text);
    if (text == "true" || text == "1" || text == "yes") return true;
    if (text == "false" || text == "0" || text == "no") return false;
    throw config_error(ctx + ": '" + std::string(text) + "' is not a boolean");
}

inline double parse_single(std::string_view text, const std::string& ctx) {
    const auto v = parse_list(text, ctx);
    if (v.size() != 1) throw config_error(ctx + ": expected a single value");
    return v[0];
}

}  // namespace detail

/// Applies one key/value pair.  `origin` and `line` only feed diagnostics.
inline void apply_setting(ScenarioConfig& cfg, const std::string& key, std::string_view value,
                          const std::string& origin = "--set", int line = 0) {
    using namespace detail;
    const std::string ctx = where(origin, line, key);
    auto hop = [&](HopConfig& h, const std::string& field) {
        if (field == "m") h.m = parse_list(value, ctx);
        else if (field == "beta") h.beta = parse_single(value, ctx);
        else if (field == "mean_snr_db") h.mean_snr_db = parse_single(value, ctx);
        else throw config_error(ctx + ": unknown key");
    };
    if (key.rfind("hop1.", 0) == 0) return hop(cfg.hop1, key.substr(5));
    if (key.rfind("hop2.", 0) == 0) return hop(cfg.hop2, key.substr(5));
    if (key == "balance.ratios") cfg.balance_ratios = parse_list(value, ctx);
    else if (key == "relay.mode") cfg.relay_mode = std::string(trim(value));
    else if (key == "relay.C") cfg.relay_C = parse_single(value, ctx);
    else if (key == "pade.A") cfg.pade_A = int(parse_unsigned(value, ctx));
    else if (key == "pade.lower_on_unstable") cfg.pade_lower_on_unstable = parse_bool(value, ctx);
    else if (key == "pade.moments") cfg.moment_source = std::string(trim(value));
    else if (key == "sim.trials") cfg.trials = parse_unsigned(value, ctx);
    else if (key == "sim.seed") cfg.seed = parse_unsigned(value, ctx);
    else if (key == "sim.shards") cfg.shards = unsigned(parse_unsigned(value, ctx));
    else if (key == "sim.threads") cfg.threads = unsigned(parse_unsigned(value, ctx));
    else if (key == "sweep.axis") cfg.sweep_axis = std::string(trim(value));
    else if (key == "sweep.points") cfg.sweep_points = parse_list(value, ctx);
    else if (key == "outage.gamma_th_db") cfg.gamma_th_db = parse_single(value, ctx);
    else if (key == "abep.schemes") cfg.schemes = parse_words(value);
    else if (key == "quadrature.start_order") cfg.quadrature_start_order = parse_unsigned(value, ctx);
    else if (key == "quadrature.max_order") cfg.quadrature_max_order = parse_unsigned(value, ctx);
    else if (key == "quadrature.tolerance") cfg.quadrature_tolerance = parse_single(value, ctx);
    else throw config_error(ctx + ": unknown key");
}

/// Parses scenario text; `origin` names the source in error messages.
inline ScenarioConfig parse_scenario(std::istream& in, const std::string& origin, ScenarioConfig cfg = {}) {
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        std::string_view text(raw);
        if (const auto hash = text.find('#'); hash != std::string_view::npos) text = text.substr(0, hash);
        text = detail::trim(text);
        if (text.empty()) continue;
        const auto eq = text.find('=');
        if (eq == std::string_view::npos) {
            throw config_error(detail::where(origin, line, std::string(text)) + ": expected 'key = value'");
        }
        const std::string key(detail::trim(text.substr(0, eq)));
        if (key.empty()) throw config_error(detail::where(origin, line, "") + "missing key");
        apply_setting(cfg, key, text.substr(eq + 1), origin, line);
    }
    return cfg;
}

inline ScenarioConfig load_scenario(const std::string& path, ScenarioConfig cfg = {}) {
    std::ifstream in(path);
    if (!in) throw config_error(path + ": cannot open config file");
    return parse_scenario(in, path, std::move(cfg));
}

/// Applies a "key=value" override.
inline void apply_override(ScenarioConfig& cfg, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos) throw config_error("--set " + assignment + ": expected key=value");
    const std::string key(detail::trim(std::string_view(assignment).substr(0, eq)));
    apply_setting(cfg, key, std::string_view(assignment).substr(eq + 1));
}

/// Checks that hold for every command.
inline void validate_scenario(const ScenarioConfig& cfg) {
    if (cfg.sweep_points.empty()) throw config_error("sweep.points: must not be empty");
    for (std::size_t i = 1; i < cfg.sweep_points.size(); ++i) {
        if (!(cfg.sweep_points[i] > cfg.sweep_points[i - 1])) {
            throw config_error("sweep.points: must be strictly increasing");
        }
    }
    if (cfg.relay_mode != "semi-blind" && cfg.relay_mode != "fixed-C") {
        throw config_error("relay.mode: must be 'semi-blind' or 'fixed-C', got '" + cfg.relay_mode + "'");
    }
    if (cfg.relay_mode == "fixed-C" && !(cfg.relay_C > 0.0)) throw config_error("relay.C: fixed-C mode needs C > 0");
    if (cfg.moment_source != "oracle" && cfg.moment_source != "closed-form") {
        throw config_error("pade.moments: must be 'oracle' or 'closed-form'");
    }
    if (cfg.pade_A < 1 || cfg.pade_A > 10) throw config_error("pade.A: must be in [1, 10]");
    if (cfg.trials < 1) throw config_error("sim.trials: must be at least 1");
    if (cfg.shards < 1) throw config_error("sim.shards: must be at least 1");
    for (double r : cfg.balance_ratios)
        if (!(r > 0.0)) throw config_error("balance.ratios: ratios must be positive");
    for (double m : cfg.hop1.m)
        if (!(m > 0.5)) throw config_error("hop1.m: must be > 0.5");
    for (double m : cfg.hop2.m)
        if (!(m > 0.5)) throw config_error("hop2.m: must be > 0.5");
    if (cfg.hop2.m.size() != 1) throw config_error("hop2.m: expected a single value");
    if (!(cfg.hop1.beta > 0.0) || !(cfg.hop2.beta > 0.0)) throw config_error("hop beta: must be positive");
    if (cfg.schemes.empty()) throw config_error("abep.schemes: must not be empty");
    if (cfg.quadrature_start_order < 2 || cfg.quadrature_max_order > 200 ||
        cfg.quadrature_start_order > cfg.quadrature_max_order) {
        throw config_error("quadrature: need 2 <= start_order <= max_order <= 200");
    }
    if (!(cfg.quadrature_tolerance > 0.0)) throw config_error("quadrature.tolerance: must be positive");
}

}  // namespace relayperf
