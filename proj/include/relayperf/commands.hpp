#pragma once

// Sweep commands behind the relayperf tool.  Each command turns a scenario
// into a table with a fixed header; a cell that cannot be computed is written
// as nan (or, for the quadrature column, as its last iterate) and a warning is
// recorded, which the tool maps to exit status 3.

#include <charconv>
#include <cmath>
#include <initializer_list>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "relayperf/errors.hpp"
#include "relayperf/fading.hpp"
#include "relayperf/metrics.hpp"
#include "relayperf/pade_mgf.hpp"
#include "relayperf/relay.hpp"
#include "relayperf/scenario.hpp"
#include "relayperf/simulate.hpp"

namespace relayperf {

using Cell = std::variant<double, std::string>;

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<Cell>> rows;
};

struct CommandReport {
    Table table;
    std::vector<std::string> warnings;

    int exit_code() const { return warnings.empty() ? 0 : 3; }
};

/// Shortest round-trip is not wanted here: always 17 significant digits.
inline std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

inline void write_csv(std::ostream& out, const Table& t) {
    auto line = [&out](const auto& cells, auto&& text) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out << ',';
            out << text(cells[i]);
        }
        out << '\n';
    };
    line(t.header, [](const std::string& s) { return s; });
    for (const auto& row : t.rows) {
        line(row, [](const Cell& c) {
            return std::holds_alternative<double>(c) ? format_number(std::get<double>(c)) : std::get<std::string>(c);
        });
    }
}

/// bdpsk, bpsk, bfsk, bfsk_mc, or coherent:<psi>.
inline ModulationScheme parse_scheme(const std::string& name) {
    if (name == "bdpsk") return ModulationScheme::bdpsk();
    if (name == "bpsk") return ModulationScheme::bpsk();
    if (name == "bfsk") return ModulationScheme::bfsk();
    if (name == "bfsk_mc") return ModulationScheme::bfsk_min_correlation();
    if (name.rfind("coherent:", 0) == 0) {
        const double psi = detail::parse_real(std::string_view(name).substr(9), "abep.schemes");
        if (!(psi > 0.0 && psi <= 1.0)) throw config_error("abep.schemes: psi must be in (0, 1]");
        return ModulationScheme::coherent(psi);
    }
    throw config_error("abep.schemes: unknown scheme '" + name + "'");
}

struct CommandOptions {
    ClosedFormOptions closed;  // prefactor_scale is a test hook
};

namespace detail {

inline constexpr double nan = std::numeric_limits<double>::quiet_NaN();

inline void require_axis(const ScenarioConfig& cfg, const char* command, std::initializer_list<const char*> allowed) {
    for (const char* a : allowed)
        if (cfg.sweep_axis == a) return;
    std::string list;
    for (const char* a : allowed) list += std::string(list.empty() ? "" : ", ") + a;
    throw config_error(std::string("sweep.axis: ") + command + " supports " + list + ", got '" + cfg.sweep_axis + "'");
}

inline SimConfig sim_config(const ScenarioConfig& cfg) { return {cfg.trials, cfg.seed, cfg.shards, cfg.threads}; }

inline PadeOptions pade_options(const ScenarioConfig& cfg) {
    PadeOptions o;
    o.lower_order_on_unstable = cfg.pade_lower_on_unstable;
    return o;
}

inline MomentSource moment_source(const ScenarioConfig& cfg) {
    return cfg.moment_source == "closed-form" ? MomentSource::closed_form : MomentSource::oracle;
}

// Ratios γ̄2/γ̄1 for the rows; without balance.ratios the second hop keeps
// its own mean, signalled by a nan ratio.
inline std::vector<double> ratios(const ScenarioConfig& cfg) {
    if (cfg.balance_ratios.empty()) return {nan};
    return cfg.balance_ratios;
}

inline double hop2_mean(const ScenarioConfig& cfg, double gamma1, double ratio) {
    return std::isnan(ratio) ? db_to_linear(cfg.hop2.mean_snr_db) : ratio * gamma1;
}

inline double single_m(const std::vector<double>& m, const char* key) {
    if (m.size() != 1) throw config_error(std::string(key) + ": expected a single value for this command");
    return m[0];
}

inline RelaySystem build_system(const ScenarioConfig& cfg, double gamma1, double gamma2, const CommandOptions& opt) {
    const GGHop h1 = make_hop(single_m(cfg.hop1.m, "hop1.m"), cfg.hop1.beta, gamma1);
    const GGHop h2 = make_hop(cfg.hop2.m[0], cfg.hop2.beta, gamma2);
    if (cfg.relay_mode == "fixed-C") return make_fixed_gain_system(h1, h2, cfg.relay_C);
    return make_semi_blind_system(h1, h2, opt.closed);
}

inline std::string row_label(const char* what, double x) { return std::string(what) + " " + format_number(x); }

}  // namespace detail

/// Columns gamma1_db, m1, C_closed_form, C_oracle.
/// Axis gamma1_db: rows are points x hop1.m values.  Axis m: points are m1.
inline CommandReport cmd_gain_sweep(const ScenarioConfig& cfg, const CommandOptions& opt = {}) {
    detail::require_axis(cfg, "gain-sweep", {"gamma1_db", "m"});
    CommandReport rep;
    rep.table.header = {"gamma1_db", "m1", "C_closed_form", "C_oracle"};
    std::vector<std::pair<double, double>> cases;  // (dB, m1)
    if (cfg.sweep_axis == "m") {
        for (double m : cfg.sweep_points) cases.emplace_back(cfg.hop1.mean_snr_db, m);
    } else {
        for (double db : cfg.sweep_points)
            for (double m : cfg.hop1.m) cases.emplace_back(db, m);
    }
    for (const auto& [db, m] : cases) {
        double closed = detail::nan, oracle = detail::nan;
        try {
            const auto rb = rationalize_beta(cfg.hop1.beta, opt.closed.max_term);
            const GGHop h = make_hop(m, rb.value(), db_to_linear(db));
            oracle = semi_blind_C_oracle(h);
            closed = 1.0 / inverse_gain_average_closed(h, rb.k, rb.l, opt.closed);
            detail::check_consistency("relay constant", closed, oracle);
        } catch (const domain_error& e) {
            throw config_error(e.what());
        } catch (const numerical_error& e) {
            rep.warnings.push_back("gamma1_db " + format_number(db) + ", m1 " + format_number(m) + ": " + e.what());
        }
        rep.table.rows.push_back({db, m, closed, oracle});
    }
    return rep;
}

/// Columns gamma1_db, balance_ratio, mean_closed, mean_oracle, mean_mc, mc_stderr.
inline CommandReport cmd_avg_snr(const ScenarioConfig& cfg, const CommandOptions& opt = {}) {
    detail::require_axis(cfg, "avg-snr", {"gamma1_db"});
    CommandReport rep;
    rep.table.header = {"gamma1_db", "balance_ratio", "mean_closed", "mean_oracle", "mean_mc", "mc_stderr"};
    std::vector<RelaySystem> systems;
    std::vector<std::size_t> row_of;
    for (double db : cfg.sweep_points) {
        for (double r : detail::ratios(cfg)) {
            const double g1 = db_to_linear(db);
            const double g2 = detail::hop2_mean(cfg, g1, r);
            std::vector<Cell> row{db, g2 / g1, detail::nan, detail::nan, detail::nan, detail::nan};
            try {
                const auto sys = detail::build_system(cfg, g1, g2, opt);
                systems.push_back(sys);
                row_of.push_back(rep.table.rows.size());
                row[3] = end_to_end_moment_oracle(sys, 1.0);
                row[2] = end_to_end_moment_closed(sys, 1, opt.closed);
                detail::check_consistency("mean end-to-end SNR", std::get<double>(row[2]), std::get<double>(row[3]));
            } catch (const domain_error& e) {
                throw config_error(e.what());
            } catch (const numerical_error& e) {
                rep.warnings.push_back(detail::row_label("gamma1_db", db) + ": " + e.what());
            }
            rep.table.rows.push_back(std::move(row));
        }
    }
    if (!systems.empty()) {
        const auto est = mc_moments_batch(systems, detail::sim_config(cfg), 1);
        for (std::size_t k = 0; k < systems.size(); ++k) {
            rep.table.rows[row_of[k]][4] = est[k][0].mean;
            rep.table.rows[row_of[k]][5] = est[k][0].std_error;
        }
    }
    return rep;
}

/// Columns gamma1_db, scheme, psi, abep_pade, abep_mc, mc_stderr; rows are
/// points x schemes.
inline CommandReport cmd_abep(const ScenarioConfig& cfg, const CommandOptions& opt = {}) {
    detail::require_axis(cfg, "abep", {"gamma1_db"});
    if (cfg.balance_ratios.size() > 1) throw config_error("balance.ratios: abep takes at most one ratio");
    std::vector<ModulationScheme> schemes;
    for (const auto& name : cfg.schemes) schemes.push_back(parse_scheme(name));
    CommandReport rep;
    rep.table.header = {"gamma1_db", "scheme", "psi", "abep_pade", "abep_mc", "mc_stderr"};
    std::vector<RelaySystem> systems;
    std::vector<std::size_t> first_row;
    const double r = detail::ratios(cfg)[0];
    for (double db : cfg.sweep_points) {
        const double g1 = db_to_linear(db);
        const std::size_t first = rep.table.rows.size();
        for (std::size_t j = 0; j < schemes.size(); ++j) {
            const auto& s = schemes[j];
            rep.table.rows.push_back({db, cfg.schemes[j], s.kind == ModulationScheme::Kind::bdpsk ? Cell(std::string())
                                                                                                   : Cell(s.psi),
                                      detail::nan, detail::nan, detail::nan});
        }
        std::optional<PadeMGF> mgf;
        try {
            const auto sys = detail::build_system(cfg, g1, detail::hop2_mean(cfg, g1, r), opt);
            systems.push_back(sys);
            first_row.push_back(first);
            const auto mu = moment_sequence(sys, std::size_t(2 * cfg.pade_A + 1), detail::moment_source(cfg), opt.closed);
            mgf = build_pade(mu, cfg.pade_A, detail::pade_options(cfg));
        } catch (const domain_error& e) {
            throw config_error(e.what());
        } catch (const numerical_error& e) {
            rep.warnings.push_back(detail::row_label("gamma1_db", db) + ": " + e.what());
        }
        if (!mgf) continue;
        for (std::size_t j = 0; j < schemes.size(); ++j) {
            try {
                rep.table.rows[first + j][3] = abep(*mgf, schemes[j]);
            } catch (const std::exception& e) {
                rep.warnings.push_back(detail::row_label("gamma1_db", db) + " " + cfg.schemes[j] + ": " + e.what());
            }
        }
    }
    if (!systems.empty()) {
        const auto stats =
            mc_run_batch(systems, detail::sim_config(cfg), schemes.size(),
                         [&](std::size_t, double g, std::vector<RunningStats>& st) {
                             for (std::size_t j = 0; j < schemes.size(); ++j) st[j].add(conditional_bep(schemes[j], g));
                         });
        for (std::size_t k = 0; k < systems.size(); ++k) {
            for (std::size_t j = 0; j < schemes.size(); ++j) {
                const auto e = stats[k][j].estimate();
                rep.table.rows[first_row[k] + j][4] = e.mean;
                rep.table.rows[first_row[k] + j][5] = e.std_error;
            }
        }
    }
    return rep;
}

/// Columns gamma1_over_gammath_db, balance_ratio, op_pade, op_quadrature,
/// op_exact, op_mc, mc_stderr.  Axis gamma1_db: points are γ̄1/γth in dB with
/// γth = outage.gamma_th_db.  Axis gamma_th_db: points are γth in dB with
/// γ̄1 = hop1.mean_snr_db.
inline CommandReport cmd_outage(const ScenarioConfig& cfg, const CommandOptions& opt = {}) {
    detail::require_axis(cfg, "outage", {"gamma1_db", "gamma_th_db"});
    CommandReport rep;
    rep.table.header = {"gamma1_over_gammath_db", "balance_ratio", "op_pade", "op_quadrature",
                        "op_exact",               "op_mc",         "mc_stderr"};
    const OutageQuadratureOptions qopt{cfg.quadrature_start_order, cfg.quadrature_max_order, cfg.quadrature_tolerance};
    std::vector<RelaySystem> systems;
    std::vector<double> thresholds;
    std::vector<std::size_t> row_of;
    for (double point : cfg.sweep_points) {
        const bool by_gamma1 = cfg.sweep_axis == "gamma1_db";
        const double th_db = by_gamma1 ? cfg.gamma_th_db : point;
        const double g1_db = by_gamma1 ? point + cfg.gamma_th_db : cfg.hop1.mean_snr_db;
        const double th = db_to_linear(th_db);
        const double g1 = db_to_linear(g1_db);
        for (double r : detail::ratios(cfg)) {
            const double g2 = detail::hop2_mean(cfg, g1, r);
            std::vector<Cell> row{g1_db - th_db, g2 / g1, detail::nan, detail::nan, detail::nan, detail::nan, detail::nan};
            const std::string label = detail::row_label("gamma1_over_gammath_db", g1_db - th_db);
            std::optional<RelaySystem> sys;
            try {
                sys = detail::build_system(cfg, g1, g2, opt);
            } catch (const domain_error& e) {
                throw config_error(e.what());
            } catch (const numerical_error& e) {
                rep.warnings.push_back(label + ": " + e.what());
            }
            if (sys) {
                systems.push_back(*sys);
                thresholds.push_back(th);
                row_of.push_back(rep.table.rows.size());
                try {
                    const auto mu =
                        moment_sequence(*sys, std::size_t(2 * cfg.pade_A + 1), detail::moment_source(cfg), opt.closed);
                    row[2] = outage_pade(build_pade(mu, cfg.pade_A, detail::pade_options(cfg)), th);
                } catch (const std::exception& e) {
                    rep.warnings.push_back(label + " op_pade: " + e.what());
                }
                try {
                    row[3] = outage_quadrature(*sys, th, qopt);
                } catch (const convergence_error& e) {
                    row[3] = e.last_value();
                    rep.warnings.push_back(label + " op_quadrature: " + e.what());
                } catch (const std::exception& e) {
                    rep.warnings.push_back(label + " op_quadrature: " + e.what());
                }
                try {
                    row[4] = outage_exact(*sys, th);
                } catch (const std::exception& e) {
                    rep.warnings.push_back(label + " op_exact: " + e.what());
                }
            }
            rep.table.rows.push_back(std::move(row));
        }
    }
    if (!systems.empty()) {
        const auto stats = mc_run_batch(systems, detail::sim_config(cfg), 1,
                                        [&](std::size_t k, double g, std::vector<RunningStats>& st) {
                                            st[0].add(g <= thresholds[k] ? 1.0 : 0.0);
                                        });
        for (std::size_t k = 0; k < systems.size(); ++k) {
            const double p = stats[k][0].mean;
            rep.table.rows[row_of[k]][5] = p;
            rep.table.rows[row_of[k]][6] = std::sqrt(p * (1.0 - p) / double(stats[k][0].count));
        }
    }
    return rep;
}

/// Runs a command by name.
inline CommandReport run_command(const std::string& name, const ScenarioConfig& cfg, const CommandOptions& opt = {}) {
    validate_scenario(cfg);
    if (name == "gain-sweep") return cmd_gain_sweep(cfg, opt);
    if (name == "avg-snr") return cmd_avg_snr(cfg, opt);
    if (name == "abep") return cmd_abep(cfg, opt);
    if (name == "outage") return cmd_outage(cfg, opt);
    throw config_error("unknown command '" + name + "'");
}

}  // namespace relayperf
