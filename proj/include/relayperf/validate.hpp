#pragma once

// Self-check suite: identities, oracle cross-checks and Monte Carlo brackets
// that should all pass on a correct build.

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <ostream>
#include <string>
#include <tuple>
#include <vector>

#include "relayperf/commands.hpp"
#include "relayperf/gauss_laguerre.hpp"
#include "relayperf/metrics.hpp"
#include "relayperf/pade_mgf.hpp"
#include "relayperf/relay.hpp"
#include "relayperf/simulate.hpp"
#include "relayperf/special_functions.hpp"

namespace relayperf {

struct CheckResult {
    std::string name;
    double tolerance = 0.0;
    double measured = 0.0;
    bool passed = false;
    std::string note;  // exception text when the check could not run
};

struct ValidationOptions {
    ClosedFormOptions closed;
    SimConfig sim{1'000'000, 1, 8, 0};
};

namespace detail {

inline double rel_gap(double a, double b) { return std::abs(a - b) / std::abs(b); }

inline CheckResult run_check(const std::string& name, double tol, const std::function<double()>& measure) {
    CheckResult r;
    r.name = name;
    r.tolerance = tol;
    try {
        r.measured = measure();
        r.passed = r.measured <= tol;
    } catch (const std::exception& e) {
        r.measured = std::numeric_limits<double>::quiet_NaN();
        r.note = e.what();
    }
    return r;
}

// the Fig. 6 style system: m = 2, β = 3 on both hops
inline RelaySystem reference_system(double g1, double g2) {
    return make_semi_blind_system(make_hop(2.0, 3.0, g1), make_hop(2.0, 3.0, g2));
}

}  // namespace detail

inline std::vector<CheckResult> run_validation(const ValidationOptions& opt = {}) {
    using detail::rel_gap;
    std::vector<CheckResult> out;
    auto check = [&](const std::string& name, double tol, const std::function<double()>& f) {
        out.push_back(detail::run_check(name, tol, f));
    };

    check("meijer_g G{1,0;0,1}(x|-;0) = exp(-x), max rel error", 1e-9, [] {
        double worst = 0.0;
        for (double x : {0.01, 0.5, 1.0, 4.0, 20.0}) {
            worst = std::max(worst, rel_gap(meijer_g({{}, {}, {0.0}, {}, x}), std::exp(-x)));
        }
        return worst;
    });
    check("meijer_g G{1,1;1,1}(x|1-r;0) = Gamma(r)(1+x)^-r, max rel error", 1e-9, [] {
        double worst = 0.0;
        for (double r : {0.5, 1.5, 3.0})
            for (double x : {0.1, 1.0, 10.0})
                worst = std::max(worst, rel_gap(meijer_g({{1.0 - r}, {}, {0.0}, {}, x}), gamma_fn(r) * std::pow(1.0 + x, -r)));
        return worst;
    });
    check("gauss_laguerre N=2 nodes 2 -+ sqrt 2, max abs error", 1e-10, [] {
        const auto rule = gauss_laguerre(2);
        return std::max(std::abs(rule.nodes[0] - (2.0 - std::numbers::sqrt2)),
                        std::abs(rule.nodes[1] - (2.0 + std::numbers::sqrt2)));
    });
    check("gauss_laguerre N=10 exact for x^k, k < 20, max rel error", 1e-10, [] {
        const auto rule = gauss_laguerre(10);
        double worst = 0.0;
        for (int k = 0; k < 20; ++k) {
            double sum = 0.0;
            for (std::size_t i = 0; i < rule.order; ++i) sum += rule.weights[i] * std::pow(rule.nodes[i], k);
            worst = std::max(worst, rel_gap(sum, std::tgamma(k + 1.0)));
        }
        return worst;
    });
    check("semi-blind C closed form vs oracle, max rel gap", 1e-6, [&] {
        double worst = 0.0;
        for (auto [m, beta, g] : {std::tuple{1.0, 4.0 / 3.0, 10.0}, {2.0, 3.0, 1.0}, {3.5, 2.0, 10.0}}) {
            const auto rb = rationalize_beta(beta);
            const GGHop h = make_hop(m, rb.value(), g);
            worst = std::max(worst, rel_gap(1.0 / inverse_gain_average_closed(h, rb.k, rb.l, opt.closed),
                                            semi_blind_C_oracle(h)));
        }
        return worst;
    });
    check("Nakagami C vs Tricomi reduction 1/(Z^m Psi(m,m,Z)), rel gap", 1e-8, [&] {
        double worst = 0.0;
        for (auto [m, g] : {std::pair{1.0, 1.0}, {2.0, 10.0}, {3.5, 1.0}}) {
            const double z = m / g;
            const double tricomi = 1.0 / (std::pow(z, m) * tricomi_psi(m, m, z));
            worst = std::max(worst, rel_gap(1.0 / inverse_gain_average_closed(make_hop(m, 2.0, g), 1, 1, opt.closed),
                                            tricomi));
        }
        return worst;
    });
    check("end-to-end moments n=1..3 closed form vs oracle, max rel gap", 1e-6, [&] {
        double worst = 0.0;
        const RelaySystem systems[] = {
            detail::reference_system(10.0, 20.0),
            make_semi_blind_system(make_hop(1.0, 4.0 / 3.0, 1.0), make_hop(3.5, 3.0, 10.0)),
        };
        for (const auto& sys : systems)
            for (int n = 1; n <= 3; ++n)
                worst = std::max(worst, rel_gap(end_to_end_moment_closed(sys, n, opt.closed),
                                                end_to_end_moment_oracle(sys, n)));
        return worst;
    });
    const auto exp_mgf = [] { return build_pade(exponential_moments(1.0, 15), 7); };
    check("exponential SNR: BDPSK ABEP = 1/4, abs error", 1e-6,
          [&] { return std::abs(abep_bdpsk(exp_mgf()) - 0.25); });
    check("exponential SNR: BPSK ABEP = (1 - sqrt(1/2))/2, abs error", 1e-6, [&] {
        return std::abs(abep_coherent(exp_mgf(), ModulationScheme::bpsk()) - 0.5 * (1.0 - std::sqrt(0.5)));
    });
    check("exponential SNR: outage at threshold 1 = 1 - exp(-1), abs error", 1e-6,
          [&] { return std::abs(outage_pade(exp_mgf(), 1.0) - (1.0 - std::exp(-1.0))); });
    check("Pade [7/8] Taylor match through order 15, max rel error", 1e-9, [&] {
        const auto sys = detail::reference_system(10.0, 10.0);
        const auto mu = moment_sequence(sys, 15);
        const auto p = build_pade(mu, 7);
        const auto c = taylor_coefficients(p, 15);
        double worst = 0.0;
        for (std::size_t n = 0; n < c.size() && n <= std::size_t(p.A() + p.B()); ++n) {
            const double want = (n % 2 ? -1.0 : 1.0) * mu[n] / std::tgamma(double(n) + 1.0);
            worst = std::max(worst, rel_gap(c[n], want));
        }
        return worst;
    });
    check("outage quadrature vs exact (m=2, beta=3, means 10, threshold 1), abs gap", 1e-7, [&] {
        const auto sys = detail::reference_system(10.0, 10.0);
        double quad = 0.0;
        try {
            quad = outage_quadrature(sys, 1.0);
        } catch (const convergence_error& e) {
            quad = e.last_value();  // judged on the last iterate
        }
        return std::abs(quad - outage_exact(sys, 1.0));
    });
    check("outage Pade vs exact (same system), abs gap", 1e-3, [&] {
        const auto sys = detail::reference_system(10.0, 10.0);
        return std::abs(outage_pade(build_pade(moment_sequence(sys, 15), 7), 1.0) - outage_exact(sys, 1.0));
    });
    check("Monte Carlo moments n=1,2 vs oracle, max |z|", 3.0, [&] {
        const auto sys = detail::reference_system(1.0, 1.0);
        const auto est = mc_moments(sys, opt.sim, 2);
        double worst = 0.0;
        for (int n = 1; n <= 2; ++n) {
            const auto& e = est[std::size_t(n - 1)];
            worst = std::max(worst, std::abs(e.mean - end_to_end_moment_oracle(sys, n)) / e.std_error);
        }
        return worst;
    });
    check("Monte Carlo outage vs exact, |z|", 3.0, [&] {
        const auto sys = detail::reference_system(10.0, 10.0);
        const auto e = mc_outage(sys, opt.sim, 1.0);
        return std::abs(e.mean - outage_exact(sys, 1.0)) / e.std_error;
    });
    check("dB to linear round trip, max rel error", 1e-12, [] {
        double worst = 0.0;
        for (double db = -60.0; db <= 60.0; db += 7.5) {
            const double x = db_to_linear(db);
            worst = std::max(worst, rel_gap(db_to_linear(linear_to_db(x)), x));
        }
        return worst;
    });
    return out;
}

/// One line per check; returns the number of failures.
inline int print_validation(std::ostream& os, const std::vector<CheckResult>& results) {
    int failed = 0;
    for (const auto& r : results) {
        if (!r.passed) ++failed;
        os << (r.passed ? "PASS  " : "FAIL  ") << r.name << "  tolerance=" << r.tolerance
           << "  measured=" << format_number(r.measured);
        if (!r.note.empty()) os << "  (" << r.note << ")";
        os << '\n';
    }
    os << results.size() - std::size_t(failed) << "/" << results.size() << " checks passed\n";
    return failed;
}

}  // namespace relayperf
