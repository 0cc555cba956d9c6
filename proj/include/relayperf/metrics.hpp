#pragma once

// Average bit error probability and outage probability.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>

#include "relayperf/errors.hpp"
#include "relayperf/gauss_laguerre.hpp"
#include "relayperf/pade_mgf.hpp"
#include "relayperf/quadrature.hpp"
#include "relayperf/relay.hpp"

namespace relayperf {

struct ModulationScheme {
    enum class Kind { bdpsk, coherent };
    Kind kind = Kind::bdpsk;
    double psi = 1.0;  // coherent only

    static ModulationScheme bdpsk() { return {Kind::bdpsk, 1.0}; }
    static ModulationScheme coherent(double psi) {
        if (!(psi > 0.0 && psi <= 1.0)) throw domain_error("coherent scheme: psi must be in (0, 1]");
        return {Kind::coherent, psi};
    }
    static ModulationScheme bpsk() { return coherent(1.0); }
    static ModulationScheme bfsk() { return coherent(0.5); }
    static ModulationScheme bfsk_min_correlation() { return coherent(0.715); }

    std::string name() const {
        if (kind == Kind::bdpsk) return "bdpsk";
        if (psi == 1.0) return "bpsk";
        if (psi == 0.5) return "bfsk";
        if (psi == 0.715) return "bfsk_mc";
        return "coherent";
    }
};

namespace detail {

// An approximant that is no longer a valid MGF at the evaluation point can
// return a non-positive error probability; that is reported, not clamped.
inline double checked_abep(const char* what, double p) {
    if (!(p > 0.0 && p <= 0.5 * (1.0 + 1e-9))) {
        std::ostringstream os;
        os.precision(17);
        os << what << ": value " << p << " is not a valid error probability; the Padé approximant has lost accuracy "
           << "at this operating point";
        throw consistency_error(os.str());
    }
    return p;
}

}  // namespace detail

/// 0.5 M(1).
inline double abep_bdpsk(const PadeMGF& mgf) { return detail::checked_abep("abep_bdpsk", 0.5 * mgf_eval(mgf, 1.0)); }

/// (1/π) ∫₀^{π/2} M(ψ / sin²θ) dθ by 64-point Gauss-Legendre; the integrand
/// tends to M(∞) = 0 at θ = 0 and is smooth on the interval.
inline double abep_coherent(const PadeMGF& mgf, const ModulationScheme& scheme) {
    if (scheme.kind != ModulationScheme::Kind::coherent) throw domain_error("abep_coherent: scheme must be coherent");
    static const quad::Rule rule = quad::gauss_legendre(64, 0.0, std::numbers::pi / 2.0);
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double s = std::sin(rule.nodes[i]);
        sum += rule.weights[i] * mgf_eval(mgf, scheme.psi / (s * s));
    }
    return detail::checked_abep("abep_coherent", sum / std::numbers::pi);
}

inline double abep(const PadeMGF& mgf, const ModulationScheme& scheme) {
    return scheme.kind == ModulationScheme::Kind::bdpsk ? abep_bdpsk(mgf) : abep_coherent(mgf, scheme);
}

/// Tolerance of the outage range check before clamping to [0, 1].
inline constexpr double outage_range_slack = 1e-6;

namespace detail {

inline double checked_probability(const char* what, double p) {
    if (!(p >= -outage_range_slack && p <= 1.0 + outage_range_slack)) {
        std::ostringstream os;
        os.precision(17);
        os << what << ": value " << p << " lies outside [0, 1]";
        throw consistency_error(os.str());
    }
    return std::clamp(p, 0.0, 1.0);
}

}  // namespace detail

/// Residue inversion of M(s)/s: P_out = 1 + Σ (λ_i/p_i) e^{p_i γth}.
inline double outage_pade(const PadeMGF& mgf, double gamma_th) {
    if (!(gamma_th > 0.0)) throw domain_error("outage_pade: threshold must be positive");
    if (mgf.A() >= mgf.B()) throw domain_error("outage_pade: needs a strictly proper approximant");
    std::complex<double> sum = 0.0;
    for (std::size_t i = 0; i < mgf.poles.size(); ++i) {
        sum += mgf.residues[i] / mgf.poles[i] * std::exp(mgf.poles[i] * gamma_th);
    }
    if (std::abs(sum.imag()) > 1e-9) {
        throw consistency_error("outage_pade: imaginary part " + std::to_string(sum.imag()) + " is not negligible");
    }
    return detail::checked_probability("outage_pade", 1.0 + sum.real());
}

namespace detail {

// ((C γth + γth γ2)/(τ1 γ̄1 γ2))^{β1/2} from log γ2, +inf when out of range
inline double threshold_argument(const RelaySystem& sys, double gamma_th, double log_gamma2) {
    const double log_ratio = std::log(sys.C) - log_gamma2;  // log(C/γ2)
    const double log1p_ratio = log_ratio > 0.0 ? log_ratio + std::log1p(std::exp(-log_ratio))
                                               : std::log1p(std::exp(log_ratio));
    const double log_arg = 0.5 * sys.hop1.beta * (std::log(gamma_th) + log1p_ratio - std::log(sys.hop1.scale()));
    return log_arg > 700.0 ? std::numeric_limits<double>::infinity() : std::exp(log_arg);
}

}  // namespace detail

/// Conditioning integral over γ2 by adaptive quadrature in log w
/// (γ2 = τ2γ̄2 w^{2/β2}, w ~ Gamma(m2, 1)).
inline double outage_exact(const RelaySystem& sys, double gamma_th) {
    if (!(gamma_th > 0.0)) throw domain_error("outage_exact: threshold must be positive");
    const double m1 = sys.hop1.m;
    const double m2 = sys.hop2.m;
    const double lg = log_gamma(m2);
    const double log_s2 = std::log(sys.hop2.scale());
    const double expo = 2.0 / sys.hop2.beta;
    // Integrate whichever of P_out and 1 - P_out is smaller, so the result
    // keeps its relative accuracy at both ends.
    auto integrand = [&](bool survival) {
        return [&, survival](double u) {
            const double x = detail::threshold_argument(sys, gamma_th, log_s2 + expo * u);
            const double p = survival ? regularized_gamma_q(m1, x) : regularized_gamma_p(m1, x);
            return std::exp(m2 * u - std::exp(u) - lg) * p;
        };
    };
    const double hi = 8.0 + std::log(m2 + 40.0);
    const quad::AdaptiveOptions opt{1e-11, 0.0, 8000};
    const double surv = quad::integrate_bump(integrand(true), -200.0, hi, opt).value;
    if (surv < 0.5) return detail::checked_probability("outage_exact", 1.0 - surv);
    return detail::checked_probability("outage_exact", quad::integrate_bump(integrand(false), -200.0, hi, opt).value);
}

/// Gauss-Laguerre evaluation of the w-integral at a single order N.
inline double outage_laguerre(const RelaySystem& sys, double gamma_th, const QuadratureRule& rule) {
    const double m2 = sys.hop2.m;
    const double lg = log_gamma(m2);
    const double log_s2 = std::log(sys.hop2.scale());
    const double expo = 2.0 / sys.hop2.beta;
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.order; ++i) {
        const double x = rule.nodes[i];
        const double q = regularized_gamma_q(sys.hop1.m, detail::threshold_argument(sys, gamma_th, log_s2 + expo * std::log(x)));
        sum += std::exp(rule.log_weights[i] + (m2 - 1.0) * std::log(x) - lg) * q;
    }
    return 1.0 - sum;
}

struct OutageQuadratureOptions {
    std::size_t start_order = 25;
    std::size_t max_order = 200;
    double tolerance = 1e-8;  // absolute change between successive orders
};

/// Gauss-Laguerre outage with order doubling until successive values agree.
inline double outage_quadrature(const RelaySystem& sys, double gamma_th, const OutageQuadratureOptions& opt = {}) {
    if (!(gamma_th > 0.0)) throw domain_error("outage_quadrature: threshold must be positive");
    if (opt.start_order < 2) throw domain_error("outage_quadrature: starting order must be at least 2");
    std::size_t n = std::min(opt.start_order, opt.max_order);
    double prev = outage_laguerre(sys, gamma_th, gauss_laguerre(n));
    double delta = 0.0;
    while (n < opt.max_order) {
        n = std::min(2 * n, opt.max_order);
        const double cur = outage_laguerre(sys, gamma_th, gauss_laguerre(n));
        delta = std::abs(cur - prev);
        prev = cur;
        if (delta <= opt.tolerance) return detail::checked_probability("outage_quadrature", cur);
    }
    std::ostringstream os;
    os.precision(6);
    os << "outage_quadrature: no convergence up to order " << opt.max_order << " (last change " << delta << ")";
    throw convergence_error(os.str(), prev, delta);
}

}  // namespace relayperf
