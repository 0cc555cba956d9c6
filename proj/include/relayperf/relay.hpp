#pragma once

// Dual-hop amplify-and-forward system with a fixed-gain relay:
// γ_end = γ1 γ2 / (C + γ2), noise normalized so that C = 1/G².

#include <cmath>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "relayperf/errors.hpp"
#include "relayperf/fading.hpp"
#include "relayperf/quadrature.hpp"
#include "relayperf/special_functions.hpp"

namespace relayperf {

enum class GainMode { fixed, semi_blind };

struct RelaySystem {
    GGHop hop1;
    GGHop hop2;
    double C = 1.0;
    GainMode mode = GainMode::fixed;
};

inline double combine_snr(double gamma1, double gamma2, double C) {
    if (!(gamma1 >= 0.0) || !(gamma2 >= 0.0)) throw domain_error("combine_snr: SNRs must be nonnegative");
    if (!(C > 0.0)) throw domain_error("combine_snr: C must be positive");
    if (std::isinf(gamma2)) return gamma1;
    return gamma1 * gamma2 / (C + gamma2);
}

/// Knobs for the closed forms.  prefactor_scale multiplies the Meijer-G
/// prefactor and exists only so tests can check that a wrong constant is caught.
struct ClosedFormOptions {
    double prefactor_scale = 1.0;
    int max_term = 8;
};

/// Tolerance used when a closed form is checked against its oracle.
inline constexpr double consistency_tolerance = 1e-4;

namespace detail {

inline std::vector<double> delta_list(int x, double a) {
    std::vector<double> out(static_cast<std::size_t>(x));
    for (int i = 0; i < x; ++i) out[static_cast<std::size_t>(i)] = (a + i) / x;
    return out;
}

inline double log_two_pi_power(int k, int l) {
    return (l + (k - 3) / 2.0) * std::log(2.0 * std::numbers::pi);
}

inline void check_consistency(const char* what, double closed, double oracle) {
    const double rel = std::abs(closed - oracle) / std::abs(oracle);
    if (!(rel <= consistency_tolerance)) {
        std::ostringstream os;
        os.precision(17);
        os << what << ": closed form " << closed << " disagrees with oracle " << oracle << " (relative gap " << rel
           << ")";
        throw consistency_error(os.str());
    }
}

}  // namespace detail

/// E[1/(1 + γ1)] by adaptive quadrature in log w, any real β.
inline double inverse_gain_average_oracle(const GGHop& h) {
    const double s = h.scale();
    const double lg = log_gamma(h.m);
    const double expo = 2.0 / h.beta;
    auto f = [&](double u) {
        const double w = std::exp(u);
        const double log_snr = std::log(s) + expo * u;
        // log(1 + γ) without overflow
        const double log_den = log_snr > 0.0 ? log_snr + std::log1p(std::exp(-log_snr)) : std::log1p(std::exp(log_snr));
        return std::exp(h.m * u - w - lg - log_den);
    };
    return quad::integrate_bump(f, -200.0, 8.0 + std::log(h.m + 40.0), {1e-12, 0.0, 4000}).value;
}

inline double semi_blind_C_oracle(const GGHop& hop1) { return 1.0 / inverse_gain_average_oracle(hop1); }

/// E[1/(1 + γ1)] from the Meijer-G closed form with β1 = 2l/k.
/// The hop's β is used as given, so it must already equal 2l/k.
inline double inverse_gain_average_closed(const GGHop& h, int k, int l, const ClosedFormOptions& opt = {}) {
    const double s = h.scale();
    const double ml = h.m * l / k;
    MeijerGSpec spec;
    spec.a_top = detail::delta_list(l, 1.0 - ml);
    spec.b_top = detail::delta_list(k, 0.0);
    const auto extra = detail::delta_list(l, 1.0 - ml);
    spec.b_top.insert(spec.b_top.end(), extra.begin(), extra.end());
    const double log_z = -l * std::log(s) - k * std::log(double(k));
    spec.argument = std::exp(log_z);
    if (!(spec.argument > 0.0) || std::isinf(spec.argument)) {
        throw overflow_error("semi-blind gain: Meijer-G argument out of double range");
    }
    const auto g = meijer_g_scaled(spec);
    const double log_pre = std::log(double(l)) - detail::log_two_pi_power(k, l) - 0.5 * std::log(double(k)) -
                           log_gamma(h.m) - ml * std::log(s);
    return opt.prefactor_scale * g.mantissa * std::exp(log_pre + g.log_scale);
}

/// Relay constant from the closed form, checked against the oracle.
/// β1 is rationalized to 2l/k; both routes then use the rationalized hop.
inline double semi_blind_C(const GGHop& hop1, const ClosedFormOptions& opt = {}, RationalBeta* rounding = nullptr) {
    const auto rb = rationalize_beta(hop1.beta, opt.max_term);
    if (rounding) *rounding = rb;
    const GGHop h = make_hop(hop1.m, rb.value(), hop1.mean_snr);
    const double closed = 1.0 / inverse_gain_average_closed(h, rb.k, rb.l, opt);
    const double oracle = semi_blind_C_oracle(h);
    detail::check_consistency("semi-blind relay constant", closed, oracle);
    return closed;
}

inline RelaySystem make_fixed_gain_system(const GGHop& hop1, const GGHop& hop2, double C) {
    if (!(C > 0.0) || !std::isfinite(C)) throw domain_error("relay constant C must be positive, got " + std::to_string(C));
    return {hop1, hop2, C, GainMode::fixed};
}

inline RelaySystem make_semi_blind_system(const GGHop& hop1, const GGHop& hop2, const ClosedFormOptions& opt = {}) {
    return {hop1, hop2, semi_blind_C(hop1, opt), GainMode::semi_blind};
}

/// E[(γ2/(C + γ2))^n] by adaptive quadrature in log w, real n >= 0.
inline double second_hop_factor_oracle(const GGHop& h2, double C, double n) {
    const double s = h2.scale();
    const double lg = log_gamma(h2.m);
    const double expo = 2.0 / h2.beta;
    auto f = [&](double u) {
        const double w = std::exp(u);
        // C/γ2 in logs
        const double log_ratio = std::log(C) - std::log(s) - expo * u;
        const double log_term = log_ratio > 0.0 ? log_ratio + std::log1p(std::exp(-log_ratio))
                                                : std::log1p(std::exp(log_ratio));
        return std::exp(h2.m * u - w - lg - n * log_term);
    };
    return quad::integrate_bump(f, -200.0, 8.0 + std::log(h2.m + 40.0), {1e-12, 0.0, 4000}).value;
}

/// n-th moment of γ_end: the γ1 factor in closed form times the γ2 average by quadrature.
inline double end_to_end_moment_oracle(const RelaySystem& sys, double n) {
    if (!(n >= 1.0)) throw domain_error("end_to_end_moment_oracle: order must be >= 1");
    return single_hop_moment(sys.hop1, n) * second_hop_factor_oracle(sys.hop2, sys.C, n);
}

/// Closed form of E[(γ2/(C + γ2))^n] for β2 = 2l/k and integer n >= 1.
inline double second_hop_factor_closed(const GGHop& h2, double C, int n, int k, int l,
                                       const ClosedFormOptions& opt = {}) {
    const double s = h2.scale();
    const double ml = h2.m * l / k;
    MeijerGSpec spec;
    spec.a_top = detail::delta_list(l, 1.0 - n - ml);
    spec.b_top = detail::delta_list(k, 0.0);
    const auto extra = detail::delta_list(l, -ml);
    spec.b_top.insert(spec.b_top.end(), extra.begin(), extra.end());
    const double log_z = l * (std::log(C) - std::log(s)) - k * std::log(double(k));
    spec.argument = std::exp(log_z);
    if (!(spec.argument > 0.0) || std::isinf(spec.argument)) {
        throw overflow_error("end-to-end moment: Meijer-G argument out of double range");
    }
    const auto g = meijer_g_scaled(spec);
    const double log_pre = n * std::log(double(l)) + ml * (std::log(C) - std::log(s)) - 0.5 * std::log(double(k)) -
                           log_gamma(h2.m) - log_gamma(double(n)) - detail::log_two_pi_power(k, l);
    return opt.prefactor_scale * g.mantissa * std::exp(log_pre + g.log_scale);
}

/// Closed-form n-th moment without the oracle check; β2 is rationalized.
inline double end_to_end_moment_closed(const RelaySystem& sys, int n, const ClosedFormOptions& opt = {},
                                       RationalBeta* rounding = nullptr) {
    if (n < 1) throw domain_error("end_to_end_moment: order must be a positive integer");
    const auto rb = rationalize_beta(sys.hop2.beta, opt.max_term);
    if (rounding) *rounding = rb;
    const GGHop h2 = make_hop(sys.hop2.m, rb.value(), sys.hop2.mean_snr);
    return single_hop_moment(sys.hop1, n) * second_hop_factor_closed(h2, sys.C, n, rb.k, rb.l, opt);
}

/// Closed-form n-th moment, checked against the oracle evaluated on the same
/// (rationalized) system.
inline double end_to_end_moment(const RelaySystem& sys, int n, const ClosedFormOptions& opt = {}) {
    RationalBeta rb;
    const double closed = end_to_end_moment_closed(sys, n, opt, &rb);
    RelaySystem rational = sys;
    rational.hop2 = make_hop(sys.hop2.m, rb.value(), sys.hop2.mean_snr);
    const double oracle = end_to_end_moment_oracle(rational, n);
    detail::check_consistency("end-to-end moment", closed, oracle);
    return closed;
}

}  // namespace relayperf
