#pragma once

// Generalized-Gamma faded hop in the SNR domain.

#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "relayperf/errors.hpp"
#include "relayperf/special_functions.hpp"

namespace relayperf {

/// One hop: shape m, exponent beta, mean SNR (linear) and τ = Γ(m)/Γ(m + 2/β).
struct GGHop {
    double m = 1.0;
    double beta = 2.0;
    double mean_snr = 1.0;
    double tau = 1.0;

    double scale() const { return tau * mean_snr; }
};

inline GGHop make_hop(double m, double beta, double mean_snr) {
    if (!(m > 0.5) || !std::isfinite(m)) throw domain_error("make_hop: m must be > 1/2, got " + std::to_string(m));
    if (!(beta > 0.0) || !std::isfinite(beta))
        throw domain_error("make_hop: beta must be positive, got " + std::to_string(beta));
    if (!(mean_snr > 0.0) || !std::isfinite(mean_snr))
        throw domain_error("make_hop: mean_snr must be positive, got " + std::to_string(mean_snr));
    const double tau = std::exp(log_gamma(m) - log_gamma(m + 2.0 / beta));
    return {m, beta, mean_snr, tau};
}

/// Density of the hop SNR.
inline double pdf(const GGHop& h, double gamma) {
    if (!(gamma >= 0.0)) throw domain_error("pdf: gamma must be nonnegative");
    if (gamma == 0.0) {
        const double e = h.m * h.beta / 2.0;
        if (e > 1.0) return 0.0;
        if (e < 1.0) return std::numeric_limits<double>::infinity();
        return h.beta / (2.0 * std::exp(log_gamma(h.m)) * h.scale());
    }
    const double s = h.scale();
    const double half_beta = h.beta / 2.0;
    const double log_x = half_beta * std::log(gamma / s);
    const double log_pdf = std::log(half_beta) - std::log(gamma) + h.m * log_x - std::exp(log_x) - log_gamma(h.m);
    return std::exp(log_pdf);
}

/// Distribution function 1 - Q(m, (γ/τγ̄)^{β/2}).
inline double cdf(const GGHop& h, double gamma) {
    if (!(gamma >= 0.0)) throw domain_error("cdf: gamma must be nonnegative");
    if (gamma == 0.0) return 0.0;
    const double x = std::pow(gamma / h.scale(), h.beta / 2.0);
    return regularized_gamma_p(h.m, x);
}

/// E[γ^n] = (τγ̄)^n Γ(m + 2n/β)/Γ(m).
inline double single_hop_moment(const GGHop& h, double n) {
    if (!(n >= 0.0)) throw domain_error("single_hop_moment: order must be nonnegative");
    if (n == 0.0) return 1.0;
    const double log_mu = n * std::log(h.scale()) + log_gamma(h.m + 2.0 * n / h.beta) - log_gamma(h.m);
    const double v = std::exp(log_mu);
    if (std::isinf(v)) throw overflow_error("single_hop_moment: moment of order " + std::to_string(n) + " overflows");
    return v;
}

/// Draws γ = τγ̄ X^{2/β}, X ~ Gamma(m, 1).  Holds only distribution state;
/// the generator is passed in by the caller.
class hop_sampler {
  public:
    explicit hop_sampler(const GGHop& h) : scale_(h.scale()), exponent_(2.0 / h.beta), gamma_(h.m, 1.0) {}

    template <class URBG>
    double operator()(URBG& rng) {
        return scale_ * std::pow(gamma_(rng), exponent_);
    }

  private:
    double scale_;
    double exponent_;
    std::gamma_distribution<double> gamma_;
};

template <class URBG>
std::vector<double> sample(const GGHop& h, URBG& rng, std::size_t count) {
    if (count < 1) throw domain_error("sample: count must be at least 1");
    hop_sampler draw(h);
    std::vector<double> out(count);
    for (auto& v : out) v = draw(rng);
    return out;
}

/// β written as 2l/k with k, l coprime, plus how far the input was moved.
struct RationalBeta {
    int k = 1;
    int l = 1;
    double requested = 2.0;
    double value() const { return 2.0 * l / k; }
    double rounding() const { return value() - requested; }
};

/// Nearest 2l/k to beta with 1 <= k, l <= max_term (ties go to the smaller k).
inline RationalBeta rationalize_beta(double beta, int max_term = 8) {
    if (!(beta > 0.0) || !std::isfinite(beta)) throw domain_error("rationalize_beta: beta must be positive");
    RationalBeta best{1, 1, beta};
    double best_err = std::abs(best.value() - beta);
    for (int k = 1; k <= max_term; ++k) {
        for (int l = 1; l <= max_term; ++l) {
            if (std::gcd(k, l) != 1) continue;
            const double err = std::abs(2.0 * l / k - beta);
            if (err < best_err - 1e-15) {
                best = {k, l, beta};
                best_err = err;
            }
        }
    }
    return best;
}

inline std::string describe(const GGHop& h) {
    std::ostringstream os;
    os << "GG(m=" << h.m << ", beta=" << h.beta << ", mean=" << h.mean_snr << ")";
    return os.str();
}

}  // namespace relayperf
