#pragma once

// Gauss-Laguerre rules for ∫₀^∞ e^{-x} f(x) dx.

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "relayperf/errors.hpp"

namespace relayperf {

struct QuadratureRule {
    std::vector<double> nodes;        // roots of L_N, increasing
    std::vector<double> weights;      // W_i = x_i / ((N+1)^2 L_{N+1}(x_i)^2)
    std::vector<double> log_weights;  // log W_i; the weights underflow for large N
    std::size_t order = 0;
};

namespace detail {

struct LaguerreEval {
    double value;      // L_N(x) * exp(-log_scale)
    double next;       // L_{N+1}(x) * exp(-log_scale)
    double log_scale;
};

// Three-term recurrence (k+1) L_{k+1} = (2k+1-x) L_k - k L_{k-1}, rescaled to
// stay in range for large x.
inline LaguerreEval laguerre(std::size_t n, double x) {
    double p0 = 1.0;
    double p1 = 1.0 - x;
    double log_scale = 0.0;
    if (n == 0) return {p0, p1, 0.0};
    for (std::size_t k = 1; k <= n; ++k) {
        const double kd = static_cast<double>(k);
        const double p2 = ((2.0 * kd + 1.0 - x) * p1 - kd * p0) / (kd + 1.0);
        p0 = p1;
        p1 = p2;
        if (std::abs(p1) > 1e100) {
            p0 *= 1e-100;
            p1 *= 1e-100;
            log_scale += 100.0 * std::log(10.0);
        }
    }
    return {p0, p1, log_scale};
}

// Number of eigenvalues of the Laguerre Jacobi matrix (diagonal 2i-1,
// off-diagonal i) below x, i.e. the number of roots of L_n below x.
inline std::size_t roots_below(std::size_t n, double x) {
    std::size_t count = 0;
    double d = 1.0 - x;
    if (d < 0.0) ++count;
    for (std::size_t i = 2; i <= n; ++i) {
        const double off = static_cast<double>(i - 1);
        if (d == 0.0) d = std::numeric_limits<double>::epsilon();
        d = (2.0 * static_cast<double>(i) - 1.0 - x) - off * off / d;
        if (d < 0.0) ++count;
    }
    return count;
}

}  // namespace detail

/// N-point Gauss-Laguerre rule, 1 <= N <= 200.
inline QuadratureRule gauss_laguerre(std::size_t n) {
    if (n < 1 || n > 200) throw domain_error("gauss_laguerre: order must be in [1, 200], got " + std::to_string(n));
    QuadratureRule rule;
    rule.order = n;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    rule.log_weights.resize(n);
    const double nd = static_cast<double>(n);
    const double upper = 4.0 * nd + 2.0;  // all roots lie below this

    double z = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        // initial guess
        if (i == 0) {
            z = 3.0 / (1.0 + 2.4 * nd);
        } else if (i == 1) {
            z += 15.0 / (1.0 + 2.5 * nd);
        } else {
            const double ai = static_cast<double>(i - 1);
            z += (1.0 + 2.55 * ai) / (1.9 * ai) * (z - rule.nodes[i - 2]);
        }
        // bracket [lo, hi] containing exactly the (i+1)-th root
        double lo = i == 0 ? 0.0 : rule.nodes[i - 1];
        double hi = upper;
        for (int it = 0; it < 200 && detail::roots_below(n, hi) > i + 1; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (detail::roots_below(n, mid) > i)
                hi = mid;
            else
                lo = mid;
        }
        if (!(z > lo && z < hi)) z = 0.5 * (lo + hi);

        bool converged = false;
        double step = 0.0;
        for (int it = 0; it < 200; ++it) {
            const auto e = detail::laguerre(n, z);
            // L_N'(x) = N (L_N - L_{N-1}) / x ; recover L_{N-1} from the recurrence
            // (N+1) L_{N+1} = (2N+1-x) L_N - N L_{N-1}
            const double prev = ((2.0 * nd + 1.0 - z) * e.value - (nd + 1.0) * e.next) / nd;
            const double deriv = nd * (e.value - prev) / z;
            if (e.value == 0.0) {
                converged = true;
                break;
            }
            // L_N(0) = 1 and the sign flips at each root, so left of root i+1 it is (-1)^i
            const bool left_positive = i % 2 == 0;
            if ((e.value > 0.0) == left_positive)
                lo = z;
            else
                hi = z;
            double trial = z - e.value / deriv;
            if (!(trial > lo && trial < hi) || !std::isfinite(trial)) trial = 0.5 * (lo + hi);
            step = trial - z;
            z = trial;
            if (std::abs(step) <= 1e-14 * z || hi - lo <= 1e-15 * z) {
                converged = true;
                break;
            }
        }
        if (!converged) {
            throw convergence_error("gauss_laguerre: root " + std::to_string(i + 1) + " of L_" + std::to_string(n) +
                                        " did not converge",
                                    z, step);
        }
        rule.nodes[i] = z;
        const auto e = detail::laguerre(n, z);
        const double log_w = std::log(z) - 2.0 * std::log(nd + 1.0) - 2.0 * (std::log(std::abs(e.next)) + e.log_scale);
        rule.log_weights[i] = log_w;
        rule.weights[i] = std::exp(log_w);
    }
    return rule;
}

}  // namespace relayperf
