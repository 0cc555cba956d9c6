#pragma once

// General-purpose real quadrature used by the oracle routes:
// adaptive Gauss-Kronrod (7/15) on finite intervals, a whole-line driver for
// positive integrands written in a logarithmic variable, and Gauss-Legendre
// rules on a finite interval.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <queue>
#include <string>
#include <vector>

#include "relayperf/errors.hpp"

namespace relayperf::quad {

struct IntegralEstimate {
    double value = 0.0;
    double error = 0.0;
    std::size_t intervals = 0;
};

struct AdaptiveOptions {
    double rel_tol = 1e-12;
    double abs_tol = 0.0;
    std::size_t max_intervals = 2000;
};

namespace detail {

inline constexpr std::array<double, 8> kronrod_nodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

inline constexpr std::array<double, 8> kronrod_weights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

// Gauss weights for the odd-indexed Kronrod nodes 1, 3, 5 and the centre.
inline constexpr std::array<double, 4> gauss_weights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
    double a;
    double b;
    double value;
    double error;
    bool operator<(const Segment& o) const { return error < o.error; }
};

template <class F>
Segment gk15(F& f, double a, double b) {
    const double centre = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(centre);
    double kronrod = fc * kronrod_weights[7];
    double gauss = fc * gauss_weights[3];
    for (std::size_t j = 0; j < 7; ++j) {
        const double dx = half * kronrod_nodes[j];
        const double sum = f(centre - dx) + f(centre + dx);
        kronrod += kronrod_weights[j] * sum;
        if (j % 2 == 1) gauss += gauss_weights[j / 2] * sum;
    }
    kronrod *= half;
    gauss *= half;
    return {a, b, kronrod, std::abs(kronrod - gauss)};
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod integration of f over [a, b].
/// Throws convergence_error when the interval budget is exhausted.
template <class F>
IntegralEstimate integrate(F&& f, double a, double b, const AdaptiveOptions& opt = {}) {
    if (!(a < b)) return {};
    std::priority_queue<detail::Segment> heap;
    auto first = detail::gk15(f, a, b);
    double total = first.value;
    double total_err = first.error;
    heap.push(first);
    std::size_t count = 1;
    auto done = [&] {
        return total_err <= std::max(opt.abs_tol, opt.rel_tol * std::abs(total)) ||
               total_err < 50 * std::numeric_limits<double>::min();
    };
    while (!done()) {
        if (count >= opt.max_intervals) {
            throw convergence_error("adaptive quadrature: interval budget exhausted (error estimate " +
                                        std::to_string(total_err) + ")",
                                    total, total_err);
        }
        auto worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(worst.a < mid && mid < worst.b)) {
            // interval can no longer be split in double precision
            throw convergence_error("adaptive quadrature: interval collapsed", total, total_err);
        }
        auto left = detail::gk15(f, worst.a, mid);
        auto right = detail::gk15(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++count;
    }
    // re-sum to remove drift from the incremental updates
    double value = 0.0;
    double err = 0.0;
    while (!heap.empty()) {
        value += heap.top().value;
        err += heap.top().error;
        heap.pop();
    }
    return {value, err, count};
}

/// Integral over the whole real line of a nonnegative integrand g(u) that is
/// negligible outside one contiguous bump (the usual shape after writing a
/// (0, inf) integral in u = log x).  The support is located on a coarse scan
/// of [scan_lo, scan_hi] and then integrated adaptively.
template <class F>
IntegralEstimate integrate_bump(F&& g, double scan_lo = -200.0, double scan_hi = 60.0,
                                const AdaptiveOptions& opt = {}) {
    constexpr double step = 0.25;
    constexpr double cutoff = 1e-22;
    const auto n = static_cast<std::size_t>((scan_hi - scan_lo) / step) + 1;
    std::vector<double> vals(n);
    double peak = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double v = std::abs(g(scan_lo + step * static_cast<double>(i)));
        vals[i] = std::isfinite(v) ? v : 0.0;
        peak = std::max(peak, vals[i]);
    }
    if (peak == 0.0) return {};
    std::size_t lo = 0;
    while (lo + 1 < n && vals[lo + 1] < cutoff * peak) ++lo;
    std::size_t hi = n - 1;
    while (hi > lo + 1 && vals[hi - 1] < cutoff * peak) --hi;
    const double a = scan_lo + step * static_cast<double>(lo);
    const double b = scan_lo + step * static_cast<double>(hi);
    // split at unit spacing so the first pass already resolves the bump
    IntegralEstimate sum;
    const int pieces = std::max(1, static_cast<int>(std::ceil(b - a)));
    AdaptiveOptions piece_opt = opt;
    piece_opt.abs_tol = std::max(opt.abs_tol, 1e-4 * opt.rel_tol * peak * step);
    for (int k = 0; k < pieces; ++k) {
        const double x0 = a + (b - a) * k / pieces;
        const double x1 = a + (b - a) * (k + 1) / pieces;
        auto r = integrate(g, x0, x1, piece_opt);
        sum.value += r.value;
        sum.error += r.error;
        sum.intervals += r.intervals;
    }
    if (sum.error > std::max(opt.abs_tol, opt.rel_tol * std::abs(sum.value))) {
        throw convergence_error("whole-line quadrature did not reach tolerance", sum.value, sum.error);
    }
    return sum;
}

struct Rule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [a, b].
inline Rule gauss_legendre(std::size_t n, double a = -1.0, double b = 1.0) {
    if (n == 0) throw domain_error("gauss_legendre: order must be positive");
    Rule rule{std::vector<double>(n), std::vector<double>(n)};
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    const std::size_t m = (n + 1) / 2;
    for (std::size_t i = 0; i < m; ++i) {
        double z = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0;
            double p1 = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
            }
            dp = n * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        rule.nodes[i] = mid - half * z;
        rule.nodes[n - 1 - i] = mid + half * z;
        const double w = 2.0 * half / ((1.0 - z * z) * dp * dp);
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    return rule;
}

}  // namespace relayperf::quad
