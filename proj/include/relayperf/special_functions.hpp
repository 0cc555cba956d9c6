#pragma once

// Gamma-function family, Tricomi's confluent hypergeometric function and
// Meijer-G functions of positive real argument.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "relayperf/errors.hpp"
#include "relayperf/quadrature.hpp"

namespace relayperf {

namespace detail {

inline bool is_nonpositive_integer(double x) { return x <= 0.0 && x == std::floor(x); }

// Lanczos approximation, g = 7, 9 terms.
inline constexpr double lanczos_g = 7.0;
inline constexpr std::array<double, 9> lanczos_coef = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

inline const double half_log_two_pi = 0.5 * std::log(2.0 * std::numbers::pi);

template <class T>
T lanczos_log_gamma(T z) {
    // valid for Re z >= 0.5
    z -= T(1);
    T x = T(lanczos_coef[0]);
    for (std::size_t i = 1; i < lanczos_coef.size(); ++i) x += lanczos_coef[i] / (z + T(double(i)));
    const T t = z + T(lanczos_g + 0.5);
    return T(half_log_two_pi) + (z + T(0.5)) * std::log(t) - t + std::log(x);
}

// log(sin(pi z)) up to a multiple of 2 pi i, without overflow for large |Im z|.
inline std::complex<double> log_sin_pi(std::complex<double> z) {
    using C = std::complex<double>;
    if (std::abs(z.imag()) < 20.0) return std::log(std::sin(std::numbers::pi * z));
    const bool flip = z.imag() < 0.0;
    if (flip) z = std::conj(z);
    const C i(0.0, 1.0);
    const C r = -i * std::numbers::pi * z + std::log(std::exp(2.0 * i * std::numbers::pi * z) - 1.0) -
                std::log(C(0.0, 2.0));
    return flip ? std::conj(r) : r;
}

}  // namespace detail

/// Γ(x).  Throws pole_error at non-positive integers and overflow_error when
/// the value is not representable.
inline double gamma_fn(double x) {
    if (std::isnan(x)) throw domain_error("gamma_fn: NaN argument");
    if (detail::is_nonpositive_integer(x)) {
        throw pole_error("gamma_fn: pole at non-positive integer " + std::to_string(x));
    }
    const double r = std::tgamma(x);
    if (std::isinf(r)) throw overflow_error("gamma_fn: Γ(" + std::to_string(x) + ") overflows");
    return r;
}

/// 1/Γ(x), zero at the poles of Γ.
inline double reciprocal_gamma(double x) {
    if (detail::is_nonpositive_integer(x)) return 0.0;
    return 1.0 / std::tgamma(x);
}

/// log Γ(x) for x > 0.  Re-entrant (does not touch the global signgam).
inline double log_gamma(double x) {
    if (!(x > 0.0)) throw domain_error("log_gamma: argument must be positive");
    if (x < 0.5) return detail::lanczos_log_gamma(x + 1.0) - std::log(x);
    return detail::lanczos_log_gamma(x);
}

/// Principal-branch-free complex log Γ: exp() of the result is Γ(z).
inline std::complex<double> log_gamma(std::complex<double> z) {
    if (z.imag() == 0.0 && detail::is_nonpositive_integer(z.real())) {
        throw pole_error("log_gamma: pole at non-positive integer");
    }
    if (z.real() >= 0.5) return detail::lanczos_log_gamma(z);
    if (z.real() > 0.0) return detail::lanczos_log_gamma(z + 1.0) - std::log(z);
    return std::log(std::numbers::pi) - detail::log_sin_pi(z) - detail::lanczos_log_gamma(1.0 - z);
}

/// Digamma ψ(x) for real x off the poles.
inline double digamma(double x) {
    if (detail::is_nonpositive_integer(x)) throw pole_error("digamma: pole");
    if (x < 0.0) return digamma(1.0 - x) - std::numbers::pi / std::tan(std::numbers::pi * x);
    double r = 0.0;
    while (x < 10.0) {
        r -= 1.0 / x;
        x += 1.0;
    }
    const double f = 1.0 / (x * x);
    const double series =
        f * (-1.0 / 12 +
             f * (1.0 / 120 +
                  f * (-1.0 / 252 + f * (1.0 / 240 + f * (-1.0 / 132 + f * (691.0 / 32760 + f * (-1.0 / 12)))))));
    return r + std::log(x) - 0.5 / x + series;
}

/// Trigamma ψ'(x) for real x off the poles.
inline double trigamma(double x) {
    if (detail::is_nonpositive_integer(x)) throw pole_error("trigamma: pole");
    if (x < 0.0) {
        const double s = std::sin(std::numbers::pi * x);
        return std::numbers::pi * std::numbers::pi / (s * s) - trigamma(1.0 - x);
    }
    double r = 0.0;
    while (x < 10.0) {
        r += 1.0 / (x * x);
        x += 1.0;
    }
    const double f = 1.0 / (x * x);
    const double series = 1.0 / x + f / 2.0 +
                          f / x *
                              (1.0 / 6 +
                               f * (-1.0 / 30 +
                                    f * (1.0 / 42 + f * (-1.0 / 30 + f * (5.0 / 66 + f * (-691.0 / 2730 + f * 7.0 / 6))))));
    return r + series;
}

namespace detail {

struct IncompleteGammaParts {
    double p;       // regularized lower
    double q;       // regularized upper
    double upper;   // unregularized Γ(a, x)
};

// Series for x < a + 1, continued fraction (modified Lentz) otherwise.
inline IncompleteGammaParts incomplete_gamma(double a, double x) {
    if (!(a > 0.0)) throw domain_error("incomplete gamma: shape a must be positive");
    if (!(x >= 0.0)) throw domain_error("incomplete gamma: x must be nonnegative");
    const double lga = log_gamma(a);
    if (x == 0.0) return {0.0, 1.0, std::exp(lga)};
    if (std::isinf(x)) return {1.0, 0.0, 0.0};
    constexpr double eps = std::numeric_limits<double>::epsilon();
    constexpr int max_iter = 100000;
    const double log_front = a * std::log(x) - x;
    if (x < a + 1.0) {
        double ap = a;
        double del = 1.0 / a;
        double sum = del;
        for (int n = 0; n < max_iter; ++n) {
            ap += 1.0;
            del *= x / ap;
            sum += del;
            if (std::abs(del) < std::abs(sum) * eps) {
                const double p = std::exp(log_front - lga) * sum;
                const double lower = std::exp(log_front) * sum;
                return {p, 1.0 - p, std::exp(lga) - lower};
            }
        }
        throw convergence_error("incomplete gamma series did not converge", sum, del);
    }
    constexpr double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < max_iter; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < eps) {
            const double q = std::exp(log_front - lga) * h;
            return {1.0 - q, q, std::exp(log_front) * h};
        }
    }
    throw convergence_error("incomplete gamma continued fraction did not converge", h, 0.0);
}

}  // namespace detail

/// Regularized lower incomplete gamma P(a, x).
inline double regularized_gamma_p(double a, double x) { return detail::incomplete_gamma(a, x).p; }

/// Regularized upper incomplete gamma Q(a, x) = Γ(a, x)/Γ(a).
inline double regularized_gamma_q(double a, double x) { return detail::incomplete_gamma(a, x).q; }

/// Γ(a, x) = ∫ₓ^∞ e^{-t} t^{a-1} dt for a > 0, x >= 0.
inline double upper_incomplete_gamma(double a, double x) { return detail::incomplete_gamma(a, x).upper; }

/// Tricomi confluent hypergeometric function Ψ(a, b, x) = U(a, b, x) for a > 0, x > 0,
/// from its Laplace-type integral representation.
inline double tricomi_psi(double a, double b, double x) {
    if (!(a > 0.0)) throw domain_error("tricomi_psi: a must be positive");
    if (!(x > 0.0)) throw domain_error("tricomi_psi: x must be positive");
    // t = e^u; integrand e^{-x t} t^{a} (1+t)^{b-a-1} in du
    auto log_integrand = [=](double u) {
        const double t = std::exp(u);
        return -x * t + a * u + (b - a - 1.0) * std::log1p(t);
    };
    const double lo = std::min(-200.0, -60.0 / a);
    const double hi = std::max(60.0, std::log(60.0 / x) + 10.0);
    double peak = -std::numeric_limits<double>::infinity();
    for (double u = lo; u <= hi; u += 0.25) peak = std::max(peak, log_integrand(u));
    auto r = quad::integrate_bump([&](double u) { return std::exp(log_integrand(u) - peak); }, lo, hi,
                                  {1e-13, 0.0, 4000});
    return r.value * std::exp(peak - log_gamma(a));
}

/// Parameters of G^{m,n}_{p,q}(z | a; b): a = a_top ++ a_rest, b = b_top ++ b_rest,
/// with n = |a_top|, p = n + |a_rest|, m = |b_top|, q = m + |b_rest|.
struct MeijerGSpec {
    std::vector<double> a_top;
    std::vector<double> a_rest;
    std::vector<double> b_top;
    std::vector<double> b_rest;
    double argument = 1.0;

    std::size_t m() const { return b_top.size(); }
    std::size_t n() const { return a_top.size(); }
    std::size_t p() const { return a_top.size() + a_rest.size(); }
    std::size_t q() const { return b_top.size() + b_rest.size(); }
};

/// A value represented as mantissa * exp(log_scale), for results whose
/// magnitude may leave the double range before prefactors are applied.
struct ScaledReal {
    double mantissa = 0.0;
    double log_scale = 0.0;

    double value() const { return mantissa == 0.0 ? 0.0 : mantissa * std::exp(log_scale); }
};

/// Where the Mellin-Barnes line was placed and how it was sampled.
struct ContourReport {
    double abscissa = 0.0;     // Re s of the vertical line
    double scale = 0.0;        // t = scale * sinh(u)
    double step = 0.0;         // final trapezoid step in u
    double u_max = 0.0;        // truncation in u
    int refinements = 0;
};

namespace detail {

struct MellinBarnes {
    const MeijerGSpec& spec;
    double log_z;

    // log of the Mellin-Barnes integrand at complex s
    std::complex<double> log_integrand(std::complex<double> s) const {
        std::complex<double> r = s * log_z;
        for (double b : spec.b_top) r += log_gamma(b - s);
        for (double a : spec.a_top) r += log_gamma(1.0 - a + s);
        for (double b : spec.b_rest) r -= log_gamma(1.0 - b + s);
        for (double a : spec.a_rest) r -= log_gamma(a - s);
        return r;
    }

    double dlog(double c) const {
        double r = log_z;
        for (double b : spec.b_top) r -= digamma(b - c);
        for (double a : spec.a_top) r += digamma(1.0 - a + c);
        for (double b : spec.b_rest) r -= digamma(1.0 - b + c);
        for (double a : spec.a_rest) r += digamma(a - c);
        return r;
    }

    double d2log(double c) const {
        double r = 0.0;
        for (double b : spec.b_top) r += trigamma(b - c);
        for (double a : spec.a_top) r += trigamma(1.0 - a + c);
        for (double b : spec.b_rest) r -= trigamma(1.0 - b + c);
        for (double a : spec.a_rest) r -= trigamma(a - c);
        return r;
    }

    // exponent of the algebraic factor |t|^sigma in |integrand| for large |t|
    double growth_exponent(double c) const {
        double s = 0.0;
        for (double b : spec.b_top) s += b - c - 0.5;
        for (double a : spec.a_top) s += 0.5 - a + c;
        for (double b : spec.b_rest) s -= 0.5 - b + c;
        for (double a : spec.a_rest) s -= a - c - 0.5;
        return s;
    }
};

inline std::string describe(const MeijerGSpec& s) {
    std::ostringstream os;
    os << "G^{" << s.m() << "," << s.n() << "}_{" << s.p() << "," << s.q() << "}(z=" << s.argument << ")";
    return os.str();
}

}  // namespace detail

/// Meijer-G function of positive argument by numerical Mellin-Barnes integration
/// along a vertical line through the real saddle point of the integrand.
///
/// Supported: m >= 1, m + n > (p + q)/2 (exponentially convergent line integral),
/// and max(a_top) - 1 < min(b_top) so a vertical line separates the two pole
/// families.  Coincident poles (logarithmic cases) need no special handling.
inline ScaledReal meijer_g_scaled(const MeijerGSpec& spec, ContourReport* report = nullptr) {
    if (!(spec.argument > 0.0) || !std::isfinite(spec.argument)) {
        throw domain_error("meijer_g: argument must be positive and finite");
    }
    if (spec.m() == 0) throw unsupported_error("meijer_g: m = 0 is not supported: " + detail::describe(spec));
    const double delta = double(spec.m() + spec.n()) - 0.5 * double(spec.p() + spec.q());
    if (!(delta > 0.0)) {
        throw unsupported_error("meijer_g: requires m + n > (p + q)/2: " + detail::describe(spec));
    }
    const double right = *std::min_element(spec.b_top.begin(), spec.b_top.end());
    const double left = spec.a_top.empty() ? -std::numeric_limits<double>::infinity()
                                           : *std::max_element(spec.a_top.begin(), spec.a_top.end()) - 1.0;
    if (!(left < right)) {
        throw unsupported_error("meijer_g: pole families overlap (max a - 1 >= min b): " + detail::describe(spec));
    }

    detail::MellinBarnes mb{spec, std::log(spec.argument)};

    // Saddle on the real axis: root of d/dc log|integrand| in (left, right).
    double lo = left;
    double hi = right;
    if (std::isinf(lo)) {
        double width = 1.0;
        lo = right - width;
        while (mb.dlog(lo) > 0.0) {
            width *= 2.0;
            lo = right - width;
            if (width > 1e8) throw convergence_error("meijer_g: saddle bracket failed", lo, width);
        }
    }
    double c = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        c = 0.5 * (lo + hi);
        if (c == lo || c == hi) break;
        const double g = mb.dlog(c);
        if (g > 0.0)
            hi = c;
        else
            lo = c;
        if (hi - lo < 1e-15 * std::max(1.0, std::abs(c))) break;
    }
    const double pole_distance = std::min(right - c, c - left);
    const double curvature = mb.d2log(c);
    double scale = pole_distance;
    if (curvature > 0.0) scale = std::min(scale, 1.0 / std::sqrt(curvature));

    const double log_peak = mb.log_integrand({c, 0.0}).real();
    const double sigma = mb.growth_exponent(c);
    const double t_min = std::max(1.0, 2.0 * sigma / (std::numbers::pi * delta));

    auto sample = [&](double u) {
        const double t = scale * std::sinh(u);
        const auto lf = mb.log_integrand({c, t}) - log_peak;
        return (std::exp(lf)).real() * scale * std::cosh(u);
    };

    // Truncation point: integrand below 1e-18 of its peak beyond the growth region.
    const double g0 = std::abs(sample(0.0));
    double peak = g0;
    double u_max = 0.0;
    int quiet = 0;
    for (double u = 0.25; ; u += 0.25) {
        if (u > 60.0) throw convergence_error("meijer_g: integrand does not decay on the contour", c, scale);
        const double v = std::abs(sample(u));
        peak = std::max(peak, v);
        const double t = scale * std::sinh(u);
        if (v < 1e-18 * peak && t > t_min) {
            if (++quiet == 2) {
                u_max = u;
                break;
            }
        } else {
            quiet = 0;
        }
    }

    // Trapezoid rule in u with step halving; the integrand is analytic in the
    // strip |Im u| < pi/2 so the error falls off like exp(-pi^2/h).
    double h = 0.5;
    double sum = 0.5 * sample(0.0);
    double mass = std::abs(sum);
    for (double u = h; u <= u_max; u += h) {
        const double v = sample(u);
        sum += v;
        mass += std::abs(v);
    }
    double estimate = h * sum;
    int level = 0;
    constexpr int max_levels = 12;
    for (;;) {
        ++level;
        const double hh = 0.5 * h;
        double odd = 0.0;
        for (double u = hh; u <= u_max; u += h) {
            const double v = sample(u);
            odd += v;
            mass += std::abs(v);
        }
        sum += odd;
        const double refined = hh * sum;
        const double change = std::abs(refined - estimate);
        h = hh;
        estimate = refined;
        if (level >= 2 && change <= 1e-14 * std::abs(refined) + 1e-16 * h * mass) break;
        if (level >= max_levels) {
            std::ostringstream os;
            os << "meijer_g: trapezoid refinement did not converge for " << detail::describe(spec)
               << " (abscissa " << c << ", scale " << scale << ", step " << h << ", u_max " << u_max << ")";
            throw convergence_error(os.str(), estimate, change);
        }
    }
    if (report) *report = {c, scale, h, u_max, level};
    return {estimate / std::numbers::pi, log_peak};
}

inline double meijer_g(const MeijerGSpec& spec) {
    const auto r = meijer_g_scaled(spec);
    const double v = r.value();
    if (std::isinf(v)) throw overflow_error("meijer_g: value overflows double range");
    return v;
}

/// Slater residue expansion into generalized hypergeometric series.  Applies
/// when p < q and the b_top parameters differ pairwise by non-integers; used
/// as an independent cross-check of the contour integral for small arguments.
inline double meijer_g_slater(const MeijerGSpec& spec) {
    if (!(spec.argument > 0.0)) throw domain_error("meijer_g_slater: argument must be positive");
    if (!(spec.p() < spec.q())) throw unsupported_error("meijer_g_slater: requires p < q");
    std::vector<double> a = spec.a_top;
    a.insert(a.end(), spec.a_rest.begin(), spec.a_rest.end());
    std::vector<double> b = spec.b_top;
    b.insert(b.end(), spec.b_rest.begin(), spec.b_rest.end());
    const std::size_t m = spec.m();
    const std::size_t n = spec.n();
    for (std::size_t h = 0; h < m; ++h) {
        for (std::size_t j = 0; j < m; ++j) {
            if (j != h) {
                const double d = b[j] - b[h];
                if (std::abs(d - std::round(d)) < 1e-12) {
                    throw unsupported_error("meijer_g_slater: b parameters differ by an integer");
                }
            }
        }
    }
    const int sign_power = int(spec.p()) - int(m) - int(n);
    const double x = (sign_power % 2 == 0 ? 1.0 : -1.0) * spec.argument;
    double total = 0.0;
    for (std::size_t h = 0; h < m; ++h) {
        double coef = 1.0;
        for (std::size_t j = 0; j < m; ++j)
            if (j != h) coef *= gamma_fn(b[j] - b[h]);
        for (std::size_t j = 0; j < n; ++j) coef *= gamma_fn(1.0 + b[h] - a[j]);
        for (std::size_t j = m; j < b.size(); ++j) coef *= reciprocal_gamma(1.0 + b[h] - b[j]);
        for (std::size_t j = n; j < a.size(); ++j) coef *= reciprocal_gamma(a[j] - b[h]);
        if (coef == 0.0) continue;
        double term = 1.0;
        double series = 1.0;
        int small = 0;
        for (int k = 0;; ++k) {
            if (k > 20000) throw convergence_error("meijer_g_slater: series did not converge", series, term);
            double ratio = x / (k + 1.0);
            for (double aj : a) ratio *= (1.0 + b[h] - aj + k);
            for (std::size_t j = 0; j < b.size(); ++j)
                if (j != h) ratio /= (1.0 + b[h] - b[j] + k);
            term *= ratio;
            series += term;
            if (term == 0.0) break;
            if (std::abs(term) < 1e-17 * std::abs(series)) {
                if (++small == 3) break;
            } else {
                small = 0;
            }
        }
        total += coef * std::pow(spec.argument, b[h]) * series;
    }
    return total;
}

}  // namespace relayperf
