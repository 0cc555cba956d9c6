#pragma once

// Sub-diagonal Padé approximants of the MGF M(s) = E[exp(-s γ)] built from
// raw moments, with the pole/residue form used for Laplace inversion.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "relayperf/errors.hpp"
#include "relayperf/relay.hpp"

namespace relayperf {

enum class MomentSource { closed_form, oracle, monte_carlo, exact };

inline const char* to_string(MomentSource s) {
    switch (s) {
        case MomentSource::closed_form: return "closed-form";
        case MomentSource::oracle: return "oracle";
        case MomentSource::monte_carlo: return "monte-carlo";
        case MomentSource::exact: return "exact";
    }
    return "?";
}

/// values[n-1] = E[γ^n], n = 1..size().
struct MomentSequence {
    std::vector<double> values;
    MomentSource source = MomentSource::oracle;

    std::size_t size() const { return values.size(); }
    /// μ_n with μ_0 = 1
    double operator[](std::size_t n) const { return n == 0 ? 1.0 : values.at(n - 1); }
};

inline void validate(const MomentSequence& mu) {
    for (std::size_t i = 0; i < mu.values.size(); ++i) {
        const double v = mu.values[i];
        if (!std::isfinite(v) || !(v > 0.0)) {
            throw domain_error("moment sequence: entry " + std::to_string(i + 1) + " is not finite and positive");
        }
    }
    if (mu.size() >= 2 && mu[2] < mu[1] * mu[1] * (1.0 - 1e-12)) {
        throw domain_error("moment sequence: second moment is below the squared mean");
    }
}

/// Moments 1..count of γ_end.
inline MomentSequence moment_sequence(const RelaySystem& sys, std::size_t count,
                                      MomentSource source = MomentSource::oracle, const ClosedFormOptions& opt = {}) {
    MomentSequence mu;
    mu.source = source;
    mu.values.reserve(count);
    for (std::size_t n = 1; n <= count; ++n) {
        switch (source) {
            case MomentSource::oracle: mu.values.push_back(end_to_end_moment_oracle(sys, double(n))); break;
            case MomentSource::closed_form: mu.values.push_back(end_to_end_moment(sys, int(n), opt)); break;
            default: throw domain_error("moment_sequence: source must be oracle or closed-form");
        }
    }
    return mu;
}

/// Moments of an exponential SNR with the given mean: μ_n = n! mean^n.
inline MomentSequence exponential_moments(double mean, std::size_t count) {
    MomentSequence mu;
    mu.source = MomentSource::exact;
    double v = 1.0;
    for (std::size_t n = 1; n <= count; ++n) {
        v *= double(n) * mean;
        mu.values.push_back(v);
    }
    return mu;
}

/// Rational approximant P(νs)/Q(νs).  Coefficients are stored in the scaled
/// variable x = νs (ν is the mean), which keeps them of moderate size.
struct PadeMGF {
    std::vector<double> numerator;    // c_0..c_A
    std::vector<double> denominator;  // b_0 = 1, b_1..b_B
    double scale = 1.0;               // ν
    std::vector<std::complex<double>> poles;     // in s
    std::vector<std::complex<double>> residues;  // of M at each pole
    int requested_order = 0;          // A asked for
    double pivot_ratio = 0.0;         // smallest/largest pivot of the accepted solve
    double residual = 0.0;            // relative residual of the defining equations

    int A() const { return int(numerator.size()) - 1; }
    int B() const { return int(denominator.size()) - 1; }
};

struct PadeOptions {
    double rank_tolerance = 1e-14;   // pivots below this fraction of the largest count as zero
    double residual_tolerance = 1e-10;
    double cluster_tolerance = 1e-7;
    int max_order = 10;
    bool lower_order_on_unstable = false;  // retry at A-1, A-2, ... instead of throwing on an unstable pole
};

inline constexpr int default_pade_order = 7;

namespace detail {

template <class T>
T horner(const std::vector<double>& c, T x) {
    T r = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) r = r * x + *it;
    return r;
}

inline std::complex<double> horner_derivative(const std::vector<double>& c, std::complex<double> x) {
    std::complex<double> r = 0.0;
    for (std::size_t j = c.size() - 1; j >= 1; --j) r = r * x + double(j) * c[j];
    return r;
}

// Roots of Σ b_j x^j via the companion matrix, polished by Newton steps.
inline std::vector<std::complex<double>> polynomial_roots(const std::vector<double>& b) {
    const int deg = int(b.size()) - 1;
    if (deg < 1) return {};
    if (b.back() == 0.0) throw stability_error("Padé denominator has a vanishing leading coefficient");
    Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(deg, deg);
    for (int i = 1; i < deg; ++i) comp(i, i - 1) = 1.0;
    for (int i = 0; i < deg; ++i) comp(i, deg - 1) = -b[std::size_t(i)] / b.back();
    Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
    if (es.info() != Eigen::Success) throw convergence_error("Padé denominator root finding failed", 0.0, 0.0);
    std::vector<std::complex<double>> roots(static_cast<std::size_t>(deg));
    for (int i = 0; i < deg; ++i) roots[std::size_t(i)] = es.eigenvalues()[i];
    for (auto& z : roots) {
        // a step is kept only if it lowers |Q|; near a multiple root f/f' is rounding noise
        double fz = std::abs(horner(b, z));
        for (int it = 0; it < 3; ++it) {
            const auto d = horner_derivative(b, z);
            if (std::abs(d) == 0.0) break;
            const auto step = horner(b, z) / d;
            if (!std::isfinite(std::abs(step))) break;
            const auto next = z - step;
            const double fn = std::abs(horner(b, next));
            if (!(fn < fz)) break;
            z = next;
            fz = fn;
            if (std::abs(step) <= 1e-16 * std::abs(z)) break;
        }
        if (std::abs(z.imag()) <= 1e-14 * std::abs(z)) z = {z.real(), 0.0};
    }
    std::sort(roots.begin(), roots.end(), [](auto x, auto y) {
        return x.real() != y.real() ? x.real() > y.real() : x.imag() > y.imag();
    });
    return roots;
}

inline std::string format_complex(std::complex<double> z) {
    std::ostringstream os;
    os.precision(10);
    os << z.real() << (z.imag() < 0 ? " - " : " + ") << std::abs(z.imag()) << "i";
    return os.str();
}

}  // namespace detail

/// Poles of M (in s) and the residues λ_i = P(x_i)/(ν Q'(x_i)).
/// Throws stability_error on right-half-plane or clustered poles.
inline void poles_residues(PadeMGF& p, double cluster_tolerance = 1e-7) {
    const auto xs = detail::polynomial_roots(p.denominator);
    p.poles.clear();
    p.residues.clear();
    for (std::size_t i = 0; i < xs.size(); ++i) {
        for (std::size_t j = i + 1; j < xs.size(); ++j) {
            const double sep = std::abs(xs[i] - xs[j]);
            if (sep <= cluster_tolerance * std::max(std::abs(xs[i]), std::abs(xs[j]))) {
                throw stability_error("Padé approximant has a repeated pole near " +
                                      detail::format_complex(xs[i] / p.scale));
            }
        }
    }
    for (const auto& x : xs) {
        const auto s = x / p.scale;
        if (s.real() >= 0.0) {
            throw stability_error("Padé approximant has a pole in the right half-plane at s = " +
                                  detail::format_complex(s));
        }
        p.poles.push_back(s);
        p.residues.push_back(detail::horner(p.numerator, x) / (p.scale * detail::horner_derivative(p.denominator, x)));
    }
}

/// [A/A+1] approximant to Σ μ_n (-s)^n / n!.  When the Hankel system is rank
/// deficient (the moments come from a rational MGF of lower degree, or the
/// high-order information is lost to rounding) the order is reduced until
/// the system has full rank.  With lower_order_on_unstable a right-half-plane
/// or repeated pole also lowers the order; requested_order keeps the original A.
inline PadeMGF build_pade(const MomentSequence& mu, int A = default_pade_order, const PadeOptions& opt = {}) {
    if (A < 0) throw domain_error("build_pade: order A must be nonnegative");
    if (A > opt.max_order) {
        throw domain_error("build_pade: order A = " + std::to_string(A) + " exceeds the supported maximum " +
                           std::to_string(opt.max_order));
    }
    const std::size_t needed = std::size_t(2 * A + 1);
    if (mu.size() < needed) {
        throw domain_error("build_pade: order " + std::to_string(A) + " needs " + std::to_string(needed) +
                           " moments, got " + std::to_string(mu.size()));
    }
    validate(mu);
    const double nu = mu[1];
    // scaled series coefficients a_n = (-1)^n μ_n / (n! ν^n)
    std::vector<double> a(needed + 1);
    a[0] = 1.0;
    for (std::size_t n = 1; n <= needed; ++n) a[n] = -a[n - 1] * (mu[n] / mu[n - 1]) / (double(n) * nu);

    int order = A;
    for (;;) {
        const int B = order + 1;
        PadeMGF p;
        p.requested_order = A;
        p.scale = nu;
        p.denominator.assign(std::size_t(B) + 1, 0.0);
        p.denominator[0] = 1.0;
        if (B >= 1) {
            Eigen::MatrixXd H(B, B);
            Eigen::VectorXd rhs(B);
            for (int r = 0; r < B; ++r) {
                const int k = order + 1 + r;
                for (int j = 1; j <= B; ++j) {
                    const int idx = k - j;
                    H(r, j - 1) = idx >= 0 ? a[std::size_t(idx)] : 0.0;
                }
                rhs(r) = -a[std::size_t(k)];
            }
            Eigen::FullPivLU<Eigen::MatrixXd> lu(H);
            lu.setThreshold(opt.rank_tolerance);
            const double max_pivot = lu.maxPivot();
            const int rank = int(lu.rank());
            if (rank < B) {
                order -= std::max(1, B - rank);
                if (order < 0) throw stability_error("build_pade: moment Hankel system is singular at every order");
                continue;
            }
            const Eigen::VectorXd x = lu.solve(rhs);
            const auto& U = lu.matrixLU();
            double min_pivot = std::abs(U(0, 0));
            for (int i = 1; i < B; ++i) min_pivot = std::min(min_pivot, std::abs(U(i, i)));
            p.pivot_ratio = max_pivot > 0.0 ? min_pivot / max_pivot : 0.0;
            const double denom = (H.cwiseAbs() * x.cwiseAbs()).maxCoeff() + rhs.cwiseAbs().maxCoeff();
            p.residual = (H * x - rhs).cwiseAbs().maxCoeff() / denom;
            if (!(p.residual <= opt.residual_tolerance)) {
                std::ostringstream os;
                os << "build_pade: Hankel solve residual " << p.residual << " exceeds tolerance (pivot ratio "
                   << p.pivot_ratio << ")";
                throw stability_error(os.str());
            }
            for (int j = 1; j <= B; ++j) p.denominator[std::size_t(j)] = x(j - 1);
        }
        p.numerator.assign(std::size_t(order) + 1, 0.0);
        for (int k = 0; k <= order; ++k) {
            double c = 0.0;
            for (int i = 0; i <= std::min(k, B); ++i) c += p.denominator[std::size_t(i)] * a[std::size_t(k - i)];
            p.numerator[std::size_t(k)] = c;
        }
        try {
            poles_residues(p, opt.cluster_tolerance);
        } catch (const stability_error&) {
            if (!opt.lower_order_on_unstable || order == 0) throw;
            --order;
            continue;
        }
        return p;
    }
}

/// Rational MGF from explicit coefficients in s (scale 1), e.g. for tests.
inline PadeMGF make_rational_mgf(std::vector<double> numerator, std::vector<double> denominator,
                                 double cluster_tolerance = 1e-7) {
    if (denominator.empty() || denominator[0] == 0.0) throw domain_error("make_rational_mgf: b_0 must be nonzero");
    if (numerator.empty()) throw domain_error("make_rational_mgf: empty numerator");
    const double b0 = denominator[0];
    for (auto& v : numerator) v /= b0;
    for (auto& v : denominator) v /= b0;
    PadeMGF p;
    p.numerator = std::move(numerator);
    p.denominator = std::move(denominator);
    p.requested_order = p.A();
    poles_residues(p, cluster_tolerance);
    return p;
}

/// M(s) by Horner evaluation of both polynomials.
inline double mgf_eval(const PadeMGF& p, double s) {
    for (const auto& pole : p.poles) {
        if (std::abs(std::complex<double>(s) - pole) <= 1e-9 * std::max(1.0, std::abs(pole))) {
            throw pole_error("mgf_eval: s = " + std::to_string(s) + " is at a pole of the approximant");
        }
    }
    const double x = s * p.scale;
    return detail::horner(p.numerator, x) / detail::horner(p.denominator, x);
}

/// M(s) from the partial-fraction form Σ λ_i/(s - p_i) (+ constant when A = B).
inline double mgf_eval_partial_fractions(const PadeMGF& p, double s) {
    std::complex<double> sum = 0.0;
    for (std::size_t i = 0; i < p.poles.size(); ++i) sum += p.residues[i] / (s - p.poles[i]);
    if (p.A() == p.B()) sum += p.numerator.back() / p.denominator.back();
    return sum.real();
}

/// Taylor coefficients of the approximant in s through the given order.
inline std::vector<double> taylor_coefficients(const PadeMGF& p, std::size_t order) {
    std::vector<double> t(order + 1, 0.0);
    for (std::size_t k = 0; k <= order; ++k) {
        double v = k < p.numerator.size() ? p.numerator[k] : 0.0;
        for (std::size_t i = 1; i <= std::min(k, p.denominator.size() - 1); ++i) v -= p.denominator[i] * t[k - i];
        t[k] = v;
    }
    double f = 1.0;
    for (std::size_t k = 0; k <= order; ++k) {
        t[k] *= f;
        f *= p.scale;
    }
    return t;
}

}  // namespace relayperf
