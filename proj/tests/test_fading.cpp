#include <cmath>
#include <functional>
#include <numbers>
#include <numeric>
#include <random>

#include <boost/math/special_functions/gamma.hpp>
#include <gtest/gtest.h>

#include "relayperf/fading.hpp"
#include "relayperf/quadrature.hpp"

using namespace relayperf;

namespace {

double integrate_log(const std::function<double(double)>& f) {
    // ∫_0^∞ f(γ) dγ in u = ln γ
    return quad::integrate_bump([&](double u) { return f(std::exp(u)) * std::exp(u); }, -200.0, 60.0).value;
}

}  // namespace

TEST(Hop, MeanIsTheRequestedMean) {
    for (double m : {0.6, 1.0, 2.0, 3.5})
        for (double beta : {1.0, 4.0 / 3.0, 2.0, 3.0})
            EXPECT_NEAR(single_hop_moment(make_hop(m, beta, 7.0), 1.0), 7.0, 1e-12) << m << " " << beta;
}

TEST(Hop, NakagamiAndWeibullSpecialCases) {
    EXPECT_NEAR(make_hop(2.5, 2.0, 1.0).tau, 1.0 / 2.5, 1e-15);
    const auto w = make_hop(1.0, 3.0, 4.0);
    for (double g : {0.1, 1.0, 5.0}) EXPECT_NEAR(cdf(w, g), 1.0 - std::exp(-std::pow(g / w.scale(), 1.5)), 1e-14);
    const auto r = make_hop(1.0, 2.0, 2.0);
    EXPECT_NEAR(pdf(r, 1.0), 0.5 * std::exp(-0.5), 1e-15);
}

TEST(Hop, PdfIntegratesToOneAndMatchesCdf) {
    for (double beta : {1.0, 2.5, 3.0}) {
        const auto h = make_hop(2.0, beta, 3.0);
        EXPECT_NEAR(integrate_log([&](double g) { return pdf(h, g); }), 1.0, 1e-11);
        const double g = 2.2;
        const double d = 1e-5;
        EXPECT_NEAR((cdf(h, g + d) - cdf(h, g - d)) / (2 * d), pdf(h, g), 1e-8);
        EXPECT_NEAR(cdf(h, g), boost::math::gamma_p(2.0, std::pow(g / h.scale(), beta / 2)), 1e-14);
    }
}

TEST(Hop, PdfAtZero) {
    EXPECT_EQ(pdf(make_hop(2.0, 3.0, 1.0), 0.0), 0.0);
    EXPECT_TRUE(std::isinf(pdf(make_hop(0.6, 1.0, 1.0), 0.0)));
    EXPECT_NEAR(pdf(make_hop(1.0, 2.0, 4.0), 0.0), 0.25, 1e-15);
    EXPECT_EQ(cdf(make_hop(2.0, 3.0, 1.0), 0.0), 0.0);
}

TEST(Hop, MomentsMatchQuadrature) {
    const auto h = make_hop(1.5, 4.0 / 3.0, 10.0);
    for (double n : {0.5, 1.0, 2.0, 3.0}) {
        const double q = integrate_log([&](double g) { return std::pow(g, n) * pdf(h, g); });
        EXPECT_NEAR(single_hop_moment(h, n) / q, 1.0, 1e-10) << n;
    }
    EXPECT_EQ(single_hop_moment(h, 0.0), 1.0);
    EXPECT_THROW(single_hop_moment(make_hop(1.0, 0.05, 1e10), 200.0), overflow_error);
}

TEST(Hop, InvalidParameters) {
    EXPECT_THROW(make_hop(0.5, 2.0, 1.0), domain_error);
    EXPECT_THROW(make_hop(1.0, 0.0, 1.0), domain_error);
    EXPECT_THROW(make_hop(1.0, 2.0, -1.0), domain_error);
    EXPECT_THROW(make_hop(1.0, 2.0, NAN), domain_error);
    EXPECT_THROW(pdf(make_hop(1.0, 2.0, 1.0), -1.0), domain_error);
}

TEST(Sampling, MeanAndCdfAgree) {
    const auto h = make_hop(2.0, 3.0, 5.0);
    std::mt19937_64 rng(42);
    const auto xs = sample(h, rng, 400000);
    double sum = 0.0, sum2 = 0.0;
    std::size_t below = 0;
    const double t = 4.0;
    for (double x : xs) {
        sum += x;
        sum2 += x * x;
        below += x <= t;
    }
    const double n = double(xs.size());
    const double mean = sum / n;
    const double se = std::sqrt((sum2 / n - mean * mean) / n);
    EXPECT_LT(std::abs(mean - 5.0), 4.0 * se);
    const double p = cdf(h, t);
    EXPECT_LT(std::abs(double(below) / n - p), 4.0 * std::sqrt(p * (1 - p) / n));
}

TEST(Sampling, DeterministicForSeed) {
    const auto h = make_hop(1.5, 2.5, 1.0);
    std::mt19937_64 a(7), b(7);
    EXPECT_EQ(sample(h, a, 100), sample(h, b, 100));
    EXPECT_THROW(sample(h, a, 0), domain_error);
}

TEST(RationalBeta, ExactAndRounded) {
    auto r = rationalize_beta(4.0 / 3.0);
    EXPECT_EQ(r.k, 3);
    EXPECT_EQ(r.l, 2);
    EXPECT_NEAR(r.rounding(), 0.0, 1e-15);
    r = rationalize_beta(3.0);
    EXPECT_EQ(r.k, 2);
    EXPECT_EQ(r.l, 3);
    r = rationalize_beta(2.5);
    EXPECT_EQ(r.k, 4);
    EXPECT_EQ(r.l, 5);
    r = rationalize_beta(2.0);
    EXPECT_EQ(r.k, 1);
    EXPECT_EQ(r.l, 1);
    r = rationalize_beta(std::numbers::pi);  // not rational: nearest 2l/k with terms up to 8
    double nearest = INFINITY;
    for (int k = 1; k <= 8; ++k)
        for (int l = 1; l <= 8; ++l) nearest = std::min(nearest, std::abs(2.0 * l / k - std::numbers::pi));
    EXPECT_DOUBLE_EQ(std::abs(r.rounding()), nearest);
    EXPECT_EQ(r.k, 5);
    EXPECT_EQ(r.l, 8);
    EXPECT_EQ(std::gcd(r.k, r.l), 1);
    EXPECT_THROW(rationalize_beta(-1.0), domain_error);
}
