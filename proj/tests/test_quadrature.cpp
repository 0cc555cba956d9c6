#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "relayperf/quadrature.hpp"

using namespace relayperf;

TEST(Adaptive, SmoothAndPeakedIntegrands) {
    EXPECT_NEAR(quad::integrate([](double x) { return std::sin(x); }, 0.0, std::numbers::pi).value, 2.0, 1e-14);
    const auto r = quad::integrate([](double x) { return 1.0 / (1e-4 + x * x); }, -1.0, 1.0);
    EXPECT_NEAR(r.value, 2.0 * std::atan(1e2) / 1e-2, 1e-9);
    EXPECT_GT(r.intervals, 1u);
}

TEST(Adaptive, EndpointSingularity) {
    const auto r = quad::integrate([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, {1e-10, 0.0, 4000});
    EXPECT_NEAR(r.value, 2.0, 1e-9);
}

TEST(Bump, GammaIntegralInLogVariable) {
    // ∫ x^{a-1} e^{-x} dx written in u = ln x
    for (double a : {0.2, 0.7, 5.0, 80.0}) {
        const auto r = quad::integrate_bump([a](double u) { return std::exp(a * u - std::exp(u) - std::lgamma(a)); });
        EXPECT_NEAR(r.value, 1.0, 1e-11) << a;
    }
}

TEST(Bump, ZeroIntegrand) { EXPECT_EQ(quad::integrate_bump([](double) { return 0.0; }).value, 0.0); }

TEST(GaussLegendre, ExactForPolynomials) {
    const auto rule = quad::gauss_legendre(16, 0.0, 2.0);
    for (int k = 0; k < 32; ++k) {
        double s = 0.0;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) s += rule.weights[i] * std::pow(rule.nodes[i], k);
        const double want = std::pow(2.0, k + 1) / (k + 1);
        EXPECT_NEAR(s / want, 1.0, 1e-13) << k;
    }
    EXPECT_THROW(quad::gauss_legendre(0), domain_error);
}
