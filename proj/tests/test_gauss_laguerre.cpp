#include <cmath>
#include <numbers>

#include <boost/math/special_functions/factorials.hpp>
#include <boost/math/special_functions/laguerre.hpp>
#include <gtest/gtest.h>

#include "relayperf/gauss_laguerre.hpp"

using namespace relayperf;

TEST(GaussLaguerre, TwoPointRule) {
    const auto r = gauss_laguerre(2);
    ASSERT_EQ(r.order, 2u);
    EXPECT_NEAR(r.nodes[0], 2.0 - std::numbers::sqrt2, 1e-14);
    EXPECT_NEAR(r.nodes[1], 2.0 + std::numbers::sqrt2, 1e-14);
    EXPECT_NEAR(r.weights[0], (2.0 + std::numbers::sqrt2) / 4.0, 1e-14);
    EXPECT_NEAR(r.weights[1], (2.0 - std::numbers::sqrt2) / 4.0, 1e-14);
    EXPECT_NEAR(r.weights[0], 0.8535534, 1e-7);
    EXPECT_NEAR(r.weights[1], 0.1464466, 1e-7);
}

TEST(GaussLaguerre, FiveNodeRuleFrozen) {
    // mpmath, 30 digits
    const double nodes[] = {0.263560319718140910203, 1.41340305910651679222, 3.59642577104072208122,
                            7.08581000585883755692, 12.6408008442757826594};
    const double weights[] = {0.521755610582808652476, 0.398666811083175927454, 0.0759424496817075953877,
                              0.00361175867992204845446, 2.33699723857762278911e-5};
    const auto r = gauss_laguerre(5);
    for (int i = 0; i < 5; ++i) {
        EXPECT_NEAR(r.nodes[i] / nodes[i], 1.0, 1e-14);
        EXPECT_NEAR(r.weights[i] / weights[i], 1.0, 1e-13);
        EXPECT_NEAR(std::exp(r.log_weights[i]) / weights[i], 1.0, 1e-13);
    }
}

TEST(GaussLaguerre, ExactThroughDegreeTwoNMinusOne) {
    for (std::size_t n : {2u, 5u, 10u, 30u}) {
        const auto r = gauss_laguerre(n);
        for (unsigned k = 0; k < 2 * n; ++k) {
            double s = 0.0;
            for (std::size_t i = 0; i < n; ++i) s += std::exp(r.log_weights[i] + k * std::log(r.nodes[i]));
            EXPECT_NEAR(s / boost::math::factorial<double>(k), 1.0, 1e-11) << n << " " << k;
        }
    }
}

TEST(GaussLaguerre, NodesAreRootsAndOrdered) {
    for (std::size_t n : {7u, 64u, 200u}) {
        const auto r = gauss_laguerre(n);
        double wsum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (i) {
                EXPECT_GT(r.nodes[i], r.nodes[i - 1]);
            }
            EXPECT_TRUE(std::isfinite(r.log_weights[i]));
            wsum += r.weights[i];
        }
        EXPECT_NEAR(wsum, 1.0, 1e-11) << n;
        // L_n changes sign across each of the small nodes (Boost's recurrence)
        for (std::size_t i = 0; i < std::min<std::size_t>(n, 5); ++i) {
            const double lo = boost::math::laguerre(unsigned(n), r.nodes[i] * (1.0 - 1e-10));
            const double hi = boost::math::laguerre(unsigned(n), r.nodes[i] * (1.0 + 1e-10));
            EXPECT_LT(lo * hi, 0.0) << n << " " << i;
        }
    }
}

TEST(GaussLaguerre, OrderLimits) {
    EXPECT_THROW(gauss_laguerre(0), domain_error);
    EXPECT_THROW(gauss_laguerre(201), domain_error);
    EXPECT_NO_THROW(gauss_laguerre(1));
    EXPECT_NEAR(gauss_laguerre(1).nodes[0], 1.0, 1e-15);
}
