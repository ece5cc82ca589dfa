#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "robustci/poisson_ci.hpp"
#include "set_scan.hpp"

using namespace robustci;

TEST(PoissonQuantities, PublishedBranchValues) {
    EXPECT_DOUBLE_EQ(upper_quantities_pois(0.0, 0.01, 100, 0.05).r, 0.5);
    EXPECT_DOUBLE_EQ(lower_quantities_pois(0.3, 0.01, 100, 0.05).t, 1.0);
    EXPECT_NEAR(lower_quantities_pois(0.3, 0.01, 100, 0.05).r, (1 - 1 / (6 * std::numbers::e)) * 0.3, 1e-15);
    EXPECT_NEAR(lower_quantities_pois(0.5, 0.01, 100, 0.05).tau,
                0.5 * (1 - std::exp(-0.5)) - 3 * std::log(480.0) / 100, 1e-15);
}

TEST(PoissonQuantities, InteriorMatchesDirectEvaluation) {
    const std::size_t n = 300;
    for (double eps : {0.0, 0.05})
        for (double lambda : {1.0, 2.5, 7.0, 15.0}) {
            const double li = -std::log(eps + std::sqrt(std::log(480.0) / 600.0));
            const double gap = std::min(lambda / 2, std::sqrt(lambda * li) / 8);
            const auto up = upper_quantities_pois(lambda, eps, n, 0.05);
            EXPECT_NEAR(up.t, lambda - gap, 1e-13);
            EXPECT_NEAR(up.r, lambda / (4 * gap), 1e-12);
            EXPECT_NEAR(up.tau,
                        1.1 * oracle::pois_cdf(lambda + up.r, static_cast<int>(std::floor(lambda - gap))),
                        1e-10);
            const auto lo = lower_quantities_pois(lambda, eps, n, 0.05);
            EXPECT_NEAR(lo.t, lambda + gap, 1e-13);
            const int c = static_cast<int>(std::ceil(lambda + gap));
            // the shifted rate is clamped at 0 when the gap is too small
            EXPECT_NEAR(lo.tau, 1.1 * (1 - oracle::pois_cdf(std::max(0.0, lambda - lo.r), c - 1)), 1e-10);
        }
}

TEST(PoissonQuantities, ShiftedRatesStrictlyIncreasing) {
    // log(1/A) must exceed about 4.5 for the jump at lambda = 1 to go upward
    const std::size_t n = 1000000;
    for (double eps : epsilon_grid(n, 0.05, 0.005)) {
        double prev_up = -1.0, prev_lo = -1.0;
        for (int i = 0; i <= 4000; ++i) {
            const double lambda = 0.01 * i;
            const double up = lambda + upper_quantities_pois(lambda, eps, n, 0.05).r;
            const double lo = lambda - lower_quantities_pois(lambda, eps, n, 0.05).r;
            EXPECT_GE(lo, 0.0);
            EXPECT_GT(up, prev_up) << lambda;
            EXPECT_GT(lo, prev_lo) << lambda;
            prev_up = up;
            prev_lo = lo;
        }
    }
}

TEST(LambdaMaxHat, OrderStatistic) {
    EXPECT_EQ(lambda_max_hat(SampleSet({0, 1, 2, 3})), 3);
    EXPECT_EQ(lambda_max_hat(SampleSet({3, 2, 1, 0})), 3);
    EXPECT_EQ(lambda_max_hat(SampleSet(std::vector<std::int64_t>(17, 0))), 1);
    EXPECT_EQ(lambda_max_hat(SampleSet({5})), 6);
    EXPECT_EQ(lambda_max_hat(SampleSet({0, 1, 2, 3, 4})), 4);  // ceil(15/4) = 4, X_(4) = 3
}

TEST(PoissonPhi, Degenerate) {
    const SampleSet zeros(std::vector<std::int64_t>(100, 0));
    // lower-side level is negative at lambda = 0, so phi- never rejects there
    EXPECT_FALSE(phi_minus_pois(zeros, 0.0, 0.01, 0.05));
    // no mass at or above 1 while the level is positive
    const double lambda = 0.9;
    ASSERT_GT(lower_quantities_pois(lambda, 0.01, 100, 0.05).tau, 0.0);
    EXPECT_TRUE(phi_minus_pois(zeros, lambda, 0.01, 0.05));
    // numeric instance
    const SampleSet s(oracle::poisson_sample(4.0, 100, 5));
    const auto q = upper_quantities_pois(6.0, 0.02, 100, 0.05);
    const double frac = empirical_cdf(s, std::floor(q.t + 1e-9));
    EXPECT_EQ(phi_plus_pois(s, 6.0, 0.02, 0.05), frac < q.tau);
}

TEST(PoissonPsi, MonotoneInLambda) {
    for (double lambda : {0.3, 2.0, 6.0})
        for (unsigned seed : {1u, 2u}) {
            const SampleSet s(oracle::poisson_sample(lambda, 80, seed));
            const auto cap = lambda_max_hat(s);
            for (double eps : epsilon_grid(80, 0.05, 0.1)) {
                bool prev_plus = true, prev_minus = false;
                for (double l = 0.0; l <= static_cast<double>(cap); l += 0.01) {
                    const bool plus = psi_hat_plus_pois(s, l, eps, 0.05, cap);
                    const bool minus = psi_hat_minus_pois(s, l, eps, 0.05, cap);
                    EXPECT_LE(plus, prev_plus) << l;
                    EXPECT_GE(minus, prev_minus) << l;
                    prev_plus = plus;
                    prev_minus = minus;
                }
            }
        }
}

TEST(RobustCiPois, AllZeros) {
    // with log(1/A) > 4 the lower-side test at 1 rejects, leaving the boundary formula
    const SampleSet zeros(std::vector<std::int64_t>(100000, 0));
    const auto ci = robust_ci_pois(zeros, 0.05, 0.002);
    const double expected = -std::log(1 - std::min(6 * std::log(480.0) / 1e5, 1 - 1 / std::numbers::e));
    EXPECT_EQ(ci.lower, 0.0);
    EXPECT_NEAR(ci.upper, expected, 1e-15);
}

TEST(RobustCiPois, MatchesSetScan) {
    for (double lambda : {0.0, 0.5, 2.0, 6.0})
        for (unsigned seed = 0; seed < 4; ++seed) {
            const SampleSet s(oracle::poisson_sample(lambda, 60, 40 + seed));
            const auto ci = robust_ci_pois(s, 0.05, 0.1);
            const auto ref = scan::poisson(s, 0.05, 0.1);
            EXPECT_NEAR(ci.lower, ref.lower, 1e-3) << lambda << " " << seed;
            EXPECT_NEAR(ci.upper, ref.upper, 1e-3) << lambda << " " << seed;
        }
}

TEST(RobustCiPois, RateCapWarning) {
    std::vector<std::int64_t> v(40, 5000);
    PoissonCIOptions opts;
    opts.lambda_cap = 100;
    const auto ci = robust_ci_pois(SampleSet(v), 0.05, 0.05, opts);
    bool found = false;
    for (const auto& w : ci.warnings) found = found || w.code == "rate-cap";
    EXPECT_TRUE(found);
    EXPECT_LE(ci.lower, 100.0);
}

TEST(RateEllPois, Formula) {
    const double v = std::min(std::sqrt(4.0) * (1 / std::sqrt(std::log(100.0)) + 1 / std::sqrt(std::log(20.0))) + 1, 4.0);
    EXPECT_NEAR(rate_ell_pois(4.0, 0.05, 100), v + 0.01 + 0.05, 1e-14);
    EXPECT_NEAR(rate_ell_pois(0.0, 0.0, 100), 0.01, 1e-15);
}
