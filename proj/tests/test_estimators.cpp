#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "robustci/estimators.hpp"

using namespace robustci;

namespace {

// sup_t |F_n(t) - Binom CDF| by direct enumeration over a wide t range.
double kolmogorov_oracle(const std::vector<std::int64_t>& x, int m, double p) {
    double worst = 0.0;
    for (int t = -2; t <= m + 5; ++t) {
        double emp = 0.0;
        for (auto v : x) emp += v <= t;
        emp /= static_cast<double>(x.size());
        const double model = t < 0 ? 0.0 : oracle::binom_cdf(m, p, t);
        worst = std::max(worst, std::abs(emp - model));
    }
    return worst;
}

bool in_band(double p_hat, double q, double a, double b, double c) {
    return std::abs(p_hat - q) <= c * (a * std::sqrt(q * (1 - q)) + b);
}

}  // namespace

TEST(TrimmedMean, Values) {
    EXPECT_NEAR(trimmed_mean(SampleSet({0, 5, 12}), 10), 5.0 / 30.0, 1e-15);
    EXPECT_EQ(trimmed_mean(SampleSet({0, 0, 0}), 4), 0.0);
    EXPECT_EQ(trimmed_mean(SampleSet({4, 4}), 4), 1.0);
}

TEST(BoundaryEstimators, Values) {
    EXPECT_EQ(p_hat_s(SampleSet({0, 0}), 3), 0.0);
    EXPECT_NEAR(p_hat_s(SampleSet({0, 1, 2, 1}), 2), 0.5, 1e-15);
    EXPECT_EQ(p_hat_s(SampleSet({1, 2}), 3), 1.0);
    EXPECT_EQ(p_hat_l(SampleSet({3, 3}), 3), 1.0);
    EXPECT_NEAR(p_hat_l(SampleSet({2, 0, 1, 1}), 2), 0.5, 1e-15);
}

TEST(KolmogorovDistance, MatchesOracle) {
    std::mt19937_64 gen(4);
    for (int m : {1, 3, 10}) {
        auto x = oracle::binomial_sample(m, 0.35, 40, 9);
        x.push_back(m + 3);  // values above m
        const SampleSet s(x);
        for (int i = 0; i <= 50; ++i)
            EXPECT_NEAR(kolmogorov_distance(s, m, i / 50.0), kolmogorov_oracle(x, m, i / 50.0), 1e-12);
    }
}

TEST(PHatG, ExactBinomialFrequencies) {
    EstimatorConfig cfg;
    cfg.m = 2;
    EXPECT_NEAR(p_hat_g(SampleSet({0, 1, 1, 2}), 2, cfg), 0.5, 1e-8);
    EXPECT_EQ(p_hat_g(SampleSet({0, 0, 0}), 2, cfg), 0.0);
    EXPECT_NEAR(p_hat_g(SampleSet({2, 2, 2}), 2, cfg), 1.0, 1e-12);
}

TEST(PHatG, ArgminCertificate) {
    for (int m : {1, 4, 12})
        for (unsigned seed = 0; seed < 5; ++seed) {
            EstimatorConfig cfg;
            cfg.m = m;
            cfg.grid_resolution = 0.01;
            const SampleSet s(oracle::binomial_sample(m, 0.1 + 0.2 * seed, 60, seed));
            const double p = p_hat_g(s, m, cfg);
            const double at = kolmogorov_distance(s, m, p);
            for (int i = 0; i <= 100; ++i) EXPECT_LE(at, kolmogorov_distance(s, m, i / 100.0) + 1e-15);
        }
}

TEST(AdaptiveEstimator, BranchRule) {
    EstimatorConfig cfg;
    cfg.m = 5;
    const SampleSet zeros(std::vector<std::int64_t>(30, 0));
    EXPECT_EQ(adaptive_branch(zeros, cfg), EstimatorBranch::small);
    EXPECT_EQ(adaptive_estimator(zeros, cfg), 0.0);
    const SampleSet tops(std::vector<std::int64_t>(30, 5));
    EXPECT_EQ(adaptive_branch(tops, cfg), EstimatorBranch::large);
    EXPECT_EQ(adaptive_estimator(tops, cfg), 1.0);
    const SampleSet middle({2, 3, 2, 3, 1, 4});
    EXPECT_EQ(adaptive_branch(middle, cfg), EstimatorBranch::min_distance);
    EXPECT_EQ(adaptive_estimator(middle, cfg), p_hat_g(middle, 5, cfg));
    const SampleSet both({0, 5, 2});
    EXPECT_EQ(adaptive_branch(both, cfg), EstimatorBranch::min_distance);
}

TEST(AdaptiveEstimator, Reflection) {
    for (unsigned seed = 0; seed < 6; ++seed) {
        EstimatorConfig cfg;
        cfg.m = 6;
        auto x = oracle::binomial_sample(6, 0.05 + 0.15 * seed, 80, seed);
        const SampleSet s(x);
        for (auto& v : x) v = 6 - v;
        const SampleSet r(x);
        const auto b = adaptive_branch(s, cfg);
        if (b == EstimatorBranch::min_distance) continue;  // grid search is not reflection-symmetric
        EXPECT_NEAR(adaptive_estimator(r, cfg), 1.0 - adaptive_estimator(s, cfg), 1e-12);
    }
}

TEST(AdaptiveEstimator, ContaminatedAccuracy) {
    // m = 20, n = 500, p = 0.5, eps = 0.05 point mass at m; C frozen at 3
    EstimatorConfig cfg;
    cfg.m = 20;
    cfg.alpha = 0.1;
    const int reps = 200;
    int ok = 0;
    std::mt19937_64 gen(17);
    std::binomial_distribution<int> clean(20, 0.5);
    std::bernoulli_distribution flip(0.05);
    const double bound =
        3.0 * (std::sqrt(0.25 / 20) * (1 / std::sqrt(500.0) + 0.05) + (1 / 500.0 + 0.05) / 20);
    for (int r = 0; r < reps; ++r) {
        std::vector<std::int64_t> x(500);
        for (auto& v : x) v = flip(gen) ? 20 : clean(gen);
        ok += std::abs(adaptive_estimator(SampleSet(x), cfg) - 0.5) <= bound;
    }
    EXPECT_GE(ok, static_cast<int>(0.9 * reps));
}

TEST(BernoulliCi, Values) {
    const SampleSet zeros(std::vector<std::int64_t>(100, 0));
    auto ci = bernoulli_ci(zeros, 0.05, 4.0);
    EXPECT_EQ(ci.lower, 0.0);
    EXPECT_NEAR(ci.upper, 0.04, 1e-15);
    const SampleSet ones(std::vector<std::int64_t>(100, 1));
    ci = bernoulli_ci(ones, 0.05, 4.0);
    EXPECT_NEAR(ci.lower, 0.96, 1e-15);
    EXPECT_EQ(ci.upper, 1.0);
    std::vector<std::int64_t> half(1000, 0);
    std::fill(half.begin(), half.begin() + 500, 1);
    ci = bernoulli_ci(SampleSet(half), 0.05, 4.0);
    EXPECT_EQ(ci.lower, 0.0);
    EXPECT_EQ(ci.upper, 1.0);
}

TEST(KnownEpsCi, ClampAndDegenerate) {
    EXPECT_EQ(known_eps_ci(0.0, 20, 400, 0.05, 0.05).lower, 0.0);
    const auto band = variance_band_interval(0.4, 0.0, 0.1);
    EXPECT_NEAR(band.lower, 0.3, 1e-15);
    EXPECT_NEAR(band.upper, 0.5, 1e-15);
    const auto clipped = variance_band_interval(0.95, 0.0, 0.1);
    EXPECT_EQ(clipped.upper, 1.0);
}

TEST(KnownEpsCi, MatchesDenseScan) {
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 51; ++trial) {
        double p_hat = unit(gen);
        int m = 1 + static_cast<int>(unit(gen) * 30);
        std::size_t n = 10 + static_cast<std::size_t>(unit(gen) * 1000);
        double eps = 0.2 * unit(gen);
        if (trial == 0) {
            p_hat = 0.5;
            m = 20;
            n = 400;
            eps = 0.05;
        }
        const double a = (1 / std::sqrt(static_cast<double>(n)) + eps) / std::sqrt(static_cast<double>(m));
        const double b = (1.0 / n + eps) / m;
        const auto ci = known_eps_ci(p_hat, m, n, eps, 0.05, 3.0);
        const double step = trial == 0 ? 1e-6 : 1e-5;
        double lo = 2.0, hi = -1.0;
        for (long i = 0; i * step <= 1.0; ++i) {
            const double q = i * step;
            if (in_band(p_hat, q, a, b, 3.0)) {
                lo = std::min(lo, q);
                hi = std::max(hi, q);
            }
        }
        EXPECT_NEAR(ci.lower, lo, step) << trial;
        EXPECT_NEAR(ci.upper, hi, step) << trial;
        EXPECT_TRUE(ci.contains(p_hat));
    }
}
