#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "robustci/rng.hpp"
#include "robustci/simulation.hpp"

using namespace robustci;

TEST(Philox, KnownAnswerVectors) {
    using W = std::array<std::uint32_t, 4>;
    EXPECT_EQ(philox4x32({0, 0, 0, 0}, {0, 0}), (W{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
    EXPECT_EQ(philox4x32({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}),
              (W{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
    EXPECT_EQ(philox4x32({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}),
              (W{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(CounterRng, Addressing) {
    CounterRng a(42, 7);
    std::vector<std::uint64_t> seq;
    for (int i = 0; i < 10; ++i) seq.push_back(a());
    CounterRng b(42, 7, 0, 4);
    EXPECT_EQ(b(), seq[4]);
    EXPECT_EQ(a.at(3), seq[3]);
    EXPECT_NE(CounterRng(42, 8).at(0), seq[0]);
    EXPECT_NE(CounterRng(43, 7).at(0), seq[0]);
    EXPECT_NE(a.lane(1).at(0), seq[0]);
    EXPECT_EQ(a.lane(1).position(), a.position());
    // two draws per block: low word pair then high word pair
    const auto block = philox4x32({0, 0, 7, 0}, {42, 0});
    EXPECT_EQ(seq[0], (std::uint64_t{block[1]} << 32) | block[0]);
    EXPECT_EQ(seq[1], (std::uint64_t{block[3]} << 32) | block[2]);
}

TEST(CounterRng, UnitInterval) {
    EXPECT_EQ(CounterRng::to_unit(0), 0.0);
    EXPECT_LT(CounterRng::to_unit(~std::uint64_t{0}), 1.0);
    CounterRng r(1, 1);
    double sum = 0.0;
    for (int i = 0; i < 100000; ++i) sum += r.uniform();
    EXPECT_NEAR(sum / 100000, 0.5, 3 * std::sqrt(1.0 / 12 / 100000));
}

TEST(SampleContaminated, CleanAndFullyContaminated) {
    CounterRng r(3, 0);
    const ContaminationModel clean{Family::binomial, 6, 0.0, 0.0, 500};
    const auto s = sample_contaminated(clean, QStrategy::parse("point-max"), r);
    EXPECT_EQ(s.count_equal(0), 500u);
    const ContaminationModel full{Family::binomial, 6, 0.3, 1.0, 500};
    const auto t = sample_contaminated(full, QStrategy::parse("point-max"), r);
    EXPECT_EQ(t.count_equal(6), 500u);
    const ContaminationModel pois{Family::poisson, 1, 2.0, 1.0, 100};
    EXPECT_EQ(sample_contaminated(pois, QStrategy::parse("point-max"), r).count_equal(kPoissonOutlier), 100u);
}

TEST(SampleContaminated, ContaminationFrequency) {
    // Q far from the clean support so contaminated draws are identifiable.
    CounterRng r(5, 0);
    const ContaminationModel model{Family::binomial, 3, 0.4, 0.15, 10000};
    const auto s = sample_contaminated(model, FinitePmf::point_mass(100), r);
    const double freq = s.count_equal(100) / 10000.0;
    EXPECT_NEAR(freq, 0.15, 3 * std::sqrt(0.15 * 0.85 / 10000));
}

TEST(SampleContaminated, CleanFrequenciesMatchPmf) {
    CounterRng r(9, 0);
    const ContaminationModel model{Family::binomial, 4, 0.3, 0.0, 20000};
    const auto s = sample_contaminated(model, QStrategy::parse("point-zero"), r);
    const auto pmf = binomial_pmf(4, 0.3);
    for (int k = 0; k <= 4; ++k) {
        const double se = std::sqrt(pmf(k) * (1 - pmf(k)) / 20000);
        EXPECT_NEAR(s.count_equal(k) / 20000.0, pmf(k), 4 * se + 1e-12) << k;
    }
}

TEST(QStrategy, Parsing) {
    const ContaminationModel model{Family::binomial, 5, 0.3, 0.1, 10};
    EXPECT_EQ(QStrategy::parse("point-max").resolve(model)(5), 1.0);
    EXPECT_EQ(QStrategy::parse("point-zero").resolve(model)(0), 1.0);
    EXPECT_EQ(QStrategy::parse("point:3").resolve(model)(3), 1.0);
    EXPECT_NEAR(QStrategy::parse("binomial:0.5").resolve(model)(2), 10.0 / 32, 1e-15);
    EXPECT_NEAR(QStrategy::parse("poisson:1").resolve(model)(0), std::exp(-1.0), 1e-15);
    EXPECT_THROW(QStrategy::parse("point:-1"), std::invalid_argument);
    EXPECT_THROW(QStrategy::parse("binomial:2"), std::invalid_argument);
    EXPECT_THROW(QStrategy::parse("nonsense"), std::invalid_argument);
}

namespace {

std::string field_error_of(const ExperimentConfig& cfg) {
    try {
        cfg.validate();
    } catch (const std::invalid_argument& e) {
        return e.what();
    }
    return "";
}

ExperimentConfig small_config() {
    ExperimentConfig cfg;
    cfg.method = Method::binom_robust;
    cfg.m = 5;
    cfg.p = 0.3;
    cfg.eps = 0.05;
    cfg.n = 60;
    cfg.replications = 50;
    cfg.seed = 11;
    return cfg;
}

}  // namespace

TEST(ExperimentConfig, ValidationNamesField) {
    auto cfg = small_config();
    EXPECT_EQ(field_error_of(cfg), "");
    cfg.alpha = 1.5;
    EXPECT_NE(field_error_of(cfg).find("'alpha'"), std::string::npos);
    cfg = small_config();
    cfg.p = -0.1;
    EXPECT_NE(field_error_of(cfg).find("'p'"), std::string::npos);
    cfg = small_config();
    cfg.replications = 0;
    EXPECT_NE(field_error_of(cfg).find("'replications'"), std::string::npos);
    cfg = small_config();
    cfg.q_strategy = "bogus";
    EXPECT_NE(field_error_of(cfg).find("'q_strategy'"), std::string::npos);
    cfg = small_config();
    cfg.method = Method::er_conservative;
    cfg.n_nodes = 30;
    cfg.q_strategy = "all-ones";
    EXPECT_NE(field_error_of(cfg).find("'n_nodes'"), std::string::npos);
    cfg.n_nodes = 10;
    cfg.exact_limit = 40;
    EXPECT_NE(field_error_of(cfg).find("'exact_limit'"), std::string::npos);
}

TEST(ExperimentConfig, Json) {
    const auto one = configs_from_json(R"({"method": "poisson-robust", "lambda": 2.5, "n": 80, "eps": 0.05})");
    ASSERT_EQ(one.size(), 1u);
    EXPECT_EQ(one[0].method, Method::poisson_robust);
    EXPECT_EQ(one[0].lambda, 2.5);
    EXPECT_EQ(one[0].n, 80u);
    const auto many = configs_from_json(
        R"([{"m": 3, "p": 0.2}, {"m": 4, "q_pmf": {"support_min": 0, "probs": [0.5, 0.5]}}])");
    ASSERT_EQ(many.size(), 2u);
    EXPECT_EQ(many[1].q_strategy, "custom");
    ASSERT_TRUE(many[1].q_pmf.has_value());
    try {
        configs_from_json(R"({"mm": 3})");
        FAIL();
    } catch (const std::invalid_argument& e) {
        EXPECT_NE(std::string(e.what()).find("'mm'"), std::string::npos);
    }
    EXPECT_THROW(configs_from_json(R"({"alpha": "x"})"), std::invalid_argument);
    EXPECT_THROW(configs_from_json("{"), std::invalid_argument);
}

TEST(Csv, EmptyRecordsGiveHeaderOnly) {
    std::ostringstream out;
    write_csv({}, out);
    EXPECT_EQ(out.str(), std::string(kCsvHeader) + "\n");
}

TEST(Csv, RoundTrip) {
    std::vector<ExperimentRecord> recs;
    auto cfg = small_config();
    recs.push_back(run_experiment(cfg));
    cfg.method = Method::poisson_robust;
    cfg.lambda = 1.25;
    recs.push_back(run_experiment(cfg));
    std::ostringstream first;
    write_csv(recs, first);
    std::istringstream in(first.str());
    const auto parsed = parse_csv(in);
    ASSERT_EQ(parsed.size(), 2u);
    EXPECT_EQ(parsed[0].coverage, recs[0].coverage);
    EXPECT_EQ(parsed[0].mean_length, recs[0].mean_length);
    EXPECT_EQ(parsed[1].config.lambda, 1.25);
    std::ostringstream second;
    write_csv(parsed, second);
    EXPECT_EQ(first.str(), second.str());
}

TEST(Csv, GoldenRecordFromIndependentReplay) {
    // Replays the bernoulli experiment by hand from the documented stream layout.
    ExperimentConfig cfg;
    cfg.method = Method::bernoulli;
    cfg.m = 1;
    cfg.p = 0.2;
    cfg.eps = 0.1;
    cfg.n = 50;
    cfg.alpha = 0.05;
    cfg.replications = 20;
    cfg.seed = 7;
    int covered = 0;
    std::vector<double> lengths;
    for (std::size_t r = 0; r < cfg.replications; ++r) {
        CounterRng rng(cfg.seed, r);
        int ones = 0;
        for (std::size_t i = 0; i < cfg.n; ++i) {
            const bool flag = rng.uniform() < cfg.eps;
            const double u = rng.uniform();
            ones += flag ? 1 : (u < 0.8 ? 0 : 1);
        }
        const double zeros_frac = (50.0 - ones) / 50, ones_frac = ones / 50.0;
        const double lo = std::clamp(1 - 4 * (zeros_frac + 0.02), 0.0, 1.0);
        const double hi = std::clamp(4 * (ones_frac + 0.02), 0.0, 1.0);
        covered += lo <= 0.2 && 0.2 <= hi;
        lengths.push_back(lo <= hi ? hi - lo : 0.0);
    }
    double mean = 0.0;
    for (double l : lengths) mean += l;
    mean /= 20;
    std::sort(lengths.begin(), lengths.end());
    const double median = 0.5 * (lengths[9] + lengths[10]);
    const double cov = covered / 20.0;
    char row[512];
    std::snprintf(row, sizeof row, "bernoulli,1,50,0.20000000000000001,0.10000000000000001,0.050000000000000003,"
                  "0.050000000000000003,point-max,20,7,%.17g,%.17g,%.17g,%.17g,0,0\n",
                  cov, mean, median, std::sqrt(cov * (1 - cov) / 20));
    std::ostringstream out;
    write_csv({run_experiment(cfg)}, out);
    EXPECT_EQ(out.str(), std::string(kCsvHeader) + "\n" + row);
}

TEST(RunExperiment, DeterministicAcrossThreadCounts) {
    auto cfg = small_config();
    cfg.threads = 1;
    std::ostringstream a, b, c;
    write_csv({run_experiment(cfg)}, a);
    write_csv({run_experiment(cfg)}, b);
    cfg.threads = 4;
    write_csv({run_experiment(cfg)}, c);
    EXPECT_EQ(a.str(), b.str());
    EXPECT_EQ(a.str(), c.str());
    cfg.seed = 12;
    std::ostringstream d;
    write_csv({run_experiment(cfg)}, d);
    EXPECT_NE(a.str(), d.str());
}

TEST(RunExperiment, BernoulliBoundaryCoverage) {
    ExperimentConfig cfg;
    cfg.method = Method::binom_robust;
    cfg.m = 1;
    cfg.n = 500;
    cfg.p = 0.0;
    cfg.eps = 0.0;
    cfg.alpha = 0.05;
    cfg.replications = 2000;
    cfg.seed = 2024;
    const auto rec = run_experiment(cfg);
    EXPECT_GE(rec.coverage, 0.95 - 3 * rec.mc_stderr);
}

TEST(RunExperiment, LengthGrowsWithContamination) {
    double prev = -1.0;
    for (double eps : {0.0, 0.02, 0.1}) {
        ExperimentConfig cfg;
        cfg.method = Method::binom_robust;
        cfg.m = 20;
        cfg.n = 500;
        cfg.p = 0.5;
        cfg.eps = eps;
        cfg.eps_max = 0.1;
        cfg.alpha = 0.1;
        cfg.replications = 300;
        cfg.seed = 5;
        const auto rec = run_experiment(cfg);
        EXPECT_GE(rec.median_length, prev) << eps;
        prev = rec.median_length;
    }
}

TEST(RunExperiment, ErMethodRuns) {
    ExperimentConfig cfg;
    cfg.method = Method::er_conservative;
    cfg.n_nodes = 8;
    cfg.p = 0.4;
    cfg.eps = 0.1;
    cfg.q_strategy = "all-ones";
    cfg.replications = 20;
    const auto rec = run_experiment(cfg);
    EXPECT_GE(rec.coverage, 0.0);
    EXPECT_LE(rec.coverage, 1.0);
    std::ostringstream out;
    write_csv({rec}, out);
    EXPECT_NE(out.str().find("\ner-conservative,0,8,"), std::string::npos);
}
