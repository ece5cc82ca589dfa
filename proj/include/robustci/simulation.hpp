#ifndef ROBUSTCI_SIMULATION_HPP
#define ROBUSTCI_SIMULATION_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "robustci/dist.hpp"
#include "robustci/rng.hpp"

namespace robustci {

enum class Method { binom_robust, binom_known_eps, bernoulli, poisson_robust, er_conservative };

std::string to_string(Method method);
Method parse_method(const std::string& text);

enum class Family { binomial, poisson };

// (1 - eps) clean + eps Q, n draws.
struct ContaminationModel {
    Family family = Family::binomial;
    int m = 1;             // binomial trials
    double param = 0.0;    // p or lambda
    double eps = 0.0;
    std::size_t n = 1;
};

// Outlier count used by "point-max" for Poisson data.
inline constexpr std::int64_t kPoissonOutlier = 50;

// Q distribution. Text forms: point-max, point-zero, point:K, binomial:Q, poisson:MU.
class QStrategy {
public:
    static QStrategy parse(const std::string& text);
    static QStrategy custom(FinitePmf pmf, std::string label = "custom");

    const std::string& label() const noexcept { return label_; }
    FinitePmf resolve(const ContaminationModel& model) const;

private:
    QStrategy() = default;
    std::string label_;
    std::optional<FinitePmf> pmf_;
};

// Inverse-CDF sampling from a FinitePmf.
class DiscreteSampler {
public:
    explicit DiscreteSampler(const FinitePmf& pmf);
    std::int64_t operator()(double u) const noexcept;

private:
    std::int64_t support_min_;
    std::vector<double> cumulative_;
};

// Observation i consumes draws 2i (contamination flag) and 2i + 1 (value).
SampleSet sample_contaminated(const ContaminationModel& model, const FinitePmf& q, CounterRng& rng);
SampleSet sample_contaminated(const ContaminationModel& model, const QStrategy& q, CounterRng& rng);

struct ExperimentConfig {
    Method method = Method::binom_robust;
    int m = 1;
    double lambda = 0.0;
    std::size_t n_nodes = 0;
    double p = 0.0;
    double eps = 0.0;
    std::string q_strategy = "point-max";
    std::optional<FinitePmf> q_pmf;  // overrides q_strategy when set
    std::size_t n = 100;
    double alpha = 0.05;
    double eps_max = 0.05;
    std::size_t replications = 1000;
    std::uint64_t seed = 0;
    double warn_threshold = 0.1;
    std::size_t exact_limit = 14;
    unsigned threads = 0;  // 0 = hardware concurrency

    // Throws std::invalid_argument naming the offending field.
    void validate() const;
    // The coverage target: p, lambda, or the edge probability.
    double target() const;
};

// Accepts one object or an array of objects with ExperimentConfig field names.
std::vector<ExperimentConfig> configs_from_json(const std::string& text);

struct ExperimentRecord {
    ExperimentConfig config;
    double coverage = 0.0;
    double mean_length = 0.0;
    double median_length = 0.0;
    double mc_stderr = 0.0;
    std::size_t empty_count = 0;
    double wallclock_s = 0.0;
};

ExperimentRecord run_experiment(const ExperimentConfig& cfg);

struct CsvOptions {
    // Off by default so that output bytes depend on the seed only.
    bool include_wallclock = false;
};

inline constexpr const char* kCsvHeader =
    "method,m,n,p,eps,eps_max,alpha,q_strategy,reps,seed,coverage,mean_length,median_length,"
    "mc_stderr,empty_count,wallclock_s";

void write_csv(const std::vector<ExperimentRecord>& records, std::ostream& out,
               const CsvOptions& opts = {});
void emit_csv(const std::vector<ExperimentRecord>& records, const std::string& path,
              const CsvOptions& opts = {});
std::vector<ExperimentRecord> parse_csv(std::istream& in);

}  // namespace robustci

#endif
