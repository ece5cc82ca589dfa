#ifndef ROBUSTCI_DIST_HPP
#define ROBUSTCI_DIST_HPP

#include <cstdint>
#include <span>
#include <vector>

namespace robustci {

// Tolerance on the total mass of a FinitePmf.
inline constexpr double kNormalizationTol = 1e-12;
// Default agreement tolerance used by identity checks.
inline constexpr double kAgreementTol = 1e-10;
// Poisson pmfs are truncated once the remaining upper tail is below this.
inline constexpr double kPoissonTailMass = 1e-14;

// Distribution on the integers support_min, support_min + 1, ...
class FinitePmf {
public:
    FinitePmf(std::int64_t support_min, std::vector<double> probs,
              double tol = kNormalizationTol);

    // Clamps negative entries above -floor_tol to zero and rescales to unit mass.
    static FinitePmf renormalized(std::int64_t support_min, std::vector<double> probs,
                                  double floor_tol = kNormalizationTol);
    static FinitePmf point_mass(std::int64_t k);

    std::int64_t support_min() const noexcept { return support_min_; }
    std::int64_t support_max() const noexcept {
        return support_min_ + static_cast<std::int64_t>(probs_.size()) - 1;
    }
    std::span<const double> probs() const noexcept { return probs_; }
    std::size_t size() const noexcept { return probs_.size(); }

    // Probability of k; zero off the support.
    double operator()(std::int64_t k) const noexcept;
    double mean() const noexcept;

private:
    std::int64_t support_min_;
    std::vector<double> probs_;
};

// The observations X_1..X_n. Values are non-negative counts.
class SampleSet {
public:
    SampleSet() = default;
    explicit SampleSet(std::vector<std::int64_t> values);

    std::size_t size() const noexcept { return values_.size(); }
    bool empty() const noexcept { return values_.empty(); }
    std::span<const std::int64_t> values() const noexcept { return values_; }
    std::span<const std::int64_t> sorted() const noexcept { return sorted_; }

    std::size_t count_at_most(std::int64_t c) const noexcept;
    std::size_t count_at_least(std::int64_t c) const noexcept;
    std::size_t count_equal(std::int64_t v) const noexcept;
    // 1-based order statistic X_(k).
    std::int64_t order_statistic(std::size_t k) const;

private:
    std::vector<std::int64_t> values_;
    std::vector<std::int64_t> sorted_;
};

double binom_pmf(int m, double p, std::int64_t k);
// P(X <= floor(t)).
double binom_cdf(int m, double p, double t);
// P(X >= ceil(t)).
double binom_sf(int m, double p, double t);

double pois_pmf(double lambda, std::int64_t k);
double pois_cdf(double lambda, double t);
double pois_sf(double lambda, double t);

FinitePmf binomial_pmf(int m, double p);
// Truncated at kPoissonTailMass and renormalized.
FinitePmf poisson_pmf(double lambda);
// Poisson(lambda) restricted to 0..kmax and renormalized.
FinitePmf poisson_pmf(double lambda, std::int64_t kmax);
// Smallest kmax whose upper tail beyond it is below kPoissonTailMass.
std::int64_t poisson_truncation_point(double lambda);

double empirical_cdf(const SampleSet& s, double t);

double dkw_halfwidth(std::size_t n, double alpha);
// Requires slack >= 4/3.
double bernstein_dev(std::size_t n, double p, double alpha, double slack);

double tv_distance(const FinitePmf& a, const FinitePmf& b);

// Integer thresholds for real cutoffs, snapped so that round-off in m*t
// does not move a value that is an integer up to noise.
std::int64_t floor_count(double x);
std::int64_t ceil_count(double x);

namespace detail {
void require_probability(double p, const char* what);
void require_level(double alpha);
}  // namespace detail

}  // namespace robustci

#endif
