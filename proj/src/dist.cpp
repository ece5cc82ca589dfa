#include "robustci/dist.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include <boost/math/distributions/binomial.hpp>
#include <boost/math/distributions/poisson.hpp>

namespace robustci {

namespace {

constexpr double kSnap = 1e-9;

void require_trials(int m) {
    if (m < 0) throw std::domain_error("trial count must be non-negative");
}

void require_rate(double lambda) {
    if (!(lambda >= 0.0) || !std::isfinite(lambda))
        throw std::domain_error("Poisson rate must be finite and non-negative");
}

}  // namespace

namespace detail {

void require_probability(double p, const char* what) {
    if (!(p >= 0.0 && p <= 1.0))
        throw std::domain_error(std::string(what) + " must lie in [0, 1]");
}

void require_level(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::domain_error("alpha must lie in (0, 1)");
}

}  // namespace detail

FinitePmf::FinitePmf(std::int64_t support_min, std::vector<double> probs, double tol)
    : support_min_(support_min), probs_(std::move(probs)) {
    if (probs_.empty()) throw std::invalid_argument("pmf needs at least one support point");
    double total = 0.0;
    for (double v : probs_) {
        if (!(v >= 0.0)) throw std::invalid_argument("pmf entries must be non-negative");
        total += v;
    }
    if (std::abs(total - 1.0) > tol)
        throw std::invalid_argument("pmf entries must sum to one");
}

FinitePmf FinitePmf::renormalized(std::int64_t support_min, std::vector<double> probs,
                                  double floor_tol) {
    double total = 0.0;
    for (double& v : probs) {
        if (v < -floor_tol || std::isnan(v))
            throw std::invalid_argument("pmf entry below the feasibility tolerance");
        v = std::max(v, 0.0);
        total += v;
    }
    if (!(total > 0.0)) throw std::invalid_argument("pmf has no mass");
    for (double& v : probs) v /= total;
    return FinitePmf(support_min, std::move(probs));
}

FinitePmf FinitePmf::point_mass(std::int64_t k) { return FinitePmf(k, {1.0}); }

double FinitePmf::operator()(std::int64_t k) const noexcept {
    if (k < support_min_ || k > support_max()) return 0.0;
    return probs_[static_cast<std::size_t>(k - support_min_)];
}

double FinitePmf::mean() const noexcept {
    double acc = 0.0;
    for (std::size_t i = 0; i < probs_.size(); ++i)
        acc += probs_[i] * static_cast<double>(support_min_ + static_cast<std::int64_t>(i));
    return acc;
}

SampleSet::SampleSet(std::vector<std::int64_t> values) : values_(std::move(values)) {
    for (auto v : values_)
        if (v < 0) throw std::domain_error("observations must be non-negative counts");
    sorted_ = values_;
    std::sort(sorted_.begin(), sorted_.end());
}

std::size_t SampleSet::count_at_most(std::int64_t c) const noexcept {
    return static_cast<std::size_t>(std::upper_bound(sorted_.begin(), sorted_.end(), c) -
                                    sorted_.begin());
}

std::size_t SampleSet::count_at_least(std::int64_t c) const noexcept {
    return static_cast<std::size_t>(sorted_.end() -
                                    std::lower_bound(sorted_.begin(), sorted_.end(), c));
}

std::size_t SampleSet::count_equal(std::int64_t v) const noexcept {
    auto [lo, hi] = std::equal_range(sorted_.begin(), sorted_.end(), v);
    return static_cast<std::size_t>(hi - lo);
}

std::int64_t SampleSet::order_statistic(std::size_t k) const {
    if (k < 1 || k > sorted_.size()) throw std::out_of_range("order statistic index");
    return sorted_[k - 1];
}

std::int64_t floor_count(double x) {
    if (std::isnan(x)) throw std::domain_error("threshold is NaN");
    constexpr double big = 9.0e18;
    if (x >= big) return std::numeric_limits<std::int64_t>::max();
    if (x <= -big) return std::numeric_limits<std::int64_t>::min();
    return static_cast<std::int64_t>(std::floor(x + kSnap));
}

std::int64_t ceil_count(double x) {
    if (std::isnan(x)) throw std::domain_error("threshold is NaN");
    constexpr double big = 9.0e18;
    if (x >= big) return std::numeric_limits<std::int64_t>::max();
    if (x <= -big) return std::numeric_limits<std::int64_t>::min();
    return static_cast<std::int64_t>(std::ceil(x - kSnap));
}

double binom_pmf(int m, double p, std::int64_t k) {
    require_trials(m);
    detail::require_probability(p, "success probability");
    if (k < 0 || k > m) return 0.0;
    if (p == 0.0) return k == 0 ? 1.0 : 0.0;
    if (p == 1.0) return k == m ? 1.0 : 0.0;
    return boost::math::pdf(boost::math::binomial_distribution<double>(m, p),
                            static_cast<double>(k));
}

double binom_cdf(int m, double p, double t) {
    require_trials(m);
    detail::require_probability(p, "success probability");
    if (std::isnan(t)) throw std::domain_error("threshold is NaN");
    if (t < 0.0) return 0.0;
    if (t >= m) return 1.0;
    const double k = std::floor(t);
    if (p == 0.0) return 1.0;
    if (p == 1.0) return 0.0;
    return boost::math::cdf(boost::math::binomial_distribution<double>(m, p), k);
}

double binom_sf(int m, double p, double t) {
    require_trials(m);
    detail::require_probability(p, "success probability");
    if (std::isnan(t)) throw std::domain_error("threshold is NaN");
    if (t <= 0.0) return 1.0;
    if (t > m) return 0.0;
    const double k = std::ceil(t);
    if (p == 0.0) return 0.0;
    if (p == 1.0) return 1.0;
    // P(X >= k) = P(X > k - 1)
    return boost::math::cdf(
        boost::math::complement(boost::math::binomial_distribution<double>(m, p), k - 1.0));
}

double pois_pmf(double lambda, std::int64_t k) {
    require_rate(lambda);
    if (k < 0) return 0.0;
    if (lambda == 0.0) return k == 0 ? 1.0 : 0.0;
    return boost::math::pdf(boost::math::poisson_distribution<double>(lambda),
                            static_cast<double>(k));
}

double pois_cdf(double lambda, double t) {
    require_rate(lambda);
    if (std::isnan(t)) throw std::domain_error("threshold is NaN");
    if (t < 0.0) return 0.0;
    if (lambda == 0.0) return 1.0;
    if (std::isinf(t)) return 1.0;
    return boost::math::cdf(boost::math::poisson_distribution<double>(lambda), std::floor(t));
}

double pois_sf(double lambda, double t) {
    require_rate(lambda);
    if (std::isnan(t)) throw std::domain_error("threshold is NaN");
    if (t <= 0.0) return 1.0;
    if (std::isinf(t)) return 0.0;
    if (lambda == 0.0) return 0.0;
    const double k = std::ceil(t);
    return boost::math::cdf(
        boost::math::complement(boost::math::poisson_distribution<double>(lambda), k - 1.0));
}

FinitePmf binomial_pmf(int m, double p) {
    require_trials(m);
    detail::require_probability(p, "success probability");
    std::vector<double> probs(static_cast<std::size_t>(m) + 1);
    for (int k = 0; k <= m; ++k) probs[static_cast<std::size_t>(k)] = binom_pmf(m, p, k);
    return FinitePmf::renormalized(0, std::move(probs));
}

std::int64_t poisson_truncation_point(double lambda) {
    require_rate(lambda);
    if (lambda == 0.0) return 0;
    std::int64_t k = static_cast<std::int64_t>(std::ceil(lambda));
    while (pois_sf(lambda, static_cast<double>(k + 1)) > kPoissonTailMass) ++k;
    return k;
}

FinitePmf poisson_pmf(double lambda, std::int64_t kmax) {
    require_rate(lambda);
    if (kmax < 0) throw std::domain_error("truncation point must be non-negative");
    std::vector<double> probs(static_cast<std::size_t>(kmax) + 1);
    for (std::int64_t k = 0; k <= kmax; ++k)
        probs[static_cast<std::size_t>(k)] = pois_pmf(lambda, k);
    return FinitePmf::renormalized(0, std::move(probs));
}

FinitePmf poisson_pmf(double lambda) {
    return poisson_pmf(lambda, poisson_truncation_point(lambda));
}

double empirical_cdf(const SampleSet& s, double t) {
    if (s.empty()) throw std::domain_error("empirical CDF of an empty sample");
    if (std::isnan(t)) throw std::domain_error("threshold is NaN");
    if (t < 0.0) return 0.0;
    const auto c = std::isinf(t) ? s.size() : s.count_at_most(static_cast<std::int64_t>(std::floor(t)));
    return static_cast<double>(c) / static_cast<double>(s.size());
}

double dkw_halfwidth(std::size_t n, double alpha) {
    if (n == 0) throw std::domain_error("sample size must be positive");
    if (!(alpha > 0.0 && alpha <= 2.0)) throw std::domain_error("alpha must lie in (0, 2]");
    return std::sqrt(std::log(2.0 / alpha) / (2.0 * static_cast<double>(n)));
}

double bernstein_dev(std::size_t n, double p, double alpha, double slack) {
    detail::require_probability(p, "success probability");
    detail::require_level(alpha);
    if (!(slack >= 4.0 / 3.0)) throw std::domain_error("Bernstein slack constant must be >= 4/3");
    return static_cast<double>(n) * p * (1.0 - p) / slack + slack * std::log(2.0 / alpha);
}

double tv_distance(const FinitePmf& a, const FinitePmf& b) {
    const auto lo = std::min(a.support_min(), b.support_min());
    const auto hi = std::max(a.support_max(), b.support_max());
    double acc = 0.0;
    for (auto k = lo; k <= hi; ++k) acc += std::abs(a(k) - b(k));
    return 0.5 * acc;
}

}  // namespace robustci
