#include "robustci/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace robustci {

namespace {

void require_sample(const SampleSet& s) {
    if (s.empty()) throw std::domain_error("sample must be non-empty");
}

void require_trials(int m) {
    if (m < 1) throw std::domain_error("m must be at least 1");
}

double frequency(std::size_t count, const SampleSet& s) {
    return static_cast<double>(count) / static_cast<double>(s.size());
}

}  // namespace

void EstimatorConfig::validate() const {
    require_trials(m);
    detail::require_level(alpha);
    if (!(c_sel > 0.0)) throw std::domain_error("c_sel must be positive");
    if (!(c_ci > 0.0)) throw std::domain_error("c_ci must be positive");
    if (!(grid_resolution > 0.0 && grid_resolution <= 1.0))
        throw std::domain_error("grid_resolution must lie in (0, 1]");
}

double trimmed_mean(const SampleSet& s, int m) {
    require_sample(s);
    require_trials(m);
    double total = 0.0;
    for (auto x : s.values())
        if (x <= m) total += static_cast<double>(x);
    return total / (static_cast<double>(m) * static_cast<double>(s.size()));
}

double p_hat_s(const SampleSet& s, int m) {
    require_sample(s);
    require_trials(m);
    return 1.0 - std::pow(frequency(s.count_equal(0), s), 1.0 / m);
}

double p_hat_l(const SampleSet& s, int m) {
    require_sample(s);
    require_trials(m);
    return std::pow(frequency(s.count_equal(m), s), 1.0 / m);
}

double kolmogorov_distance(const SampleSet& s, int m, double p) {
    require_sample(s);
    require_trials(m);
    // Both CDFs are 0 below 0; at t >= m the model CDF is 1 and F_n only grows,
    // so t in {0..m} suffices.
    double worst = 0.0;
    double model = 0.0;
    for (int t = 0; t <= m; ++t) {
        model += binom_pmf(m, p, t);
        const double emp = frequency(s.count_at_most(t), s);
        worst = std::max(worst, std::abs(emp - std::min(model, 1.0)));
    }
    return worst;
}

double p_hat_g(const SampleSet& s, int m, const EstimatorConfig& cfg) {
    cfg.validate();
    const auto objective = [&](double p) { return kolmogorov_distance(s, m, p); };

    const auto steps = static_cast<long>(std::ceil(1.0 / cfg.grid_resolution));
    const double h = 1.0 / static_cast<double>(steps);
    long best_i = 0;
    double best = objective(0.0);
    for (long i = 1; i <= steps; ++i) {
        const double v = objective(std::min(1.0, i * h));
        if (v < best) {  // strict: ties stay at the smaller p
            best = v;
            best_i = i;
        }
    }
    const double best_p = std::min(1.0, best_i * h);

    // golden-section refinement on the bracket around the best grid point
    constexpr double tol = 1e-9;
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = std::max(0.0, best_p - h);
    double b = std::min(1.0, best_p + h);
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = objective(x1);
    double f2 = objective(x2);
    while (b - a > tol) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = objective(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = objective(x2);
        }
    }
    const double refined = 0.5 * (a + b);
    const double refined_value = objective(refined);
    if (refined_value < best || (refined_value == best && refined < best_p)) return refined;
    return best_p;
}

EstimatorBranch adaptive_branch(const SampleSet& s, const EstimatorConfig& cfg) {
    cfg.validate();
    require_sample(s);
    const double threshold = std::exp(-1.5 * cfg.c_sel);
    const bool zeros = frequency(s.count_equal(0), s) >= threshold;
    const bool tops = frequency(s.count_equal(cfg.m), s) >= threshold;
    if (zeros && !tops) return EstimatorBranch::small;
    if (!zeros && tops) return EstimatorBranch::large;
    return EstimatorBranch::min_distance;
}

double adaptive_estimator(const SampleSet& s, const EstimatorConfig& cfg) {
    switch (adaptive_branch(s, cfg)) {
        case EstimatorBranch::small: return p_hat_s(s, cfg.m);
        case EstimatorBranch::large: return p_hat_l(s, cfg.m);
        case EstimatorBranch::min_distance: break;
    }
    return p_hat_g(s, cfg.m, cfg);
}

ConfidenceInterval bernoulli_ci(const SampleSet& s, double alpha, double c) {
    require_sample(s);
    detail::require_level(alpha);
    if (!(c > 0.0)) throw std::domain_error("constant must be positive");
    const double inv_n = 1.0 / static_cast<double>(s.size());
    const double zeros = frequency(s.count_equal(0), s);
    const double ones = frequency(s.count_equal(1), s);
    ConfidenceInterval ci;
    ci.alpha = alpha;
    ci.method = "bernoulli";
    ci.lower = std::clamp(1.0 - c * (zeros + inv_n), 0.0, 1.0);
    ci.upper = std::clamp(c * (ones + inv_n), 0.0, 1.0);
    return ci;
}

ConfidenceInterval known_eps_ci(double p_hat, int m, std::size_t n, double eps, double alpha,
                                double c) {
    require_trials(m);
    if (n == 0) throw std::domain_error("n must be positive");
    detail::require_level(alpha);
    if (!(eps >= 0.0 && eps <= 1.0)) throw std::domain_error("eps must lie in [0, 1]");
    if (!(c > 0.0)) throw std::domain_error("constant must be positive");
    const double nd = static_cast<double>(n);
    const double a = (1.0 / std::sqrt(nd) + eps) / std::sqrt(static_cast<double>(m));
    const double b = (1.0 / nd + eps) / m;
    auto ci = variance_band_interval(p_hat, c * a, c * b);
    ci.alpha = alpha;
    ci.method = "known-eps";
    return ci;
}

}  // namespace robustci
