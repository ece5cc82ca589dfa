#include "robustci/poisson_ci.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace robustci {

namespace {

void require_rate_arg(double lambda) {
    if (!(lambda >= 0.0) || !std::isfinite(lambda))
        throw std::domain_error("rate must be finite and non-negative");
}

void require_eps(double eps) {
    if (!(eps >= 0.0 && eps < 1.0)) throw std::domain_error("eps must lie in [0, 1)");
}

double fraction(std::size_t count, std::size_t n) {
    return static_cast<double>(count) / static_cast<double>(n);
}

void require_nonempty(const SampleSet& s) {
    if (s.empty()) throw std::domain_error("sample must be non-empty");
}

}  // namespace

PoisTestQuantities upper_quantities_pois(double lambda, double eps, std::size_t n, double alpha) {
    require_rate_arg(lambda);
    require_eps(eps);
    const double li = log_inverse_slack(eps, n, alpha);
    const double gap = std::min(lambda / 2.0, 0.125 * std::sqrt(lambda * li));
    const double t = lambda - gap;
    double r;
    if (lambda == 0.0)
        r = 0.5;
    else
        r = gap > 0.0 ? lambda / (4.0 * gap) : std::numeric_limits<double>::infinity();
    const double shifted = lambda + r;
    const double tau = std::isfinite(shifted)
                           ? 1.1 * pois_cdf(shifted, static_cast<double>(floor_count(t)))
                           : 0.0;
    return {t, r, tau};
}

PoisTestQuantities lower_quantities_pois(double lambda, double eps, std::size_t n, double alpha) {
    require_rate_arg(lambda);
    require_eps(eps);
    if (lambda < 1.0) {
        const double tau = 0.5 * (1.0 - std::exp(-lambda)) -
                           3.0 * log_level(alpha) / static_cast<double>(n);
        return {1.0, (1.0 - 1.0 / (6.0 * std::numbers::e)) * lambda, tau};
    }
    const double li = log_inverse_slack(eps, n, alpha);
    const double gap = std::min(lambda / 2.0, 0.125 * std::sqrt(lambda * li));
    const double t = lambda + gap;
    const double r = gap > 0.0 ? lambda / (4.0 * gap) : std::numeric_limits<double>::infinity();
    const double shifted = std::max(0.0, lambda - r);
    const double tau = 1.1 * pois_sf(shifted, static_cast<double>(ceil_count(t)));
    return {t, r, tau};
}

bool phi_plus_pois(const SampleSet& s, double lambda, double eps, double alpha) {
    require_nonempty(s);
    const auto q = upper_quantities_pois(lambda, eps, s.size(), alpha);
    return fraction(s.count_at_most(floor_count(q.t)), s.size()) < q.tau;
}

bool phi_minus_pois(const SampleSet& s, double lambda, double eps, double alpha) {
    require_nonempty(s);
    const auto q = lower_quantities_pois(lambda, eps, s.size(), alpha);
    return fraction(s.count_at_least(ceil_count(q.t)), s.size()) < q.tau;
}

std::int64_t lambda_max_hat(const SampleSet& s) {
    require_nonempty(s);
    const std::size_t k = (3 * s.size() + 3) / 4;
    return s.order_statistic(k) + 1;
}

bool psi_hat_plus_pois(const SampleSet& s, double lambda, double eps, double alpha,
                       std::int64_t rate_cap) {
    require_rate_arg(lambda);
    if (lambda > static_cast<double>(rate_cap))
        throw std::domain_error("rate above the search cap");
    if (lambda == static_cast<double>(rate_cap)) return false;
    const auto top = ceil_count(lambda);
    for (std::int64_t mu = 0; mu <= top; ++mu)
        if (!phi_plus_pois(s, static_cast<double>(mu), eps, alpha)) return false;
    return true;
}

bool psi_hat_minus_pois(const SampleSet& s, double lambda, double eps, double alpha,
                        std::int64_t rate_cap) {
    require_rate_arg(lambda);
    if (lambda > static_cast<double>(rate_cap))
        throw std::domain_error("rate above the search cap");
    if (lambda < 1.0) {
        if (!phi_minus_pois(s, lambda, eps, alpha)) return false;
        for (std::int64_t mu = 1; mu <= rate_cap; ++mu)
            if (!phi_minus_pois(s, static_cast<double>(mu), eps, alpha)) return false;
        return true;
    }
    for (std::int64_t mu = floor_count(lambda); mu <= rate_cap; ++mu)
        if (!phi_minus_pois(s, static_cast<double>(mu), eps, alpha)) return false;
    return true;
}

double boundary_right_pois(const SampleSet& s, double alpha) {
    require_nonempty(s);
    const double n = static_cast<double>(s.size());
    const double above = fraction(s.count_at_least(1), s.size());
    const double v = std::min(2.0 * above + 6.0 * log_level(alpha) / n, 1.0 - 1.0 / std::numbers::e);
    return -std::log(1.0 - v);
}

ConfidenceInterval robust_ci_pois(const SampleSet& s, double alpha, double eps_max,
                                  const PoissonCIOptions& opts) {
    require_nonempty(s);
    detail::require_level(alpha);
    const std::size_t n = s.size();
    const auto grid = epsilon_grid(n, alpha, eps_max);

    ConfidenceInterval ci;
    ci.alpha = alpha;
    ci.method = "poisson-robust";
    check_smallness(n, alpha, eps_max, opts.warn_threshold, ci.warnings);

    std::int64_t cap = lambda_max_hat(s);
    if (cap > opts.lambda_cap) {
        ci.warnings.push_back({"rate-cap", "lambda_max_hat exceeds the search cap and was clipped"});
        cap = opts.lambda_cap;
    }

    // first_accept[e]: smallest mu in [0, cap] where phi+ accepts (cap + 1 if none)
    // last_accept[e]: largest mu in [1, cap] where phi- accepts (0 if none)
    std::vector<std::int64_t> first_accept(grid.size(), cap + 1);
    std::vector<std::int64_t> last_accept(grid.size(), 0);
    for (std::size_t e = 0; e < grid.size(); ++e) {
        for (std::int64_t mu = 0; mu <= cap; ++mu)
            if (!phi_plus_pois(s, static_cast<double>(mu), grid[e], alpha)) {
                first_accept[e] = mu;
                break;
            }
        for (std::int64_t mu = cap; mu >= 1; --mu)
            if (!phi_minus_pois(s, static_cast<double>(mu), grid[e], alpha)) {
                last_accept[e] = mu;
                break;
            }
    }

    ci.lower = static_cast<double>(cap);
    for (std::int64_t l = cap - 1; l >= 0; --l) {
        const bool accepted = std::all_of(first_accept.begin(), first_accept.end(),
                                          [l](std::int64_t mu) { return mu <= l + 1; });
        if (accepted) ci.lower = static_cast<double>(l);
    }

    ci.upper = boundary_right_pois(s, alpha);
    for (std::int64_t l = 1; l <= cap; ++l) {
        const std::int64_t reach = std::max<std::int64_t>(l - 1, 1);
        const bool accepted = std::all_of(last_accept.begin(), last_accept.end(),
                                          [reach](std::int64_t mu) { return mu >= reach; });
        if (accepted) ci.upper = static_cast<double>(l);
    }
    return ci;
}

double rate_ell_pois(double lambda, double eps, std::size_t n) {
    require_rate_arg(lambda);
    require_eps(eps);
    if (n < 2) throw std::domain_error("rate curve needs n >= 2");
    const double nd = static_cast<double>(n);
    const double inv_log_n = 1.0 / std::sqrt(std::log(nd));
    const double inv_log_eps = eps > 0.0 ? 1.0 / std::sqrt(std::log(1.0 / eps)) : 0.0;
    return std::min(std::sqrt(lambda) * (inv_log_n + inv_log_eps) + 1.0, lambda) + 1.0 / nd + eps;
}

}  // namespace robustci
