#include "robustci/binomial_ci.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace robustci {

namespace {

// Points within this distance of 1 - 1/m use the interior branch, so that
// 1 - (1 - k/m) and k/m land on the same side.
constexpr double kBranchTol = 1e-12;

double interior_edge(int m) { return (m - 1.0) / m; }

void require_matching_sample(const SampleSet& s, const RobustCIConfig& cfg) {
    if (s.size() != cfg.n)
        throw std::invalid_argument("sample size does not match the configured n");
}

double fraction(std::size_t count, std::size_t n) {
    return static_cast<double>(count) / static_cast<double>(n);
}

}  // namespace

void RobustCIConfig::validate() const {
    if (m < 1) throw std::domain_error("m must be at least 1");
    if (n < 1) throw std::domain_error("n must be at least 1");
    detail::require_level(alpha);
    if (!(eps_max >= 0.0 && eps_max < 1.0)) throw std::domain_error("eps_max must lie in [0, 1)");
}

EpsilonGrid epsilon_grid(const RobustCIConfig& cfg) {
    cfg.validate();
    return epsilon_grid(cfg.n, cfg.alpha, cfg.eps_max);
}

TestQuantities upper_quantities(double p, double eps, const RobustCIConfig& cfg) {
    cfg.validate();
    detail::require_probability(p, "p");
    if (!(eps >= 0.0 && eps < 1.0)) throw std::domain_error("eps must lie in [0, 1)");
    const double m = cfg.m;
    const double edge = interior_edge(cfg.m);

    if (p > edge + kBranchTol) {
        const double tau = 0.5 * (1.0 - std::pow(p, m)) -
                           3.0 * log_level(cfg.alpha) / static_cast<double>(cfg.n);
        return {edge, (1.0 - 1.0 / (6.0 * std::numbers::e)) * (1.0 - p), tau};
    }

    const double var = p * (1.0 - p);
    const double li = log_inverse_slack(eps, cfg.n, cfg.alpha);
    const double gap = std::min(var / 2.0, 0.125 * std::sqrt(var * li / m));
    const double t = p - gap;
    double r;
    if (p == 0.0)
        r = 1.0 / (2.0 * m);
    else
        r = gap > 0.0 ? var / (4.0 * m * gap) : std::numeric_limits<double>::infinity();
    const double shifted = std::min(1.0, p + r);
    const double tau =
        1.1 * binom_cdf(cfg.m, shifted, static_cast<double>(floor_count(m * t)));
    return {t, r, tau};
}

TestQuantities lower_quantities(double p, double eps, const RobustCIConfig& cfg) {
    detail::require_probability(p, "p");
    const auto u = upper_quantities(1.0 - p, eps, cfg);
    return {1.0 - u.t, u.r, u.tau};
}

double rbar_closed_form(double p, double eps, const RobustCIConfig& cfg) {
    cfg.validate();
    detail::require_probability(p, "p");
    if (p > interior_edge(cfg.m) + kBranchTol)
        throw std::domain_error("closed form holds on [0, 1 - 1/m] only");
    const double m = cfg.m;
    const double floor_term = 1.0 / (2.0 * m);
    const double var = p * (1.0 - p);
    if (var == 0.0) return floor_term;
    const double li = log_inverse_slack(eps, cfg.n, cfg.alpha);
    if (li == 0.0) return std::numeric_limits<double>::infinity();
    return std::max(floor_term, 2.0 * std::sqrt(var / (m * li)));
}

bool phi_plus(const SampleSet& s, double q, double eps, const RobustCIConfig& cfg) {
    require_matching_sample(s, cfg);
    const auto tq = upper_quantities(q, eps, cfg);
    const auto c = s.count_at_most(floor_count(cfg.m * tq.t));
    return fraction(c, cfg.n) < tq.tau;
}

bool phi_minus(const SampleSet& s, double q, double eps, const RobustCIConfig& cfg) {
    require_matching_sample(s, cfg);
    const auto tq = lower_quantities(q, eps, cfg);
    const auto c = s.count_at_least(ceil_count(cfg.m * tq.t));
    return fraction(c, cfg.n) < tq.tau;
}

bool psi_hat_plus(const SampleSet& s, double p, double eps, const RobustCIConfig& cfg) {
    detail::require_probability(p, "p");
    const int m = cfg.m;
    if (p <= interior_edge(m) + kBranchTol) {
        const auto top = std::min<std::int64_t>(ceil_count(m * p), m);
        for (std::int64_t k = 0; k <= top; ++k)
            if (!phi_plus(s, static_cast<double>(k) / m, eps, cfg)) return false;
        return true;
    }
    if (!phi_plus(s, p, eps, cfg)) return false;
    for (int k = 0; k < m; ++k)
        if (!phi_plus(s, static_cast<double>(k) / m, eps, cfg)) return false;
    return true;
}

bool psi_hat_minus(const SampleSet& s, double p, double eps, const RobustCIConfig& cfg) {
    detail::require_probability(p, "p");
    const int m = cfg.m;
    if (p < 1.0 / m - kBranchTol) {
        if (!phi_minus(s, p, eps, cfg)) return false;
        for (int k = 1; k <= m; ++k)
            if (!phi_minus(s, static_cast<double>(k) / m, eps, cfg)) return false;
        return true;
    }
    const auto bottom = std::max<std::int64_t>(floor_count(m * p), 0);
    for (std::int64_t k = bottom; k <= m; ++k)
        if (!phi_minus(s, static_cast<double>(k) / m, eps, cfg)) return false;
    return true;
}

double boundary_left(const SampleSet& s, const RobustCIConfig& cfg) {
    cfg.validate();
    require_matching_sample(s, cfg);
    const double m = cfg.m;
    const double below = fraction(s.count_at_most(cfg.m - 1), cfg.n);
    const double v =
        std::min(2.0 * below + 6.0 * log_level(cfg.alpha) / static_cast<double>(cfg.n), 1.0);
    return std::max(std::pow(1.0 - v, 1.0 / m), interior_edge(cfg.m));
}

double boundary_right(const SampleSet& s, const RobustCIConfig& cfg) {
    cfg.validate();
    require_matching_sample(s, cfg);
    const double m = cfg.m;
    const double above = fraction(s.count_at_least(1), cfg.n);
    const double v =
        std::min(2.0 * above + 6.0 * log_level(cfg.alpha) / static_cast<double>(cfg.n), 1.0);
    return std::min(1.0 - std::pow(1.0 - v, 1.0 / m), 1.0 / m);
}

BinomialTestTable::BinomialTestTable(const RobustCIConfig& cfg)
    : cfg_(cfg), grid_(epsilon_grid(cfg)) {
    const int m = cfg.m;
    plus_.resize(grid_.size());
    minus_.resize(grid_.size());
    for (std::size_t e = 0; e < grid_.size(); ++e) {
        plus_[e].reserve(static_cast<std::size_t>(m) + 1);
        minus_[e].reserve(static_cast<std::size_t>(m) + 1);
        for (int k = 0; k <= m; ++k) {
            const double q = static_cast<double>(k) / m;
            const auto up = upper_quantities(q, grid_[e], cfg);
            plus_[e].push_back({floor_count(m * up.t), up.tau});
            const auto lo = lower_quantities(q, grid_[e], cfg);
            minus_[e].push_back({ceil_count(m * lo.t), lo.tau});
        }
    }
}

bool BinomialTestTable::plus_rejects(const SampleSet& s, std::size_t eps_index, int k) const {
    const auto& cell = plus_.at(eps_index).at(static_cast<std::size_t>(k));
    return fraction(s.count_at_most(cell.count_threshold), cfg_.n) < cell.tau;
}

bool BinomialTestTable::minus_rejects(const SampleSet& s, std::size_t eps_index, int k) const {
    const auto& cell = minus_.at(eps_index).at(static_cast<std::size_t>(k));
    return fraction(s.count_at_least(cell.count_threshold), cfg_.n) < cell.tau;
}

ConfidenceInterval robust_ci(const SampleSet& s, const RobustCIConfig& cfg) {
    return robust_ci(s, BinomialTestTable(cfg));
}

ConfidenceInterval robust_ci(const SampleSet& s, const BinomialTestTable& table) {
    const auto& cfg = table.config();
    require_matching_sample(s, cfg);
    const int m = cfg.m;
    const std::size_t grid_size = table.grid().size();

    ConfidenceInterval ci;
    ci.alpha = cfg.alpha;
    ci.method = "binomial-robust";
    check_smallness(cfg.n, cfg.alpha, cfg.eps_max, cfg.warn_threshold, ci.warnings);

    // first_accept[e]: smallest k in [0, m-1] where phi+ accepts (m if none)
    // last_accept[e]: largest k in [1, m] where phi- accepts (0 if none)
    std::vector<int> first_accept(grid_size, m);
    std::vector<int> last_accept(grid_size, 0);
    for (std::size_t e = 0; e < grid_size; ++e) {
        for (int k = 0; k < m; ++k)
            if (!table.plus_rejects(s, e, k)) {
                first_accept[e] = k;
                break;
            }
        for (int k = m; k >= 1; --k)
            if (!table.minus_rejects(s, e, k)) {
                last_accept[e] = k;
                break;
            }
    }

    ci.lower = boundary_left(s, cfg);
    for (int j = m - 1; j >= 0; --j) {
        const int reach = std::min(j + 1, m - 1);
        const bool accepted = std::all_of(first_accept.begin(), first_accept.end(),
                                          [reach](int k) { return k <= reach; });
        if (accepted) ci.lower = static_cast<double>(j) / m;
    }

    ci.upper = boundary_right(s, cfg);
    for (int j = 1; j <= m; ++j) {
        const int reach = std::max(j - 1, 1);
        const bool accepted = std::all_of(last_accept.begin(), last_accept.end(),
                                          [reach](int k) { return k >= reach; });
        if (accepted) ci.upper = static_cast<double>(j) / m;
    }
    return ci;
}

double rate_ell(double p, double eps, const RobustCIConfig& cfg) {
    cfg.validate();
    detail::require_probability(p, "p");
    if (cfg.n < 2) throw std::domain_error("rate curve needs n >= 2");
    if (!(eps >= 0.0 && eps < 1.0)) throw std::domain_error("eps must lie in [0, 1)");
    const double m = cfg.m;
    const double n = static_cast<double>(cfg.n);
    const double inv_log_n = 1.0 / std::sqrt(std::log(n));
    const double inv_log_eps = eps > 0.0 ? 1.0 / std::sqrt(std::log(1.0 / eps)) : 0.0;
    const double spread = std::sqrt(p * (1.0 - p) / m) * (inv_log_n + inv_log_eps) + 1.0 / m;
    return std::min({spread, p, 1.0 - p}) + (1.0 / n + eps) / m;
}

}  // namespace robustci
