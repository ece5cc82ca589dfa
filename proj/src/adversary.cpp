#include "robustci/adversary.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace robustci {

namespace {

constexpr double kDriftTol = 1e-10;

void require_weight(double eps, const char* what) {
    if (!(eps > 0.0 && eps <= 1.0)) throw std::domain_error(std::string(what) + " must lie in (0, 1]");
}

// Checks entries against the feasibility slack, then clamps and renormalizes.
Construction finish(std::int64_t support_min, std::vector<double> raw) {
    Construction out;
    const auto worst = std::min_element(raw.begin(), raw.end());
    if (*worst < -kFeasibilityTol) {
        out.diagnostic = {*worst, support_min + (worst - raw.begin()), "negative pmf entry"};
        return out;
    }
    double total = 0.0;
    for (double& v : raw) {
        v = std::max(v, 0.0);
        total += v;
    }
    if (std::abs(total - 1.0) > kDriftTol) {
        out.diagnostic = {*worst, support_min + (worst - raw.begin()),
                          "renormalization drift above tolerance"};
        return out;
    }
    for (double& v : raw) v /= total;
    out.q = FinitePmf(support_min, std::move(raw));
    return out;
}

// (1/w) target - ((1 - w)/w) base, entrywise on 0..kmax.
std::vector<double> difference(const FinitePmf& target, const FinitePmf& base, double w,
                               std::int64_t kmax) {
    std::vector<double> raw(static_cast<std::size_t>(kmax) + 1);
    for (std::int64_t k = 0; k <= kmax; ++k)
        raw[static_cast<std::size_t>(k)] = target(k) / w - (1.0 - w) / w * base(k);
    return raw;
}

}  // namespace

FinitePmf ContaminatedMixture::pmf() const {
    require_weight(eps, "contamination weight");
    const auto lo = std::min(clean.support_min(), q.support_min());
    const auto hi = std::max(clean.support_max(), q.support_max());
    std::vector<double> probs(static_cast<std::size_t>(hi - lo) + 1);
    for (auto k = lo; k <= hi; ++k)
        probs[static_cast<std::size_t>(k - lo)] = (1.0 - eps) * clean(k) + eps * q(k);
    return FinitePmf(lo, std::move(probs));
}

Construction q1_exact_match(double p, double r, double eps, int m) {
    detail::require_probability(p, "p");
    require_weight(eps, "eps");
    if (!(r >= 0.0) || p + r > 1.0) throw std::domain_error("need r >= 0 and p + r <= 1");
    return finish(0, difference(binomial_pmf(m, p + r), binomial_pmf(m, p), eps, m));
}

Construction q0_exact_match(double p, double r, double eps_max, int m) {
    detail::require_probability(p, "p");
    require_weight(eps_max, "eps_max");
    if (!(r >= 0.0) || p - r < 0.0) throw std::domain_error("need r >= 0 and p - r >= 0");
    return finish(0, difference(binomial_pmf(m, p), binomial_pmf(m, p - r), eps_max, m));
}

TruncatedConstruction q0_truncated(double p, double r, double eps_max, int m, std::size_t n,
                                   double alpha) {
    detail::require_probability(p, "p");
    require_weight(eps_max, "eps_max");
    detail::require_level(alpha);
    if (n == 0) throw std::domain_error("n must be positive");
    if (!(r >= 0.0) || p - r < 0.0) throw std::domain_error("need r >= 0 and p - r >= 0");

    TruncatedConstruction out;
    out.threshold = p - 8.0 * std::sqrt(p * (1.0 - p) * std::log(n / alpha) / m);
    if (out.threshold < 0.0) {
        out.construction.diagnostic = {out.threshold, 0, "t_n is negative"};
        return out;
    }
    const auto target = binomial_pmf(m, p);
    const auto shifted = binomial_pmf(m, p - r);
    const auto cut = ceil_count(m * out.threshold);
    const double kept = binom_sf(m, p - r, static_cast<double>(cut));
    if (!(kept > 0.0)) {
        out.construction.diagnostic = {0.0, cut, "no mass above t_n"};
        return out;
    }
    std::vector<double> raw(static_cast<std::size_t>(m) + 1);
    for (int k = 0; k <= m; ++k) {
        const double tail = k >= cut ? shifted(k) / kept : 0.0;
        raw[static_cast<std::size_t>(k)] = target(k) / eps_max - (1.0 - eps_max) / eps_max * tail;
    }
    out.construction = finish(0, std::move(raw));
    if (out.construction.feasible()) {
        const ContaminatedMixture mix{shifted, eps_max, *out.construction.q};
        out.tv_to_target = tv_distance(mix.pmf(), target);
        out.product_bound = tv_product_bound(out.tv_to_target, n);
    }
    return out;
}

Construction pois_q1_exact(double lambda, double r, double eps) {
    require_weight(eps, "eps");
    if (!(lambda >= 0.0) || !(r >= 0.0)) throw std::domain_error("need lambda >= 0 and r >= 0");
    const auto kmax = std::max(poisson_truncation_point(lambda), poisson_truncation_point(lambda + r));
    return finish(0, difference(poisson_pmf(lambda + r, kmax), poisson_pmf(lambda, kmax), eps, kmax));
}

Construction pois_q0_exact(double lambda, double r, double eps_max) {
    require_weight(eps_max, "eps_max");
    if (!(r >= 0.0) || lambda - r < 0.0) throw std::domain_error("need r >= 0 and lambda - r >= 0");
    const auto kmax = std::max(poisson_truncation_point(lambda), poisson_truncation_point(lambda - r));
    return finish(0, difference(poisson_pmf(lambda, kmax), poisson_pmf(lambda - r, kmax), eps_max, kmax));
}

double tv_product_bound(double tv_single, std::size_t n) {
    if (!(tv_single >= 0.0)) throw std::domain_error("TV must be non-negative");
    return std::min(static_cast<double>(n) * tv_single, 1.0);
}

}  // namespace robustci
