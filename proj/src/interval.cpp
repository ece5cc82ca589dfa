#include "robustci/interval.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "robustci/dist.hpp"

namespace robustci {

EpsilonGrid::EpsilonGrid(std::vector<double> values) : values_(std::move(values)) {
    if (values_.empty()) throw std::invalid_argument("epsilon grid is empty");
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!(values_[i] >= 0.0 && values_[i] < 1.0))
            throw std::domain_error("contamination levels must lie in [0, 1)");
        if (i > 0 && !(values_[i] > values_[i - 1]))
            throw std::invalid_argument("epsilon grid must be strictly increasing");
    }
}

double log_level(double alpha) {
    detail::require_level(alpha);
    return std::log(24.0 / alpha);
}

double contamination_slack(double eps, std::size_t n, double alpha) {
    if (n == 0) throw std::domain_error("sample size must be positive");
    return eps + std::sqrt(log_level(alpha) / (2.0 * static_cast<double>(n)));
}

double log_inverse_slack(double eps, std::size_t n, double alpha) {
    return std::max(0.0, -std::log(contamination_slack(eps, n, alpha)));
}

EpsilonGrid epsilon_grid(std::size_t n, double alpha, double eps_max) {
    if (n == 0) throw std::domain_error("sample size must be positive");
    if (!(eps_max >= 0.0 && eps_max < 1.0)) throw std::domain_error("eps_max must lie in [0, 1)");
    if (eps_max == 0.0) return EpsilonGrid({0.0});
    const double base = log_level(alpha) / static_cast<double>(n);
    constexpr double rel = 1e-12;
    std::vector<double> values;
    for (double v = base; v <= eps_max * (1.0 + rel); v *= 2.0)
        if (v < eps_max * (1.0 - rel)) values.push_back(v);
    values.push_back(eps_max);
    return EpsilonGrid(std::move(values));
}

void check_smallness(std::size_t n, double alpha, double eps_max, double threshold,
                     std::vector<Warning>& out) {
    const double level = std::log(2.0 / alpha) / static_cast<double>(n) + eps_max;
    if (level > threshold) {
        std::ostringstream msg;
        msg << "log(2/alpha)/n + eps_max = " << level << " exceeds " << threshold
            << "; coverage guarantees assume this is small";
        out.push_back({"smallness", msg.str()});
    }
}

ConfidenceInterval variance_band_interval(double center, double scale_coef, double shift) {
    detail::require_probability(center, "center");
    if (!(scale_coef >= 0.0) || !(shift >= 0.0))
        throw std::domain_error("band coefficients must be non-negative");
    // Above the center, (q - c)^2 <= k q (1 - q) with c = center + shift and
    // k = scale_coef^2, i.e. (1 + k) q^2 - (2c + k) q + c^2 <= 0; mirrored below.
    const double k = scale_coef * scale_coef;
    ConfidenceInterval ci;

    const double c_hi = center + shift;
    if (c_hi >= 1.0) {
        ci.upper = 1.0;
    } else {
        const double b = 2.0 * c_hi + k;
        const double disc = b * b - 4.0 * (1.0 + k) * c_hi * c_hi;
        const double root = disc > 0.0 ? (b + std::sqrt(disc)) / (2.0 * (1.0 + k)) : c_hi;
        ci.upper = std::min(1.0, std::max(c_hi, root));
    }

    const double c_lo = center - shift;
    if (c_lo <= 0.0) {
        ci.lower = 0.0;
    } else {
        const double b = 2.0 * c_lo + k;
        const double disc = b * b - 4.0 * (1.0 + k) * c_lo * c_lo;
        double root = c_lo;
        if (disc > 0.0) {
            // product of roots is c^2 / (1 + k); avoids cancellation in the smaller root
            const double big = (b + std::sqrt(disc)) / (2.0 * (1.0 + k));
            root = c_lo * c_lo / ((1.0 + k) * big);
        }
        ci.lower = std::max(0.0, std::min(c_lo, root));
    }
    return ci;
}

}  // namespace robustci
