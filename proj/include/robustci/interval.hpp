#ifndef ROBUSTCI_INTERVAL_HPP
#define ROBUSTCI_INTERVAL_HPP

#include <cstddef>
#include <string>
#include <vector>

namespace robustci {

struct Warning {
    std::string code;
    std::string message;
};

// Closed interval [lower, upper]. lower > upper encodes the empty set.
struct ConfidenceInterval {
    double lower = 0.0;
    double upper = 0.0;
    double alpha = 0.05;
    std::string method;
    std::vector<Warning> warnings;

    bool empty() const noexcept { return lower > upper; }
    double length() const noexcept { return empty() ? 0.0 : upper - lower; }
    bool contains(double x) const noexcept { return !empty() && lower <= x && x <= upper; }
};

// Contamination levels at which the tests are run, increasing.
class EpsilonGrid {
public:
    explicit EpsilonGrid(std::vector<double> values);
    const std::vector<double>& values() const noexcept { return values_; }
    std::size_t size() const noexcept { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }
    auto begin() const noexcept { return values_.begin(); }
    auto end() const noexcept { return values_.end(); }

private:
    std::vector<double> values_;
};

// log(24 / alpha)
double log_level(double alpha);
// eps + sqrt(log(24/alpha) / (2n))
double contamination_slack(double eps, std::size_t n, double alpha);
// log(1 / slack), floored at zero.
double log_inverse_slack(double eps, std::size_t n, double alpha);

// {2^k log(24/alpha)/n <= eps_max} together with eps_max; {0} when eps_max = 0.
EpsilonGrid epsilon_grid(std::size_t n, double alpha, double eps_max);

// Emits a warning when log(2/alpha)/n + eps_max exceeds threshold.
void check_smallness(std::size_t n, double alpha, double eps_max, double threshold,
                     std::vector<Warning>& out);

// {q in [0,1] : |center - q| <= scale_coef * sqrt(q(1-q)) + shift}
ConfidenceInterval variance_band_interval(double center, double scale_coef, double shift);

}  // namespace robustci

#endif
