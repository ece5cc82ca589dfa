#ifndef ROBUSTCI_BINOMIAL_CI_HPP
#define ROBUSTCI_BINOMIAL_CI_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

#include "robustci/dist.hpp"
#include "robustci/interval.hpp"

namespace robustci {

struct RobustCIConfig {
    int m = 1;              // trials per observation
    std::size_t n = 1;      // number of observations
    double alpha = 0.05;
    double eps_max = 0.0;   // cap on the contamination proportion
    double warn_threshold = 0.1;

    void validate() const;
};

// Threshold t and separation r are in proportion units.
struct TestQuantities {
    double t;
    double r;
    double tau;
};

EpsilonGrid epsilon_grid(const RobustCIConfig& cfg);

TestQuantities upper_quantities(double p, double eps, const RobustCIConfig& cfg);
TestQuantities lower_quantities(double p, double eps, const RobustCIConfig& cfg);
// 1/(2m) v 2 sqrt(p(1-p) / (m log(1/A))) on [0, 1 - 1/m].
double rbar_closed_form(double p, double eps, const RobustCIConfig& cfg);

// true means the test rejects.
bool phi_plus(const SampleSet& s, double q, double eps, const RobustCIConfig& cfg);
bool phi_minus(const SampleSet& s, double q, double eps, const RobustCIConfig& cfg);
bool psi_hat_plus(const SampleSet& s, double p, double eps, const RobustCIConfig& cfg);
bool psi_hat_minus(const SampleSet& s, double p, double eps, const RobustCIConfig& cfg);

double boundary_left(const SampleSet& s, const RobustCIConfig& cfg);
double boundary_right(const SampleSet& s, const RobustCIConfig& cfg);

// Data-free part of the tests: count thresholds and levels on the grid
// {k/m} for every epsilon. Reusable across samples with the same (m, n, alpha, eps_max).
class BinomialTestTable {
public:
    explicit BinomialTestTable(const RobustCIConfig& cfg);

    const RobustCIConfig& config() const noexcept { return cfg_; }
    const EpsilonGrid& grid() const noexcept { return grid_; }

    // Rejection of phi+ at q = k/m and phi- at q = k/m for the given sample.
    bool plus_rejects(const SampleSet& s, std::size_t eps_index, int k) const;
    bool minus_rejects(const SampleSet& s, std::size_t eps_index, int k) const;

private:
    struct Cell {
        std::int64_t count_threshold;
        double tau;
    };
    RobustCIConfig cfg_;
    EpsilonGrid grid_;
    std::vector<std::vector<Cell>> plus_;   // [eps][k]
    std::vector<std::vector<Cell>> minus_;  // [eps][k]
};

ConfidenceInterval robust_ci(const SampleSet& s, const RobustCIConfig& cfg);
ConfidenceInterval robust_ci(const SampleSet& s, const BinomialTestTable& table);

// Reference length curve for the adaptive interval.
double rate_ell(double p, double eps, const RobustCIConfig& cfg);

}  // namespace robustci

#endif
