#ifndef ROBUSTCI_POISSON_CI_HPP
#define ROBUSTCI_POISSON_CI_HPP

#include <cstddef>
#include <cstdint>

#include "robustci/dist.hpp"
#include "robustci/interval.hpp"

namespace robustci {

// Threshold t in count units, separation r in rate units.
struct PoisTestQuantities {
    double t;
    double r;
    double tau;
};

struct PoissonCIOptions {
    double warn_threshold = 0.1;
    std::int64_t lambda_cap = 1'000'000;
};

PoisTestQuantities upper_quantities_pois(double lambda, double eps, std::size_t n, double alpha);
PoisTestQuantities lower_quantities_pois(double lambda, double eps, std::size_t n, double alpha);

bool phi_plus_pois(const SampleSet& s, double lambda, double eps, double alpha);
bool phi_minus_pois(const SampleSet& s, double lambda, double eps, double alpha);

// X_(ceil(3n/4)) + 1.
std::int64_t lambda_max_hat(const SampleSet& s);

// Monotone tests on [0, rate_cap]; rate_cap is normally lambda_max_hat(s).
bool psi_hat_plus_pois(const SampleSet& s, double lambda, double eps, double alpha,
                       std::int64_t rate_cap);
bool psi_hat_minus_pois(const SampleSet& s, double lambda, double eps, double alpha,
                        std::int64_t rate_cap);

// Closed-form right endpoint on the cell [0, 1].
double boundary_right_pois(const SampleSet& s, double alpha);

ConfidenceInterval robust_ci_pois(const SampleSet& s, double alpha, double eps_max,
                                  const PoissonCIOptions& opts = {});

double rate_ell_pois(double lambda, double eps, std::size_t n);

}  // namespace robustci

#endif
