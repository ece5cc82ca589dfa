#ifndef ROBUSTCI_ESTIMATORS_HPP
#define ROBUSTCI_ESTIMATORS_HPP

#include <cstddef>

#include "robustci/dist.hpp"
#include "robustci/interval.hpp"

namespace robustci {

struct EstimatorConfig {
    int m = 1;
    double alpha = 0.05;
    double c_sel = 1.0;             // boundary-frequency threshold is exp(-1.5 c_sel)
    double c_ci = 3.0;              // slack constant of known_eps_ci
    double grid_resolution = 1e-3;  // coarse step of the Kolmogorov-distance search

    void validate() const;
};

double trimmed_mean(const SampleSet& s, int m);
double p_hat_s(const SampleSet& s, int m);
double p_hat_l(const SampleSet& s, int m);

// sup_t |F_n(t) - P(Binomial(m, p) <= t)|
double kolmogorov_distance(const SampleSet& s, int m, double p);
double p_hat_g(const SampleSet& s, int m, const EstimatorConfig& cfg);

enum class EstimatorBranch { small, large, min_distance };
EstimatorBranch adaptive_branch(const SampleSet& s, const EstimatorConfig& cfg);
double adaptive_estimator(const SampleSet& s, const EstimatorConfig& cfg);

// Interval from the frequencies of zeros and ones (m = 1 data).
ConfidenceInterval bernoulli_ci(const SampleSet& s, double alpha, double c = 4.0);

// {q : |p_hat - q| <= c (A sqrt(q(1-q)) + B)}, A = (1/sqrt(n) + eps)/sqrt(m), B = (1/n + eps)/m.
ConfidenceInterval known_eps_ci(double p_hat, int m, std::size_t n, double eps, double alpha,
                                double c = 3.0);

}  // namespace robustci

#endif
