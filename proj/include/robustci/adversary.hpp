#ifndef ROBUSTCI_ADVERSARY_HPP
#define ROBUSTCI_ADVERSARY_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

#include "robustci/dist.hpp"

namespace robustci {

// Nonnegativity slack for constructed pmf entries.
inline constexpr double kFeasibilityTol = 1e-12;

struct ContaminatedMixture {
    FinitePmf clean;
    double eps;
    FinitePmf q;

    // (1 - eps) clean + eps q
    FinitePmf pmf() const;
};

struct Infeasibility {
    double most_negative = 0.0;
    std::int64_t index = 0;
    std::string reason;
};

// A constructed contamination pmf, or the reason it does not exist.
struct Construction {
    std::optional<FinitePmf> q;
    Infeasibility diagnostic;

    bool feasible() const noexcept { return q.has_value(); }
    explicit operator bool() const noexcept { return feasible(); }
};

// (1 - eps) Binom(m, p) + eps q1 = Binom(m, p + r)
Construction q1_exact_match(double p, double r, double eps, int m);
// (1 - eps_max) Binom(m, p - r) + eps_max q0 = Binom(m, p)
Construction q0_exact_match(double p, double r, double eps_max, int m);

struct TruncatedConstruction {
    Construction construction;
    double threshold = 0.0;       // t_n, in proportion units
    double tv_to_target = 0.0;    // TV((1 - eps_max) Binom(m, p - r) + eps_max q0, Binom(m, p))
    double product_bound = 0.0;   // min(n tv, 1)

    bool feasible() const noexcept { return construction.feasible(); }
};

// q0 with the subtracted term restricted to {k >= m t_n}, t_n = p - 8 sqrt(p(1-p) log(n/alpha)/m).
TruncatedConstruction q0_truncated(double p, double r, double eps_max, int m, std::size_t n,
                                   double alpha);

// Poisson analogues on a common truncated support.
Construction pois_q1_exact(double lambda, double r, double eps);
Construction pois_q0_exact(double lambda, double r, double eps_max);

double tv_product_bound(double tv_single, std::size_t n);

}  // namespace robustci

#endif
