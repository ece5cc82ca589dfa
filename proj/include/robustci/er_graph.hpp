#ifndef ROBUSTCI_ER_GRAPH_HPP
#define ROBUSTCI_ER_GRAPH_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "robustci/interval.hpp"
#include "robustci/rng.hpp"

namespace robustci {

// Symmetric 0/1 matrix with zero diagonal.
class AdjacencyMatrix {
public:
    explicit AdjacencyMatrix(std::size_t n);

    std::size_t n() const noexcept { return n_; }
    bool operator()(std::size_t i, std::size_t j) const { return bits_[index(i, j)] != 0; }
    void set_edge(std::size_t i, std::size_t j, bool present);
    std::size_t edge_count() const noexcept;

private:
    std::size_t index(std::size_t i, std::size_t j) const;
    std::size_t n_;
    std::vector<std::uint8_t> bits_;
};

// Dense row-major real matrix.
class DenseMatrix {
public:
    explicit DenseMatrix(std::size_t n, double fill = 0.0);
    std::size_t n() const noexcept { return n_; }
    double& operator()(std::size_t i, std::size_t j) { return data_.at(i * n_ + j); }
    double operator()(std::size_t i, std::size_t j) const { return data_.at(i * n_ + j); }

private:
    std::size_t n_;
    std::vector<double> data_;
};

struct SubsetSearchConfig {
    std::size_t exact_limit = 14;  // exhaustive enumeration up to this many nodes
    bool heuristic = false;         // local search above exact_limit
    int restarts = 50;
    std::uint64_t seed = 0;         // local-search starting points

    void validate() const;
};

struct SubsetSearchResult {
    std::vector<std::size_t> nodes;  // sorted
    double objective = 0.0;
    bool certified = true;           // false when produced by local search
};

// sup over S' within `restrict_to` of |sum_{i != j in S'} B_ij|.
double u_norm(const DenseMatrix& b, std::span<const std::size_t> restrict_to,
              const SubsetSearchConfig& cfg = {});
double u_norm(const DenseMatrix& b, const SubsetSearchConfig& cfg = {});

// Off-diagonal mean of A over S x S.
double subset_edge_density(const AdjacencyMatrix& a, std::span<const std::size_t> nodes);

// Smallest admissible subset size, ceil(3n/4).
std::size_t min_subset_size(std::size_t n);

SubsetSearchResult find_s_hat(const AdjacencyMatrix& a, const SubsetSearchConfig& cfg = {});
double er_estimate(const AdjacencyMatrix& a, const SubsetSearchConfig& cfg = {});

// {p : |p_hat - p| <= c (sqrt(p(1-p)/n) + 1/n)}
ConfidenceInterval er_conservative_ci(const AdjacencyMatrix& a, double alpha, double c = 3.0,
                                      const SubsetSearchConfig& cfg = {});

// Strategy for edges touching a contaminated node.
struct EdgeStrategy {
    enum class Kind { all_ones, all_zeros, bernoulli };
    Kind kind = Kind::all_ones;
    double q = 0.0;

    static EdgeStrategy parse(const std::string& text);
    std::string to_string() const;
};

AdjacencyMatrix sample_er(std::size_t n, double p, CounterRng& rng);
AdjacencyMatrix sample_er(std::size_t n, double p, std::uint64_t seed);
// Nodes are contaminated independently with probability eps.
AdjacencyMatrix sample_node_contaminated(std::size_t n, double p, double eps,
                                         const EdgeStrategy& strategy, CounterRng& rng);
AdjacencyMatrix sample_node_contaminated(std::size_t n, double p, double eps,
                                         const EdgeStrategy& strategy, std::uint64_t seed);
// Same edge process with a fixed set of contaminated nodes.
AdjacencyMatrix sample_node_contaminated(std::size_t n, double p,
                                         std::span<const std::size_t> contaminated,
                                         const EdgeStrategy& strategy, CounterRng& rng);
AdjacencyMatrix sample_sbm(std::size_t n, double p1, double p2, double q, double eta,
                           CounterRng& rng);
AdjacencyMatrix sample_sbm(std::size_t n, double p1, double p2, double q, double eta,
                           std::uint64_t seed);

void write_edge_list(const AdjacencyMatrix& a, std::ostream& out);
// n = 0 infers the node count from the largest index.
AdjacencyMatrix read_edge_list(std::istream& in, std::size_t n = 0);

}  // namespace robustci

#endif
