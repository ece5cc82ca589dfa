#include "robustci/er_graph.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "robustci/dist.hpp"

namespace robustci {

namespace {

constexpr std::size_t kMaxExactNodes = 24;
constexpr double kTieTol = 1e-12;
constexpr std::uint32_t kNodeLane = 1;

using Mask = std::uint32_t;

std::vector<std::size_t> mask_nodes(Mask mask) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; mask != 0; ++i, mask >>= 1)
        if (mask & 1u) out.push_back(i);
    return out;
}

// Lexicographic order on the sorted node lists.
bool lex_less(Mask a, Mask b) {
    const auto va = mask_nodes(a);
    const auto vb = mask_nodes(b);
    return std::lexicographical_compare(va.begin(), va.end(), vb.begin(), vb.end());
}

double pairs(std::size_t k) { return static_cast<double>(k) * (static_cast<double>(k) - 1.0); }

// Symmetrized entries B_ij + B_ji over a node list.
class PairSums {
public:
    PairSums(const DenseMatrix& b, std::span<const std::size_t> nodes) : k_(nodes.size()), w_(k_ * k_) {
        for (std::size_t a = 0; a < k_; ++a)
            for (std::size_t c = 0; c < k_; ++c)
                w_[a * k_ + c] = a == c ? 0.0 : b(nodes[a], nodes[c]) + b(nodes[c], nodes[a]);
    }
    std::size_t size() const noexcept { return k_; }
    double operator()(std::size_t a, std::size_t c) const noexcept { return w_[a * k_ + c]; }

    // Change in the within-set sum when node a is toggled.
    double toggle_gain(const std::vector<char>& in, std::size_t a) const noexcept {
        double g = 0.0;
        for (std::size_t c = 0; c < k_; ++c)
            if (in[c]) g += w_[a * k_ + c];
        return in[a] ? -g : g;
    }

private:
    std::size_t k_;
    std::vector<double> w_;
};

double exact_u_norm(const PairSums& w) {
    const std::size_t k = w.size();
    std::vector<char> in(k, 0);
    double sum = 0.0;
    double best = 0.0;
    const std::uint64_t total = std::uint64_t{1} << k;
    for (std::uint64_t g = 1; g < total; ++g) {
        const auto a = static_cast<std::size_t>(std::countr_zero(g));
        sum += w.toggle_gain(in, a);
        in[a] = static_cast<char>(!in[a]);
        best = std::max(best, std::abs(sum));
    }
    return best;
}

double local_search_u_norm(const PairSums& w, int restarts, CounterRng& rng) {
    const std::size_t k = w.size();
    double best = 0.0;
    for (int r = 0; r < restarts; ++r) {
        for (double sign : {1.0, -1.0}) {
            std::vector<char> in(k);
            for (auto& bit : in) bit = static_cast<char>(rng.uniform() < 0.5);
            double sum = 0.0;
            for (std::size_t a = 0; a < k; ++a)
                for (std::size_t c = a + 1; c < k; ++c)
                    if (in[a] && in[c]) sum += w(a, c);
            bool improved = true;
            while (improved) {
                improved = false;
                for (std::size_t a = 0; a < k; ++a) {
                    const double gain = w.toggle_gain(in, a);
                    if (sign * gain > 1e-15) {
                        sum += gain;
                        in[a] = static_cast<char>(!in[a]);
                        improved = true;
                    }
                }
            }
            best = std::max(best, std::abs(sum));
        }
    }
    return best;
}

// Centered matrix A - p_S J over a node list, as pair sums.
PairSums centered(const AdjacencyMatrix& a, std::span<const std::size_t> nodes, double density) {
    DenseMatrix b(a.n());
    for (auto i : nodes)
        for (auto j : nodes)
            if (i != j) b(i, j) = (a(i, j) ? 1.0 : 0.0) - density;
    return PairSums(b, nodes);
}

SubsetSearchResult exact_search(const AdjacencyMatrix& a, std::size_t kmin) {
    const std::size_t n = a.n();
    std::vector<Mask> adj(n, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j && a(i, j)) adj[i] |= Mask{1} << j;

    // edges[T] = number of edges inside T
    const Mask full = n == 32 ? ~Mask{0} : (Mask{1} << n) - 1;
    std::vector<std::uint32_t> edges(std::size_t{full} + 1, 0);
    for (Mask t = 1; t != 0 && t <= full; ++t) {
        const auto v = static_cast<std::size_t>(std::countr_zero(t));
        const Mask rest = t & (t - 1);
        edges[t] = edges[rest] + static_cast<std::uint32_t>(std::popcount(adj[v] & rest));
        if (t == full) break;
    }

    Mask best_mask = 0;
    double best = std::numeric_limits<double>::infinity();
    for (Mask s = 1;; ++s) {
        const auto k = static_cast<std::size_t>(std::popcount(s));
        if (k >= kmin) {
            const double density = 2.0 * edges[s] / pairs(k);
            double norm = 0.0;
            for (Mask t = s;; t = (t - 1) & s) {
                const double v = 2.0 * edges[t] -
                                 density * pairs(static_cast<std::size_t>(std::popcount(t)));
                norm = std::max(norm, std::abs(v));
                if (t == 0) break;
            }
            if (norm < best - kTieTol ||
                (std::abs(norm - best) <= kTieTol && lex_less(s, best_mask))) {
                best = norm;
                best_mask = s;
            }
        }
        if (s == full) break;
    }
    return {mask_nodes(best_mask), best, true};
}

double heuristic_objective(const AdjacencyMatrix& a, std::span<const std::size_t> nodes,
                           int restarts, CounterRng& rng) {
    const double density = subset_edge_density(a, nodes);
    return local_search_u_norm(centered(a, nodes, density), restarts, rng);
}

SubsetSearchResult heuristic_search(const AdjacencyMatrix& a, std::size_t kmin,
                                    const SubsetSearchConfig& cfg) {
    const std::size_t n = a.n();
    CounterRng rng(cfg.seed, 0);
    constexpr int inner_restarts = 4;
    SubsetSearchResult best{{}, std::numeric_limits<double>::infinity(), false};

    for (int r = 0; r < cfg.restarts; ++r) {
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), std::size_t{0});
        for (std::size_t i = n; i > 1; --i)
            std::swap(order[i - 1], order[static_cast<std::size_t>(rng.uniform() * i)]);
        std::vector<char> in(n, 0);
        for (std::size_t i = 0; i < kmin; ++i) in[order[i]] = 1;

        auto members = [&] {
            std::vector<std::size_t> v;
            for (std::size_t i = 0; i < n; ++i)
                if (in[i]) v.push_back(i);
            return v;
        };
        double current = heuristic_objective(a, members(), inner_restarts, rng);
        bool improved = true;
        while (improved) {
            improved = false;
            const auto size = static_cast<std::size_t>(std::count(in.begin(), in.end(), 1));
            // remove, add, then swap moves; first improvement wins
            for (std::size_t i = 0; i < n && !improved; ++i) {
                if (in[i] && size > kmin) {
                    in[i] = 0;
                    const double v = heuristic_objective(a, members(), inner_restarts, rng);
                    if (v < current - kTieTol) { current = v; improved = true; } else in[i] = 1;
                } else if (!in[i]) {
                    in[i] = 1;
                    const double v = heuristic_objective(a, members(), inner_restarts, rng);
                    if (v < current - kTieTol) { current = v; improved = true; } else in[i] = 0;
                }
            }
            for (std::size_t i = 0; i < n && !improved; ++i) {
                if (!in[i]) continue;
                for (std::size_t j = 0; j < n && !improved; ++j) {
                    if (in[j]) continue;
                    in[i] = 0;
                    in[j] = 1;
                    const double v = heuristic_objective(a, members(), inner_restarts, rng);
                    if (v < current - kTieTol) {
                        current = v;
                        improved = true;
                    } else {
                        in[i] = 1;
                        in[j] = 0;
                    }
                }
            }
        }
        auto nodes = members();
        if (current < best.objective - kTieTol ||
            (std::abs(current - best.objective) <= kTieTol && nodes < best.nodes)) {
            best.objective = current;
            best.nodes = std::move(nodes);
        }
    }
    return best;
}

void require_edge_probability(double p, const char* what) { detail::require_probability(p, what); }

}  // namespace

AdjacencyMatrix::AdjacencyMatrix(std::size_t n) : n_(n), bits_(n * n, 0) {}

std::size_t AdjacencyMatrix::index(std::size_t i, std::size_t j) const {
    if (i >= n_ || j >= n_) throw std::out_of_range("node index out of range");
    return i * n_ + j;
}

void AdjacencyMatrix::set_edge(std::size_t i, std::size_t j, bool present) {
    if (i == j) {
        if (present) throw std::invalid_argument("self-loops are not allowed");
        return;
    }
    bits_[index(i, j)] = present;
    bits_[index(j, i)] = present;
}

std::size_t AdjacencyMatrix::edge_count() const noexcept {
    return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), 1)) / 2;
}

DenseMatrix::DenseMatrix(std::size_t n, double fill) : n_(n), data_(n * n, fill) {}

void SubsetSearchConfig::validate() const {
    if (exact_limit < 4 || exact_limit > kMaxExactNodes)
        throw std::domain_error("exact_limit must lie in [4, 24]");
    if (restarts < 1) throw std::domain_error("restarts must be positive");
}

double u_norm(const DenseMatrix& b, std::span<const std::size_t> restrict_to,
              const SubsetSearchConfig& cfg) {
    cfg.validate();
    for (auto i : restrict_to)
        if (i >= b.n()) throw std::out_of_range("node index out of range");
    PairSums w(b, restrict_to);
    if (restrict_to.size() <= cfg.exact_limit) return exact_u_norm(w);
    if (!cfg.heuristic) throw std::length_error("subset larger than exact_limit");
    CounterRng rng(cfg.seed, 1);
    return local_search_u_norm(w, cfg.restarts, rng);
}

double u_norm(const DenseMatrix& b, const SubsetSearchConfig& cfg) {
    std::vector<std::size_t> all(b.n());
    std::iota(all.begin(), all.end(), std::size_t{0});
    return u_norm(b, all, cfg);
}

double subset_edge_density(const AdjacencyMatrix& a, std::span<const std::size_t> nodes) {
    if (nodes.size() < 2) throw std::domain_error("density needs at least two nodes");
    std::size_t count = 0;
    for (std::size_t x = 0; x < nodes.size(); ++x)
        for (std::size_t y = x + 1; y < nodes.size(); ++y)
            if (a(nodes[x], nodes[y])) ++count;
    return 2.0 * static_cast<double>(count) / pairs(nodes.size());
}

std::size_t min_subset_size(std::size_t n) { return (3 * n + 3) / 4; }

SubsetSearchResult find_s_hat(const AdjacencyMatrix& a, const SubsetSearchConfig& cfg) {
    cfg.validate();
    if (a.n() < 2) throw std::domain_error("graph needs at least two nodes");
    const std::size_t kmin = std::max<std::size_t>(min_subset_size(a.n()), 2);
    if (a.n() <= cfg.exact_limit) return exact_search(a, kmin);
    if (!cfg.heuristic) throw std::length_error("graph larger than exact_limit");
    return heuristic_search(a, kmin, cfg);
}

double er_estimate(const AdjacencyMatrix& a, const SubsetSearchConfig& cfg) {
    const auto s = find_s_hat(a, cfg);
    return subset_edge_density(a, s.nodes);
}

ConfidenceInterval er_conservative_ci(const AdjacencyMatrix& a, double alpha, double c,
                                      const SubsetSearchConfig& cfg) {
    detail::require_level(alpha);
    if (!(c > 0.0)) throw std::domain_error("constant must be positive");
    const double n = static_cast<double>(a.n());
    auto ci = variance_band_interval(er_estimate(a, cfg), c / std::sqrt(n), c / n);
    ci.alpha = alpha;
    ci.method = "er-conservative";
    return ci;
}

EdgeStrategy EdgeStrategy::parse(const std::string& text) {
    if (text == "all-ones") return {Kind::all_ones, 1.0};
    if (text == "all-zeros") return {Kind::all_zeros, 0.0};
    const std::string prefix = "bernoulli:";
    if (text.rfind(prefix, 0) == 0) {
        const double q = std::stod(text.substr(prefix.size()));
        require_edge_probability(q, "edge probability");
        return {Kind::bernoulli, q};
    }
    throw std::invalid_argument("unknown edge strategy '" + text + "'");
}

std::string EdgeStrategy::to_string() const {
    switch (kind) {
        case Kind::all_ones: return "all-ones";
        case Kind::all_zeros: return "all-zeros";
        case Kind::bernoulli: break;
    }
    std::ostringstream out;
    out.precision(17);
    out << "bernoulli:" << q;
    return out.str();
}

AdjacencyMatrix sample_er(std::size_t n, double p, CounterRng& rng) {
    require_edge_probability(p, "edge probability");
    AdjacencyMatrix a(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) a.set_edge(i, j, rng.uniform() < p);
    return a;
}

AdjacencyMatrix sample_er(std::size_t n, double p, std::uint64_t seed) {
    CounterRng rng(seed, 0);
    return sample_er(n, p, rng);
}

AdjacencyMatrix sample_node_contaminated(std::size_t n, double p,
                                         std::span<const std::size_t> contaminated,
                                         const EdgeStrategy& strategy, CounterRng& rng) {
    require_edge_probability(p, "edge probability");
    std::vector<char> bad(n, 0);
    for (auto i : contaminated) {
        if (i >= n) throw std::out_of_range("contaminated node out of range");
        bad[i] = 1;
    }
    AdjacencyMatrix a(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double u = rng.uniform();
            bool edge = u < p;
            if (bad[i] || bad[j]) {
                switch (strategy.kind) {
                    case EdgeStrategy::Kind::all_ones: edge = true; break;
                    case EdgeStrategy::Kind::all_zeros: edge = false; break;
                    case EdgeStrategy::Kind::bernoulli: edge = u < strategy.q; break;
                }
            }
            a.set_edge(i, j, edge);
        }
    return a;
}

AdjacencyMatrix sample_node_contaminated(std::size_t n, double p, double eps,
                                         const EdgeStrategy& strategy, CounterRng& rng) {
    require_edge_probability(eps, "contamination proportion");
    auto node_rng = rng.lane(kNodeLane);
    std::vector<std::size_t> contaminated;
    for (std::size_t i = 0; i < n; ++i)
        if (node_rng.uniform() < eps) contaminated.push_back(i);
    return sample_node_contaminated(n, p, contaminated, strategy, rng);
}

AdjacencyMatrix sample_node_contaminated(std::size_t n, double p, double eps,
                                         const EdgeStrategy& strategy, std::uint64_t seed) {
    CounterRng rng(seed, 0);
    return sample_node_contaminated(n, p, eps, strategy, rng);
}

AdjacencyMatrix sample_sbm(std::size_t n, double p1, double p2, double q, double eta,
                           CounterRng& rng) {
    require_edge_probability(p1, "p1");
    require_edge_probability(p2, "p2");
    require_edge_probability(q, "q");
    require_edge_probability(eta, "eta");
    auto node_rng = rng.lane(kNodeLane);
    std::vector<char> community(n);
    for (auto& z : community) z = static_cast<char>(node_rng.uniform() < eta);
    AdjacencyMatrix a(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double prob = community[i] != community[j] ? q : (community[i] ? p2 : p1);
            a.set_edge(i, j, rng.uniform() < prob);
        }
    return a;
}

AdjacencyMatrix sample_sbm(std::size_t n, double p1, double p2, double q, double eta,
                           std::uint64_t seed) {
    CounterRng rng(seed, 0);
    return sample_sbm(n, p1, p2, q, eta, rng);
}

void write_edge_list(const AdjacencyMatrix& a, std::ostream& out) {
    for (std::size_t i = 0; i < a.n(); ++i)
        for (std::size_t j = i + 1; j < a.n(); ++j)
            if (a(i, j)) out << i << ' ' << j << '\n';
}

AdjacencyMatrix read_edge_list(std::istream& in, std::size_t n) {
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    std::size_t largest = 0;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream fields(line);
        long long i = -1, j = -1;
        if (!(fields >> i >> j) || i < 0 || j < 0)
            throw std::invalid_argument("bad edge on line " + std::to_string(line_no));
        edges.emplace_back(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
        largest = std::max({largest, static_cast<std::size_t>(i), static_cast<std::size_t>(j)});
    }
    if (n == 0) n = edges.empty() ? 0 : largest + 1;
    AdjacencyMatrix a(n);
    for (auto [i, j] : edges) a.set_edge(i, j, true);
    return a;
}

}  // namespace robustci
