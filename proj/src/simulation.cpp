#include "robustci/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <istream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "robustci/binomial_ci.hpp"
#include "robustci/er_graph.hpp"
#include "robustci/estimators.hpp"
#include "robustci/poisson_ci.hpp"

namespace robustci {

namespace {

[[noreturn]] void field_error(const std::string& field, const std::string& what) {
    throw std::invalid_argument("config field '" + field + "': " + what);
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_prefixed(const std::string& text, std::size_t prefix_len) {
    std::size_t used = 0;
    const std::string tail = text.substr(prefix_len);
    const double v = std::stod(tail, &used);
    if (used != tail.size()) throw std::invalid_argument("trailing characters in '" + text + "'");
    return v;
}

struct Outcome {
    bool covered = false;
    bool empty = false;
    double length = 0.0;
};

}  // namespace

std::string to_string(Method method) {
    switch (method) {
        case Method::binom_robust: return "binom-robust";
        case Method::binom_known_eps: return "binom-known-eps";
        case Method::bernoulli: return "bernoulli";
        case Method::poisson_robust: return "poisson-robust";
        case Method::er_conservative: return "er-conservative";
    }
    return "unknown";
}

Method parse_method(const std::string& text) {
    for (auto m : {Method::binom_robust, Method::binom_known_eps, Method::bernoulli,
                   Method::poisson_robust, Method::er_conservative})
        if (to_string(m) == text) return m;
    throw std::invalid_argument("unknown method '" + text + "'");
}

QStrategy QStrategy::parse(const std::string& text) {
    QStrategy q;
    q.label_ = text;
    if (text == "point-max" || text == "point-zero") return q;
    try {
        if (text.rfind("point:", 0) == 0) {
            const double k = parse_prefixed(text, 6);
            if (!(k >= 0.0) || k != std::floor(k)) throw std::invalid_argument("bad point");
            q.pmf_ = FinitePmf::point_mass(static_cast<std::int64_t>(k));
            return q;
        }
        if (text.rfind("binomial:", 0) == 0) {
            detail::require_probability(parse_prefixed(text, 9), "binomial Q parameter");
            return q;
        }
        if (text.rfind("poisson:", 0) == 0) {
            const double mu = parse_prefixed(text, 8);
            if (!(mu >= 0.0) || !std::isfinite(mu)) throw std::invalid_argument("bad rate");
            q.pmf_ = poisson_pmf(mu);
            return q;
        }
    } catch (const std::exception&) {
        throw std::invalid_argument("malformed Q strategy '" + text + "'");
    }
    throw std::invalid_argument("unknown Q strategy '" + text + "'");
}

QStrategy QStrategy::custom(FinitePmf pmf, std::string label) {
    QStrategy q;
    q.label_ = std::move(label);
    q.pmf_ = std::move(pmf);
    return q;
}

FinitePmf QStrategy::resolve(const ContaminationModel& model) const {
    if (pmf_) return *pmf_;
    if (label_ == "point-zero") return FinitePmf::point_mass(0);
    if (label_ == "point-max")
        return FinitePmf::point_mass(model.family == Family::binomial ? model.m : kPoissonOutlier);
    if (label_.rfind("binomial:", 0) == 0) {
        if (model.family != Family::binomial)
            throw std::invalid_argument("binomial Q needs binomial data");
        return binomial_pmf(model.m, parse_prefixed(label_, 9));
    }
    throw std::invalid_argument("unresolvable Q strategy '" + label_ + "'");
}

DiscreteSampler::DiscreteSampler(const FinitePmf& pmf) : support_min_(pmf.support_min()) {
    cumulative_.reserve(pmf.size());
    double acc = 0.0;
    for (double v : pmf.probs()) cumulative_.push_back(acc += v);
}

std::int64_t DiscreteSampler::operator()(double u) const noexcept {
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    const auto idx = std::min<std::ptrdiff_t>(it - cumulative_.begin(),
                                               static_cast<std::ptrdiff_t>(cumulative_.size()) - 1);
    return support_min_ + idx;
}

SampleSet sample_contaminated(const ContaminationModel& model, const FinitePmf& q, CounterRng& rng) {
    detail::require_probability(model.eps, "eps");
    const FinitePmf clean = model.family == Family::binomial ? binomial_pmf(model.m, model.param)
                                                             : poisson_pmf(model.param);
    const DiscreteSampler draw_clean(clean);
    const DiscreteSampler draw_q(q);
    std::vector<std::int64_t> values(model.n);
    for (auto& v : values) {
        const bool contaminated = rng.uniform() < model.eps;
        const double u = rng.uniform();
        v = contaminated ? draw_q(u) : draw_clean(u);
    }
    return SampleSet(std::move(values));
}

SampleSet sample_contaminated(const ContaminationModel& model, const QStrategy& q, CounterRng& rng) {
    return sample_contaminated(model, q.resolve(model), rng);
}

void ExperimentConfig::validate() const {
    if (replications < 1) field_error("replications", "must be at least 1");
    if (!(alpha > 0.0 && alpha < 1.0)) field_error("alpha", "must lie in (0, 1)");
    if (!(eps >= 0.0 && eps <= 1.0)) field_error("eps", "must lie in [0, 1]");
    if (!(eps_max >= 0.0 && eps_max < 1.0)) field_error("eps_max", "must lie in [0, 1)");
    if (!(warn_threshold > 0.0)) field_error("warn_threshold", "must be positive");
    const bool graph = method == Method::er_conservative;
    const bool poisson = method == Method::poisson_robust;
    if (!poisson && !(p >= 0.0 && p <= 1.0)) field_error("p", "must lie in [0, 1]");
    if (poisson && !(lambda >= 0.0 && std::isfinite(lambda)))
        field_error("lambda", "must be finite and non-negative");
    if (!graph && !poisson && m < 1) field_error("m", "must be at least 1");
    if (method == Method::bernoulli && m != 1) field_error("m", "bernoulli method needs m = 1");
    if (graph) {
        if (n_nodes < 4) field_error("n_nodes", "must be at least 4");
        if (exact_limit < 4 || exact_limit > 24) field_error("exact_limit", "must lie in [4, 24]");
        if (n_nodes > exact_limit) field_error("n_nodes", "exceeds exact_limit");
        try {
            EdgeStrategy::parse(q_strategy);
        } catch (const std::exception& e) {
            field_error("q_strategy", e.what());
        }
    } else {
        if (n < 1) field_error("n", "must be at least 1");
        if (!q_pmf) {
            try {
                const auto q = QStrategy::parse(q_strategy);
                ContaminationModel model{poisson ? Family::poisson : Family::binomial, m,
                                         poisson ? lambda : p, eps, n};
                q.resolve(model);
            } catch (const std::exception& e) {
                field_error("q_strategy", e.what());
            }
        }
    }
}

double ExperimentConfig::target() const {
    return method == Method::poisson_robust ? lambda : p;
}

std::vector<ExperimentConfig> configs_from_json(const std::string& text) {
    using nlohmann::json;
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("config is not valid JSON: ") + e.what());
    }
    std::vector<json> objects;
    if (doc.is_array())
        objects.assign(doc.begin(), doc.end());
    else
        objects.push_back(doc);

    std::vector<ExperimentConfig> out;
    for (const auto& obj : objects) {
        if (!obj.is_object()) throw std::invalid_argument("config entries must be JSON objects");
        ExperimentConfig cfg;
        for (const auto& [key, value] : obj.items()) {
            try {
                if (key == "method") cfg.method = parse_method(value.get<std::string>());
                else if (key == "m") cfg.m = value.get<int>();
                else if (key == "lambda") cfg.lambda = value.get<double>();
                else if (key == "n_nodes") cfg.n_nodes = value.get<std::size_t>();
                else if (key == "p") cfg.p = value.get<double>();
                else if (key == "eps") cfg.eps = value.get<double>();
                else if (key == "q_strategy") cfg.q_strategy = value.get<std::string>();
                else if (key == "q_pmf")
                    cfg.q_pmf = FinitePmf(value.at("support_min").get<std::int64_t>(),
                                          value.at("probs").get<std::vector<double>>());
                else if (key == "n") cfg.n = value.get<std::size_t>();
                else if (key == "alpha") cfg.alpha = value.get<double>();
                else if (key == "eps_max") cfg.eps_max = value.get<double>();
                else if (key == "replications") cfg.replications = value.get<std::size_t>();
                else if (key == "seed") cfg.seed = value.get<std::uint64_t>();
                else if (key == "warn_threshold") cfg.warn_threshold = value.get<double>();
                else if (key == "exact_limit") cfg.exact_limit = value.get<std::size_t>();
                else if (key == "threads") cfg.threads = value.get<unsigned>();
                else field_error(key, "unknown field");
            } catch (const json::exception& e) {
                field_error(key, e.what());
            }
        }
        if (cfg.q_pmf) cfg.q_strategy = "custom";
        cfg.validate();
        out.push_back(std::move(cfg));
    }
    return out;
}

ExperimentRecord run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    const auto start = std::chrono::steady_clock::now();
    const bool poisson = cfg.method == Method::poisson_robust;
    const ContaminationModel model{poisson ? Family::poisson : Family::binomial, cfg.m,
                                   cfg.target(), cfg.eps, cfg.n};

    std::optional<FinitePmf> q;
    std::optional<BinomialTestTable> table;
    std::optional<EdgeStrategy> edges;
    switch (cfg.method) {
        case Method::er_conservative: edges = EdgeStrategy::parse(cfg.q_strategy); break;
        case Method::binom_robust:
            table.emplace(RobustCIConfig{cfg.m, cfg.n, cfg.alpha, cfg.eps_max, cfg.warn_threshold});
            [[fallthrough]];
        default: q = cfg.q_pmf ? *cfg.q_pmf : QStrategy::parse(cfg.q_strategy).resolve(model);
    }
    const EstimatorConfig est{cfg.m, cfg.alpha};
    SubsetSearchConfig search;
    search.exact_limit = cfg.exact_limit;

    auto replicate = [&](std::size_t r) {
        CounterRng rng(cfg.seed, r);
        ConfidenceInterval ci;
        switch (cfg.method) {
            case Method::binom_robust:
                ci = robust_ci(sample_contaminated(model, *q, rng), *table);
                break;
            case Method::binom_known_eps: {
                const auto s = sample_contaminated(model, *q, rng);
                ci = known_eps_ci(adaptive_estimator(s, est), cfg.m, cfg.n, cfg.eps_max, cfg.alpha,
                                  est.c_ci);
                break;
            }
            case Method::bernoulli:
                ci = bernoulli_ci(sample_contaminated(model, *q, rng), cfg.alpha);
                break;
            case Method::poisson_robust:
                ci = robust_ci_pois(sample_contaminated(model, *q, rng), cfg.alpha, cfg.eps_max,
                                    PoissonCIOptions{cfg.warn_threshold});
                break;
            case Method::er_conservative: {
                const auto a = sample_node_contaminated(cfg.n_nodes, cfg.p, cfg.eps, *edges, rng);
                ci = er_conservative_ci(a, cfg.alpha, 3.0, search);
                break;
            }
        }
        return Outcome{ci.contains(cfg.target()), ci.empty(), ci.length()};
    };

    std::vector<Outcome> outcomes(cfg.replications);
    unsigned workers = cfg.threads != 0 ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, cfg.replications));
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&] {
        try {
            for (std::size_t r; (r = next.fetch_add(1)) < cfg.replications;) outcomes[r] = replicate(r);
        } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            next = cfg.replications;
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    }
    if (failure) std::rethrow_exception(failure);

    ExperimentRecord rec;
    rec.config = cfg;
    const double reps = static_cast<double>(cfg.replications);
    std::vector<double> lengths;
    lengths.reserve(cfg.replications);
    std::size_t covered = 0;
    double total_length = 0.0;
    for (const auto& o : outcomes) {
        covered += o.covered;
        rec.empty_count += o.empty;
        total_length += o.length;
        lengths.push_back(o.length);
    }
    rec.coverage = static_cast<double>(covered) / reps;
    rec.mc_stderr = std::sqrt(rec.coverage * (1.0 - rec.coverage) / reps);
    rec.mean_length = total_length / reps;
    std::sort(lengths.begin(), lengths.end());
    const std::size_t mid = lengths.size() / 2;
    rec.median_length = lengths.size() % 2 == 1 ? lengths[mid] : 0.5 * (lengths[mid - 1] + lengths[mid]);
    rec.wallclock_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rec;
}

void write_csv(const std::vector<ExperimentRecord>& records, std::ostream& out,
               const CsvOptions& opts) {
    out << kCsvHeader << '\n';
    for (const auto& rec : records) {
        const auto& c = rec.config;
        const bool graph = c.method == Method::er_conservative;
        const bool poisson = c.method == Method::poisson_robust;
        out << to_string(c.method) << ',' << (graph || poisson ? 0 : c.m) << ','
            << (graph ? c.n_nodes : c.n) << ',' << format_double(c.target()) << ','
            << format_double(c.eps) << ',' << format_double(c.eps_max) << ','
            << format_double(c.alpha) << ',' << c.q_strategy << ',' << c.replications << ','
            << c.seed << ',' << format_double(rec.coverage) << ','
            << format_double(rec.mean_length) << ',' << format_double(rec.median_length) << ','
            << format_double(rec.mc_stderr) << ',' << rec.empty_count << ','
            << format_double(opts.include_wallclock ? rec.wallclock_s : 0.0) << '\n';
    }
}

void emit_csv(const std::vector<ExperimentRecord>& records, const std::string& path,
              const CsvOptions& opts) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    write_csv(records, out, opts);
    if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

std::vector<ExperimentRecord> parse_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != kCsvHeader)
        throw std::invalid_argument("CSV header does not match the record schema");
    std::vector<ExperimentRecord> out;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::stringstream fields(line);
        for (std::string cell; std::getline(fields, cell, ',');) f.push_back(cell);
        if (f.size() != 16) throw std::invalid_argument("CSV row has the wrong number of fields");
        ExperimentRecord rec;
        auto& c = rec.config;
        c.method = parse_method(f[0]);
        c.m = std::stoi(f[1]);
        if (c.method == Method::er_conservative) c.n_nodes = std::stoull(f[2]);
        c.n = std::stoull(f[2]);
        (c.method == Method::poisson_robust ? c.lambda : c.p) = std::stod(f[3]);
        c.eps = std::stod(f[4]);
        c.eps_max = std::stod(f[5]);
        c.alpha = std::stod(f[6]);
        c.q_strategy = f[7];
        c.replications = std::stoull(f[8]);
        c.seed = std::stoull(f[9]);
        rec.coverage = std::stod(f[10]);
        rec.mean_length = std::stod(f[11]);
        rec.median_length = std::stod(f[12]);
        rec.mc_stderr = std::stod(f[13]);
        rec.empty_count = std::stoull(f[14]);
        rec.wallclock_s = std::stod(f[15]);
        out.push_back(std::move(rec));
    }
    return out;
}

}  // namespace robustci
