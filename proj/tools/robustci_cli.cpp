// Command-line front end: interval computation, estimation, and simulation.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "robustci/robustci.hpp"

namespace {

using namespace robustci;

std::string read_all(const std::string& path) {
    if (path.empty() || path == "-") {
        std::ostringstream buf;
        buf << std::cin.rdbuf();
        return buf.str();
    }
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

SampleSet read_sample(const std::string& path) {
    std::istringstream in(read_all(path));
    std::vector<std::int64_t> values;
    std::string token;
    while (in >> token) {
        std::size_t used = 0;
        long long v = 0;
        try {
            v = std::stoll(token, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != token.size()) throw std::runtime_error("not an integer: '" + token + "'");
        values.push_back(v);
    }
    if (values.empty()) throw std::runtime_error("no observations in input");
    return SampleSet(std::move(values));
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void report(const ConfidenceInterval& ci) {
    for (const auto& w : ci.warnings) std::cerr << "warning: " << w.message << '\n';
    std::cout << fmt(ci.lower) << ' ' << fmt(ci.upper) << '\n';
    if (ci.empty()) std::cerr << "note: interval is empty\n";
}

nlohmann::json construction_json(const Construction& c) {
    nlohmann::json j;
    j["feasible"] = c.feasible();
    if (!c.feasible()) {
        j["most_negative"] = c.diagnostic.most_negative;
        j["index"] = c.diagnostic.index;
        j["reason"] = c.diagnostic.reason;
    }
    return j;
}

// Adds the pmf and the exact-mixture check against the target.
nlohmann::json construction_json(const Construction& c, const FinitePmf& base, double weight,
                                 const FinitePmf& target) {
    auto j = construction_json(c);
    if (c.feasible()) {
        j["support_min"] = c.q->support_min();
        j["probs"] = c.q->probs();
        j["tv"] = tv_distance(ContaminatedMixture{base, weight, *c.q}.pmf(), target);
    }
    return j;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Contamination-robust confidence intervals and estimators"};
    app.require_subcommand(1);

    // ci-binom
    RobustCIConfig bcfg;
    std::string input;
    std::size_t n_check = 0;
    auto* ci_binom = app.add_subcommand("ci-binom", "Robust interval for binomial counts");
    ci_binom->add_option("--m", bcfg.m, "Trials per observation")->required();
    ci_binom->add_option("--n", n_check, "Expected number of observations");
    ci_binom->add_option("--alpha", bcfg.alpha, "Miscoverage level")->capture_default_str();
    ci_binom->add_option("--eps-max", bcfg.eps_max, "Contamination cap")->required();
    ci_binom->add_option("--warn-threshold", bcfg.warn_threshold)->capture_default_str();
    ci_binom->add_option("input", input, "File of integers (default: stdin)");

    // ci-poisson
    double alpha = 0.05;
    double eps_max = 0.0;
    PoissonCIOptions popts;
    auto* ci_pois = app.add_subcommand("ci-poisson", "Robust interval for Poisson counts");
    ci_pois->add_option("--alpha", alpha)->capture_default_str();
    ci_pois->add_option("--eps-max", eps_max, "Contamination cap")->required();
    ci_pois->add_option("--n", n_check, "Expected number of observations");
    ci_pois->add_option("--warn-threshold", popts.warn_threshold)->capture_default_str();
    ci_pois->add_option("input", input, "File of integers (default: stdin)");

    // estimate
    EstimatorConfig ecfg;
    std::optional<double> known_eps;
    auto* estimate = app.add_subcommand("estimate", "Adaptive point estimate of p");
    estimate->add_option("--m", ecfg.m)->required();
    estimate->add_option("--alpha", ecfg.alpha)->capture_default_str();
    estimate->add_option("--eps", known_eps, "Known contamination level; adds an interval");
    estimate->add_option("--c-sel", ecfg.c_sel, "Branch-selection constant")->capture_default_str();
    estimate->add_option("input", input, "File of integers (default: stdin)");

    // er-estimate
    std::size_t nodes = 0;
    SubsetSearchConfig search;
    auto* er = app.add_subcommand("er-estimate", "Edge probability from a contaminated graph");
    er->add_option("--n", nodes, "Number of nodes (default: largest index + 1)");
    er->add_option("--alpha", alpha)->capture_default_str();
    er->add_option("--exact-limit", search.exact_limit)->capture_default_str();
    er->add_flag("--heuristic", search.heuristic, "Local search above the exact limit");
    er->add_option("input", input, "Edge list, one 'i j' pair per line (default: stdin)");

    // simulate
    ExperimentConfig sim;
    std::string method = "binom-robust";
    std::string config_path;
    std::string out_path;
    bool timing = false;
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo coverage and length");
    simulate->add_option("--config", config_path, "JSON object or array of experiment configs");
    simulate->add_option("--method", method)->capture_default_str();
    simulate->add_option("--m", sim.m);
    simulate->add_option("--lambda", sim.lambda);
    simulate->add_option("--n", sim.n, "Sample size (node count for er-conservative)");
    simulate->add_option("--p", sim.p);
    simulate->add_option("--eps", sim.eps);
    simulate->add_option("--eps-max", sim.eps_max)->capture_default_str();
    simulate->add_option("--alpha", sim.alpha)->capture_default_str();
    simulate->add_option("--q-strategy", sim.q_strategy)->capture_default_str();
    simulate->add_option("--reps", sim.replications)->capture_default_str();
    simulate->add_option("--seed", sim.seed)->capture_default_str();
    simulate->add_option("--exact-limit", sim.exact_limit)->capture_default_str();
    simulate->add_option("--warn-threshold", sim.warn_threshold)->capture_default_str();
    simulate->add_option("--threads", sim.threads, "Worker threads (0 = all cores)");
    simulate->add_option("--out", out_path, "CSV destination (default: stdout)");
    simulate->add_flag("--timing", timing, "Write measured wallclock_s instead of 0");

    // adversary-check
    int am = 10;
    double ap = 0.3, ar = 0.01, aeps = 0.1, aeps_max = 0.1;
    std::size_t an = 100;
    std::optional<double> alambda;
    auto* adv = app.add_subcommand("adversary-check", "Build least-favorable contaminations");
    adv->add_option("--m", am)->capture_default_str();
    adv->add_option("--p", ap)->capture_default_str();
    adv->add_option("--r", ar, "Parameter separation")->capture_default_str();
    adv->add_option("--eps", aeps)->capture_default_str();
    adv->add_option("--eps-max", aeps_max)->capture_default_str();
    adv->add_option("--n", an)->capture_default_str();
    adv->add_option("--alpha", alpha)->capture_default_str();
    adv->add_option("--lambda", alambda, "Also run the Poisson constructions at this rate");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*ci_binom) {
            const auto s = read_sample(input);
            if (n_check != 0 && n_check != s.size())
                throw std::runtime_error("--n does not match the number of observations");
            bcfg.n = s.size();
            report(robust_ci(s, bcfg));
        } else if (*ci_pois) {
            const auto s = read_sample(input);
            if (n_check != 0 && n_check != s.size())
                throw std::runtime_error("--n does not match the number of observations");
            report(robust_ci_pois(s, alpha, eps_max, popts));
        } else if (*estimate) {
            const auto s = read_sample(input);
            const double p_hat = adaptive_estimator(s, ecfg);
            std::cout << fmt(p_hat) << '\n';
            if (known_eps)
                report(known_eps_ci(p_hat, ecfg.m, s.size(), *known_eps, ecfg.alpha, ecfg.c_ci));
        } else if (*er) {
            std::istringstream in(read_all(input));
            const auto a = read_edge_list(in, nodes);
            const auto s_hat = find_s_hat(a, search);
            if (!s_hat.certified) std::cerr << "warning: subset search was not exhaustive\n";
            std::cout << fmt(subset_edge_density(a, s_hat.nodes)) << '\n';
            report(er_conservative_ci(a, alpha, 3.0, search));
        } else if (*simulate) {
            std::vector<ExperimentConfig> configs;
            if (!config_path.empty()) {
                configs = configs_from_json(read_all(config_path));
            } else {
                sim.method = parse_method(method);
                if (sim.method == Method::er_conservative) sim.n_nodes = sim.n;
                configs.push_back(sim);
            }
            std::vector<ExperimentRecord> records;
            for (const auto& cfg : configs) {
                std::vector<Warning> warnings;
                if (cfg.method != Method::er_conservative)
                    check_smallness(cfg.n, cfg.alpha, cfg.eps_max, cfg.warn_threshold, warnings);
                for (const auto& w : warnings) std::cerr << "warning: " << w.message << '\n';
                records.push_back(run_experiment(cfg));
            }
            const CsvOptions opts{timing};
            if (out_path.empty())
                write_csv(records, std::cout, opts);
            else
                emit_csv(records, out_path, opts);
        } else if (*adv) {
            nlohmann::json j;
            if (ap + ar <= 1.0)
                j["q1_exact_match"] = construction_json(q1_exact_match(ap, ar, aeps, am),
                                                        binomial_pmf(am, ap), aeps,
                                                        binomial_pmf(am, ap + ar));
            if (ap >= ar)
                j["q0_exact_match"] = construction_json(q0_exact_match(ap, ar, aeps_max, am),
                                                        binomial_pmf(am, ap - ar), aeps_max,
                                                        binomial_pmf(am, ap));
            if (ap >= ar) {
                const auto trunc = q0_truncated(ap, ar, aeps_max, am, an, alpha);
                auto tj = construction_json(trunc.construction);
                tj["t_n"] = trunc.threshold;
                if (trunc.feasible()) {
                    tj["tv"] = trunc.tv_to_target;
                    tj["tv_bound"] = alpha / static_cast<double>(an);
                    tj["product_bound"] = trunc.product_bound;
                }
                j["q0_truncated"] = tj;
            }
            if (alambda) {
                const double lam = *alambda;
                const auto q1 = pois_q1_exact(lam, ar, aeps);
                const auto k1 = q1 ? q1.q->support_max() : 0;
                j["pois_q1_exact"] = construction_json(q1, poisson_pmf(lam, k1), aeps,
                                                       poisson_pmf(lam + ar, k1));
                if (lam >= ar) {
                    const auto q0 = pois_q0_exact(lam, ar, aeps_max);
                    const auto k0 = q0 ? q0.q->support_max() : 0;
                    j["pois_q0_exact"] = construction_json(q0, poisson_pmf(lam - ar, k0), aeps_max,
                                                           poisson_pmf(lam, k0));
                }
            }
            std::cout << j.dump(2) << '\n';
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
