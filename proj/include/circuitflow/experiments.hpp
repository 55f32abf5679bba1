#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <memory>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "circuitflow/csv.hpp"
#include "circuitflow/errors.hpp"
#include "circuitflow/generators.hpp"
#include "circuitflow/graph.hpp"
#include "circuitflow/influence.hpp"
#include "circuitflow/propagation.hpp"
#include "circuitflow/selection.hpp"
#include "circuitflow/solver.hpp"
#include "circuitflow/transmission.hpp"
#include "circuitflow/types.hpp"

namespace circuitflow {

struct ExperimentConfig {
    std::string graph_path;
    bool directed = true;
    /// "influence" (src influences dst) or "trust" (edges reversed at load).
    std::string edge_semantics = "influence";
    double lambda = 0.2;
    std::string lambda_file;
    SolverOptions solver;
    std::optional<std::uint64_t> rng_seed;
    std::size_t trials = 20'000;
    bool prune = true;
    /// When false, elapsed_ms is written as 0 so output is byte-stable.
    bool timing = true;
    /// Propagation probability for the degree-discount baseline.
    double discount_p = 0.01;
};

/// Everything a command needs about one graph.
struct ExperimentContext {
    InfluenceGraph graph;
    std::shared_ptr<const TransmissionMatrix> t;
    DampingConfig lambda;
    SolverOptions solver;
};

inline ExperimentContext make_context(InfluenceGraph g, const ExperimentConfig& cfg) {
    if (cfg.edge_semantics == "trust")
        g = g.reversed();
    else if (cfg.edge_semantics != "influence")
        throw UsageError("--edge-semantics must be 'influence' or 'trust', got '" + cfg.edge_semantics + "'");
    cfg.solver.validate();
    if (cfg.trials < 1) throw UsageError("--trials must be >= 1");
    ExperimentContext ctx;
    ctx.t = std::make_shared<const TransmissionMatrix>(build_wc_transmission(g));
    if (cfg.lambda_file.empty()) {
        ctx.lambda = DampingConfig::uniform(g.node_count(), cfg.lambda);
    } else {
        std::ifstream in(cfg.lambda_file);
        if (!in) throw ValidationError("cannot open lambda file '" + cfg.lambda_file + "'");
        ctx.lambda = load_lambda_file(in, g, cfg.lambda);
    }
    ctx.graph = std::move(g);
    ctx.solver = cfg.solver;
    return ctx;
}

inline ExperimentContext load_context(const ExperimentConfig& cfg) {
    if (cfg.graph_path.empty()) throw UsageError("--graph is required");
    std::ifstream in(cfg.graph_path);
    if (!in) throw ValidationError("cannot open graph file '" + cfg.graph_path + "'");
    return make_context(load_edge_list(in, cfg.directed), cfg);
}

namespace detail {

inline std::uint64_t require_seed(const ExperimentConfig& cfg, std::string_view command) {
    if (!cfg.rng_seed) throw UsageError(std::string(command) + " is stochastic and requires --seed-rng");
    return *cfg.rng_seed;
}

}  // namespace detail

/// Per-target influence rows, then TOTAL with f_{S -> T} and its upper bound.
/// Empty `target_ids` means every node.
inline void cmd_influence(const ExperimentContext& ctx, std::span<const std::string> seed_ids,
                          std::span<const std::string> target_ids, std::ostream& out) {
    if (seed_ids.empty()) throw UsageError("influence needs at least one seed");
    const NodeSet seeds = ctx.graph.resolve(seed_ids);
    const NodeSet targets =
        target_ids.empty() ? NodeSet::all(ctx.graph.node_count()) : ctx.graph.resolve(target_ids);
    InfluenceEngine engine(ctx.t, ctx.lambda, ctx.solver);
    const auto f = engine.influence_vector(seeds);
    const auto p = targets.size() == engine.size() ? engine.potential_all() : engine.potential(targets);
    const double b = engine.bound(seeds, p).value;

    CsvWriter csv(out, {"node", "influence", "bound"});
    double total = 0.0;
    for (node_index j : targets) {
        total += f.values[j];
        csv.row({ctx.graph.id_of(j), format_real(f.values[j]), ""});
    }
    csv.row({"TOTAL", format_real(total), format_real(b)});
}

inline const std::vector<std::string>& maximize_methods() {
    static const std::vector<std::string> m{"cc", "cf", "celf", "pagerank", "degree", "degreediscount"};
    return m;
}

inline SeedSelection select_seeds(const ExperimentContext& ctx, const ExperimentConfig& cfg,
                                  std::string_view method, std::size_t k) {
    const std::size_t n = ctx.graph.node_count();
    if (k < 1 || k > n)
        throw UsageError("K must lie in [1, " + std::to_string(n) + "], got " + std::to_string(k));
    const GreedyOptions gopts{cfg.prune};
    if (method == "cc" || method == "cf") {
        InfluenceEngine engine(ctx.t, ctx.lambda, ctx.solver);
        if (method == "cc") {
            CompleteEvaluator eval(engine);
            return greedy_select(eval, n, k, gopts);
        }
        FastEvaluator eval(engine);
        return greedy_select(eval, n, k, gopts);
    }
    if (method == "celf")
        return celf_ic_select(*ctx.t, k, cfg.trials, detail::require_seed(cfg, "maximize"), gopts);
    if (method == "pagerank") {
        if (!ctx.lambda.is_uniform()) throw UsageError("pagerank needs a uniform lambda");
        return pagerank_topk(*ctx.t, ctx.lambda[0], k, ctx.solver);
    }
    if (method == "degree") return degree_topk(ctx.graph, k);
    if (method == "degreediscount") return degree_discount_topk(ctx.graph, k, cfg.discount_p);
    throw UsageError("unknown method '" + std::string(method) +
                     "' (expected cc, cf, celf, pagerank, degree or degreediscount)");
}

/// Seeds in selection order with their gains and the Monte-Carlo spread of each prefix.
inline void cmd_maximize(const ExperimentContext& ctx, const ExperimentConfig& cfg,
                         std::string_view method, std::size_t k, std::ostream& out) {
    const std::uint64_t seed = detail::require_seed(cfg, "maximize");
    const auto sel = select_seeds(ctx, cfg, method, k);
    const auto spreads = ic_prefix_spreads(*ctx.t, sel.seeds, cfg.trials, seed);
    CsvWriter csv(out, {"step", "seed", "marginal", "cumulative_spread_mc", "elapsed_ms"});
    for (std::size_t i = 0; i < sel.seeds.size(); ++i)
        csv.row({std::to_string(i + 1), ctx.graph.id_of(sel.seeds[i]), format_real(sel.marginal_gains[i]),
                 format_real(spreads[i]), format_real(cfg.timing ? sel.step_elapsed_ms[i] : 0.0)});
}

inline const std::vector<std::string>& similarity_models() {
    static const std::vector<std::string> m{"lc", "ic-mc", "ic-exact", "st"};
    return m;
}

/// Sim(A, B) for each lambda over one fixed list of seed sets. Empty `explicit_sets`
/// draws `num_sets` random sets from --seed-rng; empty `lambdas` uses the configured lambda.
inline void cmd_similarity(const ExperimentContext& ctx, const ExperimentConfig& cfg,
                           const std::string& model_a, const std::string& model_b, std::size_t num_sets,
                           std::span<const double> lambdas,
                           std::span<const std::vector<std::string>> explicit_sets, std::ostream& out) {
    for (const auto& m : {model_a, model_b})
        if (std::find(similarity_models().begin(), similarity_models().end(), m) == similarity_models().end())
            throw UsageError("unknown model '" + m + "' (expected lc, ic-mc, ic-exact or st)");
    if ((model_a == "ic-exact" || model_b == "ic-exact") && ctx.t->nonzeros() > ic_exact_edge_guard)
        throw GuardError("ic-exact is limited to " + std::to_string(ic_exact_edge_guard) +
                         " edges; graph has " + std::to_string(ctx.t->nonzeros()));

    std::vector<NodeSet> sets;
    if (explicit_sets.empty()) {
        if (num_sets < 1) throw UsageError("--num-sets must be >= 1");
        sets = sample_sets(ctx.graph.node_count(), num_sets, detail::require_seed(cfg, "similarity"));
    } else {
        for (const auto& ids : explicit_sets) {
            if (ids.empty()) throw UsageError("sample sets must be nonempty");
            sets.push_back(ctx.graph.resolve(ids));
        }
    }
    std::uint64_t mc_seed = 0;
    if (model_a == "ic-mc" || model_b == "ic-mc") mc_seed = detail::require_seed(cfg, "similarity with ic-mc");

    const TransmissionMatrix& t = *ctx.t;
    auto fixed_vectors = [&](const std::string& model) {
        std::vector<std::vector<double>> v;
        if (model == "lc") return v;
        v.reserve(sets.size());
        for (const auto& s : sets) {
            if (model == "ic-mc")
                v.push_back(ic_simulate(t, s, cfg.trials, mc_seed).activation_prob);
            else if (model == "ic-exact")
                v.push_back(ic_exact(t, s));
            else
                v.push_back(st_fixed_point(t, s, ctx.solver).values);
        }
        return v;
    };
    const auto fixed_a = fixed_vectors(model_a);
    const auto fixed_b = fixed_vectors(model_b);

    std::vector<DampingConfig> sweep;
    if (lambdas.empty())
        sweep.emplace_back(ctx.lambda);
    else
        for (double l : lambdas) sweep.emplace_back(DampingConfig::uniform(ctx.graph.node_count(), l));

    CsvWriter csv(out, {"lambda", "sim"});
    for (std::size_t li = 0; li < sweep.size(); ++li) {
        std::optional<InfluenceEngine> engine;
        if (model_a == "lc" || model_b == "lc") engine.emplace(ctx.t, sweep[li], ctx.solver);
        double sum = 0.0;
        for (std::size_t k = 0; k < sets.size(); ++k) {
            std::vector<double> lc;
            if (engine) lc = engine->influence_vector(sets[k]).values;
            const auto& a = model_a == "lc" ? lc : fixed_a[k];
            const auto& b = model_b == "lc" ? lc : fixed_b[k];
            sum += cosine_similarity(a, b);
        }
        const std::string label = lambdas.empty() ? (ctx.lambda.is_uniform() && ctx.lambda.size() > 0
                                                         ? format_real(ctx.lambda[0])
                                                         : std::string("file"))
                                                  : format_real(lambdas[li]);
        csv.row({label, format_real(sum / static_cast<double>(sets.size()))});
    }
}

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    /// RMS residual divided by mean(y).
    double cv = 0.0;
    /// Least squares through the origin, y = k x. Never below 1 when every y >= x.
    double origin_slope = 0.0;
};

/// Ordinary least squares y = slope * x + intercept.
inline LineFit fit_line(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    if (n < 2 || y.size() != n) throw ValidationError("line fit needs at least two paired points");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxy = 0.0, sxx = 0.0, rxy = 0.0, rxx = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        rxy += x[i] * y[i];
        rxx += x[i] * x[i];
    }
    LineFit fit;
    fit.origin_slope = rxx > 0.0 ? rxy / rxx : std::nan("");
    fit.slope = sxx > 0.0 ? sxy / sxx : std::nan("");
    fit.intercept = my - fit.slope * mx;
    double rss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = y[i] - (fit.slope * x[i] + fit.intercept);
        rss += r * r;
    }
    fit.cv = std::sqrt(rss / static_cast<double>(n)) / my;
    return fit;
}

/// Random (S, V) pairs of set influence f and its bound b, then the OLS fit of b on f.
inline LineFit cmd_boundfit(const ExperimentContext& ctx, const ExperimentConfig& cfg,
                            std::size_t num_pairs, std::ostream& out) {
    if (num_pairs < 2) throw UsageError("--pairs must be >= 2");
    const auto sets = sample_sets(ctx.graph.node_count(), num_pairs, detail::require_seed(cfg, "boundfit"));
    InfluenceEngine engine(ctx.t, ctx.lambda, ctx.solver);
    const auto& p = engine.potential_all();
    std::vector<double> f(sets.size()), b(sets.size());
    CsvWriter csv(out, {"f", "b"});
    for (std::size_t k = 0; k < sets.size(); ++k) {
        f[k] = engine.influence_vector(sets[k]).total;
        b[k] = engine.bound(sets[k], p).value;
        csv.row({format_real(f[k]), format_real(b[k])});
    }
    const auto fit = fit_line(f, b);
    csv.row({"SLOPE", format_real(fit.slope)});
    csv.row({"INTERCEPT", format_real(fit.intercept)});
    csv.row({"CV", format_real(fit.cv)});
    csv.row({"ORIGIN_SLOPE", format_real(fit.origin_slope)});
    return fit;
}

/// Synthetic edge list: "er" takes `size_param` arcs, "pa" takes `size_param` links per node.
inline void cmd_gen(std::string_view model, std::size_t nodes, std::size_t size_param, std::uint64_t seed,
                    std::ostream& out) {
    if (model == "er")
        write_generated(erdos_renyi(nodes, size_param, seed), out);
    else if (model == "pa")
        write_generated(preferential_attachment(nodes, size_param, seed), out);
    else
        throw UsageError("unknown generator '" + std::string(model) + "' (expected er or pa)");
}

}  // namespace circuitflow
