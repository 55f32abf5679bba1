// circuitflow command-line front end.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "circuitflow/circuitflow.hpp"

namespace cf = circuitflow;

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kData = 2, kNonConvergence = 3 };

std::vector<std::vector<std::string>> split_sets(const std::string& text) {
    std::vector<std::vector<std::string>> sets;
    std::stringstream outer(text);
    std::string group;
    while (std::getline(outer, group, ';')) {
        std::vector<std::string> ids;
        std::stringstream inner(group);
        std::string id;
        while (std::getline(inner, id, ','))
            if (!id.empty()) ids.push_back(id);
        sets.push_back(std::move(ids));
    }
    return sets;
}

void emit(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw cf::ValidationError("cannot write output file '" + path + "'");
    out << text;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Linear-circuit social influence: set influence, bounds and seed selection"};
    app.require_subcommand(1);

    cf::ExperimentConfig cfg;
    std::uint64_t rng_seed = 0;
    std::string out_path;
    bool no_prune = false;
    bool no_timing = false;

    app.add_option("--graph", cfg.graph_path, "edge list file (src dst [weight])");
    app.add_flag("--directed,!--undirected", cfg.directed, "treat edges as directed (default)");
    app.add_option("--edge-semantics", cfg.edge_semantics, "influence | trust")
        ->check(CLI::IsMember({"influence", "trust"}));
    auto* lam = app.add_option("--lambda", cfg.lambda, "uniform damping coefficient (default 0.2)");
    app.add_option("--lambda-file", cfg.lambda_file, "per-node 'node lambda' lines")->excludes(lam);
    app.add_option("--tol", cfg.solver.tolerance, "solver tolerance (default 1e-9)");
    app.add_option("--max-iter", cfg.solver.max_iterations, "solver sweep cap (default 10000)");
    auto* seed_opt = app.add_option("--seed-rng", rng_seed, "seed for every random choice");
    app.add_option("--trials", cfg.trials, "Monte-Carlo trials (default 20000)");
    app.add_option("--out", out_path, "output path (default stdout)");
    app.add_flag("--no-prune", no_prune, "exhaustive greedy without lazy pruning");
    app.add_flag("--no-timing", no_timing, "write elapsed_ms as 0");

    auto* influence = app.add_subcommand("influence", "influence of a seed set on each target");
    std::vector<std::string> seeds, targets;
    influence->add_option("--seeds", seeds, "seed ids")->delimiter(',')->required();
    influence->add_option("--targets", targets, "target ids (default ALL)")->delimiter(',');

    auto* maximize = app.add_subcommand("maximize", "select K seeds");
    std::string method;
    std::size_t k = 0;
    maximize->add_option("--method", method, "cc | cf | celf | pagerank | degree | degreediscount")->required();
    maximize->add_option("-K,--k", k, "number of seeds")->required();
    maximize->add_option("--dd-p", cfg.discount_p, "degree-discount propagation probability (default 0.01)");

    auto* similarity = app.add_subcommand("similarity", "cosine similarity of two models per lambda");
    std::string model_a = "lc", model_b = "ic-mc", sets_text;
    std::size_t num_sets = 1000;
    std::vector<double> lambdas;
    similarity->add_option("--model-a", model_a, "lc | ic-mc | ic-exact | st (default lc)");
    similarity->add_option("--model-b", model_b, "lc | ic-mc | ic-exact | st (default ic-mc)");
    similarity->add_option("--num-sets", num_sets, "random sample sets (default 1000)");
    similarity->add_option("--lambdas", lambdas, "comma-separated lambda sweep")->delimiter(',');
    similarity->add_option("--sample-sets", sets_text, "explicit sets, e.g. \"1,2;3\"");

    auto* boundfit = app.add_subcommand("boundfit", "influence vs upper bound over random seed sets");
    std::size_t pairs = 1000;
    boundfit->add_option("--pairs", pairs, "number of (f, b) pairs (default 1000)");

    auto* gen = app.add_subcommand("gen", "write a synthetic edge list");
    std::string gen_model;
    std::size_t nodes = 0, edges = 0, attach = 0;
    gen->add_option("--model", gen_model, "er | pa")->required();
    gen->add_option("--nodes", nodes, "node count")->required();
    gen->add_option("--edges", edges, "arc count (er)");
    gen->add_option("--attach", attach, "links per new node (pa)");

    for (auto* sub : {influence, maximize, similarity, boundfit, gen}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kUsage;
    }

    if (*seed_opt) cfg.rng_seed = rng_seed;
    cfg.prune = !no_prune;
    cfg.timing = !no_timing;

    try {
        std::ostringstream text;
        if (gen->parsed()) {
            if (!cfg.rng_seed) throw cf::UsageError("gen requires --seed-rng");
            cf::cmd_gen(gen_model, nodes, gen_model == "pa" ? attach : edges, *cfg.rng_seed, text);
        } else {
            const auto ctx = cf::load_context(cfg);
            if (influence->parsed()) {
                if (targets.size() == 1 && targets[0] == "ALL") targets.clear();
                cf::cmd_influence(ctx, seeds, targets, text);
            } else if (maximize->parsed()) {
                cf::cmd_maximize(ctx, cfg, method, k, text);
            } else if (similarity->parsed()) {
                const auto sets = sets_text.empty() ? std::vector<std::vector<std::string>>{} : split_sets(sets_text);
                cf::cmd_similarity(ctx, cfg, model_a, model_b, num_sets, lambdas, sets, text);
            } else if (boundfit->parsed()) {
                cf::cmd_boundfit(ctx, cfg, pairs, text);
            }
        }
        emit(out_path, text.str());
        return kOk;
    } catch (const cf::UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const cf::NonConvergenceError& e) {
        std::cerr << "solver error: " << e.what() << '\n';
        return kNonConvergence;
    } catch (const cf::Error& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return kData;
    } catch (const std::logic_error& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return kData;
    }
}
