#pragma once

// Shared graphs and seeded random instances.

#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "circuitflow/circuitflow.hpp"

namespace fixtures {

using namespace circuitflow;

inline InfluenceGraph parse(const std::string& text, bool directed = true) {
    std::istringstream in(text);
    return load_edge_list(in, directed);
}

/// 1->2, 1->3, 2->3.
inline InfluenceGraph g3() { return parse("1 2\n1 3\n2 3\n"); }
/// g3 plus 3->1.
inline InfluenceGraph g3c() { return parse("1 2\n1 3\n2 3\n3 1\n"); }

struct Instance {
    InfluenceGraph graph;
    std::shared_ptr<const TransmissionMatrix> t;
    DampingConfig lambda;
};

inline Instance make_instance(InfluenceGraph g, double lambda = 0.2) {
    Instance in;
    in.t = std::make_shared<const TransmissionMatrix>(build_wc_transmission(g));
    in.lambda = DampingConfig::uniform(g.node_count(), lambda);
    in.graph = std::move(g);
    return in;
}

inline Instance g3_instance() { return make_instance(g3()); }
inline Instance g3c_instance() { return make_instance(g3c()); }

/// Random directed graph on ids 0..n-1; every node appears, arcs drawn with probability p.
inline InfluenceGraph random_graph(std::mt19937_64& rng, std::size_t n, double p) {
    std::bernoulli_distribution coin(p);
    std::uniform_real_distribution<double> weight(0.5, 2.0);
    std::vector<RawEdge> edges;
    std::vector<std::string> ids;
    for (std::size_t i = 0; i < n; ++i) {
        ids.push_back(std::to_string(i));
        for (std::size_t j = 0; j < n; ++j)
            if (i != j && coin(rng)) edges.push_back({std::to_string(i), std::to_string(j), weight(rng), 0});
    }
    return InfluenceGraph::from_edges(edges, true, ids);
}

/// Random instance: n in [lo, hi], density, WC or rescaled transmission, per-node or uniform lambda.
inline Instance random_instance(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
    std::uniform_int_distribution<std::size_t> size(lo, hi);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const std::size_t n = size(rng);
    const double density = 0.02 + 0.25 * u(rng);
    Instance in;
    in.graph = random_graph(rng, n, density);
    auto t = build_wc_transmission(in.graph);
    if (u(rng) < 0.5) {
        // substochastic: shrink every column by its own factor
        auto trip = t.triplets();
        std::vector<double> factor(n);
        for (auto& f : factor) f = 0.3 + 0.7 * u(rng);
        for (auto& e : trip) e.value *= factor[e.to];
        t = TransmissionMatrix::from_triplets(n, std::move(trip));
    }
    in.t = std::make_shared<const TransmissionMatrix>(std::move(t));
    if (u(rng) < 0.5) {
        in.lambda = DampingConfig::uniform(n, 0.05 + 0.95 * u(rng));
    } else {
        std::vector<double> l(n);
        for (auto& x : l) x = 0.05 + 0.95 * u(rng);
        in.lambda = DampingConfig(std::move(l));
    }
    return in;
}

/// Random nonempty subset of [0, n) with size in [1, max_size].
inline NodeSet random_set(std::mt19937_64& rng, std::size_t n, std::size_t max_size) {
    std::uniform_int_distribution<std::size_t> size(1, std::min(n, max_size));
    std::uniform_int_distribution<node_index> pick(0, static_cast<node_index>(n - 1));
    const std::size_t k = size(rng);
    std::vector<node_index> v;
    while (NodeSet(v).size() < k) v.push_back(pick(rng));
    return NodeSet(std::move(v));
}

}  // namespace fixtures
