#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <ostream>
#include <random>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "circuitflow/errors.hpp"

namespace circuitflow {

/// Directed edge between generated integer node ids.
using GeneratedEdge = std::pair<std::uint32_t, std::uint32_t>;

/// Erdos-Renyi G(n, m): m distinct directed arcs without self-loops, uniform at random.
inline std::vector<GeneratedEdge> erdos_renyi(std::size_t n, std::size_t m, std::uint64_t seed) {
    if (n < 2) throw ValidationError("erdos_renyi needs at least 2 nodes");
    const double max_arcs = static_cast<double>(n) * static_cast<double>(n - 1);
    if (static_cast<double>(m) > max_arcs)
        throw ValidationError("erdos_renyi: " + std::to_string(m) + " arcs exceed the " +
                              std::to_string(n) + "-node maximum");
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::uint32_t> pick(0, static_cast<std::uint32_t>(n - 1));
    std::unordered_set<std::uint64_t> seen;
    seen.reserve(m * 2);
    std::vector<GeneratedEdge> edges;
    edges.reserve(m);
    while (edges.size() < m) {
        const auto a = pick(rng);
        const auto b = pick(rng);
        if (a == b) continue;
        if (seen.insert((std::uint64_t{a} << 32) | b).second) edges.emplace_back(a, b);
    }
    return edges;
}

/// Preferential attachment: node v >= m0 links to `attach` distinct earlier nodes chosen
/// proportionally to degree. Arcs point from the earlier node to the newcomer, so hubs
/// have large out-degree. Starts from a directed ring on the first attach + 1 nodes.
inline std::vector<GeneratedEdge> preferential_attachment(std::size_t n, std::size_t attach,
                                                          std::uint64_t seed) {
    if (attach < 1) throw ValidationError("preferential_attachment: attach must be >= 1");
    const std::size_t m0 = attach + 1;
    if (n < m0) throw ValidationError("preferential_attachment: need at least attach + 1 nodes");
    std::mt19937_64 rng(seed);
    std::vector<GeneratedEdge> edges;
    edges.reserve(n * attach);
    std::vector<std::uint32_t> urn;  // every endpoint once per incident arc
    urn.reserve(2 * n * attach);
    for (std::size_t i = 0; i < m0; ++i) {
        const auto a = static_cast<std::uint32_t>(i);
        const auto b = static_cast<std::uint32_t>((i + 1) % m0);
        edges.emplace_back(a, b);
        urn.push_back(a);
        urn.push_back(b);
    }
    std::vector<std::uint32_t> targets;
    for (std::size_t v = m0; v < n; ++v) {
        targets.clear();
        std::uniform_int_distribution<std::size_t> pick(0, urn.size() - 1);
        while (targets.size() < attach) {
            const auto u = urn[pick(rng)];
            if (std::find(targets.begin(), targets.end(), u) == targets.end()) targets.push_back(u);
        }
        for (auto u : targets) {
            edges.emplace_back(u, static_cast<std::uint32_t>(v));
            urn.push_back(u);
            urn.push_back(static_cast<std::uint32_t>(v));
        }
    }
    return edges;
}

inline void write_generated(const std::vector<GeneratedEdge>& edges, std::ostream& out) {
    for (const auto& [a, b] : edges) out << a << ' ' << b << '\n';
}

}  // namespace circuitflow
