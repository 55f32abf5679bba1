#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "circuitflow/errors.hpp"
#include "circuitflow/parallel.hpp"
#include "circuitflow/solver.hpp"
#include "circuitflow/transmission.hpp"
#include "circuitflow/types.hpp"

namespace circuitflow {

struct SimulationResult {
    NodeSet seed_set;
    std::size_t trials = 0;
    std::vector<double> activation_prob;
    double spread = 0.0;
    std::uint64_t rng_seed = 0;
};

struct StInfluenceVector {
    NodeSet seed_set;
    std::vector<double> values;
    std::size_t iterations_used = 0;
};

/// Largest edge count ic_exact will enumerate (2^20 live-edge outcomes).
inline constexpr std::size_t ic_exact_edge_guard = 20;

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

inline std::uint64_t trial_key(std::uint64_t stream, std::uint64_t trial) {
    return splitmix64(splitmix64(stream) ^ (trial * 0xD1B54A32D192ED03ULL));
}

/// Uniform [0, 1) coin for one edge in one trial.
inline double edge_coin(std::uint64_t key, std::uint64_t edge) {
    return static_cast<double>(splitmix64(key ^ splitmix64(edge)) >> 11) * 0x1.0p-53;
}

/// Reachability over the live-edge graph of one trial. Edge k (global row order) is live
/// iff its coin is below t_ij, so every query within a trial sees the same live graph.
class LiveEdgeWalker {
public:
    explicit LiveEdgeWalker(const TransmissionMatrix& t) : t_(t), mark_(t.size(), 0) {}

    /// Starts a fresh trial with nothing active.
    void reset(std::uint64_t key) {
        for (node_index v : active_) mark_[v] = 0;
        active_.clear();
        key_ = key;
    }

    /// Activates `source` and everything newly reachable from it; returns the number added.
    std::size_t spread_from(node_index source) {
        if (mark_[source]) return 0;
        const std::size_t before = active_.size();
        mark_[source] = 1;
        active_.push_back(source);
        for (std::size_t head = before; head < active_.size(); ++head) {
            const node_index u = active_[head];
            const std::size_t base = t_.row_offset(u);
            const auto row = t_.row(u);
            for (std::size_t k = 0; k < row.size(); ++k) {
                const node_index v = row[k].node;
                if (mark_[v]) continue;
                if (edge_coin(key_, base + k) < row[k].value) {
                    mark_[v] = 1;
                    active_.push_back(v);
                }
            }
        }
        return active_.size() - before;
    }

    /// Counts nodes reachable from `source` but not yet active, without activating them.
    std::size_t probe(node_index source) {
        const std::size_t before = active_.size();
        const std::size_t added = spread_from(source);
        for (std::size_t k = before; k < active_.size(); ++k) mark_[active_[k]] = 0;
        active_.resize(before);
        return added;
    }

    std::span<const node_index> active() const noexcept { return active_; }

private:
    const TransmissionMatrix& t_;
    std::vector<char> mark_;
    std::vector<node_index> active_;
    std::uint64_t key_ = 0;
};

}  // namespace detail

/// Monte-Carlo independent cascade. Each trial draws its coins from (rng_seed, trial), so
/// the result does not depend on thread count or scheduling.
inline SimulationResult ic_simulate(const TransmissionMatrix& t, const NodeSet& seeds,
                                    std::size_t trials, std::uint64_t rng_seed) {
    seeds.require_valid(t.size(), "seed set");
    if (trials < 1) throw ValidationError("trials must be >= 1");
    const std::size_t n = t.size();
    const std::size_t workers = thread_count();
    std::vector<std::vector<std::uint64_t>> counts(std::min(workers, trials));
    parallel_chunks(trials, workers, [&](std::size_t begin, std::size_t end, std::size_t w) {
        auto& c = counts[w];
        c.assign(n, 0);
        detail::LiveEdgeWalker walker(t);
        for (std::size_t k = begin; k < end; ++k) {
            walker.reset(detail::trial_key(rng_seed, k));
            for (node_index s : seeds) walker.spread_from(s);
            for (node_index v : walker.active()) ++c[v];
        }
    });
    std::vector<std::uint64_t> total(n, 0);
    for (const auto& c : counts)
        for (std::size_t i = 0; i < c.size(); ++i) total[i] += c[i];

    SimulationResult r;
    r.seed_set = seeds;
    r.trials = trials;
    r.rng_seed = rng_seed;
    r.activation_prob.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        r.activation_prob[i] = static_cast<double>(total[i]) / static_cast<double>(trials);
    for (node_index s : seeds) r.activation_prob[s] = 1.0;
    r.spread = ordered_sum(r.activation_prob);
    return r;
}

/// Mean spread of every prefix of `ordered_seeds`, all on the same per-trial live graphs.
inline std::vector<double> ic_prefix_spreads(const TransmissionMatrix& t,
                                             std::span<const node_index> ordered_seeds,
                                             std::size_t trials, std::uint64_t rng_seed) {
    if (trials < 1) throw ValidationError("trials must be >= 1");
    for (node_index s : ordered_seeds)
        if (s >= t.size()) throw ValidationError("seed index out of range");
    const std::size_t k_max = ordered_seeds.size();
    const std::size_t workers = thread_count();
    std::vector<std::vector<std::uint64_t>> counts(std::min(workers, trials));
    parallel_chunks(trials, workers, [&](std::size_t begin, std::size_t end, std::size_t w) {
        auto& c = counts[w];
        c.assign(k_max, 0);
        detail::LiveEdgeWalker walker(t);
        for (std::size_t k = begin; k < end; ++k) {
            walker.reset(detail::trial_key(rng_seed, k));
            for (std::size_t step = 0; step < k_max; ++step) {
                walker.spread_from(ordered_seeds[step]);
                c[step] += walker.active().size();
            }
        }
    });
    std::vector<double> out(k_max, 0.0);
    for (std::size_t step = 0; step < k_max; ++step) {
        std::uint64_t sum = 0;
        for (const auto& c : counts) sum += c[step];
        out[step] = static_cast<double>(sum) / static_cast<double>(trials);
    }
    return out;
}

/// Exact IC activation probabilities by enumerating every live-edge subgraph.
inline std::vector<double> ic_exact(const TransmissionMatrix& t, const NodeSet& seeds) {
    seeds.require_valid(t.size(), "seed set");
    const std::size_t m = t.nonzeros();
    if (m > ic_exact_edge_guard)
        throw GuardError("ic_exact refuses graphs with more than " + std::to_string(ic_exact_edge_guard) +
                         " edges (got " + std::to_string(m) + ")");
    const std::size_t n = t.size();
    auto trip = t.triplets();  // global row order, matching edge indices

    std::vector<double> prob(n, 0.0);
    std::vector<char> on(n);
    std::vector<node_index> queue;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
        double w = 1.0;
        for (std::size_t e = 0; e < m; ++e) w *= (mask >> e & 1) ? trip[e].value : 1.0 - trip[e].value;
        if (w == 0.0) continue;
        std::fill(on.begin(), on.end(), 0);
        queue.assign(seeds.begin(), seeds.end());
        for (node_index s : seeds) on[s] = 1;
        for (std::size_t head = 0; head < queue.size(); ++head) {
            const node_index u = queue[head];
            const std::size_t base = t.row_offset(u);
            const auto row = t.row(u);
            for (std::size_t k = 0; k < row.size(); ++k)
                if ((mask >> (base + k) & 1) && !on[row[k].node]) {
                    on[row[k].node] = 1;
                    queue.push_back(row[k].node);
                }
        }
        for (std::size_t i = 0; i < n; ++i)
            if (on[i]) prob[i] += w;
    }
    for (double& v : prob) v = std::min(v, 1.0);  // rounding in the weight sum
    for (node_index s : seeds) prob[s] = 1.0;
    return prob;
}

/// Fixed point of f_i = 1 - prod_j (1 - t_ji f_j) with seeds pinned to 1, by synchronous
/// sweeps from zero.
inline StInfluenceVector st_fixed_point(const TransmissionMatrix& t, const NodeSet& seeds,
                                        const SolverOptions& opts = {}) {
    opts.validate();
    seeds.require_valid(t.size(), "seed set");
    const std::size_t n = t.size();
    std::vector<char> pinned(n, 0);
    for (node_index s : seeds) pinned[s] = 1;
    std::vector<double> f(n, 0.0), next(n, 0.0);
    for (node_index s : seeds) f[s] = 1.0;

    double change = 0.0;
    for (std::size_t it = 1; it <= opts.max_iterations; ++it) {
        change = 0.0;
        for (node_index i = 0; i < n; ++i) {
            if (pinned[i]) {
                next[i] = 1.0;
                continue;
            }
            double miss = 1.0;
            for (const Entry& e : t.column(i)) miss *= 1.0 - e.value * f[e.node];
            next[i] = 1.0 - miss;
            change = std::max(change, std::abs(next[i] - f[i]));
        }
        f.swap(next);
        if (change < opts.tolerance) return StInfluenceVector{seeds, std::move(f), it};
    }
    throw NonConvergenceError(opts.max_iterations, change);
}

/// Maps a seed set to a full-length influence vector.
using InfluenceProvider = std::function<std::vector<double>(const NodeSet&)>;

inline double cosine_similarity(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw ContractViolation("cosine_similarity: size mismatch");
    double ab = 0.0, aa = 0.0, bb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ab += a[i] * b[i];
        aa += a[i] * a[i];
        bb += b[i] * b[i];
    }
    if (aa == 0.0 || bb == 0.0) throw ContractViolation("cosine_similarity: zero vector");
    return ab / (std::sqrt(aa) * std::sqrt(bb));
}

/// Mean cosine similarity of the two models' vectors over `sets`, summed in list order.
inline double model_similarity(const InfluenceProvider& a, const InfluenceProvider& b,
                               std::span<const NodeSet> sets) {
    if (sets.empty()) throw ValidationError("model_similarity needs at least one sample set");
    double s = 0.0;
    for (const auto& set : sets) s += cosine_similarity(a(set), b(set));
    return s / static_cast<double>(sets.size());
}

/// Random seed sets: size uniform in {1..min(10, n)}, members uniform without replacement.
inline std::vector<NodeSet> sample_sets(std::size_t n, std::size_t count, std::uint64_t rng_seed) {
    if (n == 0) throw ValidationError("cannot sample seed sets from an empty graph");
    std::mt19937_64 rng(rng_seed);
    std::uniform_int_distribution<std::size_t> size_dist(1, std::min<std::size_t>(10, n));
    std::uniform_int_distribution<node_index> node_dist(0, static_cast<node_index>(n - 1));
    std::vector<NodeSet> out;
    out.reserve(count);
    for (std::size_t c = 0; c < count; ++c) {
        const std::size_t k = size_dist(rng);
        std::vector<node_index> members;
        while (members.size() < k) {
            node_index v = node_dist(rng);
            if (std::find(members.begin(), members.end(), v) == members.end()) members.push_back(v);
        }
        out.emplace_back(std::move(members));
    }
    return out;
}

}  // namespace circuitflow
