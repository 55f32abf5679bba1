#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <queue>
#include <string>
#include <vector>

#include "circuitflow/errors.hpp"
#include "circuitflow/graph.hpp"
#include "circuitflow/influence.hpp"
#include "circuitflow/parallel.hpp"
#include "circuitflow/propagation.hpp"
#include "circuitflow/solver.hpp"
#include "circuitflow/transmission.hpp"
#include "circuitflow/types.hpp"

namespace circuitflow {

struct SeedSelection {
    std::vector<node_index> seeds;
    std::vector<double> marginal_gains;
    /// Number of gain evaluations performed.
    std::size_t evaluations = 0;
    double elapsed_ms = 0.0;
    /// Cumulative wall time at the end of each step.
    std::vector<double> step_elapsed_ms;
};

struct GreedyOptions {
    /// Lazy upper-bound pruning; false scans every candidate each step.
    bool prune = true;
};

/// Tolerance under which two gains count as equal (the lower id then wins).
inline double tie_epsilon(double v) { return 1e-9 * std::max(1.0, std::abs(v)); }

/// True when (va, a) should be preferred over the incumbent (vb, b).
inline bool beats(double va, node_index a, double vb, node_index b) {
    const double eps = tie_epsilon(vb);
    if (va > vb + eps) return true;
    if (va < vb - eps) return false;
    return a < b;
}

namespace detail {

inline void check_k(std::size_t k, std::size_t n) {
    if (k < 1 || k > n)
        throw ValidationError("K must lie in [1, " + std::to_string(n) + "], got " + std::to_string(k));
}

struct QueueEntry {
    double bound;
    node_index node;
    friend bool operator<(const QueueEntry& a, const QueueEntry& b) {
        // max-heap on bound, then lower id first
        if (a.bound != b.bound) return a.bound < b.bound;
        return a.node > b.node;
    }
};

using clock = std::chrono::steady_clock;

inline double ms_since(clock::time_point start) {
    return std::chrono::duration<double, std::milli>(clock::now() - start).count();
}

}  // namespace detail

/// Greedy maximization over an evaluator exposing
///   double initial_bound(node_index s)      upper bound on the first gain of s
///   double gain(const NodeSet& S, node_index s)
///   void on_select(const NodeSet& S, node_index s, double gain)
/// With pruning, each candidate keeps its last evaluated gain as a bound for later steps,
/// which is exact whenever gains never grow as S grows.
template <class Evaluator>
SeedSelection greedy_select(Evaluator& eval, std::size_t n, std::size_t k, GreedyOptions opts = {}) {
    detail::check_k(k, n);
    const auto start = detail::clock::now();
    SeedSelection out;
    NodeSet chosen;

    auto commit = [&](node_index s, double g) {
        eval.on_select(chosen, s, g);
        chosen = chosen.with(s);
        out.seeds.push_back(s);
        out.marginal_gains.push_back(g);
        out.step_elapsed_ms.push_back(detail::ms_since(start));
    };

    if (!opts.prune) {
        std::vector<char> taken(n, 0);
        for (std::size_t step = 0; step < k; ++step) {
            std::optional<node_index> best;
            double best_v = 0.0;
            for (node_index s = 0; s < n; ++s) {
                if (taken[s]) continue;
                const double g = eval.gain(chosen, s);
                ++out.evaluations;
                if (!best || beats(g, s, best_v, *best)) {
                    best = s;
                    best_v = g;
                }
            }
            taken[*best] = 1;
            commit(*best, best_v);
        }
        out.elapsed_ms = detail::ms_since(start);
        return out;
    }

    std::priority_queue<detail::QueueEntry> queue;
    for (node_index s = 0; s < n; ++s) queue.push({eval.initial_bound(s), s});

    std::vector<detail::QueueEntry> parked;
    for (std::size_t step = 0; step < k; ++step) {
        std::optional<detail::QueueEntry> best;
        parked.clear();
        while (!queue.empty()) {
            const auto top = queue.top();
            if (best && top.bound < best->bound - tie_epsilon(best->bound)) break;
            queue.pop();
            if (best && !beats(top.bound, top.node, best->bound, best->node)) {
                parked.push_back(top);  // can at most tie, and would lose the tie
                continue;
            }
            const double g = eval.gain(chosen, top.node);
            ++out.evaluations;
            const detail::QueueEntry fresh{g, top.node};
            if (!best || beats(g, top.node, best->bound, best->node)) {
                if (best) parked.push_back(*best);
                best = fresh;
            } else {
                parked.push_back(fresh);
            }
        }
        for (const auto& e : parked) queue.push(e);
        commit(best->node, best->bound);
    }
    out.elapsed_ms = detail::ms_since(start);
    return out;
}

/// Exact LC marginal gain f_{S+s -> V} - f_{S -> V}; `f_s_total` is f_{S -> V} (0 for empty S).
inline double delta_complete(const InfluenceEngine& engine, const NodeSet& seeds, node_index s,
                             double f_s_total) {
    if (seeds.contains(s)) throw ValidationError("candidate already in the seed set");
    return engine.total_influence(seeds.with(s)) - f_s_total;
}

/// Bound-difference estimate (1 + lambda_s - sum_{j in S} t_js) p_s - sum_{j in S} t_sj p_j.
inline double delta_fast(const NodeSet& seeds, node_index s, const PotentialVector& p_all,
                         const TransmissionMatrix& t, const DampingConfig& lambda) {
    if (seeds.contains(s)) throw ValidationError("candidate already in the seed set");
    double into = 0.0, out_of = 0.0;
    for (node_index j : seeds) {
        into += t.at(j, s);
        out_of += t.at(s, j) * p_all.values[j];
    }
    return (1.0 + lambda[s] - into) * p_all.values[s] - out_of;
}

/// Circuit_Complete: exact marginal gains from memoized basis columns.
class CompleteEvaluator {
public:
    explicit CompleteEvaluator(const InfluenceEngine& engine) : engine_(engine) {}

    double initial_bound(node_index s) const {
        return (1.0 + engine_.damping()[s]) * engine_.potential_all().values[s];
    }
    double gain(const NodeSet& seeds, node_index s) const {
        return delta_complete(engine_, seeds, s, total_);
    }
    void on_select(const NodeSet& seeds, node_index s, double) {
        total_ = engine_.total_influence(seeds.with(s));
    }
    double current_total() const noexcept { return total_; }

private:
    const InfluenceEngine& engine_;
    double total_ = 0.0;
};

/// Circuit_Fast: O(|S|) estimate from the potential vector p_V.
class FastEvaluator {
public:
    explicit FastEvaluator(const InfluenceEngine& engine) : engine_(engine) {}

    double initial_bound(node_index s) const {
        return (1.0 + engine_.damping()[s]) * engine_.potential_all().values[s];
    }
    double gain(const NodeSet& seeds, node_index s) const {
        return delta_fast(seeds, s, engine_.potential_all(), engine_.transmission(), engine_.damping());
    }
    void on_select(const NodeSet&, node_index, double) {}

private:
    const InfluenceEngine& engine_;
};

/// CELF on Monte-Carlo IC spread. Candidate s always uses its own trial stream, and
/// each trial measures reach(S + s) minus reach(S) on one live-edge graph.
class CelfIcEvaluator {
public:
    CelfIcEvaluator(const TransmissionMatrix& t, std::size_t trials, std::uint64_t rng_seed)
        : t_(t), trials_(trials), rng_seed_(rng_seed) {
        if (trials < 1) throw ValidationError("trials must be >= 1");
    }

    double initial_bound(node_index) const { return std::numeric_limits<double>::infinity(); }

    double gain(const NodeSet& seeds, node_index s) const {
        const std::uint64_t stream = detail::splitmix64(rng_seed_ ^ detail::splitmix64(s + 1ULL));
        const std::size_t workers = thread_count();
        std::vector<std::uint64_t> added(std::min(workers, trials_), 0);
        parallel_chunks(trials_, workers, [&](std::size_t begin, std::size_t end, std::size_t w) {
            detail::LiveEdgeWalker walker(t_);
            std::uint64_t sum = 0;
            for (std::size_t k = begin; k < end; ++k) {
                walker.reset(detail::trial_key(stream, k));
                for (node_index v : seeds) walker.spread_from(v);
                sum += walker.probe(s);
            }
            added[w] = sum;
        });
        std::uint64_t total = 0;
        for (auto a : added) total += a;
        return static_cast<double>(total) / static_cast<double>(trials_);
    }

    void on_select(const NodeSet&, node_index, double) {}

private:
    const TransmissionMatrix& t_;
    std::size_t trials_;
    std::uint64_t rng_seed_;
};

inline SeedSelection celf_ic_select(const TransmissionMatrix& t, std::size_t k, std::size_t trials,
                                    std::uint64_t rng_seed, GreedyOptions opts = {}) {
    CelfIcEvaluator eval(t, trials, rng_seed);
    return greedy_select(eval, t.size(), k, opts);
}

/// Topic-sensitive PageRank x = d T x + (1 - d)/|S_t| e_t with d = 1/(1 + lambda).
inline std::vector<double> pagerank_scores(const TransmissionMatrix& t, double lambda,
                                           const NodeSet& topic, const SolverOptions& opts = {}) {
    const std::size_t n = t.size();
    topic.require_valid(n, "topic set");
    if (!(std::isfinite(lambda) && lambda >= DampingConfig::min_lambda))
        throw ValidationError("pagerank lambda must be finite and >= 1e-9");
    const double d = 1.0 / (1.0 + lambda);
    std::vector<double> diag(n, 1.0);
    std::vector<std::size_t> ptr(n + 1, 0);
    std::vector<Entry> off;
    off.reserve(t.nonzeros());
    for (node_index i = 0; i < n; ++i) {
        for (const Entry& e : t.row(i)) off.push_back({e.node, -d * e.value});
        ptr[i + 1] = off.size();
    }
    std::vector<double> rhs(n, 0.0);
    for (node_index j : topic) rhs[j] = (1.0 - d) / static_cast<double>(topic.size());
    return gauss_seidel(SparseSystem(std::move(diag), std::move(ptr), std::move(off)), rhs, opts).values;
}

namespace detail {

/// Top-k indices of `score` by descending value, ties to the lower index.
inline SeedSelection top_k(const std::vector<double>& score, std::size_t k) {
    check_k(k, score.size());
    const auto start = clock::now();
    std::vector<node_index> order(score.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<node_index>(i);
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(),
                      [&](node_index a, node_index b) {
                          return score[a] != score[b] ? score[a] > score[b] : a < b;
                      });
    SeedSelection out;
    for (std::size_t i = 0; i < k; ++i) {
        out.seeds.push_back(order[i]);
        out.marginal_gains.push_back(score[order[i]]);
        out.step_elapsed_ms.push_back(ms_since(start));
    }
    out.elapsed_ms = ms_since(start);
    return out;
}

}  // namespace detail

/// Top-K PageRank nodes with the whole graph as the topic set.
inline SeedSelection pagerank_topk(const TransmissionMatrix& t, double lambda, std::size_t k,
                                   const SolverOptions& opts = {}) {
    detail::check_k(k, t.size());
    return detail::top_k(pagerank_scores(t, lambda, NodeSet::all(t.size()), opts), k);
}

/// Top-K nodes by out-degree (distinct arcs in the influence direction).
inline SeedSelection degree_topk(const InfluenceGraph& g, std::size_t k) {
    std::vector<double> deg(g.node_count());
    for (node_index i = 0; i < g.node_count(); ++i) deg[i] = static_cast<double>(g.out_degree(i));
    return detail::top_k(deg, k);
}

/// Degree discount: dd_v = d_v - 2 t_v - (d_v - t_v) t_v p, where t_v counts selected
/// nodes with an arc into v.
inline SeedSelection degree_discount_topk(const InfluenceGraph& g, std::size_t k, double p) {
    const std::size_t n = g.node_count();
    detail::check_k(k, n);
    if (!(p > 0.0 && p <= 1.0)) throw ValidationError("degree discount p must lie in (0, 1]");
    const auto start = detail::clock::now();
    std::vector<double> d(n), dd(n), tv(n, 0.0);
    std::vector<char> taken(n, 0);
    for (node_index i = 0; i < n; ++i) d[i] = dd[i] = static_cast<double>(g.out_degree(i));

    SeedSelection out;
    for (std::size_t step = 0; step < k; ++step) {
        std::optional<node_index> best;
        for (node_index v = 0; v < n; ++v)
            if (!taken[v] && (!best || dd[v] > dd[*best])) best = v;
        const node_index u = *best;
        taken[u] = 1;
        out.seeds.push_back(u);
        out.marginal_gains.push_back(dd[u]);
        for (const Arc& a : g.out(u)) {
            const node_index v = a.node;
            if (taken[v]) continue;
            tv[v] += 1.0;
            dd[v] = d[v] - 2.0 * tv[v] - (d[v] - tv[v]) * tv[v] * p;
        }
        out.step_elapsed_ms.push_back(detail::ms_since(start));
    }
    out.elapsed_ms = detail::ms_since(start);
    return out;
}

}  // namespace circuitflow
