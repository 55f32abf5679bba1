#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "circuitflow/errors.hpp"
#include "circuitflow/solver.hpp"
#include "circuitflow/transmission.hpp"
#include "circuitflow/types.hpp"

namespace circuitflow {

/// Per-seed coefficients nu_S solving P_SS nu = e.
struct NuCorrection {
    NodeSet seed_set;
    std::vector<double> values;  // aligned with seed_set order
};

/// Largest seed set handled by the dense minor solve.
inline constexpr std::size_t max_minor_size = 10'000;

namespace detail {

/// `column_of(k)` returns the basis column of the k-th member of `seeds`.
template <class ColumnOf>
NuCorrection solve_nu(const NodeSet& seeds, ColumnOf&& column_of) {
    const std::size_t m = seeds.size();
    if (m == 0) throw ValidationError("seed set must be nonempty");
    if (m > max_minor_size)
        throw GuardError("seed set of size " + std::to_string(m) + " exceeds the dense minor guard of " +
                         std::to_string(max_minor_size));
    Eigen::MatrixXd minor(m, m);
    for (std::size_t c = 0; c < m; ++c) {
        const BasisColumn& col = column_of(c);
        if (col.node != seeds[c]) throw ContractViolation("nu_correction: column/seed mismatch");
        for (std::size_t r = 0; r < m; ++r) minor(r, c) = col.values[seeds[r]];
    }
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(minor);
    Eigen::VectorXd nu = lu.solve(Eigen::VectorXd::Ones(m));
    if (!nu.allFinite()) throw ContractViolation("nu_correction: singular minor");
    return NuCorrection{seeds, std::vector<double>(nu.data(), nu.data() + m)};
}

}  // namespace detail

/// `columns[k]` must be the basis column of the k-th smallest member of `seeds`.
inline NuCorrection nu_correction(const NodeSet& seeds, std::span<const BasisColumn> columns) {
    if (columns.size() != seeds.size())
        throw ContractViolation("nu_correction: one column per seed required");
    return detail::solve_nu(seeds, [&](std::size_t k) -> const BasisColumn& { return columns[k]; });
}

struct BoundValue {
    NodeSet seed_set;
    NodeSet target_set;
    double value = 0.0;
};

/// b = sum_{j in S} ((1 + lambda_j) - sum_{k in S} t_kj) p_{j -> T}. No solve.
inline BoundValue upper_bound(const NodeSet& seeds, const PotentialVector& p_target,
                              const TransmissionMatrix& t, const DampingConfig& lambda) {
    seeds.require_valid(t.size(), "seed set");
    if (p_target.values.size() != t.size() || lambda.size() != t.size())
        throw ValidationError("bound inputs have mismatched sizes");
    double b = 0.0;
    for (node_index j : seeds) {
        double inside = 0.0;
        for (const Entry& e : t.column(j))
            if (seeds.contains(e.node)) inside += e.value;
        b += ((1.0 + lambda[j]) - inside) * p_target.values[j];
    }
    return BoundValue{seeds, p_target.target_set, b};
}

/// LC-model queries over one (T, lambda) context with memoized basis columns.
///
/// Safe for concurrent use; columns are computed on first request and never evicted.
class InfluenceEngine {
public:
    InfluenceEngine(std::shared_ptr<const TransmissionMatrix> t, DampingConfig lambda,
                    SolverOptions opts = {})
        : t_(std::move(t)), lambda_(std::move(lambda)), opts_(opts),
          transposed_(transposed_circuit_system(*t_, lambda_)),
          direct_(circuit_system(*t_, lambda_)) {
        opts_.validate();
    }

    std::size_t size() const noexcept { return t_->size(); }
    const TransmissionMatrix& transmission() const noexcept { return *t_; }
    const DampingConfig& damping() const noexcept { return lambda_; }
    const SolverOptions& options() const noexcept { return opts_; }

    std::shared_ptr<const BasisColumn> column(node_index i) const {
        return cached(i)->column;
    }

    /// p_{i -> V} read off column i (sum_j p_ji).
    double column_total(node_index i) const { return cached(i)->total; }

    std::size_t cached_columns() const {
        std::shared_lock lock(memo_mutex_);
        return memo_.size();
    }

    /// p_{. -> V}, solved once.
    const PotentialVector& potential_all() const {
        std::call_once(all_once_, [this] {
            potential_all_ = potential_vector(direct_, NodeSet::all(size()), opts_);
        });
        return potential_all_;
    }

    PotentialVector potential(const NodeSet& targets) const {
        return potential_vector(direct_, targets, opts_);
    }

    NuCorrection nu(const NodeSet& seeds) const {
        seeds.require_valid(size(), "seed set");
        auto cols = columns_for(seeds);
        return detail::solve_nu(seeds, [&](std::size_t k) -> const BasisColumn& { return *cols[k]; });
    }

    /// f_S = sum_s nu_s P_{.s}, with seed entries set to 1.
    InfluenceVector influence_vector(const NodeSet& seeds) const {
        seeds.require_valid(size(), "seed set");
        auto cols = columns_for(seeds);
        auto nu = detail::solve_nu(seeds, [&](std::size_t k) -> const BasisColumn& { return *cols[k]; });
        InfluenceVector f;
        f.seed_set = seeds;
        f.values.assign(size(), 0.0);
        for (std::size_t k = 0; k < seeds.size(); ++k) {
            const double w = nu.values[k];
            const auto& p = cols[k]->values;
            for (std::size_t j = 0; j < p.size(); ++j) f.values[j] += w * p[j];
        }
        for (node_index s : seeds) f.values[s] = 1.0;
        f.total = ordered_sum(f.values);
        return f;
    }

    /// f_{S -> V} in O(|S|^2) from memoized columns and their totals.
    double total_influence(const NodeSet& seeds) const {
        seeds.require_valid(size(), "seed set");
        auto cols = columns_for(seeds);
        auto nu = detail::solve_nu(seeds, [&](std::size_t k) -> const BasisColumn& { return *cols[k]; });
        double total = static_cast<double>(seeds.size());
        for (std::size_t k = 0; k < seeds.size(); ++k) {
            double off_seed = column_total(seeds[k]);
            for (node_index i : seeds) off_seed -= cols[k]->values[i];
            total += nu.values[k] * off_seed;
        }
        return total;
    }

    /// f_{i -> j} = p_ji / p_ii.
    double influence_pair(node_index i, node_index j) const {
        check_index(i);
        check_index(j);
        if (i == j) return 1.0;
        auto c = column(i);
        return c->values[j] / c->values[i];
    }

    double influence_set_to_set(const NodeSet& seeds, const NodeSet& targets) const {
        targets.require_valid(size(), "target set");
        auto f = influence_vector(seeds);
        if (targets.size() == size()) return f.total;
        double s = 0.0;
        for (node_index j : targets) s += f.values[j];
        return s;
    }

    /// a_{i -> T} = p_{i -> T} / p_ii.
    double authority(node_index i, const NodeSet& targets) const {
        check_index(i);
        targets.require_valid(size(), "target set");
        auto c = column(i);
        double s = 0.0;
        for (node_index j : targets) s += c->values[j];
        return s / c->values[i];
    }

    BoundValue bound(const NodeSet& seeds, const PotentialVector& p_target) const {
        return upper_bound(seeds, p_target, *t_, lambda_);
    }

private:
    struct Memo {
        std::shared_ptr<const BasisColumn> column;
        double total = 0.0;
    };

    void check_index(node_index i) const {
        if (i >= size())
            throw ValidationError("node index " + std::to_string(i) + " outside [0, " +
                                  std::to_string(size()) + ")");
    }

    std::shared_ptr<const Memo> cached(node_index i) const {
        check_index(i);
        {
            std::shared_lock lock(memo_mutex_);
            auto it = memo_.find(i);
            if (it != memo_.end()) return it->second;
        }
        auto col = std::make_shared<const BasisColumn>(basis_column(transposed_, i, opts_));
        auto memo = std::make_shared<const Memo>(Memo{col, ordered_sum(col->values)});
        std::unique_lock lock(memo_mutex_);
        return memo_.try_emplace(i, std::move(memo)).first->second;
    }

    std::vector<std::shared_ptr<const BasisColumn>> columns_for(const NodeSet& seeds) const {
        std::vector<std::shared_ptr<const BasisColumn>> cols;
        cols.reserve(seeds.size());
        for (node_index s : seeds) cols.push_back(column(s));
        return cols;
    }

    std::shared_ptr<const TransmissionMatrix> t_;
    DampingConfig lambda_;
    SolverOptions opts_;
    SparseSystem transposed_;
    SparseSystem direct_;

    mutable std::shared_mutex memo_mutex_;
    mutable std::unordered_map<node_index, std::shared_ptr<const Memo>> memo_;
    mutable std::once_flag all_once_;
    mutable PotentialVector potential_all_;
};

}  // namespace circuitflow
