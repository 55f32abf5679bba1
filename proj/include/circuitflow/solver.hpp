#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "circuitflow/errors.hpp"
#include "circuitflow/transmission.hpp"
#include "circuitflow/types.hpp"

namespace circuitflow {

struct SolverOptions {
    /// Convergence: max absolute per-entry change over one full sweep.
    double tolerance = 1e-9;
    std::size_t max_iterations = 10'000;

    void validate() const {
        if (!(tolerance > 0.0)) throw ValidationError("solver tolerance must be > 0");
        if (max_iterations < 1) throw ValidationError("solver max_iterations must be >= 1");
    }
};

/// Square sparse system  diag[i] * x[i] + sum_{(j, a) in row(i)} a * x[j] = b[i].
///
/// Off-diagonal rows must not contain the diagonal index.
class SparseSystem {
public:
    SparseSystem(std::vector<double> diag, std::vector<std::size_t> row_ptr,
                 std::vector<Entry> off_diag)
        : diag_(std::move(diag)), row_ptr_(std::move(row_ptr)), off_(std::move(off_diag)) {
        if (row_ptr_.size() != diag_.size() + 1 || row_ptr_.back() != off_.size())
            throw ContractViolation("SparseSystem: row pointer does not match entries");
        dominant_ = check_dominance();
    }

    std::size_t size() const noexcept { return diag_.size(); }
    double diag(std::size_t i) const { return diag_[i]; }
    std::span<const Entry> row(std::size_t i) const {
        return {off_.data() + row_ptr_[i], off_.data() + row_ptr_[i + 1]};
    }

    /// Strict diagonal dominance by rows or by columns; either guarantees Gauss-Seidel
    /// convergence.
    bool strictly_dominant() const noexcept { return dominant_; }

private:
    bool check_dominance() const {
        const std::size_t n = diag_.size();
        std::vector<double> col_sum(n, 0.0);
        bool rows_ok = true;
        for (std::size_t i = 0; i < n; ++i) {
            double s = 0.0;
            for (const Entry& e : row(i)) {
                if (e.node >= n || e.node == i)
                    throw ContractViolation("SparseSystem: bad off-diagonal index");
                s += std::abs(e.value);
                col_sum[e.node] += std::abs(e.value);
            }
            if (!(std::abs(diag_[i]) > s)) rows_ok = false;
        }
        if (rows_ok) return true;
        for (std::size_t j = 0; j < n; ++j)
            if (!(std::abs(diag_[j]) > col_sum[j])) return false;
        return true;
    }

    std::vector<double> diag_;
    std::vector<std::size_t> row_ptr_;
    std::vector<Entry> off_;
    bool dominant_ = false;
};

struct SolveResult {
    std::vector<double> values;
    std::size_t iterations = 0;
    double last_change = 0.0;
};

/// Gauss-Seidel from the zero vector, sweeping rows in ascending index order.
inline SolveResult gauss_seidel(const SparseSystem& a, std::span<const double> rhs,
                                const SolverOptions& opts) {
    opts.validate();
    const std::size_t n = a.size();
    if (rhs.size() != n) throw ContractViolation("gauss_seidel: rhs size mismatch");
    if (!a.strictly_dominant())
        throw ContractViolation("gauss_seidel: system is not strictly diagonally dominant");
    for (double b : rhs)
        if (!std::isfinite(b)) throw ContractViolation("gauss_seidel: rhs is not finite");

    SolveResult r;
    r.values.assign(n, 0.0);
    auto& x = r.values;
    for (std::size_t it = 1; it <= opts.max_iterations; ++it) {
        double change = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double s = rhs[i];
            for (const Entry& e : a.row(i)) s -= e.value * x[e.node];
            const double next = s / a.diag(i);
            change = std::max(change, std::abs(next - x[i]));
            x[i] = next;
        }
        r.iterations = it;
        r.last_change = change;
        if (change < opts.tolerance) return r;
    }
    throw NonConvergenceError(opts.max_iterations, r.last_change);
}

/// I + Lambda - T'. Row j couples j to its in-neighbours; used for basis columns.
inline SparseSystem transposed_circuit_system(const TransmissionMatrix& t, const DampingConfig& lambda) {
    const std::size_t n = t.size();
    if (lambda.size() != n) throw ValidationError("damping config size does not match graph");
    std::vector<double> diag(n);
    std::vector<std::size_t> ptr(n + 1, 0);
    std::vector<Entry> off;
    off.reserve(t.nonzeros());
    for (node_index j = 0; j < n; ++j) {
        diag[j] = 1.0 + lambda[j];
        for (const Entry& e : t.column(j)) off.push_back({e.node, -e.value});
        ptr[j + 1] = off.size();
    }
    return SparseSystem(std::move(diag), std::move(ptr), std::move(off));
}

/// I + Lambda - T. Row i couples i to its out-neighbours; used for potential vectors.
inline SparseSystem circuit_system(const TransmissionMatrix& t, const DampingConfig& lambda) {
    const std::size_t n = t.size();
    if (lambda.size() != n) throw ValidationError("damping config size does not match graph");
    std::vector<double> diag(n);
    std::vector<std::size_t> ptr(n + 1, 0);
    std::vector<Entry> off;
    off.reserve(t.nonzeros());
    for (node_index i = 0; i < n; ++i) {
        diag[i] = 1.0 + lambda[i];
        for (const Entry& e : t.row(i)) off.push_back({e.node, -e.value});
        ptr[i + 1] = off.size();
    }
    return SparseSystem(std::move(diag), std::move(ptr), std::move(off));
}

/// Column i of the basis matrix P = (I + Lambda - T')^{-1}.
struct BasisColumn {
    node_index node = 0;
    std::vector<double> values;
    std::size_t iterations_used = 0;
};

/// p_{i -> T} = sum_{j in T} p_ji for every node i.
struct PotentialVector {
    NodeSet target_set;
    std::vector<double> values;
};

inline BasisColumn basis_column(const SparseSystem& transposed, node_index i,
                                const SolverOptions& opts) {
    if (i >= transposed.size())
        throw ValidationError("basis column index " + std::to_string(i) + " out of range");
    std::vector<double> e(transposed.size(), 0.0);
    e[i] = 1.0;
    auto r = gauss_seidel(transposed, e, opts);
    return BasisColumn{i, std::move(r.values), r.iterations};
}

inline BasisColumn basis_column(const TransmissionMatrix& t, const DampingConfig& lambda,
                                node_index i, const SolverOptions& opts = {}) {
    return basis_column(transposed_circuit_system(t, lambda), i, opts);
}

/// Solves (I + Lambda - T) p = e_T; one solve yields the potential of every node.
inline PotentialVector potential_vector(const SparseSystem& direct, const NodeSet& targets,
                                        const SolverOptions& opts) {
    targets.require_valid(direct.size(), "target set");
    std::vector<double> e(direct.size(), 0.0);
    for (node_index j : targets) e[j] = 1.0;
    auto r = gauss_seidel(direct, e, opts);
    return PotentialVector{targets, std::move(r.values)};
}

inline PotentialVector potential_vector(const TransmissionMatrix& t, const DampingConfig& lambda,
                                        const NodeSet& targets, const SolverOptions& opts = {}) {
    return potential_vector(circuit_system(t, lambda), targets, opts);
}

/// Influence of S on every node from the system restricted to non-seeds:
/// (1 + lambda_j) f_j - sum_{k not in S} t_kj f_k = sum_{k in S} t_kj  for j not in S.
/// Seed entries are set to 1. Cost per sweep is O(|E|) regardless of |S|.
inline InfluenceVector reduced_influence(const TransmissionMatrix& t, const DampingConfig& lambda,
                                         const NodeSet& seeds, const SolverOptions& opts = {}) {
    const std::size_t n = t.size();
    seeds.require_valid(n, "seed set");
    if (lambda.size() != n) throw ValidationError("damping config size does not match graph");

    std::vector<char> is_seed(n, 0);
    for (node_index s : seeds) is_seed[s] = 1;
    // compact numbering of non-seeds, ascending dense index
    std::vector<node_index> local(n, 0);
    std::vector<node_index> global;
    global.reserve(n - seeds.size());
    for (node_index j = 0; j < n; ++j)
        if (!is_seed[j]) {
            local[j] = static_cast<node_index>(global.size());
            global.push_back(j);
        }

    const std::size_t m = global.size();
    std::vector<double> diag(m), rhs(m, 0.0);
    std::vector<std::size_t> ptr(m + 1, 0);
    std::vector<Entry> off;
    off.reserve(t.nonzeros());
    for (std::size_t r = 0; r < m; ++r) {
        const node_index j = global[r];
        diag[r] = 1.0 + lambda[j];
        for (const Entry& e : t.column(j)) {
            if (is_seed[e.node])
                rhs[r] += e.value;
            else
                off.push_back({local[e.node], -e.value});
        }
        ptr[r + 1] = off.size();
    }

    InfluenceVector f;
    f.seed_set = seeds;
    f.values.assign(n, 1.0);
    if (m > 0) {
        auto sol = gauss_seidel(SparseSystem(std::move(diag), std::move(ptr), std::move(off)), rhs, opts);
        for (std::size_t r = 0; r < m; ++r) f.values[global[r]] = sol.values[r];
    }
    f.total = ordered_sum(f.values);
    return f;
}

}  // namespace circuitflow
