#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <istream>
#include <span>
#include <string>
#include <vector>

#include "circuitflow/errors.hpp"
#include "circuitflow/graph.hpp"
#include "circuitflow/types.hpp"

namespace circuitflow {

/// Sparse matrix entry; `node` is the row index in a column view and the column index
/// in a row view.
struct Entry {
    node_index node;
    double value;
};

struct Triplet {
    node_index from;
    node_index to;
    double value;
};

/// Column-substochastic transmission matrix T, t_ij = probability that influence passes
/// from i to j. Stored twice: by column (incoming into j) and by row (outgoing from i).
class TransmissionMatrix {
public:
    /// Slack on the column-sum constraint theta_j <= 1.
    static constexpr double theta_slack = 1e-12;

    TransmissionMatrix() = default;

    static TransmissionMatrix from_triplets(std::size_t n, std::vector<Triplet> entries) {
        for (const auto& e : entries) {
            if (e.from >= n || e.to >= n)
                throw ValidationError("transmission entry outside [0, " + std::to_string(n) + ")");
            if (e.from == e.to)
                throw ValidationError("transmission matrix must have a zero diagonal");
            if (!(e.value >= 0.0 && e.value <= 1.0))
                throw ValidationError("transmission probability must lie in [0, 1]");
        }
        std::sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
            return a.from != b.from ? a.from < b.from : a.to < b.to;
        });
        for (std::size_t k = 1; k < entries.size(); ++k)
            if (entries[k].from == entries[k - 1].from && entries[k].to == entries[k - 1].to)
                throw ValidationError("duplicate transmission entry");
        std::erase_if(entries, [](const Triplet& e) { return e.value == 0.0; });

        TransmissionMatrix t;
        t.n_ = n;
        t.row_ptr_.assign(n + 1, 0);
        t.col_ptr_.assign(n + 1, 0);
        for (const auto& e : entries) {
            ++t.row_ptr_[e.from + 1];
            ++t.col_ptr_[e.to + 1];
        }
        for (std::size_t i = 0; i < n; ++i) {
            t.row_ptr_[i + 1] += t.row_ptr_[i];
            t.col_ptr_[i + 1] += t.col_ptr_[i];
        }
        t.rows_.resize(entries.size());
        t.cols_.resize(entries.size());
        t.theta_.assign(n, 0.0);
        std::vector<std::size_t> cursor(t.col_ptr_.begin(), t.col_ptr_.end() - 1);
        std::size_t k = 0;
        for (const auto& e : entries) {
            t.rows_[k++] = Entry{e.to, e.value};
            t.cols_[cursor[e.to]++] = Entry{e.from, e.value};
        }
        for (std::size_t j = 0; j < n; ++j) {
            double s = 0.0;
            for (const Entry& e : t.column(static_cast<node_index>(j))) s += e.value;
            if (s > 1.0 + theta_slack)
                throw ValidationError("column " + std::to_string(j) + " sums to " +
                                      std::to_string(s) + " > 1 (transmission must be column-substochastic)");
            t.theta_[j] = s;
        }
        return t;
    }

    std::size_t size() const noexcept { return n_; }
    std::size_t nonzeros() const noexcept { return rows_.size(); }

    /// Entries (i, t_ij) flowing into j, ascending i.
    std::span<const Entry> column(node_index j) const {
        return {cols_.data() + col_ptr_[j], cols_.data() + col_ptr_[j + 1]};
    }
    /// Entries (j, t_ij) flowing out of i, ascending j.
    std::span<const Entry> row(node_index i) const {
        return {rows_.data() + row_ptr_[i], rows_.data() + row_ptr_[i + 1]};
    }
    /// Global index of the first entry of row i; row entries are numbered consecutively.
    std::size_t row_offset(node_index i) const { return row_ptr_[i]; }

    double theta(node_index j) const { return theta_[j]; }
    std::span<const double> thetas() const noexcept { return theta_; }

    double at(node_index i, node_index j) const {
        auto r = row(i);
        auto it = std::lower_bound(r.begin(), r.end(), j,
                                   [](const Entry& e, node_index v) { return e.node < v; });
        return (it != r.end() && it->node == j) ? it->value : 0.0;
    }

    std::vector<Triplet> triplets() const {
        std::vector<Triplet> out;
        out.reserve(rows_.size());
        for (node_index i = 0; i < n_; ++i)
            for (const Entry& e : row(i)) out.push_back({i, e.node, e.value});
        return out;
    }

private:
    std::size_t n_ = 0;
    std::vector<std::size_t> row_ptr_{0};
    std::vector<Entry> rows_;
    std::vector<std::size_t> col_ptr_{0};
    std::vector<Entry> cols_;
    std::vector<double> theta_;
};

/// Weighted Cascade normalization: t_ij = w_ij / (in-weight of j).
inline TransmissionMatrix build_wc_transmission(const InfluenceGraph& g) {
    const std::size_t n = g.node_count();
    std::vector<Triplet> entries;
    entries.reserve(g.arc_count());
    for (node_index j = 0; j < n; ++j) {
        double in_weight = 0.0;
        for (const Arc& a : g.in(j)) in_weight += a.weight;
        for (const Arc& a : g.in(j)) entries.push_back({a.node, j, a.weight / in_weight});
    }
    return TransmissionMatrix::from_triplets(n, std::move(entries));
}

inline TransmissionMatrix scale_transmission(const TransmissionMatrix& t, double factor) {
    if (!(factor > 0.0 && factor <= 1.0))
        throw ValidationError("scale factor must lie in (0, 1], got " + std::to_string(factor));
    auto entries = t.triplets();
    for (auto& e : entries) e.value *= factor;
    return TransmissionMatrix::from_triplets(t.size(), std::move(entries));
}

/// Per-node damping coefficients lambda_i.
class DampingConfig {
public:
    /// Floor that keeps I + Lambda - T' strictly diagonally dominant.
    static constexpr double min_lambda = 1e-9;

    DampingConfig() = default;

    explicit DampingConfig(std::vector<double> lambda) : lambda_(std::move(lambda)) {
        for (std::size_t i = 0; i < lambda_.size(); ++i) check(lambda_[i], i);
    }

    static DampingConfig uniform(std::size_t n, double lambda) {
        return DampingConfig(std::vector<double>(n, lambda));
    }

    std::size_t size() const noexcept { return lambda_.size(); }
    double operator[](node_index i) const { return lambda_[i]; }
    std::span<const double> values() const noexcept { return lambda_; }

    bool is_uniform() const {
        return std::adjacent_find(lambda_.begin(), lambda_.end(), std::not_equal_to<>()) ==
               lambda_.end();
    }

private:
    static void check(double v, std::size_t i) {
        if (!(std::isfinite(v) && v >= min_lambda))
            throw ValidationError("damping coefficient of node " + std::to_string(i) +
                                  " must be finite and >= 1e-9");
    }

    std::vector<double> lambda_;
};

/// Reads `node lambda` lines; unlisted nodes keep `default_lambda`.
inline DampingConfig load_lambda_file(std::istream& in, const InfluenceGraph& g,
                                      double default_lambda) {
    std::vector<double> lambda(g.node_count(), default_lambda);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto body = detail::trim(line);
        if (body.empty() || body.front() == '#') continue;
        auto tok = detail::split_ws(body);
        if (tok.size() != 2) throw ParseError(lineno, "expected 'node lambda'");
        auto v = detail::as_real(tok[1]);
        if (!v) throw ParseError(lineno, "bad lambda '" + std::string(tok[1]) + "'");
        auto idx = g.find(tok[0]);
        if (!idx)
            throw ValidationError("line " + std::to_string(lineno) + ": unknown node id '" +
                                  std::string(tok[0]) + "'");
        lambda[*idx] = *v;
    }
    return DampingConfig(std::move(lambda));
}

}  // namespace circuitflow
