#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "circuitflow/errors.hpp"

namespace circuitflow {

/// Dense node index in [0, n).
using node_index = std::uint32_t;

/// Sorted, duplicate-free set of dense node indices.
class NodeSet {
public:
    NodeSet() = default;
    NodeSet(std::initializer_list<node_index> members) : members_(members) { normalize(); }
    explicit NodeSet(std::vector<node_index> members) : members_(std::move(members)) { normalize(); }
    explicit NodeSet(std::span<const node_index> members)
        : members_(members.begin(), members.end()) {
        normalize();
    }

    static NodeSet all(std::size_t n) {
        std::vector<node_index> v(n);
        for (std::size_t i = 0; i < n; ++i) v[i] = static_cast<node_index>(i);
        NodeSet s;
        s.members_ = std::move(v);
        return s;
    }

    bool contains(node_index i) const {
        return std::binary_search(members_.begin(), members_.end(), i);
    }

    /// Position of `i` within the sorted members; size() when absent.
    std::size_t position(node_index i) const {
        auto it = std::lower_bound(members_.begin(), members_.end(), i);
        if (it == members_.end() || *it != i) return members_.size();
        return static_cast<std::size_t>(it - members_.begin());
    }

    NodeSet with(node_index i) const {
        NodeSet s = *this;
        auto it = std::lower_bound(s.members_.begin(), s.members_.end(), i);
        if (it == s.members_.end() || *it != i) s.members_.insert(it, i);
        return s;
    }

    std::size_t size() const noexcept { return members_.size(); }
    bool empty() const noexcept { return members_.empty(); }
    node_index operator[](std::size_t k) const { return members_[k]; }
    auto begin() const noexcept { return members_.begin(); }
    auto end() const noexcept { return members_.end(); }
    std::span<const node_index> members() const noexcept { return members_; }

    /// Throws ValidationError if empty or if any member is >= n.
    void require_valid(std::size_t n, const char* what) const {
        if (members_.empty()) throw ValidationError(std::string(what) + " must be nonempty");
        if (members_.back() >= n)
            throw ValidationError(std::string(what) + " contains node index " +
                                  std::to_string(members_.back()) + " outside [0, " +
                                  std::to_string(n) + ")");
    }

    friend bool operator==(const NodeSet&, const NodeSet&) = default;

private:
    void normalize() {
        std::sort(members_.begin(), members_.end());
        members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
    }

    std::vector<node_index> members_;
};

/// Influence from a seed set to every node.
///
/// Seed entries are pinned to exactly 1; `total` is the ascending-index sum of `values`.
struct InfluenceVector {
    NodeSet seed_set;
    std::vector<double> values;
    double total = 0.0;
};

/// Ascending-index sum; the single summation used wherever totals must agree exactly.
inline double ordered_sum(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
}

}  // namespace circuitflow
