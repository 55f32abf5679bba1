#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <system_error>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

#include "circuitflow/errors.hpp"
#include "circuitflow/types.hpp"

namespace circuitflow {

struct Arc {
    node_index node;
    double weight;
};

/// One edge as read from input, before id resolution.
struct RawEdge {
    std::string src;
    std::string dst;
    double weight = 1.0;
    std::size_t line = 0;
};

namespace detail {

inline std::optional<long long> as_integer(std::string_view s) {
    long long v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size()) return std::nullopt;
    return v;
}

/// Integer ids first in numeric order, then everything else lexicographically.
struct IdOrder {
    bool operator()(const std::string& a, const std::string& b) const {
        auto ia = as_integer(a);
        auto ib = as_integer(b);
        if (ia && ib) return *ia < *ib || (*ia == *ib && a < b);
        if (ia || ib) return static_cast<bool>(ia);
        return a < b;
    }
};

inline std::string_view trim(std::string_view s) {
    constexpr std::string_view ws = " \t\r\n\v\f";
    auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string_view> split_ws(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
        std::size_t j = i;
        while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
        if (j > i) out.push_back(s.substr(i, j - i));
        i = j;
    }
    return out;
}

inline std::optional<double> as_real(std::string_view s) {
    double v = 0.0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size()) return std::nullopt;
    return v;
}

inline std::string shortest_repr(double v) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, p);
}

}  // namespace detail

/// Immutable directed weighted graph with forward and reverse CSR adjacency.
///
/// Edges point in the influence direction (src influences dst). Dense indices follow
/// the sorted order of external ids, so the mapping depends only on the id set.
class InfluenceGraph {
public:
    InfluenceGraph() = default;

    /// Builds a graph from raw edges. Duplicate (src, dst) pairs sum their weights.
    /// `extra_ids` adds nodes that have no edges.
    static InfluenceGraph from_edges(std::span<const RawEdge> edges, bool directed,
                                     std::span<const std::string> extra_ids = {}) {
        std::map<std::string, node_index, detail::IdOrder> id_map;
        for (const auto& e : edges) {
            if (!(std::isfinite(e.weight) && e.weight > 0.0))
                throw ValidationError("line " + std::to_string(e.line) +
                                      ": edge weight must be positive and finite, got " +
                                      detail::shortest_repr(e.weight));
            if (e.src == e.dst)
                throw ValidationError("line " + std::to_string(e.line) +
                                      ": self-loop on node '" + e.src + "' rejected");
            id_map.emplace(e.src, 0);
            id_map.emplace(e.dst, 0);
        }
        for (const auto& id : extra_ids) id_map.emplace(id, 0);

        InfluenceGraph g;
        g.directed_ = directed;
        g.ids_.reserve(id_map.size());
        for (auto& [id, idx] : id_map) {
            idx = static_cast<node_index>(g.ids_.size());
            g.ids_.push_back(id);
        }
        g.index_.reserve(g.ids_.size());
        for (std::size_t i = 0; i < g.ids_.size(); ++i)
            g.index_.emplace(g.ids_[i], static_cast<node_index>(i));

        std::vector<std::tuple<node_index, node_index, double>> triples;
        triples.reserve(edges.size() * (directed ? 1 : 2));
        for (const auto& e : edges) {
            node_index s = id_map.at(e.src);
            node_index d = id_map.at(e.dst);
            triples.emplace_back(s, d, e.weight);
            if (!directed) triples.emplace_back(d, s, e.weight);
        }
        g.assemble(std::move(triples));
        return g;
    }

    std::size_t node_count() const noexcept { return ids_.size(); }
    /// Number of distinct directed arcs (an undirected edge counts twice).
    std::size_t arc_count() const noexcept { return out_arcs_.size(); }
    bool directed() const noexcept { return directed_; }

    std::span<const Arc> out(node_index i) const {
        return {out_arcs_.data() + out_ptr_[i], out_arcs_.data() + out_ptr_[i + 1]};
    }
    std::span<const Arc> in(node_index i) const {
        return {in_arcs_.data() + in_ptr_[i], in_arcs_.data() + in_ptr_[i + 1]};
    }
    std::size_t out_degree(node_index i) const { return out_ptr_[i + 1] - out_ptr_[i]; }
    std::size_t in_degree(node_index i) const { return in_ptr_[i + 1] - in_ptr_[i]; }

    const std::string& id_of(node_index i) const { return ids_.at(i); }
    std::span<const std::string> ids() const noexcept { return ids_; }

    std::optional<node_index> find(std::string_view id) const {
        auto it = index_.find(std::string(id));
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    node_index index_of(std::string_view id) const {
        auto i = find(id);
        if (!i) throw ValidationError("unknown node id '" + std::string(id) + "'");
        return *i;
    }

    NodeSet resolve(std::span<const std::string> ids) const {
        std::vector<node_index> v;
        v.reserve(ids.size());
        for (const auto& id : ids) v.push_back(index_of(id));
        return NodeSet(std::move(v));
    }

    /// Same nodes with every arc reversed (trust-direction data).
    InfluenceGraph reversed() const {
        InfluenceGraph g;
        g.directed_ = directed_;
        g.ids_ = ids_;
        g.index_ = index_;
        std::vector<std::tuple<node_index, node_index, double>> triples;
        triples.reserve(out_arcs_.size());
        for (node_index i = 0; i < node_count(); ++i)
            for (const Arc& a : out(i)) triples.emplace_back(a.node, i, a.weight);
        g.assemble(std::move(triples));
        return g;
    }

    friend bool operator==(const InfluenceGraph& a, const InfluenceGraph& b) {
        auto same_arcs = [](const std::vector<Arc>& x, const std::vector<Arc>& y) {
            return std::equal(x.begin(), x.end(), y.begin(), y.end(), [](const Arc& p, const Arc& q) {
                return p.node == q.node && p.weight == q.weight;
            });
        };
        return a.directed_ == b.directed_ && a.ids_ == b.ids_ && a.out_ptr_ == b.out_ptr_ &&
               a.in_ptr_ == b.in_ptr_ && same_arcs(a.out_arcs_, b.out_arcs_) &&
               same_arcs(a.in_arcs_, b.in_arcs_);
    }

private:
    void assemble(std::vector<std::tuple<node_index, node_index, double>> triples) {
        std::stable_sort(triples.begin(), triples.end(), [](const auto& x, const auto& y) {
            if (std::get<0>(x) != std::get<0>(y)) return std::get<0>(x) < std::get<0>(y);
            return std::get<1>(x) < std::get<1>(y);
        });
        // collapse duplicates by summing weights
        std::vector<std::tuple<node_index, node_index, double>> merged;
        merged.reserve(triples.size());
        for (const auto& t : triples) {
            if (!merged.empty() && std::get<0>(merged.back()) == std::get<0>(t) &&
                std::get<1>(merged.back()) == std::get<1>(t))
                std::get<2>(merged.back()) += std::get<2>(t);
            else
                merged.push_back(t);
        }

        const std::size_t n = ids_.size();
        out_ptr_.assign(n + 1, 0);
        in_ptr_.assign(n + 1, 0);
        for (const auto& [s, d, w] : merged) {
            ++out_ptr_[s + 1];
            ++in_ptr_[d + 1];
        }
        for (std::size_t i = 0; i < n; ++i) {
            out_ptr_[i + 1] += out_ptr_[i];
            in_ptr_[i + 1] += in_ptr_[i];
        }
        out_arcs_.resize(merged.size());
        in_arcs_.resize(merged.size());
        std::vector<std::size_t> in_cursor(in_ptr_.begin(), in_ptr_.end() - 1);
        // merged is sorted by (src, dst), so both CSR blocks come out sorted
        std::size_t k = 0;
        for (const auto& [s, d, w] : merged) {
            out_arcs_[k++] = Arc{d, w};
            in_arcs_[in_cursor[d]++] = Arc{s, w};
        }
    }

    bool directed_ = true;
    std::vector<std::string> ids_;
    std::unordered_map<std::string, node_index> index_;
    std::vector<std::size_t> out_ptr_{0};
    std::vector<Arc> out_arcs_;
    std::vector<std::size_t> in_ptr_{0};
    std::vector<Arc> in_arcs_;
};

/// Parses whitespace-separated `src dst [weight]` lines; `#` lines and blank lines are skipped.
inline std::vector<RawEdge> parse_edge_lines(std::istream& in) {
    std::vector<RawEdge> edges;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto body = detail::trim(line);
        if (body.empty() || body.front() == '#') continue;
        auto tok = detail::split_ws(body);
        if (tok.size() < 2 || tok.size() > 3)
            throw ParseError(lineno, "expected 'src dst [weight]', got '" + std::string(body) + "'");
        RawEdge e{std::string(tok[0]), std::string(tok[1]), 1.0, lineno};
        if (tok.size() == 3) {
            auto w = detail::as_real(tok[2]);
            if (!w) throw ParseError(lineno, "bad weight '" + std::string(tok[2]) + "'");
            e.weight = *w;
        }
        edges.push_back(std::move(e));
    }
    return edges;
}

inline InfluenceGraph load_edge_list(std::istream& in, bool directed) {
    auto edges = parse_edge_lines(in);
    return InfluenceGraph::from_edges(edges, directed);
}

/// Writes `g` so that load_edge_list(.., g.directed()) reproduces it exactly.
inline void write_edge_list(const InfluenceGraph& g, std::ostream& out) {
    for (node_index i = 0; i < g.node_count(); ++i) {
        for (const Arc& a : g.out(i)) {
            if (!g.directed() && a.node < i) continue;
            out << g.id_of(i) << ' ' << g.id_of(a.node) << ' ' << detail::shortest_repr(a.weight)
                << '\n';
        }
    }
}

}  // namespace circuitflow
