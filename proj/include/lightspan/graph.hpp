// Copyright (c) lightspan contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Undirected positively weighted graphs, edge subsets, and the small set of
// queries every other module builds on: Kruskal MST, cutoff-bounded
// Dijkstra, exact subgraph diameter and an exhaustive clique-minor oracle.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <queue>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace lightspan {

using VertexId = std::int32_t;
using EdgeId = std::int32_t;
using Weight = double;

inline constexpr Weight kInfinity = std::numeric_limits<Weight>::infinity();
inline constexpr double kRelTol = 1e-9;

class GraphError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Relative comparison used wherever two path sums are compared.
inline bool approx_le(Weight a, Weight b, double tol = kRelTol) { return a <= b + tol * std::max(std::abs(a), std::abs(b)); }
inline bool approx_eq(Weight a, Weight b, double tol = kRelTol) { return approx_le(a, b, tol) && approx_le(b, a, tol); }

struct Edge {
    VertexId u;
    VertexId v;
    Weight w;

    [[nodiscard]] VertexId other(VertexId x) const { return x == u ? v : u; }
};

// Total order used for every deterministic scan over edges.
inline bool edge_order_less(const Edge& a, EdgeId ia, const Edge& b, EdgeId ib) {
    if (a.w != b.w) return a.w < b.w;
    if (a.u != b.u) return a.u < b.u;
    if (a.v != b.v) return a.v < b.v;
    return ia < ib;
}

// Immutable after construction. Endpoints are normalized so that u < v.
class WeightedGraph {
  public:
    WeightedGraph() = default;

    WeightedGraph(VertexId vertex_count, std::vector<Edge> edges) : n_(vertex_count), edges_(std::move(edges)) {
        if (n_ < 0) throw GraphError("negative vertex count");
        adj_.assign(static_cast<std::size_t>(n_), {});
        for (std::size_t i = 0; i < edges_.size(); ++i) {
            Edge& e = edges_[i];
            if (e.u < 0 || e.v < 0 || e.u >= n_ || e.v >= n_) {
                throw GraphError("edge " + std::to_string(i) + " has an endpoint outside [0, " + std::to_string(n_) + ")");
            }
            if (e.u == e.v) throw GraphError("edge " + std::to_string(i) + " is a self-loop");
            if (!(e.w > 0) || !std::isfinite(e.w)) throw GraphError("edge " + std::to_string(i) + " has a nonpositive weight");
            if (e.u > e.v) std::swap(e.u, e.v);
            adj_[static_cast<std::size_t>(e.u)].push_back(static_cast<EdgeId>(i));
            adj_[static_cast<std::size_t>(e.v)].push_back(static_cast<EdgeId>(i));
        }
    }

    [[nodiscard]] VertexId vertex_count() const { return n_; }
    [[nodiscard]] EdgeId edge_count() const { return static_cast<EdgeId>(edges_.size()); }
    [[nodiscard]] const Edge& edge(EdgeId id) const { return edges_.at(static_cast<std::size_t>(id)); }
    [[nodiscard]] std::span<const Edge> edges() const { return edges_; }
    [[nodiscard]] std::span<const EdgeId> incident(VertexId v) const { return adj_.at(static_cast<std::size_t>(v)); }

    [[nodiscard]] Weight total_weight() const {
        Weight s = 0;
        for (const auto& e : edges_) s += e.w;
        return s;
    }

    void check_vertex(VertexId v) const {
        if (v < 0 || v >= n_) throw GraphError("invalid vertex id " + std::to_string(v));
    }

    // Edge ids sorted by (weight, min endpoint, max endpoint).
    [[nodiscard]] std::vector<EdgeId> sorted_edge_ids() const {
        std::vector<EdgeId> ids(edges_.size());
        std::iota(ids.begin(), ids.end(), 0);
        std::sort(ids.begin(), ids.end(), [&](EdgeId a, EdgeId b) { return edge_order_less(edge(a), a, edge(b), b); });
        return ids;
    }

    [[nodiscard]] std::optional<EdgeId> find_edge(VertexId a, VertexId b) const {
        check_vertex(a);
        check_vertex(b);
        const auto& shorter = adj_[static_cast<std::size_t>(adj_[a].size() <= adj_[b].size() ? a : b)];
        for (EdgeId id : shorter) {
            const Edge& e = edge(id);
            if ((e.u == a && e.v == b) || (e.u == b && e.v == a)) return id;
        }
        return std::nullopt;
    }

  private:
    VertexId n_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::vector<EdgeId>> adj_;
};

// A set of edges of one parent graph. Members are kept sorted and unique.
class EdgeSubset {
  public:
    EdgeSubset() = default;
    explicit EdgeSubset(const WeightedGraph& parent) : parent_(&parent) {}
    EdgeSubset(const WeightedGraph& parent, std::vector<EdgeId> members) : parent_(&parent), members_(std::move(members)) {
        std::sort(members_.begin(), members_.end());
        members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
        for (EdgeId id : members_) {
            if (id < 0 || id >= parent.edge_count()) throw GraphError("edge subset member " + std::to_string(id) + " is not an edge of the parent");
        }
    }

    static EdgeSubset all(const WeightedGraph& g) {
        std::vector<EdgeId> ids(static_cast<std::size_t>(g.edge_count()));
        std::iota(ids.begin(), ids.end(), 0);
        return {g, std::move(ids)};
    }

    [[nodiscard]] const WeightedGraph& parent() const {
        if (parent_ == nullptr) throw GraphError("edge subset has no parent graph");
        return *parent_;
    }
    [[nodiscard]] std::span<const EdgeId> members() const { return members_; }
    [[nodiscard]] std::size_t size() const { return members_.size(); }
    [[nodiscard]] bool empty() const { return members_.empty(); }
    [[nodiscard]] bool contains(EdgeId id) const { return std::binary_search(members_.begin(), members_.end(), id); }

    [[nodiscard]] Weight weight() const {
        Weight s = 0;
        for (EdgeId id : members_) s += parent().edge(id).w;
        return s;
    }

    [[nodiscard]] std::vector<char> mask() const {
        std::vector<char> m(static_cast<std::size_t>(parent().edge_count()), 0);
        for (EdgeId id : members_) m[static_cast<std::size_t>(id)] = 1;
        return m;
    }

    // The subset as a standalone graph on the parent's vertex set.
    // Edge k of the result is members()[k].
    [[nodiscard]] WeightedGraph as_graph() const {
        std::vector<Edge> es;
        es.reserve(members_.size());
        for (EdgeId id : members_) es.push_back(parent().edge(id));
        return {parent().vertex_count(), std::move(es)};
    }

    friend bool operator==(const EdgeSubset& a, const EdgeSubset& b) { return a.parent_ == b.parent_ && a.members_ == b.members_; }

  private:
    const WeightedGraph* parent_ = nullptr;
    std::vector<EdgeId> members_;
};

class UnionFind {
  public:
    explicit UnionFind(std::size_t n) : parent_(n), rank_(n, 0) { std::iota(parent_.begin(), parent_.end(), std::size_t{0}); }

    std::size_t find(std::size_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    bool unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        if (rank_[a] < rank_[b]) std::swap(a, b);
        parent_[b] = a;
        if (rank_[a] == rank_[b]) ++rank_[a];
        return true;
    }

  private:
    std::vector<std::size_t> parent_;
    std::vector<std::uint8_t> rank_;
};

inline bool is_connected(const WeightedGraph& g) {
    if (g.vertex_count() <= 1) return true;
    UnionFind uf(static_cast<std::size_t>(g.vertex_count()));
    VertexId comps = g.vertex_count();
    for (const auto& e : g.edges()) {
        if (uf.unite(static_cast<std::size_t>(e.u), static_cast<std::size_t>(e.v))) --comps;
    }
    return comps == 1;
}

// Minimum spanning tree; ties broken by (weight, min endpoint, max endpoint).
inline EdgeSubset kruskal_mst(const WeightedGraph& g) {
    UnionFind uf(static_cast<std::size_t>(g.vertex_count()));
    std::vector<EdgeId> tree;
    for (EdgeId id : g.sorted_edge_ids()) {
        const Edge& e = g.edge(id);
        if (uf.unite(static_cast<std::size_t>(e.u), static_cast<std::size_t>(e.v))) tree.push_back(id);
    }
    if (g.vertex_count() > 0 && static_cast<VertexId>(tree.size()) != g.vertex_count() - 1) throw GraphError("graph not connected");
    return {g, std::move(tree)};
}

// Reusable Dijkstra state. Labels are reset lazily through the touched list,
// so a query costs time proportional to the region it explores.
class DijkstraWorkspace {
  public:
    explicit DijkstraWorkspace(VertexId n = 0) { resize(n); }

    void resize(VertexId n) {
        dist_.assign(static_cast<std::size_t>(n), kInfinity);
        parent_edge_.assign(static_cast<std::size_t>(n), -1);
        touched_.clear();
    }

    [[nodiscard]] std::size_t size() const { return dist_.size(); }

    // Neighbors(v, f) must call f(to, weight, edge_id) for every arc out of v.
    template <class Neighbors>
    std::optional<Weight> run(VertexId src, VertexId dst, Weight cutoff, Neighbors&& neighbors) {
        reset();
        using Item = std::pair<Weight, VertexId>;
        std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
        label(src, 0, -1);
        pq.emplace(0.0, src);
        while (!pq.empty()) {
            auto [d, v] = pq.top();
            pq.pop();
            if (d > dist_[static_cast<std::size_t>(v)]) continue;
            if (d > cutoff) break;
            if (v == dst) return d;
            neighbors(v, [&](VertexId to, Weight w, EdgeId id) {
                const Weight nd = d + w;
                if (nd <= cutoff && nd < dist_[static_cast<std::size_t>(to)]) {
                    label(to, nd, id);
                    pq.emplace(nd, to);
                }
            });
        }
        return std::nullopt;
    }

    // Full single-source run; dst < 0 disables the early exit.
    template <class Neighbors>
    void run_all(VertexId src, Neighbors&& neighbors) {
        run(src, -1, kInfinity, std::forward<Neighbors>(neighbors));
    }

    [[nodiscard]] Weight dist(VertexId v) const { return dist_[static_cast<std::size_t>(v)]; }
    [[nodiscard]] EdgeId parent_edge(VertexId v) const { return parent_edge_[static_cast<std::size_t>(v)]; }
    [[nodiscard]] std::span<const VertexId> touched() const { return touched_; }

  private:
    void reset() {
        for (VertexId v : touched_) {
            dist_[static_cast<std::size_t>(v)] = kInfinity;
            parent_edge_[static_cast<std::size_t>(v)] = -1;
        }
        touched_.clear();
    }

    void label(VertexId v, Weight d, EdgeId via) {
        auto& slot = dist_[static_cast<std::size_t>(v)];
        if (slot == kInfinity) touched_.push_back(v);
        slot = d;
        parent_edge_[static_cast<std::size_t>(v)] = via;
    }

    std::vector<Weight> dist_;
    std::vector<EdgeId> parent_edge_;
    std::vector<VertexId> touched_;
};

inline auto graph_neighbors(const WeightedGraph& g) {
    return [&g](VertexId v, auto&& visit) {
        for (EdgeId id : g.incident(v)) {
            const Edge& e = g.edge(id);
            visit(e.other(v), e.w, id);
        }
    };
}

// d_g(src, dst) if it is at most cutoff, otherwise nullopt.
inline std::optional<Weight> bounded_dijkstra(const WeightedGraph& g, VertexId src, VertexId dst, Weight cutoff) {
    g.check_vertex(src);
    g.check_vertex(dst);
    if (cutoff < 0) throw GraphError("negative cutoff");
    DijkstraWorkspace ws(g.vertex_count());
    return ws.run(src, dst, cutoff, graph_neighbors(g));
}

struct DiameterResult {
    Weight diameter = 0;
    VertexId a = -1;
    VertexId b = -1;
    std::vector<EdgeId> path;  // parent-graph edge ids from a to b
};

// Exact weighted diameter of the subgraph formed by `edges` on `vertices`
// (vertices may be isolated only when it is the single vertex). The witness is
// the lexicographically smallest pair attaining the maximum.
inline DiameterResult subgraph_diameter(const WeightedGraph& g, std::span<const VertexId> vertices, std::span<const EdgeId> edges) {
    DiameterResult res;
    if (vertices.empty()) throw GraphError("empty subgraph");
    std::vector<VertexId> verts(vertices.begin(), vertices.end());
    std::sort(verts.begin(), verts.end());
    verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
    const auto k = static_cast<VertexId>(verts.size());
    auto local = [&](VertexId v) {
        auto it = std::lower_bound(verts.begin(), verts.end(), v);
        if (it == verts.end() || *it != v) throw GraphError("subgraph edge leaves its vertex set");
        return static_cast<VertexId>(it - verts.begin());
    };
    std::vector<std::vector<std::pair<VertexId, EdgeId>>> adj(static_cast<std::size_t>(k));
    for (EdgeId id : edges) {
        const Edge& e = g.edge(id);
        const VertexId a = local(e.u);
        const VertexId b = local(e.v);
        adj[static_cast<std::size_t>(a)].emplace_back(b, id);
        adj[static_cast<std::size_t>(b)].emplace_back(a, id);
    }
    auto nb = [&](VertexId v, auto&& visit) {
        for (auto [to, id] : adj[static_cast<std::size_t>(v)]) visit(to, g.edge(id).w, id);
    };
    DijkstraWorkspace ws(k);
    res.a = verts[0];
    res.b = verts[0];
    VertexId best_src = 0;
    VertexId best_dst = 0;
    for (VertexId s = 0; s < k; ++s) {
        ws.run_all(s, nb);
        if (static_cast<VertexId>(ws.touched().size()) != k) throw GraphError("subgraph is not connected");
        for (VertexId t = s + 1; t < k; ++t) {
            if (ws.dist(t) > res.diameter) {
                res.diameter = ws.dist(t);
                best_src = s;
                best_dst = t;
            }
        }
    }
    res.a = verts[static_cast<std::size_t>(best_src)];
    res.b = verts[static_cast<std::size_t>(best_dst)];
    if (best_src != best_dst) {
        ws.run_all(best_src, nb);
        std::vector<EdgeId> rev;
        VertexId cur = best_dst;
        while (cur != best_src) {
            const EdgeId id = ws.parent_edge(cur);
            rev.push_back(id);
            const Edge& e = g.edge(id);
            cur = local(e.other(verts[static_cast<std::size_t>(cur)]));
        }
        res.path.assign(rev.rbegin(), rev.rend());
    }
    return res;
}

// Diameter of the subgraph spanned by an edge subset (vertices = endpoints).
inline DiameterResult eccentricity_diameter(const WeightedGraph& g, const EdgeSubset& subset) {
    std::vector<VertexId> verts;
    for (EdgeId id : subset.members()) {
        verts.push_back(g.edge(id).u);
        verts.push_back(g.edge(id).v);
    }
    if (verts.empty()) throw GraphError("empty edge subset has no vertices; use subgraph_diameter with an explicit vertex");
    return subgraph_diameter(g, verts, subset.members());
}

namespace detail {

// Branch sets are labelled in order of first appearance, which removes the
// h! relabelling symmetry from the search.
class CliqueMinorSearch {
  public:
    CliqueMinorSearch(const WeightedGraph& g, int h) : g_(g), h_(h), n_(g.vertex_count()), label_(static_cast<std::size_t>(n_), 0) {
        adjm_.assign(static_cast<std::size_t>(n_), 0);
        for (const auto& e : g.edges()) {
            adjm_[static_cast<std::size_t>(e.u)] |= 1u << e.v;
            adjm_[static_cast<std::size_t>(e.v)] |= 1u << e.u;
        }
    }

    bool search(VertexId v, int used) {
        if (n_ - v < h_ - used) return false;
        if (v == n_) return used == h_ && check();
        for (int lab = 0; lab <= std::min(used + 1, h_); ++lab) {
            label_[static_cast<std::size_t>(v)] = lab;
            if (search(v + 1, std::max(used, lab))) return true;
        }
        label_[static_cast<std::size_t>(v)] = 0;
        return false;
    }

  private:
    bool check() const {
        std::vector<std::uint32_t> set(static_cast<std::size_t>(h_ + 1), 0);
        for (VertexId v = 0; v < n_; ++v) set[static_cast<std::size_t>(label_[static_cast<std::size_t>(v)])] |= 1u << v;
        for (int a = 1; a <= h_; ++a) {
            if (!connected(set[static_cast<std::size_t>(a)])) return false;
        }
        for (int a = 1; a <= h_; ++a) {
            std::uint32_t nbh = 0;
            for (VertexId v = 0; v < n_; ++v) {
                if (set[static_cast<std::size_t>(a)] >> v & 1u) nbh |= adjm_[static_cast<std::size_t>(v)];
            }
            for (int b = a + 1; b <= h_; ++b) {
                if ((nbh & set[static_cast<std::size_t>(b)]) == 0) return false;
            }
        }
        return true;
    }

    bool connected(std::uint32_t s) const {
        if (s == 0) return false;
        std::uint32_t seen = s & (~s + 1);
        std::uint32_t frontier = seen;
        while (frontier != 0) {
            std::uint32_t next = 0;
            for (VertexId v = 0; v < n_; ++v) {
                if (frontier >> v & 1u) next |= adjm_[static_cast<std::size_t>(v)];
            }
            next &= s & ~seen;
            seen |= next;
            frontier = next;
        }
        return seen == s;
    }

    const WeightedGraph& g_;
    int h_;
    VertexId n_;
    std::vector<int> label_;
    std::vector<std::uint32_t> adjm_;
};

}  // namespace detail

inline constexpr VertexId kMinorOracleMaxVertices = 10;

// True iff g has K_h as a minor. Exhaustive; only for tiny graphs.
inline bool contains_clique_minor(const WeightedGraph& g, int h) {
    if (h < 1) throw GraphError("clique size must be at least 1");
    if (g.vertex_count() > kMinorOracleMaxVertices) throw GraphError("minor oracle limited to 10 vertices");
    if (h > g.vertex_count()) return false;
    if (static_cast<long>(g.edge_count()) < static_cast<long>(h) * (h - 1) / 2) return false;
    detail::CliqueMinorSearch s(g, h);
    return s.search(0, 0);
}

}  // namespace lightspan
