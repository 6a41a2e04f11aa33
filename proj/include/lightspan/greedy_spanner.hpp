// Copyright (c) lightspan contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

// The greedy (1+eps)-spanner: scan edges by nondecreasing weight and keep an
// edge only if the spanner built so far has no path of length at most
// (1+eps) times its weight.

#include <optional>
#include <string>
#include <vector>

#include "lightspan/graph.hpp"

namespace lightspan {

struct SpannerResult {
    EdgeSubset spanner;
    double stretch_used = 1.0;             // 1 + eps
    std::vector<EdgeId> accepted_order;    // insertion order
    std::vector<EdgeId> rejected;          // sorted
};

namespace detail {

// Adjacency that grows one edge at a time while keeping parent edge ids.
class IncrementalAdjacency {
  public:
    explicit IncrementalAdjacency(const WeightedGraph& g) : g_(g), adj_(static_cast<std::size_t>(g.vertex_count())) {}

    void add(EdgeId id) {
        const Edge& e = g_.edge(id);
        adj_[static_cast<std::size_t>(e.u)].push_back(id);
        adj_[static_cast<std::size_t>(e.v)].push_back(id);
    }

    [[nodiscard]] auto neighbors() const {
        return [this](VertexId v, auto&& visit) {
            for (EdgeId id : adj_[static_cast<std::size_t>(v)]) {
                const Edge& e = g_.edge(id);
                visit(e.other(v), e.w, id);
            }
        };
    }

  private:
    const WeightedGraph& g_;
    std::vector<std::vector<EdgeId>> adj_;
};

// Ties count as "already spanned": the cutoff carries the relative tolerance.
inline Weight greedy_cutoff(double stretch, Weight w) { return stretch * w * (1.0 + kRelTol); }

}  // namespace detail

inline SpannerResult greedy_spanner(const WeightedGraph& g, double epsilon) {
    if (!(epsilon > 0)) throw GraphError("epsilon must be positive");
    if (!is_connected(g)) throw GraphError("graph not connected");
    SpannerResult res;
    res.stretch_used = 1.0 + epsilon;
    detail::IncrementalAdjacency adj(g);
    DijkstraWorkspace ws(g.vertex_count());
    std::vector<EdgeId> accepted;
    for (EdgeId id : g.sorted_edge_ids()) {
        const Edge& e = g.edge(id);
        const auto d = ws.run(e.u, e.v, detail::greedy_cutoff(res.stretch_used, e.w), adj.neighbors());
        if (!d) {
            adj.add(id);
            res.accepted_order.push_back(id);
        } else {
            res.rejected.push_back(id);
        }
    }
    std::sort(res.rejected.begin(), res.rejected.end());
    res.spanner = EdgeSubset(g, res.accepted_order);
    return res;
}

struct GreedyReplay {
    bool ok = true;
    std::optional<EdgeId> first_divergent;
    std::string detail;
};

// Replays every greedy decision against the prefix of `result.spanner` and
// reports the first edge whose membership disagrees with the decision.
inline GreedyReplay verify_greedy_property(const WeightedGraph& g, const SpannerResult& result) {
    GreedyReplay out;
    const auto member = result.spanner.mask();
    std::vector<char> rejected(static_cast<std::size_t>(g.edge_count()), 0);
    for (EdgeId id : result.rejected) {
        if (id < 0 || id >= g.edge_count()) {
            return {false, id, "rejected id " + std::to_string(id) + " is not an edge"};
        }
        rejected[static_cast<std::size_t>(id)] = 1;
    }
    detail::IncrementalAdjacency adj(g);
    DijkstraWorkspace ws(g.vertex_count());
    for (EdgeId id : g.sorted_edge_ids()) {
        const Edge& e = g.edge(id);
        const bool in_spanner = member[static_cast<std::size_t>(id)] != 0;
        if (in_spanner == (rejected[static_cast<std::size_t>(id)] != 0)) {
            return {false, id, "edge " + std::to_string(id) + " is " + (in_spanner ? "both accepted and rejected" : "neither accepted nor rejected")};
        }
        const Weight cutoff = detail::greedy_cutoff(result.stretch_used, e.w);
        const auto d = ws.run(e.u, e.v, cutoff, adj.neighbors());
        const bool should_accept = !d.has_value();
        if (should_accept != in_spanner) {
            std::string why = should_accept ? "spanner prefix has no path within " + std::to_string(cutoff) + " but the edge is missing"
                                            : "spanner prefix already has a path of length " + std::to_string(*d) + " but the edge was kept";
            return {false, id, "edge " + std::to_string(id) + " (" + std::to_string(e.u) + "," + std::to_string(e.v) + "): " + why};
        }
        if (in_spanner) adj.add(id);
    }
    return out;
}

}  // namespace lightspan
