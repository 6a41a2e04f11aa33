// Copyright (c) lightspan contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Clusters as they flow from one level to the next, and the level-0
// clustering of the unit-weight MST.

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

#include "lightspan/certifier/ledger.hpp"
#include "lightspan/graph.hpp"

namespace lightspan::cert {

enum class Origin { Base, P1, P2, P3a1, P3a2, P3b, P4Long, P4Short, P4Affix, EmptyLong, EmptyShort, Whole, Orphan };

inline std::string to_string(Origin o) {
    static const char* names[] = {"base",  "P1",    "P2",       "P3a1",       "P3a2",        "P3b",   "P4b-long",
                                  "P4b-short", "P4b-affix", "empty-long", "empty-short", "whole", "orphan"};
    return names[static_cast<int>(o)];
}

struct Cluster {
    std::vector<VertexId> vertices;  // sorted
    std::vector<EdgeId> edges;       // sorted parent edge ids
    double diameter = 0;
    double credit = 0;
    Origin origin = Origin::Base;
};

// The MST of the spanner with adjacency, shared by every level of one j.
struct MstView {
    std::vector<EdgeId> ids;  // sorted parent edge ids
    std::vector<char> is_mst;
    std::vector<std::vector<std::pair<VertexId, EdgeId>>> adj;

    MstView() = default;
    MstView(const WeightedGraph& g, std::vector<EdgeId> mst) : ids(std::move(mst)) {
        std::sort(ids.begin(), ids.end());
        is_mst.assign(static_cast<std::size_t>(g.edge_count()), 0);
        adj.resize(static_cast<std::size_t>(g.vertex_count()));
        for (EdgeId id : ids) {
            is_mst[static_cast<std::size_t>(id)] = 1;
            const Edge& e = g.edge(id);
            adj[static_cast<std::size_t>(e.u)].emplace_back(e.v, id);
            adj[static_cast<std::size_t>(e.v)].emplace_back(e.u, id);
        }
    }
};

namespace detail {

// Farthest vertex from src in hop count, and its distance.
inline std::pair<VertexId, int> farthest_hop(const MstView& t, VertexId src) {
    std::vector<int> dist(t.adj.size(), -1);
    std::vector<VertexId> queue{src};
    dist[static_cast<std::size_t>(src)] = 0;
    std::pair<VertexId, int> best{src, 0};
    for (std::size_t h = 0; h < queue.size(); ++h) {
        const VertexId v = queue[h];
        const int d = dist[static_cast<std::size_t>(v)];
        if (d > best.second || (d == best.second && v < best.first)) best = {v, d};
        for (auto [to, id] : t.adj[static_cast<std::size_t>(v)]) {
            if (dist[static_cast<std::size_t>(to)] < 0) {
                dist[static_cast<std::size_t>(to)] = d + 1;
                queue.push_back(to);
            }
        }
    }
    return best;
}

}  // namespace detail

inline int tree_hop_diameter(const MstView& t) {
    if (t.adj.empty()) return 0;
    const auto a = detail::farthest_hop(t, 0);
    return detail::farthest_hop(t, a.first).second;
}

struct BaseClustering {
    std::vector<Cluster> clusters;
    bool trivial = false;  // MST diameter below ell0 / 2
    int mst_diameter = 0;
    std::vector<Violation> violations;
};

// Rooted at vertex 0 and scanned in post-order. A vertex whose two tallest
// uncarved child branches reach a combined height of H = ceil(ell0/2) is
// carved together with all its uncarved descendants, so every carved subtree
// has diameter in [H, 2H]. Only the root's remnant can stay uncarved; it is
// merged into a carved neighbour through its lowest-id MST edge.
inline BaseClustering build_base_clusters(const WeightedGraph& g, const MstView& mst, double ell0, double c) {
    BaseClustering out;
    const VertexId n = g.vertex_count();
    for (EdgeId id : mst.ids) {
        if (g.edge(id).w != 1.0) {
            out.violations.push_back({"unit MST", "edge " + std::to_string(id), "MST edge weight " + std::to_string(g.edge(id).w) + " is not 1", g.edge(id).w - 1});
        }
    }
    out.mst_diameter = tree_hop_diameter(mst);
    auto whole = [&] {
        Cluster all;
        all.vertices.resize(static_cast<std::size_t>(n));
        std::iota(all.vertices.begin(), all.vertices.end(), VertexId{0});
        all.edges = mst.ids;
        all.diameter = out.mst_diameter;
        all.credit = c * static_cast<double>(mst.ids.size());
        all.origin = Origin::Base;
        return all;
    };
    if (n == 0) {
        out.trivial = true;
        return out;
    }
    if (out.mst_diameter < ell0 / 2) {
        out.trivial = true;
        out.clusters.push_back(whole());
        return out;
    }
    const int H = static_cast<int>(std::ceil(ell0 / 2 - 1e-9));

    // Iterative DFS order from the root; reversed it is a post-order.
    std::vector<VertexId> order;
    std::vector<VertexId> parent(static_cast<std::size_t>(n), -1);
    std::vector<EdgeId> parent_edge(static_cast<std::size_t>(n), -1);
    {
        std::vector<char> seen(static_cast<std::size_t>(n), 0);
        std::vector<VertexId> stack{0};
        seen[0] = 1;
        while (!stack.empty()) {
            const VertexId v = stack.back();
            stack.pop_back();
            order.push_back(v);
            for (auto [to, id] : mst.adj[static_cast<std::size_t>(v)]) {
                if (!seen[static_cast<std::size_t>(to)]) {
                    seen[static_cast<std::size_t>(to)] = 1;
                    parent[static_cast<std::size_t>(to)] = v;
                    parent_edge[static_cast<std::size_t>(to)] = id;
                    stack.push_back(to);
                }
            }
        }
        if (static_cast<VertexId>(order.size()) != n) throw GraphError("MST does not span the graph");
    }

    std::vector<int> height(static_cast<std::size_t>(n), 0);  // tallest uncarved branch below v
    std::vector<int> owner(static_cast<std::size_t>(n), -1);
    std::vector<std::vector<VertexId>> children(static_cast<std::size_t>(n));
    for (VertexId v : order) {
        if (parent[static_cast<std::size_t>(v)] >= 0) children[static_cast<std::size_t>(parent[static_cast<std::size_t>(v)])].push_back(v);
    }
    auto carve = [&](VertexId root) {
        const int id = static_cast<int>(out.clusters.size());
        Cluster cl;
        std::vector<VertexId> stack{root};
        while (!stack.empty()) {
            const VertexId v = stack.back();
            stack.pop_back();
            owner[static_cast<std::size_t>(v)] = id;
            cl.vertices.push_back(v);
            for (VertexId ch : children[static_cast<std::size_t>(v)]) {
                if (owner[static_cast<std::size_t>(ch)] < 0) {
                    cl.edges.push_back(parent_edge[static_cast<std::size_t>(ch)]);
                    stack.push_back(ch);
                }
            }
        }
        out.clusters.push_back(std::move(cl));
    };
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        const VertexId v = *it;
        int a = 0;
        int b = 0;
        for (VertexId ch : children[static_cast<std::size_t>(v)]) {
            if (owner[static_cast<std::size_t>(ch)] >= 0) continue;
            const int h = height[static_cast<std::size_t>(ch)] + 1;
            if (h > a) {
                b = a;
                a = h;
            } else if (h > b) {
                b = h;
            }
        }
        height[static_cast<std::size_t>(v)] = a;
        if (a + b >= H) carve(v);
    }

    if (owner[0] < 0) {
        // Root remnant: every vertex not yet owned. It touches carved
        // subtrees only through tree edges to carved children.
        std::vector<VertexId> remnant;
        for (VertexId v = 0; v < n; ++v) {
            if (owner[static_cast<std::size_t>(v)] < 0) remnant.push_back(v);
        }
        EdgeId link = -1;
        int target = -1;
        for (VertexId v : remnant) {
            for (VertexId ch : children[static_cast<std::size_t>(v)]) {
                const EdgeId id = parent_edge[static_cast<std::size_t>(ch)];
                if (owner[static_cast<std::size_t>(ch)] >= 0 && (link < 0 || id < link)) {
                    link = id;
                    target = owner[static_cast<std::size_t>(ch)];
                }
            }
        }
        if (target < 0) throw GraphError("base clustering left an unattached remnant");
        auto& cl = out.clusters[static_cast<std::size_t>(target)];
        cl.edges.push_back(link);
        for (VertexId v : remnant) {
            owner[static_cast<std::size_t>(v)] = target;
            cl.vertices.push_back(v);
            if (parent[static_cast<std::size_t>(v)] >= 0) cl.edges.push_back(parent_edge[static_cast<std::size_t>(v)]);
        }
    }

    for (auto& cl : out.clusters) {
        std::sort(cl.vertices.begin(), cl.vertices.end());
        std::sort(cl.edges.begin(), cl.edges.end());
        cl.credit = c * static_cast<double>(cl.edges.size());
        cl.diameter = subgraph_diameter(g, cl.vertices, cl.edges).diameter;
        cl.origin = Origin::Base;
    }
    // Carving order follows the post-order; renumber by smallest vertex.
    std::sort(out.clusters.begin(), out.clusters.end(), [](const Cluster& x, const Cluster& y) { return x.vertices.front() < y.vertices.front(); });
    return out;
}

}  // namespace lightspan::cert
