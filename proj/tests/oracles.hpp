// Copyright (c) lightspan contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Slow, obviously-correct reference computations the suite compares against.
// Nothing here calls into the library beyond the graph container.

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "lightspan/graph.hpp"

namespace oracle {

using lightspan::Edge;
using lightspan::EdgeId;
using lightspan::VertexId;
using lightspan::WeightedGraph;

using Matrix = std::vector<std::vector<double>>;

inline Matrix floyd_warshall(const WeightedGraph& g) {
    const auto n = static_cast<std::size_t>(g.vertex_count());
    Matrix d(n, std::vector<double>(n, lightspan::kInfinity));
    for (std::size_t v = 0; v < n; ++v) d[v][v] = 0;
    for (const auto& e : g.edges()) {
        auto& slot = d[static_cast<std::size_t>(e.u)][static_cast<std::size_t>(e.v)];
        slot = std::min(slot, e.w);
        d[static_cast<std::size_t>(e.v)][static_cast<std::size_t>(e.u)] = slot;
    }
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
        }
    }
    return d;
}

inline double apsp_diameter(const WeightedGraph& g) {
    double best = 0;
    for (const auto& row : floyd_warshall(g)) {
        for (double x : row) best = std::max(best, x);
    }
    return best;
}

// Max over edges (u,v) of G of d_S(u,v) / w(u,v), which equals the all-pairs
// stretch for a subgraph S of G.
inline double edge_stretch(const WeightedGraph& g, const std::vector<EdgeId>& spanner) {
    std::vector<Edge> es;
    for (EdgeId id : spanner) es.push_back(g.edge(id));
    const auto ds = floyd_warshall(WeightedGraph(g.vertex_count(), es));
    double worst = 1;
    for (const auto& e : g.edges()) worst = std::max(worst, ds[static_cast<std::size_t>(e.u)][static_cast<std::size_t>(e.v)] / e.w);
    return worst;
}

// All-pairs ratio d_S / d_G straight from two APSP tables.
inline double pairwise_stretch(const WeightedGraph& g, const std::vector<EdgeId>& spanner) {
    std::vector<Edge> es;
    for (EdgeId id : spanner) es.push_back(g.edge(id));
    const auto dg = floyd_warshall(g);
    const auto ds = floyd_warshall(WeightedGraph(g.vertex_count(), es));
    double worst = 1;
    for (std::size_t a = 0; a < dg.size(); ++a) {
        for (std::size_t b = a + 1; b < dg.size(); ++b) worst = std::max(worst, ds[a][b] / dg[a][b]);
    }
    return worst;
}

inline bool spans(const WeightedGraph& g, const std::vector<EdgeId>& ids) {
    const auto n = static_cast<std::size_t>(g.vertex_count());
    std::vector<std::size_t> comp(n);
    for (std::size_t v = 0; v < n; ++v) comp[v] = v;
    std::function<std::size_t(std::size_t)> find = [&](std::size_t x) { return comp[x] == x ? x : comp[x] = find(comp[x]); };
    std::size_t parts = n;
    for (EdgeId id : ids) {
        const auto a = find(static_cast<std::size_t>(g.edge(id).u));
        const auto b = find(static_cast<std::size_t>(g.edge(id).v));
        if (a != b) {
            comp[a] = b;
            --parts;
        }
    }
    return parts <= 1;
}

// Minimum over every (n-1)-edge subset that connects the graph.
inline double min_spanning_tree_weight(const WeightedGraph& g) {
    const int m = g.edge_count();
    const int k = g.vertex_count() - 1;
    std::vector<int> pick(static_cast<std::size_t>(m), 0);
    std::fill(pick.end() - k, pick.end(), 1);
    double best = lightspan::kInfinity;
    do {
        std::vector<EdgeId> ids;
        double w = 0;
        for (int i = 0; i < m; ++i) {
            if (pick[static_cast<std::size_t>(i)]) {
                ids.push_back(i);
                w += g.edge(i).w;
            }
        }
        if (spans(g, ids)) best = std::min(best, w);
    } while (std::next_permutation(pick.begin(), pick.end()));
    return best;
}

inline WeightedGraph complete_graph(VertexId n) {
    std::vector<Edge> es;
    for (VertexId a = 0; a < n; ++a) {
        for (VertexId b = a + 1; b < n; ++b) es.push_back({a, b, 1});
    }
    return {n, es};
}

// Hub 0 joined to a rim cycle 1..rim.
inline WeightedGraph wheel(VertexId rim) {
    std::vector<Edge> es;
    for (VertexId i = 1; i <= rim; ++i) {
        es.push_back({0, i, 1});
        es.push_back({i, i % rim + 1, 1});
    }
    return {rim + 1, es};
}

// Random spanning tree plus each remaining pair with probability p. Weights
// are integers in [1, 9] or reals in [1, 10).
inline WeightedGraph random_connected_graph(std::mt19937_64& rng, VertexId n, double p, bool integral) {
    std::uniform_int_distribution<int> iw(1, 9);
    std::uniform_real_distribution<double> rw(1.0, 10.0);
    std::bernoulli_distribution coin(p);
    auto weight = [&]() { return integral ? static_cast<double>(iw(rng)) : rw(rng); };
    std::vector<std::vector<char>> used(static_cast<std::size_t>(n), std::vector<char>(static_cast<std::size_t>(n), 0));
    std::vector<Edge> es;
    for (VertexId v = 1; v < n; ++v) {
        const VertexId u = std::uniform_int_distribution<VertexId>(0, v - 1)(rng);
        es.push_back({u, v, weight()});
        used[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)] = 1;
    }
    for (VertexId a = 0; a < n; ++a) {
        for (VertexId b = a + 1; b < n; ++b) {
            if (!used[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] && coin(rng)) es.push_back({a, b, weight()});
        }
    }
    return {n, es};
}

// Erdos-Renyi with unit weights; may be disconnected.
inline WeightedGraph random_graph(std::mt19937_64& rng, VertexId n, double p) {
    std::bernoulli_distribution coin(p);
    std::vector<Edge> es;
    for (VertexId a = 0; a < n; ++a) {
        for (VertexId b = a + 1; b < n; ++b) {
            if (coin(rng)) es.push_back({a, b, 1});
        }
    }
    return {n, es};
}

// Tries every labelling of vertices with {deleted, 1..h} and checks that the
// branch sets are nonempty, connected and pairwise adjacent.
inline bool brute_force_clique_minor(const WeightedGraph& g, int h) {
    const int n = g.vertex_count();
    std::vector<int> label(static_cast<std::size_t>(n), 0);
    std::vector<std::vector<char>> adj(static_cast<std::size_t>(n), std::vector<char>(static_cast<std::size_t>(n), 0));
    for (const auto& e : g.edges()) {
        adj[static_cast<std::size_t>(e.u)][static_cast<std::size_t>(e.v)] = 1;
        adj[static_cast<std::size_t>(e.v)][static_cast<std::size_t>(e.u)] = 1;
    }
    auto check = [&]() {
        for (int a = 1; a <= h; ++a) {
            std::vector<int> members;
            for (int v = 0; v < n; ++v) {
                if (label[static_cast<std::size_t>(v)] == a) members.push_back(v);
            }
            if (members.empty()) return false;
            std::vector<char> seen(static_cast<std::size_t>(n), 0);
            std::vector<int> stack{members.front()};
            seen[static_cast<std::size_t>(members.front())] = 1;
            std::size_t reached = 0;
            while (!stack.empty()) {
                const int v = stack.back();
                stack.pop_back();
                ++reached;
                for (int u = 0; u < n; ++u) {
                    if (adj[static_cast<std::size_t>(v)][static_cast<std::size_t>(u)] && !seen[static_cast<std::size_t>(u)] &&
                        label[static_cast<std::size_t>(u)] == a) {
                        seen[static_cast<std::size_t>(u)] = 1;
                        stack.push_back(u);
                    }
                }
            }
            if (reached != members.size()) return false;
        }
        for (int a = 1; a <= h; ++a) {
            for (int b = a + 1; b <= h; ++b) {
                bool touch = false;
                for (int x = 0; x < n && !touch; ++x) {
                    for (int y = 0; y < n && !touch; ++y) {
                        touch = label[static_cast<std::size_t>(x)] == a && label[static_cast<std::size_t>(y)] == b &&
                                adj[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)];
                    }
                }
                if (!touch) return false;
            }
        }
        return true;
    };
    while (true) {
        if (check()) return true;
        int pos = 0;
        while (pos < n && label[static_cast<std::size_t>(pos)] == h) label[static_cast<std::size_t>(pos++)] = 0;
        if (pos == n) return false;
        ++label[static_cast<std::size_t>(pos)];
    }
}

}  // namespace oracle
