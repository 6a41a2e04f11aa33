// Copyright (c) lightspan contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Independent end-to-end checks on a finished spanner.

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"
#include "lightspan/graph.hpp"

namespace lightspan {

enum class StretchMode { AllPairs, Endpoints };

inline std::string to_string(StretchMode m) { return m == StretchMode::AllPairs ? "all-pairs" : "endpoints"; }

inline StretchMode parse_stretch_mode(const std::string& s) {
    if (s == "all-pairs") return StretchMode::AllPairs;
    if (s == "endpoints") return StretchMode::Endpoints;
    throw GraphError("unknown stretch mode " + s);
}

struct StretchReport {
    double max_ratio = 1.0;
    VertexId witness_u = 0;
    VertexId witness_v = 0;
    StretchMode mode = StretchMode::AllPairs;

    [[nodiscard]] bool within(double stretch) const { return approx_le(max_ratio, stretch); }
};

inline nlohmann::json to_json(const StretchReport& r) {
    return {{"max_ratio", r.max_ratio}, {"witness", {r.witness_u, r.witness_v}}, {"mode", to_string(r.mode)}};
}

// Worker count for per-source searches: LIGHTSPAN_THREADS if set, else the
// hardware concurrency.
inline unsigned verification_threads() {
    unsigned n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("LIGHTSPAN_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) n = static_cast<unsigned>(v);
    }
    return n;
}

namespace detail {

struct RatioWitness {
    double ratio = 1.0;
    VertexId u = 0;
    VertexId v = 0;

    // Larger ratio wins; equal ratios keep the lexicographically smaller pair.
    void merge(const RatioWitness& o) {
        if (o.ratio > ratio || (o.ratio == ratio && std::pair(o.u, o.v) < std::pair(u, v))) *this = o;
    }
};

template <class Body>
void parallel_for(VertexId count, Body&& body) {
    const unsigned workers = std::min<unsigned>(verification_threads(), static_cast<unsigned>(std::max<VertexId>(count, 1)));
    if (workers <= 1) {
        for (VertexId s = 0; s < count; ++s) body(s, 0u);
        return;
    }
    std::atomic<VertexId> next{0};
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < workers; ++t) {
        pool.emplace_back([&, t] {
            for (VertexId s = next++; s < count; s = next++) body(s, t);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace detail

// All-pairs mode compares full Dijkstra trees in g and in the spanner. The
// endpoints mode only looks at edges outside the spanner: the worst pair is
// always attained on some edge, so both modes give the same maximum.
inline StretchReport verify_stretch(const WeightedGraph& g, const EdgeSubset& spanner, StretchMode mode = StretchMode::AllPairs) {
    if (&spanner.parent() != &g && spanner.parent().edge_count() != g.edge_count()) throw GraphError("spanner is not a subset of the graph");
    const WeightedGraph s = spanner.as_graph();
    if (g.vertex_count() > 0 && !is_connected(g)) throw GraphError("graph not connected");
    if (g.vertex_count() > 0 && !is_connected(s)) throw GraphError("spanner does not span the graph");

    const unsigned workers = std::min<unsigned>(verification_threads(), static_cast<unsigned>(std::max<VertexId>(g.vertex_count(), 1)));
    std::vector<detail::RatioWitness> best(workers);

    if (mode == StretchMode::AllPairs) {
        std::vector<DijkstraWorkspace> wg(workers, DijkstraWorkspace(g.vertex_count()));
        std::vector<DijkstraWorkspace> ws(workers, DijkstraWorkspace(g.vertex_count()));
        detail::parallel_for(g.vertex_count(), [&](VertexId src, unsigned t) {
            wg[t].run_all(src, graph_neighbors(g));
            ws[t].run_all(src, graph_neighbors(s));
            for (VertexId v = src + 1; v < g.vertex_count(); ++v) {
                best[t].merge({ws[t].dist(v) / wg[t].dist(v), src, v});
            }
        });
    } else {
        const auto member = spanner.mask();
        // Group the non-spanner edges by their smaller endpoint; one search per source.
        std::vector<std::vector<EdgeId>> by_source(static_cast<std::size_t>(g.vertex_count()));
        for (EdgeId id = 0; id < g.edge_count(); ++id) {
            if (!member[static_cast<std::size_t>(id)]) by_source[static_cast<std::size_t>(g.edge(id).u)].push_back(id);
        }
        std::vector<DijkstraWorkspace> ws(workers, DijkstraWorkspace(g.vertex_count()));
        detail::parallel_for(g.vertex_count(), [&](VertexId src, unsigned t) {
            const auto& list = by_source[static_cast<std::size_t>(src)];
            if (list.empty()) return;
            ws[t].run_all(src, graph_neighbors(s));
            for (EdgeId id : list) {
                const Edge& e = g.edge(id);
                best[t].merge({ws[t].dist(e.v) / e.w, e.u, e.v});
            }
        });
    }
    detail::RatioWitness total;
    for (const auto& b : best) total.merge(b);
    return {total.ratio, total.u, total.v, mode};
}

inline double lightness(const WeightedGraph& g, const EdgeSubset& spanner) { return spanner.weight() / kruskal_mst(g).weight(); }

inline double sparsity_ratio(const WeightedGraph& g) {
    if (g.vertex_count() == 0) throw GraphError("empty graph");
    return static_cast<double>(g.edge_count()) / static_cast<double>(g.vertex_count());
}

// g with edge `id` replaced by a path of two edges through a new vertex n.
inline WeightedGraph subdivide_edge(const WeightedGraph& g, EdgeId id) {
    std::vector<Edge> edges;
    const VertexId mid = g.vertex_count();
    for (EdgeId k = 0; k < g.edge_count(); ++k) {
        const Edge& e = g.edge(k);
        if (k == id) {
            edges.push_back({e.u, mid, e.w / 2});
            edges.push_back({mid, e.v, e.w / 2});
        } else {
            edges.push_back(e);
        }
    }
    return {mid + 1, std::move(edges)};
}

inline bool test_subdivision_preserves_exclusion(const WeightedGraph& g, int h) {
    if (g.vertex_count() > kMinorOracleMaxVertices - 1) throw GraphError("subdivision test needs at most 9 vertices");
    if (contains_clique_minor(g, h)) throw GraphError("input already contains a K_" + std::to_string(h) + " minor");
    for (EdgeId id = 0; id < g.edge_count(); ++id) {
        if (contains_clique_minor(subdivide_edge(g, id), h)) return false;
    }
    return true;
}

}  // namespace lightspan
