// Copyright (c) lightspan contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Reduction to unit-weight MST edges and the lift of a reduced spanner back
// to the input graph.
//
//   1. round every weight up to an integral multiple of w_bar, the average
//      MST edge weight;
//   2. subdivide every MST edge into pieces of weight exactly w_bar;
//   3. divide all weights by w_bar.
//
// A spanner of the reduced graph is lifted by keeping the original edges
// whose (unsubdivided) image it contains, all MST edges, and every edge of
// weight at most w_bar / eps.

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "lightspan/graph.hpp"

namespace lightspan {

struct ReductionMap {
    WeightedGraph original;
    WeightedGraph reduced;
    double w_bar = 0;
    // Set when every input weight is an integer: w_bar == w_bar_num / w_bar_den exactly.
    bool exact = false;
    std::int64_t w_bar_num = 0;
    std::int64_t w_bar_den = 1;
    std::vector<EdgeId> original_mst;                // sorted
    std::vector<std::vector<EdgeId>> edge_image;      // per original edge
    std::vector<std::int64_t> multiples;              // rounded weight / w_bar, per original edge
    VertexId first_subdivision_vertex = 0;            // reduced ids >= this are subdivision vertices

    [[nodiscard]] bool is_subdivision_vertex(VertexId v) const { return v >= first_subdivision_vertex; }
    [[nodiscard]] bool is_original_mst(EdgeId e) const { return std::binary_search(original_mst.begin(), original_mst.end(), e); }
    [[nodiscard]] double original_mst_weight() const {
        double s = 0;
        for (EdgeId id : original_mst) s += original.edge(id).w;
        return s;
    }
};

namespace detail {

inline constexpr double kMaxExactWeight = 1ll << 40;

inline bool all_integral(const WeightedGraph& g) {
    for (const auto& e : g.edges()) {
        if (e.w > kMaxExactWeight || e.w != std::floor(e.w)) return false;
    }
    return true;
}

__extension__ typedef __int128 Int128;

inline std::int64_t ceil_div(Int128 a, Int128 b) { return static_cast<std::int64_t>((a + b - 1) / b); }

}  // namespace detail

inline ReductionMap reduce(const WeightedGraph& g) {
    if (g.vertex_count() < 2) throw GraphError("reduction needs at least two vertices");
    ReductionMap map;
    map.original = g;
    const EdgeSubset mst = kruskal_mst(g);
    map.original_mst.assign(mst.members().begin(), mst.members().end());
    const std::int64_t tree_edges = g.vertex_count() - 1;

    map.exact = detail::all_integral(g);
    map.multiples.resize(static_cast<std::size_t>(g.edge_count()));
    if (map.exact) {
        std::int64_t total = 0;
        for (EdgeId id : map.original_mst) total += static_cast<std::int64_t>(g.edge(id).w);
        const std::int64_t d = std::gcd(total, tree_edges);
        map.w_bar_num = total / d;
        map.w_bar_den = tree_edges / d;
        map.w_bar = static_cast<double>(total) / static_cast<double>(tree_edges);
        // ceil(w / (num/den)) = ceil(w * den / num)
        for (EdgeId id = 0; id < g.edge_count(); ++id) {
            const auto w = static_cast<detail::Int128>(g.edge(id).w);
            map.multiples[static_cast<std::size_t>(id)] = std::max<std::int64_t>(1, detail::ceil_div(w * map.w_bar_den, map.w_bar_num));
        }
    } else {
        map.w_bar = mst.weight() / static_cast<double>(tree_edges);
        for (EdgeId id = 0; id < g.edge_count(); ++id) {
            const double q = g.edge(id).w / map.w_bar;
            map.multiples[static_cast<std::size_t>(id)] = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(q - kRelTol * q)));
        }
    }

    std::vector<Edge> out;
    map.edge_image.resize(static_cast<std::size_t>(g.edge_count()));
    VertexId next_vertex = g.vertex_count();
    map.first_subdivision_vertex = next_vertex;
    std::vector<char> in_mst(static_cast<std::size_t>(g.edge_count()), 0);
    for (EdgeId id : map.original_mst) in_mst[static_cast<std::size_t>(id)] = 1;
    for (EdgeId id = 0; id < g.edge_count(); ++id) {
        const Edge& e = g.edge(id);
        const std::int64_t k = map.multiples[static_cast<std::size_t>(id)];
        auto& image = map.edge_image[static_cast<std::size_t>(id)];
        if (!in_mst[static_cast<std::size_t>(id)] || k == 1) {
            image.push_back(static_cast<EdgeId>(out.size()));
            out.push_back({e.u, e.v, static_cast<Weight>(k)});
            continue;
        }
        // chain u = x_0, x_1, ..., x_k = v with fresh interior vertices
        VertexId prev = e.u;
        for (std::int64_t step = 1; step <= k; ++step) {
            const VertexId cur = step == k ? e.v : next_vertex++;
            image.push_back(static_cast<EdgeId>(out.size()));
            out.push_back({prev, cur, 1.0});
            prev = cur;
        }
    }
    map.reduced = WeightedGraph(next_vertex, std::move(out));
    return map;
}

inline EdgeSubset lift_spanner(const ReductionMap& map, const EdgeSubset& reduced_spanner, double epsilon) {
    if (!(epsilon > 0)) throw GraphError("epsilon must be positive");
    if (reduced_spanner.parent().edge_count() != map.reduced.edge_count()) {
        throw GraphError("spanner is not a subset of the reduced graph");
    }
    const double threshold = map.w_bar / epsilon;
    std::vector<EdgeId> keep;
    for (EdgeId id = 0; id < map.original.edge_count(); ++id) {
        const auto& image = map.edge_image[static_cast<std::size_t>(id)];
        const bool lifted = image.size() == 1 && reduced_spanner.contains(image.front());
        if (lifted || map.is_original_mst(id) || approx_le(map.original.edge(id).w, threshold)) keep.push_back(id);
    }
    return {map.original, std::move(keep)};
}

struct LightnessTransferReport {
    double lifted_lightness = 0;
    double reduced_lightness = 0;
    double w_bar = 0;
    double low_weight_threshold = 0;
    std::size_t low_weight_count = 0;
    double low_weight_total = 0;
    double original_mst_weight = 0;
    double reduced_mst_weight = 0;
    // w'(MST(reduced)) <= 2 w(MST) / w_bar
    double reduced_mst_bound = 0;
    // 2 * reduced_lightness + low_weight_total / w(MST)
    double lifted_bound = 0;
};

inline LightnessTransferReport lightness_transfer_report(const ReductionMap& map, const EdgeSubset& reduced_spanner,
                                                         const EdgeSubset& lifted, double epsilon) {
    LightnessTransferReport r;
    r.w_bar = map.w_bar;
    r.low_weight_threshold = map.w_bar / epsilon;
    for (const auto& e : map.original.edges()) {
        if (approx_le(e.w, r.low_weight_threshold)) {
            ++r.low_weight_count;
            r.low_weight_total += e.w;
        }
    }
    r.original_mst_weight = map.original_mst_weight();
    r.reduced_mst_weight = kruskal_mst(map.reduced).weight();
    r.lifted_lightness = lifted.weight() / r.original_mst_weight;
    r.reduced_lightness = reduced_spanner.weight() / r.reduced_mst_weight;
    r.reduced_mst_bound = 2.0 * r.original_mst_weight / map.w_bar;
    r.lifted_bound = 2.0 * r.reduced_lightness + r.low_weight_total / r.original_mst_weight;
    return r;
}

inline nlohmann::json to_json(const WeightedGraph& g) {
    nlohmann::json edges = nlohmann::json::array();
    for (const auto& e : g.edges()) edges.push_back({e.u, e.v, e.w});
    return {{"vertex_count", g.vertex_count()}, {"edges", std::move(edges)}};
}

inline WeightedGraph graph_from_json(const nlohmann::json& j) {
    std::vector<Edge> edges;
    for (const auto& e : j.at("edges")) edges.push_back({e.at(0).get<VertexId>(), e.at(1).get<VertexId>(), e.at(2).get<Weight>()});
    return {j.at("vertex_count").get<VertexId>(), std::move(edges)};
}

inline nlohmann::json to_json(const ReductionMap& m) {
    nlohmann::json j;
    j["original"] = to_json(m.original);
    j["reduced"] = to_json(m.reduced);
    j["w_bar"] = m.w_bar;
    j["exact"] = m.exact;
    if (m.exact) j["w_bar_rational"] = {m.w_bar_num, m.w_bar_den};
    j["original_mst"] = m.original_mst;
    j["edge_image"] = m.edge_image;
    j["multiples"] = m.multiples;
    j["subdivision_vertices"] = {{"first", m.first_subdivision_vertex}, {"count", m.reduced.vertex_count() - m.first_subdivision_vertex}};
    return j;
}

inline ReductionMap reduction_from_json(const nlohmann::json& j) {
    ReductionMap m;
    m.original = graph_from_json(j.at("original"));
    m.reduced = graph_from_json(j.at("reduced"));
    m.w_bar = j.at("w_bar").get<double>();
    m.exact = j.at("exact").get<bool>();
    if (m.exact) {
        m.w_bar_num = j.at("w_bar_rational").at(0).get<std::int64_t>();
        m.w_bar_den = j.at("w_bar_rational").at(1).get<std::int64_t>();
    }
    m.original_mst = j.at("original_mst").get<std::vector<EdgeId>>();
    m.edge_image = j.at("edge_image").get<std::vector<std::vector<EdgeId>>>();
    m.multiples = j.at("multiples").get<std::vector<std::int64_t>>();
    m.first_subdivision_vertex = j.at("subdivision_vertices").at("first").get<VertexId>();
    return m;
}

}  // namespace lightspan
