// Copyright (c) lightspan contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Seeded planar instance families.

#include <cstdint>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "lightspan/graph.hpp"
#include "lightspan/level_partition.hpp"

namespace lightspan::gen {

struct UnitWeights {};
struct UniformWeights {
    double lo = 1.0;
    double hi = 10.0;
};
// Log-uniform weights in [1, base).
struct ExpScaleWeights {
    double base = 1024.0;
};
using WeightModel = std::variant<UnitWeights, UniformWeights, ExpScaleWeights>;

inline WeightModel parse_weight_model(const std::string& spec) {
    if (spec == "unit") return UnitWeights{};
    auto args = [&](const std::string& prefix) {
        std::vector<double> v;
        std::string body = spec.substr(prefix.size());
        if (body.empty() || body.front() != '(' || body.back() != ')') throw GraphError("malformed weight model " + spec);
        body = body.substr(1, body.size() - 2);
        std::size_t pos = 0;
        while (pos <= body.size()) {
            const auto comma = body.find(',', pos);
            v.push_back(std::stod(body.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos)));
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
        return v;
    };
    if (spec.rfind("uniform", 0) == 0) {
        auto v = args("uniform");
        if (v.size() != 2 || !(v[0] > 0) || !(v[1] >= v[0])) throw GraphError("uniform(lo,hi) needs 0 < lo <= hi");
        return UniformWeights{v[0], v[1]};
    }
    if (spec.rfind("exp-scale", 0) == 0) {
        auto v = args("exp-scale");
        if (v.size() != 1 || !(v[0] > 1)) throw GraphError("exp-scale(base) needs base > 1");
        return ExpScaleWeights{v[0]};
    }
    throw GraphError("unknown weight model " + spec);
}

namespace detail {

inline double draw_weight(const WeightModel& model, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    if (std::holds_alternative<UniformWeights>(model)) {
        const auto& m = std::get<UniformWeights>(model);
        return m.lo + (m.hi - m.lo) * unit(rng);
    }
    if (std::holds_alternative<ExpScaleWeights>(model)) {
        return std::pow(std::get<ExpScaleWeights>(model).base, unit(rng));
    }
    return 1.0;
}

// (r, c) grid edges: right, down, and the diagonal from the lower-left to the
// upper-right corner of each face.
inline std::vector<std::pair<VertexId, VertexId>> triangulated_grid_pairs(int rows, int cols) {
    std::vector<std::pair<VertexId, VertexId>> out;
    auto id = [cols](int r, int c) { return static_cast<VertexId>(r * cols + c); };
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            if (c + 1 < cols) out.emplace_back(id(r, c), id(r, c + 1));
            if (r + 1 < rows) out.emplace_back(id(r, c), id(r + 1, c));
            if (r + 1 < rows && c + 1 < cols) out.emplace_back(id(r + 1, c), id(r, c + 1));
        }
    }
    return out;
}

}  // namespace detail

inline WeightedGraph triangulated_grid(int rows, int cols, const WeightModel& model, std::uint64_t seed) {
    if (rows < 2 || cols < 2) throw GraphError("grid needs at least 2 rows and 2 columns");
    std::mt19937_64 rng(seed);
    std::vector<Edge> edges;
    for (auto [u, v] : detail::triangulated_grid_pairs(rows, cols)) edges.push_back({u, v, detail::draw_weight(model, rng)});
    return {static_cast<VertexId>(rows * cols), std::move(edges)};
}

// A random spanning tree of a row-major prefix of a triangulated grid, plus
// `extra_edges` further grid edges. Subgraphs of a planar graph stay planar.
// Weights are uniform in [1, 10).
inline WeightedGraph random_spanning_structure(int n, int extra_edges, std::uint64_t seed) {
    if (n < 1 || extra_edges < 0) throw GraphError("random_spanning_structure needs n >= 1 and extra_edges >= 0");
    const int cols = std::max(2, static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n)))));
    const int rows = (n + cols - 1) / cols + 1;
    std::vector<std::pair<VertexId, VertexId>> candidates;
    for (auto [u, v] : detail::triangulated_grid_pairs(rows, cols)) {
        if (u < n && v < n) candidates.emplace_back(u, v);
    }
    std::mt19937_64 rng(seed);
    std::shuffle(candidates.begin(), candidates.end(), rng);
    UnionFind uf(static_cast<std::size_t>(n));
    std::vector<std::pair<VertexId, VertexId>> chosen;
    std::vector<std::pair<VertexId, VertexId>> rest;
    for (auto p : candidates) {
        if (uf.unite(static_cast<std::size_t>(p.first), static_cast<std::size_t>(p.second))) {
            chosen.push_back(p);
        } else {
            rest.push_back(p);
        }
    }
    for (int k = 0; k < extra_edges && k < static_cast<int>(rest.size()); ++k) chosen.push_back(rest[static_cast<std::size_t>(k)]);
    std::uniform_real_distribution<double> weight(1.0, 10.0);
    std::vector<Edge> edges;
    for (auto [u, v] : chosen) edges.push_back({u, v, weight(rng)});
    return {static_cast<VertexId>(n), std::move(edges)};
}

// Randomized depth-first spanning tree. Its long tree paths make heavy
// non-tree edges worth keeping in a spanner.
inline std::vector<EdgeId> random_dfs_tree(const WeightedGraph& g, std::mt19937_64& rng) {
    std::vector<EdgeId> tree;
    if (g.vertex_count() == 0) return tree;
    std::vector<char> seen(static_cast<std::size_t>(g.vertex_count()), 0);
    std::vector<std::pair<VertexId, std::vector<EdgeId>>> stack;
    auto push = [&](VertexId v) {
        seen[static_cast<std::size_t>(v)] = 1;
        std::vector<EdgeId> inc(g.incident(v).begin(), g.incident(v).end());
        std::shuffle(inc.begin(), inc.end(), rng);
        stack.emplace_back(v, std::move(inc));
    };
    push(0);
    while (!stack.empty()) {
        auto& [v, inc] = stack.back();
        if (inc.empty()) {
            stack.pop_back();
            continue;
        }
        const EdgeId id = inc.back();
        inc.pop_back();
        const VertexId to = g.edge(id).other(v);
        if (!seen[static_cast<std::size_t>(to)]) {
            tree.push_back(id);
            push(to);
        }
    }
    if (static_cast<VertexId>(tree.size()) + 1 != g.vertex_count()) throw GraphError("graph not connected");
    std::sort(tree.begin(), tree.end());
    return tree;
}

// Unit weights on a random spanning tree; every other edge gets a weight from
// a band [ell_i / 2, ell_i) with i <= levels and j uniform over its range.
inline WeightedGraph exp_scale_weights(const WeightedGraph& g, double epsilon, int levels, std::uint64_t seed, double bias = 1.0) {
    if (levels < 1) throw GraphError("levels must be at least 1");
    if (!(bias > 0)) throw GraphError("band bias must be positive");
    const int jmax = max_band_j(epsilon);
    std::mt19937_64 rng(seed);
    const auto tree = random_dfs_tree(g, rng);
    std::vector<char> in_tree(static_cast<std::size_t>(g.edge_count()), 0);
    for (EdgeId id : tree) in_tree[static_cast<std::size_t>(id)] = 1;
    // Band (i, j) has index (i - 1) * (jmax + 1) + j and weight bias^index.
    std::vector<double> mass;
    for (int k = 0; k < levels * (jmax + 1); ++k) mass.push_back(std::pow(bias, k));
    std::discrete_distribution<int> pick_band(mass.begin(), mass.end());
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<Edge> edges(g.edges().begin(), g.edges().end());
    for (EdgeId id = 0; id < g.edge_count(); ++id) {
        auto& e = edges[static_cast<std::size_t>(id)];
        if (in_tree[static_cast<std::size_t>(id)]) {
            e.w = 1.0;
            continue;
        }
        const int band = pick_band(rng);
        const int i = 1 + band / (jmax + 1);
        const int j = band % (jmax + 1);
        const double lo = band_floor(epsilon, i, j);
        const double hi = band_floor(epsilon, i, j + 1);
        e.w = std::min(lo + (hi - lo) * unit(rng), std::nextafter(hi, lo));
    }
    return {g.vertex_count(), std::move(edges)};
}


// Canonical bands (i, j) with i <= levels that own at least one weight.
inline std::vector<LevelKey> canonical_bands(double epsilon, int levels) {
    std::vector<LevelKey> out;
    for (int i = 1; i <= levels; ++i) {
        for (int j = 0; j <= max_band_j(epsilon); ++j) {
            if (classify_edge(band_floor(epsilon, i, j), epsilon) == LevelKey::band(i, j)) out.push_back(LevelKey::band(i, j));
        }
    }
    return out;
}

// Triangulated grid whose spanning tree is the boustrophedon path (row 0
// left to right, row 1 right to left, ...). Every non-tree edge joins rows r
// and r + 1, and the tree distance between its ends grows towards the end
// opposite the turn, so each strip between two rows behaves as a separate
// ladder. Strip r draws its weights from canonical band r mod (band count).
// Tree edges are unit. The first `skip_bands` bands are left out.
inline WeightedGraph exp_scale_grid(int rows, int cols, double epsilon, int levels, std::uint64_t seed, int skip_bands = 0) {
    if (rows < 2 || cols < 2) throw GraphError("grid needs at least 2 rows and 2 columns");
    if (levels < 1) throw GraphError("levels must be at least 1");
    auto bands = canonical_bands(epsilon, levels);
    if (skip_bands < 0 || skip_bands >= static_cast<int>(bands.size())) throw GraphError("skip_bands leaves no band");
    bands.erase(bands.begin(), bands.begin() + skip_bands);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto id = [cols](int r, int c) { return static_cast<VertexId>(r * cols + c); };
    std::vector<Edge> edges;
    for (auto [u, v] : detail::triangulated_grid_pairs(rows, cols)) {
        const int ru = u / cols;
        const int rv = v / cols;
        bool tree = ru == rv;
        if (!tree) {
            const int r = std::min(ru, rv);
            const int turn = r % 2 == 0 ? cols - 1 : 0;
            tree = std::min(u, v) == id(r, turn) && std::max(u, v) == id(r + 1, turn);
        }
        if (tree) {
            edges.push_back({u, v, 1.0});
            continue;
        }
        const auto& key = bands[static_cast<std::size_t>(std::min(ru, rv)) % bands.size()];
        const double lo = band_floor(epsilon, key.i, key.j);
        const double hi = band_floor(epsilon, key.i, key.j + 1);
        edges.push_back({u, v, std::min(lo + (hi - lo) * unit(rng), std::nextafter(hi, lo))});
    }
    return {static_cast<VertexId>(rows * cols), std::move(edges)};
}


// Triangulated grid cut into horizontal strips of `strip_rows` rows. Each
// strip gets its own randomized depth-first tree, consecutive strips are
// joined by one tree edge in column 0, and tree edges are unit. Non-tree
// edges inside strip k draw from canonical band k + skip_bands; edges that
// cross from strip k to k + 1 use the band of strip k + 1. Heavier strips
// sit below lighter ones, so a shortcut through a lighter strip costs two
// heavy crossings.
inline WeightedGraph exp_scale_strips(int strips, int strip_rows, int cols, double epsilon, int levels, std::uint64_t seed, int skip_bands = 0) {
    if (strips < 1 || strip_rows < 2 || cols < 2) throw GraphError("strip grid needs strips >= 1, strip_rows >= 2 and cols >= 2");
    if (levels < 1) throw GraphError("levels must be at least 1");
    const auto bands = canonical_bands(epsilon, levels);
    if (skip_bands < 0 || skip_bands + strips > static_cast<int>(bands.size())) throw GraphError("not enough bands for the strips");
    const int rows = strips * strip_rows;
    const auto pairs = detail::triangulated_grid_pairs(rows, cols);
    std::vector<Edge> edges;
    for (auto [u, v] : pairs) edges.push_back({u, v, 1.0});
    const WeightedGraph shape(static_cast<VertexId>(rows * cols), edges);
    std::mt19937_64 rng(seed);
    auto strip_of = [&](VertexId v) { return static_cast<int>(v) / cols / strip_rows; };

    std::vector<char> tree(edges.size(), 0);
    std::vector<char> seen(static_cast<std::size_t>(rows * cols), 0);
    for (int k = 0; k < strips; ++k) {
        const auto root = static_cast<VertexId>(k * strip_rows * cols);
        std::vector<std::pair<VertexId, std::vector<EdgeId>>> stack;
        auto push = [&](VertexId v) {
            seen[static_cast<std::size_t>(v)] = 1;
            std::vector<EdgeId> inc;
            for (EdgeId id : shape.incident(v)) {
                if (strip_of(shape.edge(id).other(v)) == k) inc.push_back(id);
            }
            std::shuffle(inc.begin(), inc.end(), rng);
            stack.emplace_back(v, std::move(inc));
        };
        push(root);
        while (!stack.empty()) {
            auto& [v, inc] = stack.back();
            if (inc.empty()) {
                stack.pop_back();
                continue;
            }
            const EdgeId id = inc.back();
            inc.pop_back();
            const VertexId to = shape.edge(id).other(v);
            if (!seen[static_cast<std::size_t>(to)]) {
                tree[static_cast<std::size_t>(id)] = 1;
                push(to);
            }
        }
        if (k + 1 < strips) {
            const auto a = static_cast<VertexId>(((k + 1) * strip_rows - 1) * cols);
            tree[static_cast<std::size_t>(*shape.find_edge(a, a + cols))] = 1;
        }
    }
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (std::size_t id = 0; id < edges.size(); ++id) {
        auto& e = edges[id];
        if (tree[id]) {
            e.w = 1.0;
            continue;
        }
        const auto& key = bands[static_cast<std::size_t>(skip_bands + std::max(strip_of(e.u), strip_of(e.v)))];
        const double lo = band_floor(epsilon, key.i, key.j);
        const double hi = band_floor(epsilon, key.i, key.j + 1);
        e.w = std::min(lo + (hi - lo) * unit(rng), std::nextafter(hi, lo));
    }
    return {static_cast<VertexId>(rows * cols), std::move(edges)};
}

}  // namespace lightspan::gen
