// Copyright (c) lightspan contributors.
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <random>

#include "lightspan/graph.hpp"
#include "oracles.hpp"

using namespace lightspan;

namespace {

WeightedGraph triangle() { return {3, {{0, 1, 1}, {1, 2, 1}, {0, 2, 2}}}; }

}  // namespace

TEST(WeightedGraph, NormalizesEndpoints) {
    const WeightedGraph g(3, {{2, 0, 1.5}});
    EXPECT_EQ(g.edge(0).u, 0);
    EXPECT_EQ(g.edge(0).v, 2);
    EXPECT_EQ(g.incident(1).size(), 0u);
}

TEST(WeightedGraph, RejectsBadEdges) {
    EXPECT_THROW(WeightedGraph(2, {{0, 2, 1}}), GraphError);
    EXPECT_THROW(WeightedGraph(2, {{1, 1, 1}}), GraphError);
    EXPECT_THROW(WeightedGraph(2, {{0, 1, 0}}), GraphError);
    EXPECT_THROW(WeightedGraph(2, {{0, 1, -3}}), GraphError);
}

TEST(WeightedGraph, FindEdge) {
    const auto g = triangle();
    EXPECT_EQ(g.find_edge(2, 0), 2);
    EXPECT_FALSE(WeightedGraph(3, {{0, 1, 1}}).find_edge(1, 2).has_value());
}

TEST(EdgeSubset, SortsAndDeduplicates) {
    const auto g = triangle();
    const EdgeSubset s(g, {2, 0, 2});
    ASSERT_EQ(s.size(), 2u);
    EXPECT_EQ(s.members()[0], 0);
    EXPECT_DOUBLE_EQ(s.weight(), 3.0);
    EXPECT_THROW(EdgeSubset(g, {3}), GraphError);
}

TEST(Kruskal, PathIsItsOwnTree) {
    const WeightedGraph g(3, {{0, 1, 1}, {1, 2, 2}});
    const auto t = kruskal_mst(g);
    EXPECT_EQ(t.size(), 2u);
    EXPECT_DOUBLE_EQ(t.weight(), 3.0);
}

TEST(Kruskal, TriangleDropsHeaviest) {
    const auto g = triangle();
    const auto t = kruskal_mst(g);
    EXPECT_FALSE(t.contains(2));
    EXPECT_DOUBLE_EQ(t.weight(), 2.0);
}

TEST(Kruskal, FourCycleMatchesEnumeration) {
    const WeightedGraph g(4, {{0, 1, 1}, {1, 2, 2}, {2, 3, 3}, {3, 0, 4}});
    const auto t = kruskal_mst(g);
    EXPECT_DOUBLE_EQ(t.weight(), 6.0);
    EXPECT_DOUBLE_EQ(t.weight(), oracle::min_spanning_tree_weight(g));
    EXPECT_FALSE(t.contains(3));
}

TEST(Kruskal, DisconnectedThrows) { EXPECT_THROW(kruskal_mst(WeightedGraph(3, {{0, 1, 1}})), GraphError); }

TEST(Kruskal, AgreesWithEnumerationOnSmallRandomGraphs) {
    std::mt19937_64 rng(7);
    for (int t = 0; t < 60; ++t) {
        const auto g = oracle::random_connected_graph(rng, 3 + t % 6, 0.5, true);
        EXPECT_DOUBLE_EQ(kruskal_mst(g).weight(), oracle::min_spanning_tree_weight(g)) << "trial " << t;
    }
}

TEST(BoundedDijkstra, SameVertexIsZero) { EXPECT_EQ(bounded_dijkstra(triangle(), 1, 1, 0.0), 0.0); }

TEST(BoundedDijkstra, TriangleWithinCutoff) { EXPECT_EQ(bounded_dijkstra(triangle(), 0, 2, 10.0), 2.0); }

TEST(BoundedDijkstra, TriangleBeyondCutoff) { EXPECT_FALSE(bounded_dijkstra(triangle(), 0, 2, 1.5).has_value()); }

TEST(BoundedDijkstra, CutoffIsInclusive) { EXPECT_EQ(bounded_dijkstra(triangle(), 0, 2, 2.0), 2.0); }

TEST(BoundedDijkstra, RejectsBadInput) {
    EXPECT_THROW(bounded_dijkstra(triangle(), 0, 5, 1.0), GraphError);
    EXPECT_THROW(bounded_dijkstra(triangle(), 0, 1, -1.0), GraphError);
}

TEST(BoundedDijkstra, MatchesFloydWarshall) {
    std::mt19937_64 rng(11);
    for (int t = 0; t < 25; ++t) {
        const auto g = oracle::random_connected_graph(rng, 5 + t, 0.2, false);
        const auto d = oracle::floyd_warshall(g);
        std::uniform_int_distribution<VertexId> pick(0, g.vertex_count() - 1);
        for (int q = 0; q < 30; ++q) {
            const VertexId a = pick(rng);
            const VertexId b = pick(rng);
            const double exact = d[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
            // Sums may associate differently, so compare within rounding.
            const auto full = bounded_dijkstra(g, a, b, kInfinity);
            ASSERT_TRUE(full.has_value());
            EXPECT_NEAR(*full, exact, 1e-12 * exact);
            EXPECT_TRUE(bounded_dijkstra(g, a, b, exact * (1 + 1e-12)).has_value());
            if (exact > 0) {
                EXPECT_FALSE(bounded_dijkstra(g, a, b, exact * (1 - 1e-9)).has_value());
            }
        }
    }
}

TEST(SubgraphDiameter, SingleVertex) {
    const auto g = triangle();
    const std::vector<VertexId> v{1};
    EXPECT_EQ(subgraph_diameter(g, v, {}).diameter, 0.0);
}

TEST(SubgraphDiameter, UnitPathWitnessIsEndpoints) {
    const WeightedGraph g(4, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}});
    const auto d = eccentricity_diameter(g, EdgeSubset::all(g));
    EXPECT_EQ(d.diameter, 3.0);
    EXPECT_EQ(d.a, 0);
    EXPECT_EQ(d.b, 3);
    EXPECT_EQ(d.path.size(), 3u);
}

TEST(SubgraphDiameter, UnitStar) {
    const WeightedGraph g(4, {{0, 1, 1}, {0, 2, 1}, {0, 3, 1}});
    const auto d = eccentricity_diameter(g, EdgeSubset::all(g));
    EXPECT_EQ(d.diameter, 2.0);
    EXPECT_EQ(d.diameter, oracle::apsp_diameter(g));
}

TEST(SubgraphDiameter, RespectsEdgeSelection) {
    const auto g = triangle();
    const std::vector<VertexId> v{0, 1, 2};
    const std::vector<EdgeId> e{0, 2};
    EXPECT_EQ(subgraph_diameter(g, v, e).diameter, 3.0);
    const std::vector<EdgeId> cut{0};
    EXPECT_THROW(subgraph_diameter(g, v, cut), GraphError);
}

TEST(SubgraphDiameter, PathWitnessSumsToDiameter) {
    std::mt19937_64 rng(3);
    for (int t = 0; t < 20; ++t) {
        const auto g = oracle::random_connected_graph(rng, 4 + t, 0.3, false);
        const auto d = eccentricity_diameter(g, EdgeSubset::all(g));
        double along = 0;
        for (EdgeId id : d.path) along += g.edge(id).w;
        EXPECT_DOUBLE_EQ(along, d.diameter);
        EXPECT_DOUBLE_EQ(d.diameter, oracle::apsp_diameter(g));
    }
}

TEST(CliqueMinor, K4ContainsK4) { EXPECT_TRUE(contains_clique_minor(oracle::complete_graph(4), 4)); }

TEST(CliqueMinor, TreeExcludesTriangle) {
    const WeightedGraph g(5, {{0, 1, 1}, {0, 2, 1}, {2, 3, 1}, {2, 4, 1}});
    EXPECT_FALSE(contains_clique_minor(g, 3));
}

TEST(CliqueMinor, FourCycleContractsToTriangle) {
    const WeightedGraph g(4, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}, {3, 0, 1}});
    EXPECT_TRUE(contains_clique_minor(g, 3));
    EXPECT_FALSE(contains_clique_minor(g, 4));
}

TEST(CliqueMinor, PlanarWheelExcludesK5) {
    const auto w = oracle::wheel(5);
    EXPECT_TRUE(contains_clique_minor(w, 4));
    EXPECT_FALSE(contains_clique_minor(w, 5));
}

TEST(CliqueMinor, K33HasK4ButNotK5) {
    std::vector<Edge> es;
    for (VertexId a = 0; a < 3; ++a) {
        for (VertexId b = 3; b < 6; ++b) es.push_back({a, b, 1});
    }
    const WeightedGraph g(6, es);
    EXPECT_TRUE(contains_clique_minor(g, 4));
    EXPECT_FALSE(contains_clique_minor(g, 5));
}

TEST(CliqueMinor, PetersenHasK5) {
    std::vector<Edge> es;
    for (VertexId i = 0; i < 5; ++i) {
        es.push_back({i, (i + 1) % 5, 1});
        es.push_back({i, i + 5, 1});
        es.push_back({5 + i, 5 + (i + 2) % 5, 1});
    }
    EXPECT_TRUE(contains_clique_minor(WeightedGraph(10, es), 5));
}

TEST(CliqueMinor, AgreesWithBruteForce) {
    std::mt19937_64 rng(5);
    for (int t = 0; t < 80; ++t) {
        const auto g = oracle::random_graph(rng, 3 + t % 5, 0.55);
        for (int h = 3; h <= 4; ++h) {
            EXPECT_EQ(contains_clique_minor(g, h), oracle::brute_force_clique_minor(g, h)) << "trial " << t << " h " << h;
        }
    }
}

TEST(CliqueMinor, LimitsInput) {
    EXPECT_THROW(contains_clique_minor(oracle::complete_graph(11), 3), GraphError);
    EXPECT_THROW(contains_clique_minor(oracle::complete_graph(3), 0), GraphError);
}
