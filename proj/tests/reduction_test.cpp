// Copyright (c) lightspan contributors.
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <random>

#include "lightspan/generators.hpp"
#include "lightspan/greedy_spanner.hpp"
#include "lightspan/reduction.hpp"
#include "lightspan/verification.hpp"
#include "oracles.hpp"

using namespace lightspan;

namespace {

WeightedGraph path_1_3() { return {3, {{0, 1, 1}, {1, 2, 3}}}; }

}  // namespace

TEST(Reduce, PathHandTrace) {
    const auto m = reduce(path_1_3());
    EXPECT_TRUE(m.exact);
    EXPECT_EQ(m.w_bar_num, 2);
    EXPECT_EQ(m.w_bar_den, 1);
    EXPECT_EQ(m.multiples, (std::vector<std::int64_t>{1, 2}));
    EXPECT_EQ(m.reduced.vertex_count(), 4);
    EXPECT_EQ(m.reduced.edge_count(), 3);
    for (const auto& e : m.reduced.edges()) EXPECT_EQ(e.w, 1.0);
    EXPECT_EQ(m.edge_image[1].size(), 2u);
    EXPECT_TRUE(m.is_subdivision_vertex(3));
    EXPECT_FALSE(m.is_subdivision_vertex(2));
}

TEST(Reduce, UnitMstIsFixedPoint) {
    const WeightedGraph g(4, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}, {0, 2, 2}, {1, 3, 5}});
    const auto m = reduce(g);
    EXPECT_EQ(m.w_bar, 1.0);
    ASSERT_EQ(m.reduced.edge_count(), g.edge_count());
    EXPECT_EQ(m.reduced.vertex_count(), g.vertex_count());
    for (EdgeId id = 0; id < g.edge_count(); ++id) EXPECT_EQ(m.reduced.edge(id).w, g.edge(id).w);
}

TEST(Reduce, NonMstRoundsUp) {
    const WeightedGraph g(3, {{0, 1, 1}, {1, 2, 1}, {0, 2, 2.5}});
    const auto m = reduce(g);
    EXPECT_FALSE(m.exact);
    EXPECT_EQ(m.w_bar, 1.0);
    EXPECT_EQ(m.reduced.edge(m.edge_image[2].front()).w, 3.0);
}

TEST(Reduce, ExactRationalAverage) {
    // MST weights 1, 1, 2: w_bar = 4/3, so 5 rounds to ceil(15/4) = 4 multiples.
    const WeightedGraph g(4, {{0, 1, 1}, {1, 2, 1}, {2, 3, 2}, {0, 3, 5}});
    const auto m = reduce(g);
    EXPECT_EQ(m.w_bar_num, 4);
    EXPECT_EQ(m.w_bar_den, 3);
    EXPECT_EQ(m.multiples, (std::vector<std::int64_t>{1, 1, 2, 4}));
}

TEST(Reduce, ReducedMstIsUnit) {
    std::mt19937_64 rng(31);
    for (int t = 0; t < 20; ++t) {
        const auto g = oracle::random_connected_graph(rng, 8 + t, 0.3, t % 2 == 0);
        const auto m = reduce(g);
        const auto t_red = kruskal_mst(m.reduced);
        for (EdgeId id : t_red.members()) EXPECT_EQ(m.reduced.edge(id).w, 1.0);
        EXPECT_LE(t_red.weight(), 2.0 * m.original_mst_weight() / m.w_bar * (1 + 1e-9));
    }
}

TEST(Reduce, RejectsTinyGraph) { EXPECT_THROW(reduce(WeightedGraph(1, {})), GraphError); }

TEST(LiftSpanner, WholeReducedGivesWholeGraph) {
    const auto g = gen::triangulated_grid(4, 4, gen::UniformWeights{1, 9}, 3);
    const auto m = reduce(g);
    EXPECT_EQ(lift_spanner(m, EdgeSubset::all(m.reduced), 0.5), EdgeSubset::all(m.original));
}

TEST(LiftSpanner, ReducedMstGivesMstPlusLightEdges) {
    const auto g = gen::triangulated_grid(5, 5, gen::UniformWeights{1, 9}, 4);
    const double eps = 0.5;
    const auto m = reduce(g);
    const auto lifted = lift_spanner(m, kruskal_mst(m.reduced), eps);
    const auto mst = kruskal_mst(g);
    for (EdgeId id = 0; id < g.edge_count(); ++id) {
        const bool expect = mst.contains(id) || g.edge(id).w <= m.w_bar / eps;
        EXPECT_EQ(lifted.contains(id), expect) << "edge " << id;
    }
}

TEST(LiftSpanner, PathKeepsBothEdges) {
    const auto g = path_1_3();
    const auto m = reduce(g);
    EXPECT_EQ(lift_spanner(m, EdgeSubset::all(m.reduced), 0.5).size(), 2u);
}

TEST(LightnessTransfer, TreeIsOne) {
    const auto g = gen::random_spanning_structure(15, 0, 3);
    const auto m = reduce(g);
    const auto red = EdgeSubset::all(m.reduced);
    const auto r = lightness_transfer_report(m, red, lift_spanner(m, red, 0.5), 0.5);
    EXPECT_DOUBLE_EQ(r.lifted_lightness, 1.0);
    EXPECT_DOUBLE_EQ(r.reduced_lightness, 1.0);
}

TEST(LightnessTransfer, TriangleThreshold) {
    const WeightedGraph g(3, {{0, 1, 1}, {1, 2, 1}, {0, 2, 2}});
    const auto m = reduce(g);
    const auto red = kruskal_mst(m.reduced);
    const auto r = lightness_transfer_report(m, red, lift_spanner(m, red, 0.5), 0.5);
    EXPECT_EQ(r.w_bar, 1.0);
    EXPECT_EQ(r.low_weight_threshold, 2.0);
    EXPECT_EQ(r.low_weight_count, 3u);
    EXPECT_DOUBLE_EQ(r.low_weight_total, 4.0);
}

TEST(LightnessTransfer, PathArithmetic) {
    const auto g = path_1_3();
    const auto m = reduce(g);
    const auto red = EdgeSubset::all(m.reduced);
    const auto r = lightness_transfer_report(m, red, lift_spanner(m, red, 0.5), 0.5);
    EXPECT_LE(r.lifted_lightness, 2 * r.reduced_lightness + r.low_weight_total / r.original_mst_weight);
    EXPECT_DOUBLE_EQ(r.lifted_bound, 2 * r.reduced_lightness + r.low_weight_total / r.original_mst_weight);
}

TEST(Reduction, LiftedGreedyStretchWithinSquare) {
    std::mt19937_64 rng(77);
    for (int t = 0; t < 12; ++t) {
        const double eps = t % 2 == 0 ? 0.25 : 0.5;
        const auto g = oracle::random_connected_graph(rng, 10 + t, 0.3, t % 3 == 0);
        const auto m = reduce(g);
        const auto red = greedy_spanner(m.reduced, eps);
        const auto lifted = lift_spanner(m, red.spanner, eps);
        const auto rep = verify_stretch(g, lifted);
        EXPECT_TRUE(rep.within((1 + eps) * (1 + eps))) << "trial " << t << " ratio " << rep.max_ratio;
    }
}

TEST(Reduction, JsonRoundTrip) {
    const auto g = gen::triangulated_grid(3, 4, gen::UniformWeights{1, 9}, 5);
    const auto m = reduce(g);
    const auto back = reduction_from_json(to_json(m));
    EXPECT_EQ(back.w_bar, m.w_bar);
    EXPECT_EQ(back.edge_image, m.edge_image);
    EXPECT_EQ(back.multiples, m.multiples);
    EXPECT_EQ(back.reduced.edge_count(), m.reduced.edge_count());
    EXPECT_EQ(back.first_subdivision_vertex, m.first_subdivision_vertex);
}
