// Copyright (c) lightspan contributors.
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <random>

#include "lightspan/generators.hpp"
#include "lightspan/greedy_spanner.hpp"
#include "lightspan/verification.hpp"
#include "oracles.hpp"

using namespace lightspan;

namespace {

WeightedGraph unit_c4() { return {4, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}, {0, 3, 1}}}; }

}  // namespace

TEST(VerifyStretch, WholeGraphHasRatioOne) {
    const auto g = gen::triangulated_grid(5, 5, gen::UniformWeights{1, 3}, 1);
    for (auto mode : {StretchMode::AllPairs, StretchMode::Endpoints}) {
        EXPECT_EQ(verify_stretch(g, EdgeSubset::all(g), mode).max_ratio, 1.0);
    }
}

TEST(VerifyStretch, TriangleWithoutHeavyEdge) {
    const WeightedGraph g(3, {{0, 1, 1}, {1, 2, 1}, {0, 2, 2}});
    const auto r = verify_stretch(g, EdgeSubset(g, {0, 1}));
    EXPECT_DOUBLE_EQ(r.max_ratio, 1.0);
}

TEST(VerifyStretch, FourCycleMissingOneEdge) {
    const auto g = unit_c4();
    for (auto mode : {StretchMode::AllPairs, StretchMode::Endpoints}) {
        const auto r = verify_stretch(g, EdgeSubset(g, {0, 1, 2}), mode);
        EXPECT_DOUBLE_EQ(r.max_ratio, 3.0);
        EXPECT_EQ(r.witness_u, 0);
        EXPECT_EQ(r.witness_v, 3);
    }
}

TEST(VerifyStretch, RejectsNonSpanningSubset) {
    const auto g = unit_c4();
    EXPECT_THROW(verify_stretch(g, EdgeSubset(g, {0, 1})), GraphError);
}

TEST(VerifyStretch, ModesAgreeWithApsp) {
    std::mt19937_64 rng(23);
    for (int t = 0; t < 30; ++t) {
        const auto g = oracle::random_connected_graph(rng, 5 + t, 0.25, false);
        // a random spanning subset: MST plus a coin flip per other edge
        const auto mst = kruskal_mst(g);
        std::vector<EdgeId> keep(mst.members().begin(), mst.members().end());
        std::bernoulli_distribution coin(0.3);
        for (EdgeId id = 0; id < g.edge_count(); ++id) {
            if (coin(rng)) keep.push_back(id);
        }
        const EdgeSubset s(g, keep);
        const std::vector<EdgeId> sorted(s.members().begin(), s.members().end());
        const double exact = oracle::pairwise_stretch(g, sorted);
        EXPECT_NEAR(verify_stretch(g, s, StretchMode::AllPairs).max_ratio, exact, 1e-12 * exact);
        EXPECT_NEAR(verify_stretch(g, s, StretchMode::Endpoints).max_ratio, exact, 1e-12 * exact);
    }
}

TEST(Lightness, MstIsOne) {
    const auto g = gen::triangulated_grid(6, 6, gen::UniformWeights{1, 5}, 4);
    EXPECT_DOUBLE_EQ(lightness(g, kruskal_mst(g)), 1.0);
}

TEST(Lightness, UnitFourCycle) {
    const auto g = unit_c4();
    EXPECT_DOUBLE_EQ(lightness(g, EdgeSubset::all(g)), 4.0 / 3.0);
}

TEST(Sparsity, TreeBelowOne) {
    const auto g = gen::random_spanning_structure(12, 0, 2);
    EXPECT_DOUBLE_EQ(sparsity_ratio(g), 11.0 / 12.0);
}

TEST(Sparsity, GridBelowThree) {
    for (int m : {3, 10, 30}) {
        const auto g = gen::triangulated_grid(m, m, gen::UnitWeights{}, 1);
        EXPECT_EQ(g.edge_count(), 2 * m * (m - 1) + (m - 1) * (m - 1));
        EXPECT_LT(sparsity_ratio(g), 3.0);
    }
}

TEST(Sparsity, K5) { EXPECT_DOUBLE_EQ(sparsity_ratio(oracle::complete_graph(5)), 2.0); }

TEST(Subdivision, SplitsWeight) {
    const WeightedGraph g(2, {{0, 1, 3}});
    const auto s = subdivide_edge(g, 0);
    EXPECT_EQ(s.vertex_count(), 3);
    EXPECT_EQ(s.edge_count(), 2);
    EXPECT_DOUBLE_EQ(s.total_weight(), 3.0);
}

TEST(Subdivision, CycleStaysK4Free) {
    const WeightedGraph c5(5, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}, {3, 4, 1}, {0, 4, 1}});
    EXPECT_TRUE(test_subdivision_preserves_exclusion(c5, 4));
}

TEST(Subdivision, K4MinusEdge) {
    const WeightedGraph g(4, {{0, 1, 1}, {0, 2, 1}, {0, 3, 1}, {1, 2, 1}, {1, 3, 1}});
    EXPECT_TRUE(test_subdivision_preserves_exclusion(g, 4));
    for (EdgeId id = 0; id < g.edge_count(); ++id) EXPECT_FALSE(oracle::brute_force_clique_minor(subdivide_edge(g, id), 4));
}

TEST(Subdivision, WheelExcludesK5) { EXPECT_TRUE(test_subdivision_preserves_exclusion(oracle::wheel(5), 5)); }

TEST(Subdivision, RejectsGraphWithMinor) { EXPECT_THROW(test_subdivision_preserves_exclusion(oracle::complete_graph(4), 4), GraphError); }
