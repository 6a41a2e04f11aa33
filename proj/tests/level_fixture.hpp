// Copyright (c) lightspan contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Hand-built levels for the certifier tests. A node is a unit path of a given
// diameter; nodes are joined by unit MST links and by level edges.

#include <memory>
#include <vector>

#include "lightspan/certifier.hpp"

namespace fixture {

using namespace lightspan;
using namespace lightspan::cert;

struct Level {
    WeightedGraph g;
    MstView mst;
    CertParams params;
    std::vector<Cluster> nodes;
    std::vector<char> absorbed;
    LevelEngine engine;

    Level(WeightedGraph graph, std::vector<EdgeId> mst_ids, const CertParams& p, std::vector<Cluster> eps_clusters, std::vector<EdgeId> e_i,
          double ell)
        : g(std::move(graph)),
          mst(g, std::move(mst_ids)),
          params(p),
          nodes(std::move(eps_clusters)),
          absorbed(static_cast<std::size_t>(g.edge_count()), 0),
          engine(g, mst, params, nodes, std::move(e_i), ell, "(0,1)") {
        for (const auto& cl : nodes) {
            for (EdgeId id : cl.edges) absorbed[static_cast<std::size_t>(id)] = 1;
        }
    }

    LevelOutcome settle() { return settle_level(engine, absorbed, 1); }
};

class Builder {
  public:
    // Nodes get credit c * max(diameter, eps * ell / 2), the floor a previous
    // level guarantees.
    Builder(CertParams p, double ell) : params_(p), ell_(ell) {}

    int node(int diameter) {
        const int id = static_cast<int>(heads_.size());
        Cluster cl;
        const VertexId first = n_;
        cl.vertices.push_back(n_++);
        for (int k = 0; k < diameter; ++k) {
            cl.edges.push_back(add({n_ - 1, n_, 1.0}));
            mst_.push_back(cl.edges.back());
            cl.vertices.push_back(n_++);
        }
        cl.diameter = diameter;
        cl.credit = params_.c() * std::max<double>(diameter, params_.epsilon * ell_ / 2);
        heads_.push_back(first);
        tails_.push_back(n_ - 1);
        clusters_.push_back(std::move(cl));
        return id;
    }

    // `count` nodes of one diameter joined tail to head; returns the first id.
    int path(int count, int diameter) {
        const int first = node(diameter);
        for (int k = 1; k < count; ++k) mst_link(first + k - 1, node(diameter));
        return first;
    }

    void mst_link(int x, int y) { mst_.push_back(add({tails_[static_cast<std::size_t>(x)], heads_[static_cast<std::size_t>(y)], 1.0})); }
    void mst_link_heads(int x, int y) { mst_.push_back(add({heads_[static_cast<std::size_t>(x)], heads_[static_cast<std::size_t>(y)], 1.0})); }

    EdgeId level_edge(int x, int y, double w) {
        level_.push_back(add({heads_[static_cast<std::size_t>(x)], tails_[static_cast<std::size_t>(y)], w}));
        return level_.back();
    }

    [[nodiscard]] double ell() const { return ell_; }

    std::unique_ptr<Level> build() const {
        return std::make_unique<Level>(WeightedGraph(n_, edges_), mst_, params_, clusters_, level_, ell_);
    }

  private:
    EdgeId add(Edge e) {
        edges_.push_back(e);
        return static_cast<EdgeId>(edges_.size()) - 1;
    }

    CertParams params_;
    double ell_;
    VertexId n_ = 0;
    std::vector<Edge> edges_;
    std::vector<EdgeId> mst_;
    std::vector<EdgeId> level_;
    std::vector<Cluster> clusters_;
    std::vector<VertexId> heads_;
    std::vector<VertexId> tails_;
};

inline int count_check(const std::vector<Violation>& vs, const std::string& check) {
    int n = 0;
    for (const auto& v : vs) n += v.check == check;
    return n;
}

}  // namespace fixture
