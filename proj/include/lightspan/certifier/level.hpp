// Copyright (c) lightspan contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Structural part of one level: the cluster graph over the previous level's
// clusters (the eps-clusters, called nodes here), and Phases 1 to 4 which
// group the nodes. No credit moves here; settle.hpp replays the budgets once
// every group is final.

#include <algorithm>
#include <limits>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "lightspan/certifier/base_clusters.hpp"
#include "lightspan/certifier/ledger.hpp"
#include "lightspan/graph.hpp"

namespace lightspan::cert {

// What a node became part of, in the order used to pick a payment class.
enum class Cat { None, P1, P2, P3a1, P3a2b, Aug4a, Long, AugStep1, ShortAffix, Step2, EmptyShort, ShortIndep, Whole, Orphan };

struct Link {
    EdgeId edge = -1;
    int a = -1;  // node ids, a < b
    int b = -1;
};

struct Group {
    Origin origin = Origin::Base;
    int center = -1;
    std::vector<int> core;       // nodes grouped before Phase 4, or the whole piece
    std::vector<int> aug4a;      // LD components merged in Phase 4a
    std::vector<int> aug_step1;  // augmenting subpaths of Phase 4b Step 1
    std::vector<int> aug_step2;  // short subpaths merged in Step 2
    std::vector<int> neighbors;  // Phase 1: N(X) as grouped in Step 1
    std::vector<int> p1_step2;   // Phase 1: nodes attached in Step 2
    std::vector<EdgeId> e_links; // E_i edges that are part of the cluster
    EdgeId phase3_edge = -1;
    // Short affixes are funded by the augmenting subpath of their HD-path.
    int funder_group = -1;
    std::vector<int> funder_nodes;
    double diam_core = -1;   // diameter before Phase 4
    double diam_step1 = -1;  // diameter after Phase 4a and Step 1

    [[nodiscard]] std::vector<int> members() const {
        std::vector<int> m = core;
        m.insert(m.end(), aug4a.begin(), aug4a.end());
        m.insert(m.end(), aug_step1.begin(), aug_step1.end());
        m.insert(m.end(), aug_step2.begin(), aug_step2.end());
        return m;
    }
};

struct LevelEngine {
    const WeightedGraph& g;
    const MstView& mst;
    const CertParams& params;
    const std::vector<Cluster>& nodes;
    std::vector<EdgeId> level_edges;  // E_i, sorted
    double ell = 0;
    std::string where;  // "(j,i)" label for violations

    std::vector<int> node_of;  // vertex -> node
    std::vector<double> ndiam;
    std::vector<Link> links;
    std::vector<EdgeId> dropped;  // E_i edges that are self-loops or parallel in the cluster graph
    std::vector<std::vector<std::pair<int, EdgeId>>> kadj;
    std::vector<std::vector<std::pair<int, EdgeId>>> fadj;  // forest F
    std::vector<char> marked;
    std::vector<char> alive;  // still in F, not yet grouped
    std::vector<int> group_of;
    std::vector<Cat> cat;
    std::vector<Group> groups;
    std::vector<Violation> violations;
    std::map<std::string, int> phase_counts;
    bool empty_case = false;
    bool trivial = false;  // a single group spans everything and E_i is empty
    std::vector<EdgeId> step2_unpaid_marks;

    LevelEngine(const WeightedGraph& graph, const MstView& tree, const CertParams& p, const std::vector<Cluster>& eps_clusters,
                std::vector<EdgeId> e_i, double scale, std::string label)
        : g(graph), mst(tree), params(p), nodes(eps_clusters), level_edges(std::move(e_i)), ell(scale), where(std::move(label)) {
        const auto k = nodes.size();
        node_of.assign(static_cast<std::size_t>(g.vertex_count()), -1);
        ndiam.resize(k);
        for (std::size_t x = 0; x < k; ++x) {
            for (VertexId v : nodes[x].vertices) node_of[static_cast<std::size_t>(v)] = static_cast<int>(x);
            ndiam[x] = nodes[x].diameter;
        }
        marked.assign(k, 0);
        alive.assign(k, 0);
        group_of.assign(k, -1);
        cat.assign(k, Cat::None);
        kadj.resize(k);
        fadj.resize(k);
    }

    void violate(std::string check, std::string detail, double slack = 0) {
        violations.push_back({std::move(check), where, std::move(detail), slack});
    }

    [[nodiscard]] double edge_w(EdgeId id) const { return g.edge(id).w; }
    [[nodiscard]] int node(VertexId v) const { return node_of[static_cast<std::size_t>(v)]; }
    [[nodiscard]] double diam(int x) const { return ndiam[static_cast<std::size_t>(x)]; }

    [[nodiscard]] double ediam_path(const std::vector<int>& path, std::size_t from, std::size_t to) const {
        double s = 0;
        for (std::size_t k = from; k <= to; ++k) s += diam(path[k]);
        return s;
    }

    // ---- cluster graph ------------------------------------------------------

    void build_cluster_graph() {
        std::map<std::pair<int, int>, EdgeId> best;
        for (EdgeId id : level_edges) {
            const Edge& e = g.edge(id);
            int a = node(e.u);
            int b = node(e.v);
            if (a == b) {
                violate("cluster graph self-loop", "edge " + std::to_string(id) + " has both ends in node " + std::to_string(a));
                dropped.push_back(id);
                continue;
            }
            if (a > b) std::swap(a, b);
            auto [it, fresh] = best.emplace(std::pair(a, b), id);
            if (!fresh) {
                const EdgeId other = it->second;
                const bool keep_new = edge_order_less(e, id, g.edge(other), other);
                const EdgeId heavy = keep_new ? other : id;
                if (keep_new) it->second = id;
                violate("cluster graph parallel link",
                        "edges " + std::to_string(std::min(id, other)) + " and " + std::to_string(std::max(id, other)) + " join nodes " +
                            std::to_string(a) + " and " + std::to_string(b) + "; dropped " + std::to_string(heavy));
                dropped.push_back(heavy);
            }
        }
        for (const auto& [ab, id] : best) links.push_back({id, ab.first, ab.second});
        std::sort(links.begin(), links.end(), [](const Link& x, const Link& y) { return x.edge < y.edge; });
        for (const auto& l : links) {
            kadj[static_cast<std::size_t>(l.a)].emplace_back(l.b, l.edge);
            kadj[static_cast<std::size_t>(l.b)].emplace_back(l.a, l.edge);
        }
        for (auto& list : kadj) std::sort(list.begin(), list.end());
        std::sort(dropped.begin(), dropped.end());
    }

    [[nodiscard]] int degree(int x) const { return static_cast<int>(kadj[static_cast<std::size_t>(x)].size()); }
    [[nodiscard]] bool high_degree(int x) const { return degree(x) >= params.high_degree(); }

    int new_group(Origin origin, int center) {
        groups.push_back({});
        groups.back().origin = origin;
        groups.back().center = center;
        ++phase_counts[to_string(origin)];
        return static_cast<int>(groups.size()) - 1;
    }

    void assign(int x, int grp, Cat c) {
        group_of[static_cast<std::size_t>(x)] = grp;
        cat[static_cast<std::size_t>(x)] = c;
        alive[static_cast<std::size_t>(x)] = 0;
    }

    // ---- Phase 1 ------------------------------------------------------------

    void phase1() {
        const int k = static_cast<int>(nodes.size());
        for (bool again = true; again;) {
            again = false;
            for (int x = 0; x < k; ++x) {
                if (marked[static_cast<std::size_t>(x)] || !high_degree(x)) continue;
                bool free = true;
                for (auto [y, id] : kadj[static_cast<std::size_t>(x)]) free = free && !marked[static_cast<std::size_t>(y)];
                if (!free) continue;
                const int grp = new_group(Origin::P1, x);
                auto& G = groups[static_cast<std::size_t>(grp)];
                G.core.push_back(x);
                marked[static_cast<std::size_t>(x)] = 1;
                for (auto [y, id] : kadj[static_cast<std::size_t>(x)]) {
                    G.core.push_back(y);
                    G.neighbors.push_back(y);
                    G.e_links.push_back(id);
                    marked[static_cast<std::size_t>(y)] = 1;
                }
                for (int y : G.core) {
                    group_of[static_cast<std::size_t>(y)] = grp;
                    cat[static_cast<std::size_t>(y)] = Cat::P1;
                }
                again = true;
                break;  // restart from the minimum id
            }
        }
        // Step 2 looks at the marks left by Step 1 only.
        const auto step1_marks = marked;
        for (int y = 0; y < k; ++y) {
            if (marked[static_cast<std::size_t>(y)] || !high_degree(y)) continue;
            int z = -1;
            EdgeId via = -1;
            for (auto [x, id] : kadj[static_cast<std::size_t>(y)]) {
                if (step1_marks[static_cast<std::size_t>(x)] && (z < 0 || x < z)) {
                    z = x;
                    via = id;
                }
            }
            if (z < 0) {
                violate("phase 1 step 2", "high-degree node " + std::to_string(y) + " has no marked neighbour");
                continue;
            }
            const int grp = group_of[static_cast<std::size_t>(z)];
            auto& G = groups[static_cast<std::size_t>(grp)];
            G.core.push_back(y);
            G.p1_step2.push_back(y);
            G.e_links.push_back(via);
            group_of[static_cast<std::size_t>(y)] = grp;
            cat[static_cast<std::size_t>(y)] = Cat::P1;
        }
        for (int y = 0; y < k; ++y) {
            if (cat[static_cast<std::size_t>(y)] == Cat::P1) marked[static_cast<std::size_t>(y)] = 1;
        }
    }

    // ---- forest F -------------------------------------------------------------

    void build_forest() {
        const auto k = nodes.size();
        UnionFind uf(k);
        for (EdgeId id : mst.ids) {
            const Edge& e = g.edge(id);
            const int a = node(e.u);
            const int b = node(e.v);
            if (a == b || marked[static_cast<std::size_t>(a)] || marked[static_cast<std::size_t>(b)]) continue;
            if (uf.unite(static_cast<std::size_t>(a), static_cast<std::size_t>(b))) {
                fadj[static_cast<std::size_t>(a)].emplace_back(b, id);
                fadj[static_cast<std::size_t>(b)].emplace_back(a, id);
            }
        }
        for (std::size_t x = 0; x < k; ++x) alive[x] = !marked[x];
    }

    [[nodiscard]] std::vector<int> alive_neighbors(int x) const {
        std::vector<int> out;
        for (auto [y, id] : fadj[static_cast<std::size_t>(x)]) {
            if (alive[static_cast<std::size_t>(y)]) out.push_back(y);
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    // Components of F restricted to alive nodes, each sorted, ordered by minimum node.
    [[nodiscard]] std::vector<std::vector<int>> components() const {
        const int k = static_cast<int>(nodes.size());
        std::vector<char> seen(static_cast<std::size_t>(k), 0);
        std::vector<std::vector<int>> out;
        for (int x = 0; x < k; ++x) {
            if (!alive[static_cast<std::size_t>(x)] || seen[static_cast<std::size_t>(x)]) continue;
            std::vector<int> comp{x};
            seen[static_cast<std::size_t>(x)] = 1;
            for (std::size_t h = 0; h < comp.size(); ++h) {
                for (int y : alive_neighbors(comp[h])) {
                    if (!seen[static_cast<std::size_t>(y)]) {
                        seen[static_cast<std::size_t>(y)] = 1;
                        comp.push_back(y);
                    }
                }
            }
            std::sort(comp.begin(), comp.end());
            out.push_back(std::move(comp));
        }
        return out;
    }

    [[nodiscard]] bool is_path(const std::vector<int>& comp) const {
        for (int x : comp) {
            if (alive_neighbors(x).size() > 2) return false;
        }
        return true;
    }

    // Nodes of a path component in order, starting from the end with the smaller id.
    [[nodiscard]] std::vector<int> path_order(const std::vector<int>& comp) const {
        int start = comp.front();
        for (int x : comp) {
            if (alive_neighbors(x).size() <= 1) {
                start = x;
                break;
            }
        }
        std::vector<int> out{start};
        int prev = -1;
        while (true) {
            int next = -1;
            for (int y : alive_neighbors(out.back())) {
                if (y != prev) next = y;
            }
            if (next < 0 || out.size() == comp.size()) break;
            prev = out.back();
            out.push_back(next);
        }
        return out;
    }

    // Largest node-weighted path sum in a tree of alive F nodes restricted to `in`.
    [[nodiscard]] double ediam_tree(const std::vector<int>& comp) const {
        if (comp.empty()) return 0;
        std::set<int> in(comp.begin(), comp.end());
        // down[x]: heaviest downward path starting at x
        std::map<int, double> down;
        double best = 0;
        std::vector<std::pair<int, int>> order;  // (node, parent)
        std::vector<std::pair<int, int>> stack{{comp.front(), -1}};
        while (!stack.empty()) {
            auto [x, p] = stack.back();
            stack.pop_back();
            order.emplace_back(x, p);
            for (auto [y, id] : fadj[static_cast<std::size_t>(x)]) {
                if (y != p && in.count(y)) stack.emplace_back(y, x);
            }
        }
        for (auto it = order.rbegin(); it != order.rend(); ++it) {
            auto [x, p] = *it;
            double a = 0;
            double b = 0;
            for (auto [y, id] : fadj[static_cast<std::size_t>(x)]) {
                if (y == p || !in.count(y)) continue;
                const double h = down[y];
                if (h > a) {
                    b = a;
                    a = h;
                } else if (h > b) {
                    b = h;
                }
            }
            down[x] = diam(x) + a;
            best = std::max(best, diam(x) + a + b);
        }
        return best;
    }

    // ---- Phase 2 ------------------------------------------------------------

    void phase2() {
        const double target = 2 * ell;
        while (true) {
            int center = -1;
            std::vector<int> tree;
            for (auto& comp : components()) {
                if (is_path(comp) || ediam_tree(comp) < target) continue;
                for (int x : comp) {
                    if (alive_neighbors(x).size() >= 3) {
                        center = x;
                        break;
                    }
                }
                tree = comp;
                break;
            }
            if (center < 0) return;
            // Grow from X and its neighbours in BFS order (depth, then id).
            std::map<int, int> depth{{center, 0}};
            std::vector<int> frontier{center};
            for (std::size_t h = 0; h < frontier.size(); ++h) {
                for (int y : alive_neighbors(frontier[h])) {
                    if (!depth.count(y)) {
                        depth[y] = depth[frontier[h]] + 1;
                        frontier.push_back(y);
                    }
                }
            }
            std::vector<int> bfs(frontier.begin(), frontier.end());
            std::stable_sort(bfs.begin(), bfs.end(), [&](int a, int b) { return std::pair(depth[a], a) < std::pair(depth[b], b); });
            std::vector<int> chosen;
            std::size_t take = 1 + alive_neighbors(center).size();
            chosen.assign(bfs.begin(), bfs.begin() + static_cast<std::ptrdiff_t>(take));
            while (ediam_tree(chosen) < target && take < bfs.size()) chosen.push_back(bfs[take++]);
            const int grp = new_group(Origin::P2, center);
            auto& G = groups[static_cast<std::size_t>(grp)];
            G.core = chosen;
            for (int x : chosen) assign(x, grp, Cat::P2);
        }
    }

    // ---- Phase 3 ------------------------------------------------------------

    struct PathView {
        std::vector<int> nodes;
        std::vector<double> prefix;  // prefix[k] = ediam of nodes[0..k]
        std::map<int, int> pos;

        [[nodiscard]] double range(int a, int b) const { return prefix[static_cast<std::size_t>(b)] - (a > 0 ? prefix[static_cast<std::size_t>(a - 1)] : 0.0); }
        [[nodiscard]] int last() const { return static_cast<int>(nodes.size()) - 1; }
    };

    [[nodiscard]] PathView make_view(std::vector<int> order) const {
        PathView v;
        v.nodes = std::move(order);
        double s = 0;
        for (std::size_t k = 0; k < v.nodes.size(); ++k) {
            s += diam(v.nodes[k]);
            v.prefix.push_back(s);
            v.pos[v.nodes[k]] = static_cast<int>(k);
        }
        return v;
    }

    [[nodiscard]] std::vector<PathView> hd_paths() const {
        std::vector<PathView> out;
        for (auto& comp : components()) {
            if (!is_path(comp)) continue;
            auto v = make_view(path_order(comp));
            if (v.prefix.back() >= 4 * ell) out.push_back(std::move(v));
        }
        return out;
    }

    // Leftmost start a such that nodes[a..p] reaches `need`, growing left from p.
    static int grow_left(const PathView& v, int p, int stop, double need) {
        int a = p;
        while (v.range(a, p) < need && a > stop) --a;
        return a;
    }
    static int grow_right(const PathView& v, int q, int stop, double need) {
        int b = q;
        while (v.range(q, b) < need && b < stop) ++b;
        return b;
    }

    void emit_path_cluster(Origin origin, Cat c, int center, const std::vector<int>& members, EdgeId e) {
        const int grp = new_group(origin, center);
        auto& G = groups[static_cast<std::size_t>(grp)];
        G.core = members;
        G.phase3_edge = e;
        G.e_links.push_back(e);
        for (int x : members) assign(x, grp, c);
    }

    struct Chord {
        EdgeId edge;
        std::size_t path;
        int p;
        int q;
    };

    // Intra-path links whose two disjoint affixes ending at X and Y both
    // reach 2 ell.
    [[nodiscard]] std::vector<Chord> qualifying_chords(const std::vector<PathView>& paths) const {
        std::vector<Chord> out;
        for (std::size_t k = 0; k < paths.size(); ++k) {
            const auto& v = paths[k];
            for (const auto& l : links) {
                auto ia = v.pos.find(l.a);
                auto ib = v.pos.find(l.b);
                if (ia == v.pos.end() || ib == v.pos.end()) continue;
                const int p = std::min(ia->second, ib->second);
                const int q = std::max(ia->second, ib->second);
                if (v.range(0, p) >= 2 * ell && v.range(q, v.last()) >= 2 * ell) out.push_back({l.edge, k, p, q});
            }
        }
        std::sort(out.begin(), out.end(), [&](const Chord& x, const Chord& y) {
            return edge_order_less(g.edge(x.edge), x.edge, g.edge(y.edge), y.edge);
        });
        return out;
    }

    // First chord (by weight, id) of the requested case with no other
    // qualifying chord nested inside its X-to-Y subpath.
    [[nodiscard]] std::optional<Chord> pick_chord(const std::vector<PathView>& paths, bool case1) const {
        const auto all = qualifying_chords(paths);
        for (const auto& ch : all) {
            const bool short_span = paths[ch.path].range(ch.p, ch.q) <= 2 * ell;
            if (short_span != case1) continue;
            bool nested = false;
            for (const auto& o : all) {
                if (o.edge != ch.edge && o.path == ch.path && o.p >= ch.p && o.q <= ch.q) nested = true;
            }
            if (!nested) return ch;
        }
        return std::nullopt;
    }

    void phase3() {
        // 3a: Case 1 whenever one applies, Case 2 otherwise.
        while (true) {
            const auto paths = hd_paths();
            auto ch = pick_chord(paths, true);
            const bool case1 = ch.has_value();
            if (!ch) ch = pick_chord(paths, false);
            if (!ch) break;
            const auto& v = paths[ch->path];
            const int a = grow_left(v, ch->p, 0, 2 * ell);
            const int b = grow_right(v, ch->q, v.last(), 2 * ell);
            std::vector<int> members;
            const int x = v.nodes[static_cast<std::size_t>(ch->p)];
            if (case1) {
                for (int k = a; k <= b; ++k) members.push_back(v.nodes[static_cast<std::size_t>(k)]);
                emit_path_cluster(Origin::P3a1, Cat::P3a1, x, members, ch->edge);
            } else {
                const int qx = grow_right(v, ch->p, ch->q, ell);
                const int qy = std::max(qx + 1, grow_left(v, ch->q, ch->p, ell));
                for (int k = a; k <= qx; ++k) members.push_back(v.nodes[static_cast<std::size_t>(k)]);
                for (int k = qy; k <= b; ++k) members.push_back(v.nodes[static_cast<std::size_t>(k)]);
                emit_path_cluster(Origin::P3a2, Cat::P3a2b, x, members, ch->edge);
            }
        }
        // 3b: links between two HD-paths with both ends far from the path ends.
        while (true) {
            const auto paths = hd_paths();
            std::map<int, std::pair<std::size_t, int>> where_is;
            for (std::size_t k = 0; k < paths.size(); ++k) {
                for (auto [x, p] : paths[k].pos) where_is[x] = {k, p};
            }
            auto far = [&](int x) {
                auto it = where_is.find(x);
                if (it == where_is.end()) return false;
                const auto& v = paths[it->second.first];
                const int p = it->second.second;
                return v.range(0, p) >= 2 * ell && v.range(p, v.last()) >= 2 * ell;
            };
            std::optional<Link> pick;
            for (const auto& l : links) {
                auto ia = where_is.find(l.a);
                auto ib = where_is.find(l.b);
                if (ia == where_is.end() || ib == where_is.end() || ia->second.first == ib->second.first) continue;
                if (!far(l.a) || !far(l.b)) continue;
                if (!pick || edge_order_less(g.edge(l.edge), l.edge, g.edge(pick->edge), pick->edge)) pick = l;
            }
            if (!pick) break;
            std::vector<int> members;
            for (int end : {pick->a, pick->b}) {
                const auto [k, p] = where_is[end];
                const auto& v = paths[k];
                const int a = grow_left(v, p, 0, 2 * ell);
                const int b = grow_right(v, p, v.last(), 2 * ell);
                for (int t = a; t <= b; ++t) members.push_back(v.nodes[static_cast<std::size_t>(t)]);
            }
            const Edge& e = g.edge(pick->edge);
            emit_path_cluster(Origin::P3b, Cat::P3a2b, node(e.u), members, pick->edge);
        }
    }

    // ---- Phase 4 ------------------------------------------------------------

    // Greedy left-to-right split into pieces reaching 2 ell; a short tail joins the last piece.
    [[nodiscard]] std::vector<std::pair<int, int>> split_pieces(const PathView& v) const {
        std::vector<std::pair<int, int>> out;
        int start = 0;
        for (int k = 0; k <= v.last(); ++k) {
            if (v.range(start, k) >= 2 * ell) {
                out.emplace_back(start, k);
                start = k + 1;
            }
        }
        if (start <= v.last()) {
            if (out.empty()) {
                out.emplace_back(start, v.last());
            } else {
                out.back().second = v.last();
            }
        }
        return out;
    }

    [[nodiscard]] bool is_long(int a, int b) const { return b - a + 1 >= params.long_threshold(); }

    // Group diameter over members, for the growth checks of Phase 4.
    [[nodiscard]] double group_diameter(const Group& G) const;

    // Lowest-id MST edge from `comp` to a node that is already grouped.
    [[nodiscard]] std::pair<EdgeId, int> attachment(const std::vector<int>& comp) const {
        std::set<int> in(comp.begin(), comp.end());
        EdgeId best = -1;
        int target = -1;
        for (int x : comp) {
            for (VertexId v : nodes[static_cast<std::size_t>(x)].vertices) {
                for (auto [to, id] : mst.adj[static_cast<std::size_t>(v)]) {
                    const int y = node(to);
                    if (in.count(y) || group_of[static_cast<std::size_t>(y)] < 0) continue;
                    if (best < 0 || id < best) {
                        best = id;
                        target = y;
                    }
                }
            }
        }
        return {best, target};
    }

    // True when some payment class already covers this link before Step 2.
    [[nodiscard]] bool paid_before_step2(const Link& l) const {
        const Cat ca = cat[static_cast<std::size_t>(l.a)];
        const Cat cb = cat[static_cast<std::size_t>(l.b)];
        if (ca == Cat::P1 && cb == Cat::P1) return true;
        auto pays = [](Cat c) {
            return c == Cat::P2 || c == Cat::P3a1 || c == Cat::P3a2b || c == Cat::Aug4a || c == Cat::Long || c == Cat::AugStep1 ||
                   c == Cat::ShortAffix || c == Cat::Step2;
        };
        return pays(ca) || pays(cb);
    }

    void phase4() {
        for (auto& G : groups) G.diam_core = group_diameter(G);
        const auto before = groups.size();

        // 4a
        std::vector<std::vector<int>> hd;
        for (auto& comp : components()) {
            const double ed = is_path(comp) ? make_view(path_order(comp)).prefix.back() : ediam_tree(comp);
            if (ed >= 4 * ell) {
                if (!is_path(comp)) violate("HD component is not a path", "component of node " + std::to_string(comp.front()));
                hd.push_back(comp);
                continue;
            }
            const auto [edge, target] = attachment(comp);
            if (target < 0 || group_of[static_cast<std::size_t>(target)] >= static_cast<int>(before)) {
                violate("phase 4a", "LD component of node " + std::to_string(comp.front()) + " has no MST edge to an earlier cluster");
                const int grp = new_group(Origin::Orphan, comp.front());
                groups[static_cast<std::size_t>(grp)].core = comp;
                for (int x : comp) assign(x, grp, Cat::Orphan);
                continue;
            }
            const int grp = group_of[static_cast<std::size_t>(target)];
            auto& G = groups[static_cast<std::size_t>(grp)];
            G.aug4a.insert(G.aug4a.end(), comp.begin(), comp.end());
            for (int x : comp) assign(x, grp, Cat::Aug4a);
        }

        // 4b Step 1
        struct Pending {
            std::vector<int> nodes;
        };
        std::vector<Pending> shorts;
        for (auto& comp : hd) {
            const auto v = make_view(path_order(comp));
            const auto [edge, target] = attachment(comp);
            const auto pieces = split_pieces(v);
            int aug_piece = -1;
            if (target >= 0) {
                const Edge& e = g.edge(edge);
                const int inside = group_of[static_cast<std::size_t>(node(e.u))] < 0 ? node(e.u) : node(e.v);
                const int p = v.pos.at(inside);
                for (std::size_t k = 0; k < pieces.size(); ++k) {
                    if (pieces[k].first <= p && p <= pieces[k].second) aug_piece = static_cast<int>(k);
                }
            } else {
                violate("phase 4b", "HD-path of node " + std::to_string(comp.front()) + " has no MST edge to a cluster");
            }
            auto slice = [&](std::pair<int, int> pc) {
                std::vector<int> out;
                for (int k = pc.first; k <= pc.second; ++k) out.push_back(v.nodes[static_cast<std::size_t>(k)]);
                return out;
            };
            int aug_group = -1;
            std::vector<int> aug_nodes;
            if (aug_piece >= 0) {
                aug_group = group_of[static_cast<std::size_t>(target)];
                aug_nodes = slice(pieces[static_cast<std::size_t>(aug_piece)]);
                auto& G = groups[static_cast<std::size_t>(aug_group)];
                G.aug_step1.insert(G.aug_step1.end(), aug_nodes.begin(), aug_nodes.end());
                for (int x : aug_nodes) assign(x, aug_group, Cat::AugStep1);
            }
            std::vector<int> affix_groups;
            for (std::size_t k = 0; k < pieces.size(); ++k) {
                if (static_cast<int>(k) == aug_piece) continue;
                const auto members = slice(pieces[k]);
                const bool affix = k == 0 || k + 1 == pieces.size();
                if (is_long(pieces[k].first, pieces[k].second)) {
                    const int grp = new_group(Origin::P4Long, members.front());
                    groups[static_cast<std::size_t>(grp)].core = members;
                    for (int x : members) assign(x, grp, Cat::Long);
                } else if (affix) {
                    const int grp = new_group(Origin::P4Affix, members.front());
                    auto& G = groups[static_cast<std::size_t>(grp)];
                    G.core = members;
                    G.funder_group = aug_group;
                    G.funder_nodes = aug_nodes;
                    for (int x : members) assign(x, grp, Cat::ShortAffix);
                } else {
                    shorts.push_back({members});
                }
            }
        }
        for (std::size_t k = 0; k < before; ++k) {
            auto& G = groups[k];
            G.diam_step1 = (G.aug4a.empty() && G.aug_step1.empty()) ? G.diam_core : group_diameter(G);
        }

        // Step 2, in rounds: a piece whose unpaid links all lead to pieces
        // still pending waits for them; a round with no progress releases
        // the first waiting piece as an independent cluster.
        std::vector<char> done(shorts.size(), 0);
        for (std::size_t remaining = shorts.size(); remaining > 0;) {
            bool progress = false;
            int first_waiting = -1;
            for (std::size_t k = 0; k < shorts.size(); ++k) {
                if (done[k]) continue;
                const auto& members = shorts[k].nodes;
                std::set<int> in(members.begin(), members.end());
                bool any_unpaid = false;
                std::optional<Link> merge;
                for (int x : members) {
                    for (auto [y, id] : kadj[static_cast<std::size_t>(x)]) {
                        const Link l{id, std::min(x, y), std::max(x, y)};
                        if (paid_before_step2(l)) continue;
                        any_unpaid = true;
                        if (in.count(y) || group_of[static_cast<std::size_t>(y)] < 0) continue;
                        if (!merge || id < merge->edge) merge = l;
                    }
                }
                if (!any_unpaid) {
                    const int grp = new_group(Origin::P4Short, members.front());
                    groups[static_cast<std::size_t>(grp)].core = members;
                    for (int x : members) assign(x, grp, Cat::ShortIndep);
                } else if (merge) {
                    const int other = in.count(merge->a) ? merge->b : merge->a;
                    const int grp = group_of[static_cast<std::size_t>(other)];
                    auto& G = groups[static_cast<std::size_t>(grp)];
                    if (G.origin != Origin::P1) {
                        violate("Observation 6 breached", "step-2 link " + std::to_string(merge->edge) + " leads to a " + to_string(G.origin) + " cluster");
                    }
                    G.aug_step2.insert(G.aug_step2.end(), members.begin(), members.end());
                    G.e_links.push_back(merge->edge);
                    for (int x : members) assign(x, grp, Cat::Step2);
                } else {
                    if (first_waiting < 0) first_waiting = static_cast<int>(k);
                    continue;
                }
                done[k] = 1;
                --remaining;
                progress = true;
            }
            if (!progress && first_waiting >= 0) {
                const auto& members = shorts[static_cast<std::size_t>(first_waiting)].nodes;
                const int grp = new_group(Origin::P4Short, members.front());
                groups[static_cast<std::size_t>(grp)].core = members;
                for (int x : members) assign(x, grp, Cat::ShortIndep);
                done[static_cast<std::size_t>(first_waiting)] = 1;
                --remaining;
            }
        }
    }

    // ---- empty cluster set after Phase 3 ------------------------------------

    void handle_empty() {
        empty_case = true;
        auto comps = components();
        if (comps.size() != 1) {
            violate("empty case (i)", std::to_string(comps.size()) + " components instead of a single cluster-path");
        }
        for (const auto& comp : comps) {
            if (!is_path(comp)) {
                if (!level_edges.empty()) violate("empty case (i)", "component of node " + std::to_string(comp.front()) + " is not a path");
                const int grp = new_group(Origin::Whole, comp.front());
                groups[static_cast<std::size_t>(grp)].core = comp;
                for (int x : comp) assign(x, grp, Cat::Whole);
                continue;
            }
            const auto v = make_view(path_order(comp));
            for (const auto& l : links) {
                auto near_end = [&](int x) {
                    auto it = v.pos.find(x);
                    return it != v.pos.end() && (v.range(0, it->second) < 2 * ell || v.range(it->second, v.last()) < 2 * ell);
                };
                if (!near_end(l.a) && !near_end(l.b)) {
                    violate("empty case (ii)", "link " + std::to_string(l.edge) + " has no endpoint in a short affix");
                }
            }
            for (int x : comp) {
                if (high_degree(x)) violate("empty case (iii)", "node " + std::to_string(x) + " is high-degree");
            }
            for (auto [a, b] : split_pieces(v)) {
                std::vector<int> members;
                for (int k = a; k <= b; ++k) members.push_back(v.nodes[static_cast<std::size_t>(k)]);
                const bool lng = is_long(a, b);
                const int grp = new_group(lng ? Origin::EmptyLong : Origin::EmptyShort, members.front());
                groups[static_cast<std::size_t>(grp)].core = members;
                for (int x : members) assign(x, grp, lng ? Cat::Long : Cat::EmptyShort);
            }
        }
    }

    void run() {
        build_cluster_graph();
        phase1();
        build_forest();
        phase2();
        phase3();
        if (groups.empty()) {
            handle_empty();
        } else {
            phase4();
        }
        trivial = groups.size() == 1 && level_edges.empty() && groups.front().members().size() == nodes.size();
    }
};

namespace detail {

struct GroupSubgraph {
    std::vector<VertexId> vertices;
    std::vector<EdgeId> edges;
    std::vector<EdgeId> new_mst;  // MST edges absorbed for the first time
};

// The cluster subgraph: members' own edges, every MST edge between member
// vertices, and the group's E_i links.
inline GroupSubgraph group_subgraph(const LevelEngine& L, const std::vector<int>& members, const std::vector<EdgeId>& e_links) {
    GroupSubgraph out;
    std::set<int> in(members.begin(), members.end());
    std::vector<char> owned;
    for (int x : members) {
        const auto& cl = L.nodes[static_cast<std::size_t>(x)];
        out.vertices.insert(out.vertices.end(), cl.vertices.begin(), cl.vertices.end());
        out.edges.insert(out.edges.end(), cl.edges.begin(), cl.edges.end());
    }
    std::sort(out.edges.begin(), out.edges.end());
    for (int x : members) {
        for (VertexId v : L.nodes[static_cast<std::size_t>(x)].vertices) {
            for (auto [to, id] : L.mst.adj[static_cast<std::size_t>(v)]) {
                if (to < v || !in.count(L.node(to))) continue;
                if (!std::binary_search(out.edges.begin(), out.edges.end(), id)) out.new_mst.push_back(id);
            }
        }
    }
    std::sort(out.new_mst.begin(), out.new_mst.end());
    out.new_mst.erase(std::unique(out.new_mst.begin(), out.new_mst.end()), out.new_mst.end());
    out.edges.insert(out.edges.end(), out.new_mst.begin(), out.new_mst.end());
    out.edges.insert(out.edges.end(), e_links.begin(), e_links.end());
    std::sort(out.edges.begin(), out.edges.end());
    out.edges.erase(std::unique(out.edges.begin(), out.edges.end()), out.edges.end());
    std::sort(out.vertices.begin(), out.vertices.end());
    return out;
}

}  // namespace detail

inline double LevelEngine::group_diameter(const Group& G) const {
    const auto sub = detail::group_subgraph(*this, G.members(), G.e_links);
    return subgraph_diameter(g, sub.vertices, sub.edges).diameter;
}

}  // namespace lightspan::cert
