// Copyright (c) lightspan contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Credit settlement for one level once the grouping is final: choose the
// saved, reserved and releasing members against the final diameter path,
// open the center pools, buy every E_i edge, and check the invariants.

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "lightspan/certifier/level.hpp"

namespace lightspan::cert {

struct ClassTotals {
    int count = 0;
    double weight = 0;
};

struct LevelReport {
    int i = 0;
    double ell = 0;
    bool trivial = false;
    bool empty_case = false;
    std::map<std::string, int> phase_counts;
    int dc1_checked = 0;
    int dc1_failed = 0;
    int dc2_checked = 0;
    int dc2_failed = 0;
    double max_diameter_ratio = 0;  // max diam / ell over new clusters
    std::map<PayClass, ClassTotals> payments;
    std::vector<Payment> payment_log;  // edge ids of the certified graph
    std::vector<EdgeId> bag;
    std::vector<Violation> violations;
    int negative_events = 0;
    double credit_before = 0;
    double credit_after = 0;
    double spent = 0;
    bool cluster_graph_simple = true;
    std::size_t level_edges = 0;
    std::size_t clusters_in = 0;
    std::size_t clusters_out = 0;
};

inline nlohmann::json to_json(const LevelReport& r) {
    nlohmann::json pay = nlohmann::json::object();
    for (const auto& [k, t] : r.payments) pay[to_string(k)] = {{"count", t.count}, {"weight", t.weight}};
    nlohmann::json v = nlohmann::json::array();
    for (const auto& x : r.violations) v.push_back(to_json(x));
    const double tol = kRelTol * std::max(1.0, r.credit_before);
    return {{"i", r.i},
            {"ell", r.ell},
            {"trivial", r.trivial},
            {"empty_case", r.empty_case},
            {"level_edges", r.level_edges},
            {"clusters_in", r.clusters_in},
            {"clusters_out", r.clusters_out},
            {"phase_counts", r.phase_counts},
            {"dc1", {{"checked", r.dc1_checked}, {"violations", r.dc1_failed}}},
            {"dc2", {{"checked", r.dc2_checked}, {"violations", r.dc2_failed}, {"max_diameter_over_ell", r.max_diameter_ratio}}},
            {"payments", pay},
            {"bag", {{"edges", r.bag.size()}}},
            {"negative_balance_events", r.negative_events},
            {"violations", v},
            {"conservation",
             {{"before", r.credit_before},
              {"after", r.credit_after},
              {"spent", r.spent},
              {"ok", std::abs(r.credit_before - r.credit_after - r.spent) <= tol}}},
            {"cluster_graph_simple", r.cluster_graph_simple}};
}

namespace detail {

struct Settlement {
    std::vector<int> saved;      // S, S'' and S''' together
    std::vector<int> reserved;   // R
    std::set<int> releasing;
    std::set<int> on_path;       // nodes touched by the diameter path D
    std::vector<EdgeId> d_path;
    GroupSubgraph sub;
    double diameter = 0;
    double saved_credit = 0;
    double pool_open = 0;
    bool simple_path = true;
};

inline std::vector<int> trunc(std::vector<int> v, int cap) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    if (static_cast<int>(v.size()) > cap) v.resize(static_cast<std::size_t>(cap));
    return v;
}

inline std::vector<int> on(const std::vector<int>& v, const std::set<int>& path) {
    std::vector<int> out;
    for (int x : v) {
        if (path.count(x)) out.push_back(x);
    }
    return out;
}

// Contracted diameter path: node sequence with consecutive repeats merged.
inline std::vector<int> contracted_path(const LevelEngine& L, const DiameterResult& d) {
    std::vector<int> seq{L.node(d.a)};
    VertexId at = d.a;
    for (EdgeId id : d.path) {
        at = L.g.edge(id).other(at);
        const int x = L.node(at);
        if (x != seq.back()) seq.push_back(x);
    }
    return seq;
}

}  // namespace detail

struct LevelOutcome {
    std::vector<Cluster> clusters;
    LevelReport report;
};

// Settles a level whose engine has already run. `absorbed` marks MST edges
// already inside some node; it is updated with the newly absorbed edges.
inline LevelOutcome settle_level(LevelEngine& L, std::vector<char>& absorbed, int level_index) {
    const CertParams& P = L.params;
    const double c = P.c();
    const double ell = L.ell;
    const double eps = P.epsilon;
    const double g = P.g;
    const int cap = P.trunc_cap();
    LevelOutcome out;
    LevelReport& rep = out.report;
    rep.i = level_index;
    rep.ell = ell;
    rep.trivial = L.trivial;
    rep.empty_case = L.empty_case;
    rep.phase_counts = L.phase_counts;
    rep.level_edges = L.level_edges.size();
    rep.clusters_in = L.nodes.size();
    rep.cluster_graph_simple = L.dropped.empty();
    auto violate = [&](std::string check, std::string detail, double slack = 0) {
        rep.violations.push_back({std::move(check), L.where, std::move(detail), slack});
    };

    for (const auto& cl : L.nodes) rep.credit_before += cl.credit;
    for (EdgeId id : L.mst.ids) {
        if (!absorbed[static_cast<std::size_t>(id)]) rep.credit_before += c;
    }

    CreditLedger ledger;
    const auto k = L.nodes.size();
    std::vector<double> spend_cap(k, 0);
    std::vector<double> spent_by(k, 0);
    auto node_holder = [](int x) { return "node:" + std::to_string(x); };
    auto pool_holder = [](std::size_t grp) { return "pool:" + std::to_string(grp); };
    auto label = [&](std::size_t grp) { return to_string(L.groups[grp].origin) + "#" + std::to_string(grp); };

    // ---- settlement of every group ---------------------------------------
    std::vector<detail::Settlement> st(L.groups.size());
    for (std::size_t gi = 0; gi < L.groups.size(); ++gi) {
        const Group& G = L.groups[gi];
        auto& s = st[gi];
        const auto members = G.members();
        s.sub = detail::group_subgraph(L, members, G.e_links);
        const auto d = subgraph_diameter(L.g, s.sub.vertices, s.sub.edges);
        s.diameter = d.diameter;
        s.d_path = d.path;
        std::sort(s.d_path.begin(), s.d_path.end());
        const auto seq = detail::contracted_path(L, d);
        s.on_path.insert(seq.begin(), seq.end());
        s.simple_path = s.on_path.size() == seq.size();

        std::vector<int> S;
        std::vector<int> R;
        const std::set<int> member_set(members.begin(), members.end());
        switch (G.origin) {
            case Origin::P1: {
                S.push_back(G.center);
                auto nd = detail::on(G.neighbors, s.on_path);
                std::sort(nd.begin(), nd.end());
                if (nd.size() > 2) nd.resize(2);
                for (int y : G.neighbors) {
                    if (nd.size() >= 2) break;
                    if (std::find(nd.begin(), nd.end(), y) == nd.end()) nd.push_back(y);
                }
                S.insert(S.end(), nd.begin(), nd.end());
                const auto st2 = detail::on(G.p1_step2, s.on_path);
                S.insert(S.end(), st2.begin(), st2.end());
                std::vector<int> rest;
                for (int y : G.neighbors) {
                    if (std::find(S.begin(), S.end(), y) == S.end()) rest.push_back(y);
                }
                R = detail::trunc(rest, P.reserve_p1());
                if (static_cast<int>(R.size()) < P.reserve_p1()) {
                    violate("P1 reserve", label(gi) + " reserves " + std::to_string(R.size()) + " neighbours",
                            P.reserve_p1() - static_cast<double>(R.size()));
                }
                break;
            }
            case Origin::P2: {
                S = detail::trunc(detail::on(G.core, s.on_path), cap);
                int r = -1;
                for (auto [y, id] : L.fadj[static_cast<std::size_t>(G.center)]) {
                    if (!member_set.count(y) || std::find(S.begin(), S.end(), y) != S.end()) continue;
                    if (std::find(G.core.begin(), G.core.end(), y) == G.core.end()) continue;
                    if (r < 0 || y < r) r = y;
                }
                if (r >= 0) {
                    R.push_back(r);
                } else {
                    violate("P2 reserve", label(gi) + " has no forest neighbour of its center outside S");
                }
                break;
            }
            case Origin::P3a1:
            case Origin::P3a2:
            case Origin::P3b: {
                S = detail::trunc(detail::on(G.core, s.on_path), cap);
                std::vector<int> off;
                for (int x : G.core) {
                    if (!s.on_path.count(x)) off.push_back(x);
                }
                R = detail::trunc(off, cap);
                break;
            }
            case Origin::P4Long:
            case Origin::EmptyLong: {
                auto first = detail::on(G.core, s.on_path);
                std::sort(first.begin(), first.end());
                std::vector<int> rest;
                for (int x : G.core) {
                    if (!s.on_path.count(x)) rest.push_back(x);
                }
                std::sort(rest.begin(), rest.end());
                first.insert(first.end(), rest.begin(), rest.end());
                for (int x : first) {
                    if (static_cast<int>(S.size()) < cap) {
                        S.push_back(x);
                    } else if (R.empty()) {
                        R.push_back(x);
                    }
                }
                break;
            }
            default:
                S = G.core;
                break;
        }
        std::vector<int> aug1 = G.aug4a;
        aug1.insert(aug1.end(), G.aug_step1.begin(), G.aug_step1.end());
        const auto s2 = detail::trunc(detail::on(aug1, s.on_path), cap);
        const auto s3 = detail::trunc(detail::on(G.aug_step2, s.on_path), cap);
        S.insert(S.end(), s2.begin(), s2.end());
        S.insert(S.end(), s3.begin(), s3.end());
        std::sort(S.begin(), S.end());
        S.erase(std::unique(S.begin(), S.end()), S.end());
        s.saved = S;
        s.reserved = R;
        for (int x : members) {
            if (!std::binary_search(S.begin(), S.end(), x) && std::find(R.begin(), R.end(), x) == R.end()) s.releasing.insert(x);
        }

        for (int x : S) s.saved_credit += L.nodes[static_cast<std::size_t>(x)].credit;
        for (int x : R) s.pool_open += L.nodes[static_cast<std::size_t>(x)].credit;
        for (EdgeId id : s.sub.new_mst) {
            if (std::binary_search(s.d_path.begin(), s.d_path.end(), id)) {
                s.saved_credit += c;
            } else {
                s.pool_open += c;
            }
        }
        ledger.open(pool_holder(gi), s.pool_open);
        for (int x : s.releasing) {
            const auto ux = static_cast<std::size_t>(x);
            ledger.open(node_holder(x), L.nodes[ux].credit);
            const Cat cx = L.cat[ux];
            spend_cap[ux] = (cx == Cat::P2 || cx == Cat::AugStep1) ? L.nodes[ux].credit / 2 : L.nodes[ux].credit;
        }
    }

    // ---- payments ----------------------------------------------------------
    const double a4 = c * (1 - 3 * g * eps) * ell;
    const std::map<PayClass, double> budget{{PayClass::A1, c * ell},
                                            {PayClass::A2, c * eps * ell / 6},
                                            {PayClass::A3, c * eps * ell / 6},
                                            {PayClass::A4, a4 > 0 ? a4 : (P.mode == Mode::Exploratory ? c * ell / 2 : 0.0)},
                                            {PayClass::A5, c * eps * ell / 3},
                                            {PayClass::A7, c * eps * ell / 3},
                                            {PayClass::A8, c * ell}};
    std::map<std::pair<std::size_t, PayClass>, double> used;  // per group; A5 and A7 share one entry
    auto budget_key = [](std::size_t grp, PayClass k) { return std::pair(grp, k == PayClass::A7 ? PayClass::A5 : k); };
    auto budget_left = [&](std::size_t grp, PayClass k) {
        if (k == PayClass::A6) return ledger.balance(pool_holder(grp));
        const double b = budget.at(k) - used[budget_key(grp, k)];
        return std::min(b, ledger.balance(pool_holder(grp)));
    };
    auto can_release = [&](int x, double amount) {
        const auto ux = static_cast<std::size_t>(x);
        const int grp = L.group_of[ux];
        return grp >= 0 && st[static_cast<std::size_t>(grp)].releasing.count(x) && spent_by[ux] + amount <= spend_cap[ux] * (1 + kRelTol);
    };
    auto pay_release = [&](int x, double amount) {
        ledger.debit(node_holder(x), amount);
        spent_by[static_cast<std::size_t>(x)] += amount;
    };
    auto class_of = [](Cat c1) -> std::optional<PayClass> {
        switch (c1) {
            case Cat::P2: return PayClass::A2;
            case Cat::P3a1: return PayClass::A3;
            case Cat::P3a2b: return PayClass::A4;
            case Cat::Aug4a: return PayClass::A5;
            case Cat::Long: return PayClass::A6;
            case Cat::AugStep1:
            case Cat::ShortAffix: return PayClass::A7;
            case Cat::Step2: return PayClass::A8;
            case Cat::EmptyShort: return PayClass::Bag;
            default: return std::nullopt;
        }
    };

    std::vector<EdgeId> to_pay = L.level_edges;
    for (EdgeId id : to_pay) {
        const Edge& e = L.g.edge(id);
        const double amount = e.w;
        const int xa = L.node(e.u);
        const int xb = L.node(e.v);
        const Cat ca = L.cat[static_cast<std::size_t>(xa)];
        const Cat cb = L.cat[static_cast<std::size_t>(xb)];
        std::optional<PayClass> cls;
        std::vector<int> owners;  // endpoints whose category gives the class
        if (ca == Cat::P1 && cb == Cat::P1) {
            cls = PayClass::A1;
            owners = {xa, xb};
        } else {
            const auto ka = class_of(ca);
            const auto kb = class_of(cb);
            if (ka && (!kb || *ka <= *kb)) {
                cls = ka;
                owners.push_back(xa);
            }
            if (kb && (!ka || *kb <= *ka)) {
                cls = kb;
                owners.push_back(xb);
            }
        }
        std::sort(owners.begin(), owners.end());
        Payment pay{id, cls.value_or(PayClass::Bag), "", amount, true};
        if (!cls) {
            violate("unpayable", "edge " + std::to_string(id) + " joins " + std::to_string(xa) + " and " + std::to_string(xb) + " with no payment class");
            pay.payer = "none";
            pay.funded = false;
            rep.payment_log.push_back(pay);
            continue;
        }
        if (*cls == PayClass::Bag) {
            pay.payer = "bag";
            rep.bag.push_back(id);
            rep.payment_log.push_back(pay);
            rep.payments[PayClass::Bag].count++;
            rep.payments[PayClass::Bag].weight += amount;
            continue;
        }
        bool done = false;
        for (int x : owners) {
            if (!done && can_release(x, amount)) {
                pay_release(x, amount);
                pay.payer = node_holder(x);
                done = true;
            }
        }
        const auto first_owner = static_cast<std::size_t>(owners.front());
        const auto grp = static_cast<std::size_t>(L.group_of[first_owner]);
        // A short affix is bought by the augmenting subpath of its own HD-path.
        const Group& OG = L.groups[grp];
        const bool affix = L.cat[first_owner] == Cat::ShortAffix;
        std::size_t center = grp;
        if (!done && affix && OG.funder_group >= 0) {
            center = static_cast<std::size_t>(OG.funder_group);
            for (int x : OG.funder_nodes) {
                if (!done && can_release(x, amount)) {
                    pay_release(x, amount);
                    pay.payer = node_holder(x);
                    done = true;
                }
            }
        }
        if (!done) {
            for (int x : owners) {
                const auto gx = static_cast<std::size_t>(L.group_of[static_cast<std::size_t>(x)]);
                if (!done && !(affix && OG.funder_group >= 0) && budget_left(gx, *cls) + kRelTol * amount >= amount) {
                    center = gx;
                    done = true;
                }
            }
            if (affix && OG.funder_group >= 0 && budget_left(center, *cls) + kRelTol * amount >= amount) done = true;
            if (!done) {
                violate(to_string(*cls) + " underfunded", "edge " + std::to_string(id) + " at " + label(center), amount - std::max(0.0, budget_left(center, *cls)));
                pay.funded = false;
            }
            ledger.debit(pool_holder(center), amount);
            used[budget_key(center, *cls)] += amount;
            pay.payer = "center:" + label(center);
        }
        rep.payments[*cls].count++;
        rep.payments[*cls].weight += amount;
        rep.payment_log.push_back(pay);
    }
    rep.negative_events = static_cast<int>(ledger.negative_events().size());
    for (auto v : ledger.negative_events()) {
        v.location = L.where + " " + v.location;
        rep.violations.push_back(std::move(v));
    }
    rep.spent = ledger.spent();

    // ---- close-out -----------------------------------------------------------
    int a1_links = 0;
    int marked_nodes = 0;
    for (std::size_t x = 0; x < k; ++x) marked_nodes += L.cat[x] == Cat::P1;
    for (const auto& l : L.links) a1_links += L.cat[static_cast<std::size_t>(l.a)] == Cat::P1 && L.cat[static_cast<std::size_t>(l.b)] == Cat::P1;
    if (a1_links > P.sigma * P.sparsity_kappa * marked_nodes) {
        violate("A1 sparsity", std::to_string(a1_links) + " links among " + std::to_string(marked_nodes) + " marked nodes",
                a1_links - P.sigma * P.sparsity_kappa * marked_nodes);
    }
    const int bag_cap = static_cast<int>(std::floor(P.bag_kappa * g / (eps * eps) + 1e-9));
    if (static_cast<int>(rep.bag.size()) > bag_cap) {
        violate("bag count", std::to_string(rep.bag.size()) + " bagged edges exceed " + std::to_string(bag_cap), rep.bag.size() - static_cast<double>(bag_cap));
    }

    for (std::size_t gi = 0; gi < L.groups.size(); ++gi) {
        const Group& G = L.groups[gi];
        const auto& s = st[gi];
        double credit = s.saved_credit + ledger.drain(pool_holder(gi));
        for (int x : s.releasing) credit += ledger.drain(node_holder(x));
        const double diam = s.diameter;
        const std::string who = label(gi);

        const double need = c * (L.trivial ? diam : std::max(diam, ell / 2));
        ++rep.dc1_checked;
        if (credit + kRelTol * std::max(1.0, need) < need) {
            ++rep.dc1_failed;
            violate("DC1", who + " credit " + std::to_string(credit) + " below " + std::to_string(need), need - credit);
        }
        ++rep.dc2_checked;
        rep.max_diameter_ratio = std::max(rep.max_diameter_ratio, diam / ell);
        if (!approx_le(diam, g * ell)) {
            ++rep.dc2_failed;
            violate("DC2", who + " diameter " + std::to_string(diam) + " exceeds g*ell = " + std::to_string(g * ell), diam - g * ell);
        }

        auto range_check = [&](const std::string& name, double value, double lo, double hi) {
            if (value + kRelTol * std::max(1.0, lo) < lo || !approx_le(value, hi)) {
                violate(name, who + " diameter " + std::to_string(value) + " outside [" + std::to_string(lo) + ", " + std::to_string(hi) + "]",
                        value < lo ? lo - value : value - hi);
            }
        };
        switch (G.origin) {
            case Origin::P1: {
                if (s.pool_open + kRelTol * 9 * c * ell < 9 * c * ell) violate("P1 center credit", who + " collects " + std::to_string(s.pool_open), 9 * c * ell - s.pool_open);
                int core_on = 0;
                int near_on = 0;
                for (int x : G.core) {
                    if (!s.on_path.count(x)) continue;
                    ++core_on;
                    near_on += x == G.center || std::find(G.neighbors.begin(), G.neighbors.end(), x) != G.neighbors.end();
                }
                if (core_on > 5 || near_on > 3) {
                    violate("P1 path members", who + " diameter path meets " + std::to_string(core_on) + " core and " + std::to_string(near_on) + " star nodes");
                }
                range_check("P1 diameter", G.diam_core, ell, (4 + 5 * g * eps) * ell);
                break;
            }
            case Origin::P2:
                range_check("P2 diameter", G.diam_core, 0, (4 + 2 * g * eps) * ell);
                break;
            case Origin::P3a1: {
                range_check("P3a1 diameter", G.diam_core, ell / 2, (12 + 4 * g * eps) * ell);
                const bool e_on = std::binary_search(s.d_path.begin(), s.d_path.end(), G.phase3_edge);
                const double want = c * eps * ell / 2 + (e_on ? c * L.edge_w(G.phase3_edge) : 0.0);
                if (s.pool_open + kRelTol * want < want) violate("P3a1 center credit", who + " collects " + std::to_string(s.pool_open), want - s.pool_open);
                if (!s.simple_path) violate("P3a1 simple path", who + " diameter path revisits a node");
                break;
            }
            case Origin::P3a2:
            case Origin::P3b: {
                range_check(G.origin == Origin::P3b ? "P3b diameter" : "P3a2 diameter", G.diam_core, ell / 2, (9 + 4 * g * eps) * ell);
                const double want = 2 * c * (1 - g * eps) * ell;
                if (s.pool_open + kRelTol * std::abs(want) < want) violate("P3 center credit", who + " collects " + std::to_string(s.pool_open), want - s.pool_open);
                break;
            }
            case Origin::P4Long:
            case Origin::P4Short:
            case Origin::P4Affix:
            case Origin::EmptyLong:
            case Origin::EmptyShort:
                range_check("subpath diameter", diam, 0, 8 * ell);
                break;
            default:
                break;
        }
        if (G.diam_core >= 0 && G.diam_step1 >= 0) {
            if (!approx_le(G.diam_step1 - G.diam_core, 32 * ell + 4)) {
                violate("phase 4 growth C''", who + " grew by " + std::to_string(G.diam_step1 - G.diam_core), G.diam_step1 - G.diam_core - 32 * ell - 4);
            }
            if (!approx_le(diam - G.diam_step1, 18 * ell)) {
                violate("phase 4 growth C'''", who + " grew by " + std::to_string(diam - G.diam_step1), diam - G.diam_step1 - 18 * ell);
            }
        }

        Cluster cl;
        cl.vertices = s.sub.vertices;
        cl.edges = s.sub.edges;
        cl.diameter = diam;
        cl.credit = credit;
        cl.origin = G.origin;
        for (EdgeId id : s.sub.new_mst) absorbed[static_cast<std::size_t>(id)] = 1;
        out.clusters.push_back(std::move(cl));
    }

    for (const auto& cl : out.clusters) rep.credit_after += cl.credit;
    for (EdgeId id : L.mst.ids) {
        if (!absorbed[static_cast<std::size_t>(id)]) rep.credit_after += c;
    }
    const double tol = kRelTol * std::max(1.0, rep.credit_before);
    if (std::abs(rep.credit_before - rep.credit_after - rep.spent) > tol) {
        violate("conservation", "before " + std::to_string(rep.credit_before) + ", after " + std::to_string(rep.credit_after) + ", spent " + std::to_string(rep.spent),
                rep.credit_before - rep.credit_after - rep.spent);
    }
    std::sort(out.clusters.begin(), out.clusters.end(), [](const Cluster& x, const Cluster& y) { return x.vertices.front() < y.vertices.front(); });
    rep.clusters_out = out.clusters.size();
    rep.violations.insert(rep.violations.begin(), L.violations.begin(), L.violations.end());
    return out;
}

}  // namespace lightspan::cert
