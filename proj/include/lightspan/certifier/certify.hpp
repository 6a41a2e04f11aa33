// Copyright (c) lightspan contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Whole-spanner certification: J0 by sparsity, then one clustering hierarchy
// per j, and the final decomposition of w(S).

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "lightspan/certifier/base_clusters.hpp"
#include "lightspan/certifier/ledger.hpp"
#include "lightspan/certifier/level.hpp"
#include "lightspan/certifier/settle.hpp"
#include "lightspan/graph.hpp"
#include "lightspan/level_partition.hpp"

namespace lightspan::cert {

struct J0Account {
    std::size_t edges = 0;
    double weight = 0;
    double ratio = 0;  // w(J0) / w(MST)
    double bound = 0;  // sigma * kappa_J0 / eps
    bool within = true;
    bool all_edges = false;
};

struct JReport {
    int j = 0;
    double ell0 = 0;
    bool trivial = false;  // base clustering collapsed to one cluster
    int base_clusters = 0;
    int base_mst_diameter = 0;
    double base_max_diameter = 0;
    double initial_credit = 0;
    double spent = 0;
    double remaining = 0;
    std::size_t edges = 0;
    double weight = 0;
    double bag_weight = 0;
    std::vector<LevelReport> levels;
    std::vector<Violation> violations;  // base level
};

struct CertificationReport {
    CertParams params;
    std::vector<std::string> precondition_failures;
    std::vector<Violation> intake;
    J0Account j0;
    std::vector<JReport> per_j;
    std::vector<EdgeId> bag;  // ids in the spanner's parent graph
    double bag_weight = 0;
    double mst_weight = 0;
    double spanner_weight = 0;
    double band_weight = 0;     // sum over j of w(J_j \ B)
    double kappa_bag = 0;       // w(B) eps^2 / w(MST)
    std::size_t paid_once = 0;  // band edges with exactly one payment record
    std::size_t band_edges = 0;
    std::vector<Violation> payment_errors;

    [[nodiscard]] double lightness() const { return mst_weight > 0 ? spanner_weight / mst_weight : 1.0; }

    [[nodiscard]] std::vector<Violation> all_violations() const {
        std::vector<Violation> out = intake;
        out.insert(out.end(), payment_errors.begin(), payment_errors.end());
        for (const auto& jr : per_j) {
            out.insert(out.end(), jr.violations.begin(), jr.violations.end());
            for (const auto& lv : jr.levels) out.insert(out.end(), lv.violations.begin(), lv.violations.end());
        }
        return out;
    }
    [[nodiscard]] int count(const std::string& check) const {
        int n = 0;
        for (const auto& v : all_violations()) n += v.check == check;
        return n;
    }
    [[nodiscard]] int negative_events() const {
        int n = 0;
        for (const auto& jr : per_j) {
            for (const auto& lv : jr.levels) n += lv.negative_events;
        }
        return n;
    }
    [[nodiscard]] bool cluster_graphs_simple() const {
        for (const auto& jr : per_j) {
            for (const auto& lv : jr.levels) {
                if (!lv.cluster_graph_simple) return false;
            }
        }
        return true;
    }
    [[nodiscard]] std::size_t levels_run() const {
        std::size_t n = 0;
        for (const auto& jr : per_j) n += jr.levels.size();
        return n;
    }
};

// J0 is bought by sparsity: its weight is O(sigma n / eps).
inline J0Account account_J0(const LevelPartition& part, double mst_weight, const CertParams& p, std::size_t spanner_edges) {
    J0Account a;
    const auto j0 = part.j0();
    a.edges = j0.size();
    a.weight = j0.weight();
    a.ratio = mst_weight > 0 ? a.weight / mst_weight : 0.0;
    a.bound = p.sigma * p.j0_kappa / p.epsilon;
    a.within = approx_le(a.ratio, a.bound);
    a.all_edges = a.edges == spanner_edges;
    return a;
}

inline nlohmann::json to_json(const CertificationReport& r) {
    nlohmann::json pj = nlohmann::json::array();
    for (const auto& jr : r.per_j) {
        nlohmann::json lv = nlohmann::json::array();
        for (const auto& l : jr.levels) lv.push_back(to_json(l));
        nlohmann::json bv = nlohmann::json::array();
        for (const auto& v : jr.violations) bv.push_back(to_json(v));
        pj.push_back({{"j", jr.j},
                      {"ell0", jr.ell0},
                      {"trivial", jr.trivial},
                      {"base", {{"clusters", jr.base_clusters}, {"mst_diameter", jr.base_mst_diameter}, {"max_diameter", jr.base_max_diameter}, {"violations", bv}}},
                      {"edges", jr.edges},
                      {"weight", jr.weight},
                      {"bag_weight", jr.bag_weight},
                      {"conservation", {{"initial", jr.initial_credit}, {"spent", jr.spent}, {"remaining", jr.remaining}}},
                      {"levels", lv}});
    }
    nlohmann::json intake = nlohmann::json::array();
    for (const auto& v : r.intake) intake.push_back(to_json(v));
    nlohmann::json perr = nlohmann::json::array();
    for (const auto& v : r.payment_errors) perr.push_back(to_json(v));
    const double total = r.j0.weight + r.band_weight + r.bag_weight;
    nlohmann::json j0{{"edges", r.j0.edges},     {"weight", r.j0.weight},       {"ratio_to_mst", r.j0.ratio},
                      {"bound", r.j0.bound},     {"within_bound", r.j0.within}, {"payer", "sparsity"},
                      {"all_edges_in_j0", r.j0.all_edges}};
    if (r.j0.all_edges) j0["note"] = "every spanner edge lies in J0; no band level needs clustering";
    return {{"params", to_json(r.params)},
            {"preconditions", {{"ok", r.precondition_failures.empty()}, {"failures", r.precondition_failures}}},
            {"intake", intake},
            {"j0", j0},
            {"per_j", pj},
            {"bag", {{"edges", r.bag}, {"weight", r.bag_weight}, {"kappa", r.kappa_bag}, {"kappa_bound", r.params.bag_kappa}}},
            {"payments", {{"band_edges", r.band_edges}, {"paid_exactly_once", r.paid_once}, {"errors", perr}}},
            {"lightness_decomposition",
             {{"w_J0", r.j0.weight},
              {"w_bands_minus_bag", r.band_weight},
              {"w_bag", r.bag_weight},
              {"total", total},
              {"w_spanner", r.spanner_weight},
              {"consistent", std::abs(total - r.spanner_weight) <= kRelTol * std::max(1.0, r.spanner_weight)}}},
            {"lightness", r.lightness()},
            {"summary",
             {{"violations", r.all_violations().size()},
              {"dc2_violations", r.count("DC2")},
              {"negative_balance_events", r.negative_events()},
              {"cluster_graphs_simple", r.cluster_graphs_simple()},
              {"levels", r.levels_run()}}}};
}

// Certifies `spanner`, which must be a subset of a unit-MST reduced graph.
inline CertificationReport certify(const EdgeSubset& spanner, const CertParams& params) {
    CertificationReport rep;
    rep.params = params;
    rep.precondition_failures = precondition_failures(params);
    if (params.mode == Mode::Strict && !rep.precondition_failures.empty()) {
        throw GraphError("strict certification preconditions failed: " + rep.precondition_failures.front());
    }
    check_epsilon(params.epsilon);
    const double c = params.c();
    const WeightedGraph S = spanner.as_graph();
    const auto parent_id = [&](EdgeId id) { return spanner.members()[static_cast<std::size_t>(id)]; };
    const EdgeSubset all = EdgeSubset::all(S);
    const auto mst_subset = kruskal_mst(S);
    rep.mst_weight = mst_subset.weight();
    rep.spanner_weight = all.weight();
    if (S.vertex_count() > 0 && !is_connected(S)) rep.intake.push_back({"intake", "spanner", "spanner is not connected", 0});
    double max_w = 0;
    for (const auto& e : S.edges()) max_w = std::max(max_w, e.w);
    if (max_w > rep.mst_weight && S.edge_count() > 0) {
        rep.intake.push_back({"intake", "spanner", "heaviest edge " + std::to_string(max_w) + " exceeds w(MST)", max_w - rep.mst_weight});
    }
    const MstView mst(S, {mst_subset.members().begin(), mst_subset.members().end()});

    const LevelPartition part(all, params.epsilon);
    rep.j0 = account_J0(part, rep.mst_weight, params, static_cast<std::size_t>(S.edge_count()));
    if (!rep.j0.within && params.mode == Mode::Strict) {
        rep.intake.push_back({"J0 sparsity", "J0", "w(J0)/w(MST) = " + std::to_string(rep.j0.ratio), rep.j0.ratio - rep.j0.bound});
    }

    std::vector<int> pay_count(static_cast<std::size_t>(S.edge_count()), 0);
    for (int j = 0; j <= part.max_j(); ++j) {
        const int top = part.max_level(j);
        const auto group = part.group(j);
        if (group.empty()) continue;
        JReport jr;
        jr.j = j;
        jr.ell0 = std::ldexp(1.0, j + 1);
        jr.edges = group.size();
        for (EdgeId id : group) jr.weight += S.edge(id).w;
        auto base = build_base_clusters(S, mst, jr.ell0, c);
        jr.trivial = base.trivial;
        jr.base_clusters = static_cast<int>(base.clusters.size());
        jr.base_mst_diameter = base.mst_diameter;
        jr.initial_credit = c * static_cast<double>(mst.ids.size());
        for (auto& v : base.violations) v.location = "j=" + std::to_string(j) + " " + v.location;
        jr.violations = base.violations;
        for (const auto& cl : base.clusters) {
            jr.base_max_diameter = std::max(jr.base_max_diameter, cl.diameter);
            if (!approx_le(cl.diameter, 2 * jr.ell0)) {
                jr.violations.push_back({"base diameter", "j=" + std::to_string(j), "cluster at vertex " + std::to_string(cl.vertices.front()) + " has diameter " + std::to_string(cl.diameter), cl.diameter - 2 * jr.ell0});
            }
            const double need = c * (base.trivial ? cl.diameter : std::max(cl.diameter, jr.ell0 / 2));
            if (cl.credit + kRelTol * std::max(1.0, need) < need) {
                jr.violations.push_back({"DC1", "j=" + std::to_string(j) + " base", "cluster at vertex " + std::to_string(cl.vertices.front()) + " holds " + std::to_string(cl.credit), need - cl.credit});
            }
        }
        std::vector<char> absorbed(static_cast<std::size_t>(S.edge_count()), 0);
        for (const auto& cl : base.clusters) {
            for (EdgeId id : cl.edges) absorbed[static_cast<std::size_t>(id)] = 1;
        }
        std::vector<Cluster> clusters = std::move(base.clusters);
        for (int i = 1; i <= top; ++i) {
            const auto band = part.band(i, j);
            std::vector<EdgeId> e_i(band.members().begin(), band.members().end());
            LevelEngine engine(S, mst, params, clusters, e_i, part.ell(i, j), "(j=" + std::to_string(j) + ",i=" + std::to_string(i) + ")");
            engine.run();
            auto outcome = settle_level(engine, absorbed, i);
            for (const auto& pay : outcome.report.payment_log) {
                if (pay.cls != PayClass::Bag || pay.payer == "bag") ++pay_count[static_cast<std::size_t>(pay.edge)];
            }
            for (EdgeId id : outcome.report.bag) {
                rep.bag.push_back(parent_id(id));
                jr.bag_weight += S.edge(id).w;
            }
            jr.spent += outcome.report.spent;
            clusters = std::move(outcome.clusters);
            jr.levels.push_back(std::move(outcome.report));
        }
        for (const auto& cl : clusters) jr.remaining += cl.credit;
        for (EdgeId id : mst.ids) {
            if (!absorbed[static_cast<std::size_t>(id)]) jr.remaining += c;
        }
        rep.bag_weight += jr.bag_weight;
        rep.band_weight += jr.weight - jr.bag_weight;
        rep.band_edges += jr.edges;
        for (EdgeId id : group) {
            const int n = pay_count[static_cast<std::size_t>(id)];
            if (n == 1) {
                ++rep.paid_once;
            } else {
                rep.payment_errors.push_back({"exactly-once payment", "j=" + std::to_string(j), "edge " + std::to_string(parent_id(id)) + " has " + std::to_string(n) + " payment records", static_cast<double>(n - 1)});
            }
        }
        const double tol = kRelTol * std::max(1.0, jr.initial_credit);
        if (jr.initial_credit + tol < jr.spent + jr.remaining) {
            jr.violations.push_back({"conservation", "j=" + std::to_string(j), "spent plus remaining exceeds the initial credit", jr.spent + jr.remaining - jr.initial_credit});
        }
        rep.per_j.push_back(std::move(jr));
    }
    std::sort(rep.bag.begin(), rep.bag.end());
    const double eps = params.epsilon;
    rep.kappa_bag = rep.mst_weight > 0 ? rep.bag_weight * eps * eps / rep.mst_weight : 0.0;
    return rep;
}

}  // namespace lightspan::cert
