// Copyright (c) lightspan contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Command-line front end. Exit codes: 0 all checks pass, 1 a check failed,
// 2 usage or I/O error.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "lightspan/certifier.hpp"
#include "lightspan/edge_list.hpp"
#include "lightspan/generators.hpp"
#include "lightspan/graph.hpp"
#include "lightspan/greedy_spanner.hpp"
#include "lightspan/reduction.hpp"
#include "lightspan/verification.hpp"

namespace lightspan::cli {

inline constexpr int kPass = 0;
inline constexpr int kCheckFailed = 1;
inline constexpr int kUsageError = 2;

struct BenchRow {
    VertexId size = 0;
    EdgeId edges = 0;
    std::size_t spanner_edges = 0;
    double lightness = 0;
    double seconds = 0;
};

// One greedy run per requested size on a square triangulated grid of side
// round(sqrt(size)).
inline std::vector<BenchRow> run_bench(const std::vector<int>& sizes, double epsilon, const gen::WeightModel& model, std::uint64_t seed) {
    std::vector<BenchRow> rows;
    for (int size : sizes) {
        const int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(size))));
        if (side < 2 || side * side != size) throw GraphError("bench size " + std::to_string(size) + " is not a square of at least 4");
        const auto g = gen::triangulated_grid(side, side, model, seed);
        const auto t0 = std::chrono::steady_clock::now();
        const auto res = greedy_spanner(g, epsilon);
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        rows.push_back({g.vertex_count(), g.edge_count(), res.spanner.size(), lightness(g, res.spanner), secs});
    }
    return rows;
}

inline void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows) {
    out << "size,edges,spanner_edges,lightness,seconds\n";
    for (const auto& r : rows) {
        out << r.size << ',' << r.edges << ',' << r.spanner_edges << ',' << std::setprecision(10) << r.lightness << ',' << std::setprecision(6)
            << r.seconds << '\n';
    }
}

namespace detail {

inline WeightedGraph load_graph(const std::string& path, std::ostream& err) {
    auto parsed = read_edge_list(path);
    for (const auto& w : parsed.warnings) err << path << ": " << w << '\n';
    return std::move(parsed.graph);
}

inline void require_connected(const WeightedGraph& g, const std::string& path) {
    if (g.vertex_count() > 0 && !is_connected(g)) throw GraphError(path + ": graph not connected");
}

template <class Fn>
void write_file(const std::string& path, Fn&& fn) {
    std::ofstream out(path);
    if (!out) throw GraphError("cannot write " + path);
    fn(out);
    if (!out) throw GraphError("write failed for " + path);
}

}  // namespace detail

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CLI::App app{"lightspan: greedy spanners and lightness certification"};
    app.require_subcommand(1);

    // gen
    auto* gen_cmd = app.add_subcommand("gen", "generate an instance");
    std::string family = "grid";
    int rows = 8;
    int cols = 8;
    int strips = 3;
    int levels = 1;
    int skip = 0;
    int size_n = 16;
    int extra = 0;
    std::string weights = "unit";
    std::uint64_t seed = 1;
    double gen_eps = 0.05;
    std::string gen_out;
    gen_cmd->add_option("--family", family, "grid, strips or tree")->check(CLI::IsMember({"grid", "strips", "tree"}));
    gen_cmd->add_option("--rows", rows, "grid rows (rows per strip for strips)");
    gen_cmd->add_option("--cols", cols, "grid columns");
    gen_cmd->add_option("--strips", strips, "number of strips");
    gen_cmd->add_option("--levels", levels, "band levels for strips");
    gen_cmd->add_option("--skip-bands", skip, "lightest bands to leave out for strips");
    gen_cmd->add_option("-n,--vertices", size_n, "vertices for tree");
    gen_cmd->add_option("--extra", extra, "extra edges for tree");
    gen_cmd->add_option("--weights", weights, "unit, uniform(lo,hi) or exp-scale(base)");
    gen_cmd->add_option("--epsilon", gen_eps, "epsilon for band weights");
    gen_cmd->add_option("--seed", seed, "random seed");
    gen_cmd->add_option("-o,--output", gen_out, "output edge list")->required();

    // spanner
    auto* sp_cmd = app.add_subcommand("spanner", "greedy spanner with stretch 1 + s*epsilon");
    std::string in_path;
    std::string out_path;
    double eps = 0.5;
    double s_factor = 1.0;
    sp_cmd->add_option("-i,--input", in_path, "edge list")->required();
    sp_cmd->add_option("--epsilon", eps, "epsilon")->required();
    sp_cmd->add_option("-s,--s-factor", s_factor, "multiplies epsilon");
    sp_cmd->add_option("-o,--output", out_path, "spanner edge list")->required();

    // reduce
    auto* red_cmd = app.add_subcommand("reduce", "unit-MST reduction");
    red_cmd->add_option("-i,--input", in_path, "edge list")->required();
    red_cmd->add_option("--epsilon", eps, "epsilon")->required();
    red_cmd->add_option("-o,--output", out_path, "output directory")->required();

    // certify
    auto* cert_cmd = app.add_subcommand("certify", "run the lightness certifier");
    std::string spanner_path;
    std::string mode = "exploratory";
    double g_const = -1;
    double c_kappa = 1;
    double s_param = -1;
    cert_cmd->add_option("-i,--input", in_path, "unit-MST graph")->required();
    cert_cmd->add_option("--spanner", spanner_path, "spanner edge list")->required();
    cert_cmd->add_option("--epsilon", eps, "epsilon")->required();
    cert_cmd->add_option("--mode", mode, "strict or exploratory")->check(CLI::IsMember({"strict", "exploratory"}));
    cert_cmd->add_option("--g", g_const, "diameter constant");
    cert_cmd->add_option("--s", s_param, "greedy inflation factor");
    cert_cmd->add_option("--c-kappa", c_kappa, "credit constant multiplier");
    cert_cmd->add_option("-o,--output", out_path, "report JSON")->required();

    // verify
    auto* ver_cmd = app.add_subcommand("verify", "exact stretch and lightness");
    std::string stretch_mode = "all-pairs";
    ver_cmd->add_option("-i,--input", in_path, "edge list")->required();
    ver_cmd->add_option("--spanner", spanner_path, "spanner edge list")->required();
    ver_cmd->add_option("--epsilon", eps, "epsilon")->required();
    ver_cmd->add_option("--mode", stretch_mode, "all-pairs or endpoints")->check(CLI::IsMember({"all-pairs", "endpoints"}));

    // bench
    auto* bench_cmd = app.add_subcommand("bench", "lightness against n on grids");
    std::vector<int> sizes{256, 1024, 4096, 16384};
    bench_cmd->add_option("--family", family, "grid")->check(CLI::IsMember({"grid"}));
    bench_cmd->add_option("--sizes", sizes, "vertex counts (squares)")->delimiter(',');
    bench_cmd->add_option("--epsilon", eps, "epsilon")->required();
    bench_cmd->add_option("--weights", weights, "weight model");
    bench_cmd->add_option("--seed", seed, "random seed");
    bench_cmd->add_option("-o,--output", out_path, "CSV output")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return kPass;
        }
        err << e.what() << '\n';
        return kUsageError;
    }

    try {
        if (*gen_cmd) {
            WeightedGraph g;
            if (family == "grid") {
                g = gen::triangulated_grid(rows, cols, gen::parse_weight_model(weights), seed);
            } else if (family == "strips") {
                g = gen::exp_scale_strips(strips, rows, cols, gen_eps, levels, seed, skip);
            } else {
                g = gen::random_spanning_structure(size_n, extra, seed);
            }
            detail::write_file(gen_out, [&](std::ostream& o) { write_edge_list(o, g); });
            return kPass;
        }
        if (*sp_cmd) {
            const auto g = detail::load_graph(in_path, err);
            detail::require_connected(g, in_path);
            const auto res = greedy_spanner(g, s_factor * eps);
            detail::write_file(out_path, [&](std::ostream& o) { write_edge_list(o, res.spanner); });
            out << "spanner edges " << res.spanner.size() << " of " << g.edge_count() << ", stretch " << res.stretch_used << '\n';
            return kPass;
        }
        if (*red_cmd) {
            check_epsilon(eps);
            const auto g = detail::load_graph(in_path, err);
            detail::require_connected(g, in_path);
            const auto map = reduce(g);
            std::filesystem::create_directories(out_path);
            const auto dir = std::filesystem::path(out_path);
            detail::write_file((dir / "reduced.txt").string(), [&](std::ostream& o) { write_edge_list(o, map.reduced); });
            auto js = to_json(map);
            js["epsilon"] = eps;
            js["lift_threshold"] = map.w_bar / eps;
            detail::write_file((dir / "reduction.json").string(), [&](std::ostream& o) { o << js.dump(2) << '\n'; });
            out << "reduced graph: " << map.reduced.vertex_count() << " vertices, " << map.reduced.edge_count() << " edges, w_bar " << map.w_bar << '\n';
            return kPass;
        }
        if (*cert_cmd) {
            const auto g = detail::load_graph(in_path, err);
            const auto sub = detail::load_graph(spanner_path, err);
            const auto spanner = match_subset(g, sub);
            auto p = mode == "strict" ? cert::CertParams::strict_defaults(eps) : cert::CertParams::exploratory_defaults(eps);
            if (g_const > 0) p.g = g_const;
            if (s_param > 0) p.s = s_param;
            p.c_kappa = c_kappa;
            const auto rep = cert::certify(spanner, p);
            const auto js = cert::to_json(rep);
            detail::write_file(out_path, [&](std::ostream& o) { o << js.dump(2) << '\n'; });
            const auto n = rep.all_violations().size();
            out << "lightness " << rep.lightness() << ", violations " << n << '\n';
            return n == 0 && rep.precondition_failures.empty() ? kPass : kCheckFailed;
        }
        if (*ver_cmd) {
            check_epsilon(eps);
            const auto g = detail::load_graph(in_path, err);
            const auto sub = detail::load_graph(spanner_path, err);
            const auto spanner = match_subset(g, sub);
            const auto rep = verify_stretch(g, spanner, parse_stretch_mode(stretch_mode));
            const double light = lightness(g, spanner);
            const bool ok = rep.within(1 + eps);
            auto js = to_json(rep);
            js["lightness"] = light;
            js["stretch_bound"] = 1 + eps;
            js["pass"] = ok;
            out << js.dump() << '\n';
            out << (ok ? "PASS" : "FAIL") << '\n';
            return ok ? kPass : kCheckFailed;
        }
        if (*bench_cmd) {
            const auto rows_out = run_bench(sizes, eps, gen::parse_weight_model(weights), seed);
            detail::write_file(out_path, [&](std::ostream& o) { write_bench_csv(o, rows_out); });
            return kPass;
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kUsageError;
    }
    return kUsageError;
}

}  // namespace lightspan::cli
