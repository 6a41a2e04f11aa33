// Copyright (c) lightspan contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Plain-text edge lists: a header line `n m`, then m lines `u v w` with
// 0-based vertex ids. Lines starting with '#' and blank lines are skipped.

#include <charconv>
#include <fstream>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "lightspan/graph.hpp"

namespace lightspan {

class ParseError : public GraphError {
  public:
    ParseError(std::size_t line, const std::string& what)
        : GraphError("line " + std::to_string(line) + ": " + what), line_(line) {}
    [[nodiscard]] std::size_t line() const { return line_; }

  private:
    std::size_t line_;
};

struct ParsedGraph {
    WeightedGraph graph;
    std::vector<std::string> warnings;
};

namespace detail {

inline std::vector<std::string_view> split_ws(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
        std::size_t j = i;
        while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r') ++j;
        if (j > i) out.push_back(s.substr(i, j - i));
        i = j;
    }
    return out;
}

template <class T>
bool parse_number(std::string_view tok, T& out) {
    if constexpr (std::is_floating_point_v<T>) {
        // std::from_chars for double is unavailable on some toolchains.
        std::string buf(tok);
        std::istringstream is(buf);
        is.imbue(std::locale::classic());
        is >> out;
        return static_cast<bool>(is) && is.peek() == std::char_traits<char>::eof();
    } else {
        auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
        return ec == std::errc() && p == tok.data() + tok.size();
    }
}

}  // namespace detail

// Duplicate (u, v) pairs keep the lightest copy and produce a warning.
inline ParsedGraph parse_edge_list(std::istream& in) {
    std::string line;
    std::size_t lineno = 0;
    long long n = -1;
    long long m = -1;
    std::size_t header_line = 0;
    std::map<std::pair<VertexId, VertexId>, std::pair<Weight, std::size_t>> best;
    std::vector<std::pair<VertexId, VertexId>> order;
    ParsedGraph out;
    long long seen = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto toks = detail::split_ws(line);
        if (toks.empty() || toks[0].front() == '#') continue;
        if (n < 0) {
            if (toks.size() != 2 || !detail::parse_number(toks[0], n) || !detail::parse_number(toks[1], m) || n < 0 || m < 0) {
                throw ParseError(lineno, "expected header `n m`");
            }
            header_line = lineno;
            continue;
        }
        if (toks.size() != 3) throw ParseError(lineno, "expected `u v w`");
        long long u = 0;
        long long v = 0;
        double w = 0;
        if (!detail::parse_number(toks[0], u) || !detail::parse_number(toks[1], v)) throw ParseError(lineno, "vertex ids must be integers");
        if (!detail::parse_number(toks[2], w)) throw ParseError(lineno, "malformed weight");
        if (u < 0 || v < 0 || u >= n || v >= n) throw ParseError(lineno, "vertex id out of range [0, " + std::to_string(n) + ")");
        if (u == v) throw ParseError(lineno, "self-loop");
        if (!(w > 0) || !std::isfinite(w)) throw ParseError(lineno, "nonpositive weight");
        ++seen;
        if (seen > m) throw ParseError(lineno, "more edges than the header's m = " + std::to_string(m));
        const std::pair<VertexId, VertexId> key{static_cast<VertexId>(std::min(u, v)), static_cast<VertexId>(std::max(u, v))};
        auto it = best.find(key);
        if (it == best.end()) {
            best.emplace(key, std::make_pair(w, lineno));
            order.push_back(key);
        } else {
            out.warnings.push_back("line " + std::to_string(lineno) + ": duplicate edge " + std::to_string(key.first) + " " +
                                   std::to_string(key.second) + " (first on line " + std::to_string(it->second.second) +
                                   "), keeping the lighter copy");
            it->second.first = std::min(it->second.first, w);
        }
    }
    if (n < 0) throw ParseError(lineno + 1, "missing header `n m`");
    if (seen != m) throw ParseError(header_line, "header declares " + std::to_string(m) + " edges but " + std::to_string(seen) + " were read");
    std::vector<Edge> edges;
    edges.reserve(order.size());
    for (const auto& key : order) edges.push_back({key.first, key.second, best[key].first});
    out.graph = WeightedGraph(static_cast<VertexId>(n), std::move(edges));
    return out;
}

inline ParsedGraph read_edge_list(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw GraphError("cannot open " + path);
    return parse_edge_list(in);
}

inline void write_edge_list(std::ostream& out, const WeightedGraph& g) {
    out << g.vertex_count() << ' ' << g.edge_count() << '\n';
    out << std::setprecision(17);
    for (const auto& e : g.edges()) out << e.u << ' ' << e.v << ' ' << e.w << '\n';
}

inline void write_edge_list(std::ostream& out, const EdgeSubset& s) {
    const auto& g = s.parent();
    out << g.vertex_count() << ' ' << s.size() << '\n';
    out << std::setprecision(17);
    for (EdgeId id : s.members()) {
        const auto& e = g.edge(id);
        out << e.u << ' ' << e.v << ' ' << e.w << '\n';
    }
}

// Maps the edges of `sub` (a graph over the same vertex set) onto edge ids of
// `parent`. Every edge of `sub` must exist in `parent`.
inline EdgeSubset match_subset(const WeightedGraph& parent, const WeightedGraph& sub) {
    if (sub.vertex_count() != parent.vertex_count()) {
        throw GraphError("subgraph has " + std::to_string(sub.vertex_count()) + " vertices, graph has " + std::to_string(parent.vertex_count()));
    }
    std::vector<EdgeId> ids;
    ids.reserve(static_cast<std::size_t>(sub.edge_count()));
    for (const auto& e : sub.edges()) {
        auto id = parent.find_edge(e.u, e.v);
        if (!id) throw GraphError("edge " + std::to_string(e.u) + " " + std::to_string(e.v) + " is not in the graph");
        ids.push_back(*id);
    }
    return {parent, std::move(ids)};
}

}  // namespace lightspan
