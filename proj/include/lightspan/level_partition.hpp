// Copyright (c) lightspan contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Weight bands of a unit-MST spanner. Edges lighter than 1/eps form J0; every
// heavier edge falls in some band [2^j / eps^i, 2^(j+1) / eps^i) with
// i >= 1 and 0 <= j <= ceil(log2(1/eps)). When 1/eps is not a power of two
// these bands overlap, so each weight is assigned the band with the smallest
// i that contains it, then the smallest j.

#include <cmath>
#include <compare>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "lightspan/graph.hpp"

namespace lightspan {

struct LevelKey {
    enum class Kind { J0, Band };
    Kind kind = Kind::J0;
    int j = 0;
    int i = 0;

    static LevelKey j0() { return {}; }
    static LevelKey band(int i, int j) { return {Kind::Band, j, i}; }

    friend auto operator<=>(const LevelKey&, const LevelKey&) = default;
};

inline std::string to_string(const LevelKey& k) {
    return k.kind == LevelKey::Kind::J0 ? std::string("J0") : "(i=" + std::to_string(k.i) + ",j=" + std::to_string(k.j) + ")";
}

inline void check_epsilon(double epsilon) {
    if (!(epsilon > 0 && epsilon < 1)) throw GraphError("epsilon must lie in (0, 1)");
}

// ceil(log2(1/eps)), the largest j index.
inline int max_band_j(double epsilon) {
    check_epsilon(epsilon);
    return static_cast<int>(std::ceil(std::log2(1.0 / epsilon) - 1e-12));
}

// Lower end 2^j / eps^i of band (i, j). Every range test goes through here so
// that boundaries are computed identically everywhere.
inline double band_floor(double epsilon, int i, int j) { return std::ldexp(std::pow(1.0 / epsilon, i), j); }

// ell_i = 2^(j+1) / eps^i, the exclusive upper end of band (i, j).
inline double band_scale(double epsilon, int i, int j) { return band_floor(epsilon, i, j + 1); }

inline LevelKey classify_edge(Weight w, double epsilon) {
    check_epsilon(epsilon);
    if (w < 1.0) throw GraphError("unreduced weight " + std::to_string(w) + " below 1");
    if (w < 1.0 / epsilon) return LevelKey::j0();
    const int jmax = max_band_j(epsilon);
    for (int i = 1;; ++i) {
        if (w >= band_floor(epsilon, i, jmax + 1)) continue;
        for (int j = 0; j <= jmax; ++j) {
            if (w >= band_floor(epsilon, i, j) && w < band_floor(epsilon, i, j + 1)) return LevelKey::band(i, j);
        }
        // Bands of consecutive i tile [1/eps, inf) without gaps, so the scan
        // only gets here for weights below 1/eps^i, which were caught earlier.
        throw GraphError("weight " + std::to_string(w) + " fell between bands");
    }
}

struct BucketSummary {
    std::size_t edges = 0;
    Weight weight = 0;
};

class LevelPartition {
  public:
    LevelPartition() = default;

    LevelPartition(const EdgeSubset& spanner, double epsilon) : epsilon_(epsilon) {
        check_epsilon(epsilon);
        const auto& g = spanner.parent();
        std::map<LevelKey, std::vector<EdgeId>> ids;
        for (EdgeId id : spanner.members()) ids[classify_edge(g.edge(id).w, epsilon)].push_back(id);
        for (auto& [key, list] : ids) buckets_.emplace(key, EdgeSubset(g, std::move(list)));
        parent_ = &g;
    }

    [[nodiscard]] double epsilon() const { return epsilon_; }
    [[nodiscard]] int max_j() const { return max_band_j(epsilon_); }
    [[nodiscard]] const std::map<LevelKey, EdgeSubset>& buckets() const { return buckets_; }

    [[nodiscard]] EdgeSubset bucket(const LevelKey& key) const {
        auto it = buckets_.find(key);
        if (it != buckets_.end()) return it->second;
        return parent_ != nullptr ? EdgeSubset(*parent_) : EdgeSubset();
    }

    [[nodiscard]] EdgeSubset j0() const { return bucket(LevelKey::j0()); }
    [[nodiscard]] EdgeSubset band(int i, int j) const { return bucket(LevelKey::band(i, j)); }
    [[nodiscard]] double ell(int i, int j) const { return band_scale(epsilon_, i, j); }

    // Largest i with a nonempty band for this j, 0 if none.
    [[nodiscard]] int max_level(int j) const {
        int best = 0;
        for (const auto& [key, subset] : buckets_) {
            if (key.kind == LevelKey::Kind::Band && key.j == j && !subset.empty()) best = std::max(best, key.i);
        }
        return best;
    }

    // J_j, the union of all bands with this j.
    [[nodiscard]] std::vector<EdgeId> group(int j) const {
        std::vector<EdgeId> out;
        for (const auto& [key, subset] : buckets_) {
            if (key.kind == LevelKey::Kind::Band && key.j == j) out.insert(out.end(), subset.members().begin(), subset.members().end());
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    [[nodiscard]] std::size_t nonempty_bands() const {
        std::size_t k = 0;
        for (const auto& [key, subset] : buckets_) k += key.kind == LevelKey::Kind::Band && !subset.empty();
        return k;
    }

    [[nodiscard]] nlohmann::json summary() const {
        nlohmann::json out;
        out["epsilon"] = epsilon_;
        out["max_j"] = max_j();
        nlohmann::json list = nlohmann::json::array();
        for (const auto& [key, subset] : buckets_) {
            nlohmann::json b{{"key", to_string(key)}, {"edges", subset.size()}, {"weight", subset.weight()}};
            if (key.kind == LevelKey::Kind::Band) {
                b["i"] = key.i;
                b["j"] = key.j;
                b["ell"] = ell(key.i, key.j);
            }
            list.push_back(std::move(b));
        }
        out["buckets"] = std::move(list);
        return out;
    }

  private:
    double epsilon_ = 0.5;
    const WeightedGraph* parent_ = nullptr;
    std::map<LevelKey, EdgeSubset> buckets_;
};

inline LevelPartition build_partition(const EdgeSubset& spanner, double epsilon) { return {spanner, epsilon}; }

}  // namespace lightspan
