// Copyright (c) lightspan contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Parameters, payment classes and the credit ledger shared by every stage of
// the certifier. Credits are measured in units of weight times c.

#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "lightspan/graph.hpp"

namespace lightspan::cert {

enum class Mode { Strict, Exploratory };

inline std::string to_string(Mode m) { return m == Mode::Strict ? "strict" : "exploratory"; }

inline Mode parse_mode(const std::string& s) {
    if (s == "strict") return Mode::Strict;
    if (s == "exploratory") return Mode::Exploratory;
    throw GraphError("unknown certifier mode " + s);
}

// h * sqrt(log2 h), the edge density coefficient of K_h-minor-free graphs.
inline double compute_sigma(int h) {
    if (h < 2) throw GraphError("sigma needs h >= 2");
    return h * std::sqrt(std::log2(static_cast<double>(h)));
}

struct CertParams {
    double epsilon = 0.25;
    double g = 8;
    double s = 65;
    double sigma = 3;         // planar graphs have fewer than 3n edges
    double c_kappa = 1;
    double j0_kappa = 1;
    double bag_kappa = 10;
    double sparsity_kappa = 1;
    Mode mode = Mode::Exploratory;
    std::optional<double> c_override;

    // c = kappa * max(g / eps^3, sigma / eps)
    [[nodiscard]] double c() const {
        if (c_override) return *c_override;
        return c_kappa * std::max(g / (epsilon * epsilon * epsilon), sigma / epsilon);
    }
    [[nodiscard]] int high_degree() const { return static_cast<int>(std::ceil(20.0 / epsilon - 1e-9)); }
    [[nodiscard]] int reserve_p1() const { return static_cast<int>(std::ceil(18.0 / epsilon - 1e-9)); }
    [[nodiscard]] int trunc_cap() const { return static_cast<int>(std::ceil(2.0 * g / epsilon - 1e-9)); }
    [[nodiscard]] int long_threshold() const { return trunc_cap() + 1; }

    static CertParams strict_defaults(double epsilon) {
        CertParams p;
        p.epsilon = epsilon;
        p.g = 70;
        p.s = 8 * p.g + 1;
        p.mode = Mode::Strict;
        return p;
    }
    static CertParams exploratory_defaults(double epsilon) {
        CertParams p;
        p.epsilon = epsilon;
        return p;
    }
};

// Preconditions that strict mode refuses to run without. Exploratory mode
// records the same list in the report.
inline std::vector<std::string> precondition_failures(const CertParams& p) {
    std::vector<std::string> out;
    if (!(p.epsilon > 0 && p.epsilon < 1)) out.push_back("epsilon must lie in (0, 1)");
    if (!(p.g > 2)) out.push_back("g must exceed 2");
    if (p.mode == Mode::Strict) {
        if (p.g < 70) out.push_back("strict mode needs g >= 70");
        if (p.s < 8 * p.g + 1) out.push_back("strict mode needs s >= 8g + 1");
        if (!(p.epsilon < 1.0 / (6 * p.g))) out.push_back("strict mode needs epsilon < 1/(6g)");
        if (p.c() < p.c_kappa * std::max(p.g / std::pow(p.epsilon, 3), p.sigma / p.epsilon) * (1 - kRelTol)) {
            out.push_back("strict mode needs c >= kappa * max(g/eps^3, sigma/eps)");
        }
    } else if (!(p.s > 0) || !(p.c() > 0)) {
        out.push_back("s and c must be positive");
    }
    return out;
}

inline nlohmann::json to_json(const CertParams& p) {
    return {{"epsilon", p.epsilon},       {"g", p.g},
            {"s", p.s},                   {"c", p.c()},
            {"c_kappa", p.c_kappa},       {"sigma", p.sigma},
            {"j0_kappa", p.j0_kappa},     {"bag_kappa", p.bag_kappa},
            {"sparsity_kappa", p.sparsity_kappa}, {"mode", to_string(p.mode)},
            {"high_degree_threshold", p.high_degree()}, {"trunc_cap", p.trunc_cap()}};
}

enum class PayClass { J0, A1, A2, A3, A4, A5, A6, A7, A8, Bag };

inline std::string to_string(PayClass k) {
    static const char* names[] = {"J0", "A1", "A2", "A3", "A4", "A5", "A6", "A7", "A8", "Bag"};
    return names[static_cast<int>(k)];
}

struct Violation {
    std::string check;
    std::string location;
    std::string detail;
    double slack = 0;  // how far the checked quantity missed its bound
};

inline nlohmann::json to_json(const Violation& v) {
    return {{"check", v.check}, {"location", v.location}, {"detail", v.detail}, {"slack", v.slack}};
}

struct Payment {
    EdgeId edge = -1;
    PayClass cls = PayClass::A1;
    std::string payer;  // holder label, "bag" or "sparsity"
    double amount = 0;
    bool funded = true;
};

// Holder balances for one level. Debits never drive a balance below zero: an
// overdraft is refused and logged instead.
class CreditLedger {
  public:
    void open(const std::string& holder, double amount) { balance_[holder] += amount; }

    [[nodiscard]] double balance(const std::string& holder) const {
        auto it = balance_.find(holder);
        return it == balance_.end() ? 0.0 : it->second;
    }

    bool debit(const std::string& holder, double amount) {
        double& b = balance_[holder];
        if (b + kRelTol * std::max(1.0, amount) < amount) {
            negative_events_.push_back({"negative balance", holder,
                                        "debit " + std::to_string(amount) + " exceeds balance " + std::to_string(b), amount - b});
            return false;
        }
        b = std::max(0.0, b - amount);
        spent_ += amount;
        return true;
    }

    // Removes whatever is left in a holder and returns it.
    double drain(const std::string& holder) {
        auto it = balance_.find(holder);
        if (it == balance_.end()) return 0;
        const double v = it->second;
        balance_.erase(it);
        return v;
    }

    void record(Payment p) { payments_.push_back(std::move(p)); }

    [[nodiscard]] double spent() const { return spent_; }
    [[nodiscard]] const std::vector<Payment>& payments() const { return payments_; }
    [[nodiscard]] const std::vector<Violation>& negative_events() const { return negative_events_; }
    [[nodiscard]] double total_balance() const {
        double s = 0;
        for (const auto& [k, v] : balance_) s += v;
        return s;
    }

  private:
    std::map<std::string, double> balance_;
    std::vector<Payment> payments_;
    std::vector<Violation> negative_events_;
    double spent_ = 0;
};

}  // namespace lightspan::cert
