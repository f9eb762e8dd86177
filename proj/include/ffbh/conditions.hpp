#pragma once

#include <string>
#include <vector>

#include "ffbh/bivar.hpp"
#include "ffbh/curve.hpp"

namespace ffbh {

enum class TheoremPath { monic, nonmonic }; // monic-in-x hypotheses vs singular-count hypotheses

inline const char* to_string(TheoremPath p) { return p == TheoremPath::monic ? "1.1" : "1.4"; }

struct ConditionEntry {
    std::string name;
    bool ok = false;
    std::string message;
};

struct ConditionsReport {
    TheoremPath path = TheoremPath::monic;
    std::vector<ConditionEntry> entries;
    std::vector<int> mu; // 0 when not computable (hypothesis already failed)
    std::vector<int> N;
    bool pass = false;
};

// Evaluates every hypothesis of the selected theorem for F_1..F_m and target
// degree n. Failures become report entries, never exceptions; only malformed
// inputs (empty list, zero x-degree) throw.
inline ConditionsReport check_conditions(const std::vector<BiPoly>& Fs, int n,
                                         TheoremPath path = TheoremPath::monic,
                                         std::uint64_t seed = kDefaultSeed) {
    if (Fs.empty()) throw invalid_parameter("hypothesis check needs at least one polynomial");
    const FieldCtx& base = *Fs[0].F;
    for (const BiPoly& F : Fs) {
        if (F.F != &base) throw incompatible_fields("input polynomials live over different fields");
        if (deg_x(F) < 1) throw invalid_parameter("hypothesis check needs positive x-degree in every polynomial");
    }
    const int m = int(Fs.size());
    ConditionsReport rep;
    rep.path = path;
    rep.mu.assign(std::size_t(m), 0);
    rep.N.assign(std::size_t(m), 0);

    auto entry = [&rep](const std::string& name, bool ok, const std::string& msg) {
        rep.entries.push_back({name, ok, ok ? "" : msg});
    };

    {
        std::string bad;
        for (int i = 0; i < m; ++i)
            for (int j = i + 1; j < m; ++j)
                if (are_associates(Fs[std::size_t(i)], Fs[std::size_t(j)])) {
                    if (!bad.empty()) bad += ", ";
                    bad += "F_" + std::to_string(i + 1) + " ~ F_" + std::to_string(j + 1);
                }
        entry("pairwise_non_associate", bad.empty(), "associate pairs: " + bad);
    }

    std::vector<bool> separable(static_cast<std::size_t>(m)), irreducible(std::size_t(m), false);
    for (int i = 0; i < m; ++i) {
        separable[std::size_t(i)] = is_separable_over_base_function_field(Fs[std::size_t(i)]);
        entry("separable[F_" + std::to_string(i + 1) + "]", separable[std::size_t(i)],
              "F_" + std::to_string(i + 1) + " lies in F_q[t][x^p]");
    }
    for (int i = 0; i < m; ++i) {
        std::string msg = "F_" + std::to_string(i + 1) + " is reducible over F_q(t) or imprimitive";
        if (separable[std::size_t(i)]) {
            irreducible[std::size_t(i)] = is_irreducible_over_function_field(Fs[std::size_t(i)]);
            entry("irreducible[F_" + std::to_string(i + 1) + "]", irreducible[std::size_t(i)], msg);
        } else {
            entry("irreducible[F_" + std::to_string(i + 1) + "]", false,
                  "not checked: F_" + std::to_string(i + 1) + " is inseparable");
        }
    }

    entry("n_at_least_3", n >= 3, "n = " + std::to_string(n) + " < 3");

    for (int i = 0; i < m; ++i) {
        rep.N[std::size_t(i)] = generic_degree(Fs[std::size_t(i)], n, seed);
        if (separable[std::size_t(i)] && irreducible[std::size_t(i)])
            rep.mu[std::size_t(i)] = absolute_factor_count(Fs[std::size_t(i)]);
    }

    if (path == TheoremPath::monic) {
        for (int i = 0; i < m; ++i) {
            bool monic = monic_in_x(Fs[std::size_t(i)]);
            entry("monic_in_x[F_" + std::to_string(i + 1) + "]", monic,
                  "F_" + std::to_string(i + 1) + " is not monic in x");
            if (monic) {
                SlopeValue sl = slope(Fs[std::size_t(i)]);
                entry("n_at_least_slope[F_" + std::to_string(i + 1) + "]", slope_at_most(sl, n),
                      "slope " + to_string(sl) + " exceeds n = " + std::to_string(n));
            } else {
                entry("n_at_least_slope[F_" + std::to_string(i + 1) + "]", false,
                      "not checked: F_" + std::to_string(i + 1) + " is not monic in x");
            }
        }
    } else {
        int maxN = 0;
        for (int v : rep.N) maxN = std::max(maxN, v);
        entry("p_exceeds_max_N", std::uint64_t(base.p) > std::uint64_t(maxN),
              "p = " + std::to_string(base.p) + " <= max N_i = " + std::to_string(maxN));
        BiPoly prod = bi_const(base, base.one());
        for (const BiPoly& F : Fs) prod = mul(prod, F);
        try {
            int high = count_high_multiplicity(prod);
            entry("n_exceeds_high_multiplicity_count", n > high,
                  "n = " + std::to_string(n) + " <= #{m_P > 2} = " + std::to_string(high));
        } catch (const error& e) {
            entry("n_exceeds_high_multiplicity_count", false,
                  std::string("singular-point search failed: ") + e.what());
        }
    }

    rep.pass = true;
    for (const auto& en : rep.entries) rep.pass = rep.pass && en.ok;
    return rep;
}

} // namespace ffbh
