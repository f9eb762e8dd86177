#pragma once

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "ffbh/fields.hpp"
#include "ffbh/rng.hpp"

namespace ffbh {

// Dense univariate polynomial over a fixed field. c[i] is the coefficient of
// t^i; the vector carries no trailing zeros, so the zero polynomial is empty.
struct UPoly {
    const FieldCtx* F = nullptr;
    std::vector<FFElem> c;

    UPoly() = default;
    explicit UPoly(const FieldCtx& f) : F(&f) {}
    UPoly(const FieldCtx& f, std::vector<FFElem> cs) : F(&f), c(std::move(cs)) { trim(); }

    void trim() {
        while (!c.empty() && c.back().v == 0) c.pop_back();
    }
    bool is_zero() const { return c.empty(); }
    int deg() const { return int(c.size()) - 1; } // -1 stands for deg(0) = -inf
    FFElem lc() const { return c.empty() ? FFElem{0} : c.back(); }
    FFElem at(std::size_t i) const { return i < c.size() ? c[i] : FFElem{0}; }

    friend bool operator==(const UPoly& a, const UPoly& b) { return a.F == b.F && a.c == b.c; }
    friend bool operator!=(const UPoly& a, const UPoly& b) { return !(a == b); }
};

inline UPoly upoly_zero(const FieldCtx& F) { return UPoly(F); }
inline UPoly upoly_const(const FieldCtx& F, FFElem a) {
    UPoly r(F);
    if (a.v) r.c.push_back(a);
    return r;
}
inline UPoly upoly_monomial(const FieldCtx& F, int d, FFElem a) {
    UPoly r(F);
    if (a.v) {
        r.c.assign(std::size_t(d) + 1, F.zero());
        r.c.back() = a;
    }
    return r;
}
inline UPoly upoly_x(const FieldCtx& F) { return upoly_monomial(F, 1, F.one()); }
// convenience: coefficients by element code, index i = coeff of t^i
inline UPoly upoly_from_codes(const FieldCtx& F, std::initializer_list<std::uint64_t> codes) {
    UPoly r(F);
    for (std::uint64_t v : codes) r.c.push_back(F.elem(v));
    r.trim();
    return r;
}

namespace detail {
inline void require_same_field(const UPoly& a, const UPoly& b) {
    if (a.F != b.F) throw incompatible_fields("polynomial operands live over different fields");
}
} // namespace detail

inline UPoly add(const UPoly& a, const UPoly& b) {
    detail::require_same_field(a, b);
    const FieldCtx& F = *a.F;
    UPoly r(F);
    r.c.resize(std::max(a.c.size(), b.c.size()), F.zero());
    for (std::size_t i = 0; i < r.c.size(); ++i) r.c[i] = F.add(a.at(i), b.at(i));
    r.trim();
    return r;
}

inline UPoly neg(const UPoly& a) {
    UPoly r = a;
    for (auto& x : r.c) x = a.F->neg(x);
    return r;
}

inline UPoly sub(const UPoly& a, const UPoly& b) { return add(a, neg(b)); }

inline UPoly mul(const UPoly& a, const UPoly& b) {
    detail::require_same_field(a, b);
    const FieldCtx& F = *a.F;
    if (a.is_zero() || b.is_zero()) return UPoly(F);
    UPoly r(F);
    r.c.assign(a.c.size() + b.c.size() - 1, F.zero());
    for (std::size_t i = 0; i < a.c.size(); ++i) {
        if (!a.c[i].v) continue;
        for (std::size_t j = 0; j < b.c.size(); ++j)
            r.c[i + j] = F.add(r.c[i + j], F.mul(a.c[i], b.c[j]));
    }
    r.trim();
    return r;
}

inline UPoly scale(const UPoly& a, FFElem s) {
    const FieldCtx& F = *a.F;
    if (!s.v) return UPoly(F);
    UPoly r = a;
    for (auto& x : r.c) x = F.mul(x, s);
    return r;
}

inline UPoly monic(const UPoly& a) {
    if (a.is_zero()) return a;
    return scale(a, a.F->inv(a.lc()));
}

struct DivModResult {
    UPoly quot, rem;
};

inline DivModResult divmod(const UPoly& a, const UPoly& b) {
    detail::require_same_field(a, b);
    const FieldCtx& F = *a.F;
    if (b.is_zero()) throw zero_division("polynomial division by zero");
    if (a.deg() < b.deg()) return {UPoly(F), a};
    UPoly rem = a;
    UPoly quot(F);
    quot.c.assign(std::size_t(a.deg() - b.deg()) + 1, F.zero());
    FFElem invl = F.inv(b.lc());
    while (!rem.is_zero() && rem.deg() >= b.deg()) {
        FFElem q = F.mul(rem.lc(), invl);
        int off = rem.deg() - b.deg();
        quot.c[std::size_t(off)] = q;
        for (std::size_t i = 0; i < b.c.size(); ++i)
            rem.c[std::size_t(off) + i] = F.sub(rem.c[std::size_t(off) + i], F.mul(q, b.c[i]));
        rem.trim();
    }
    quot.trim();
    return {quot, rem};
}

inline UPoly quotient(const UPoly& a, const UPoly& b) { return divmod(a, b).quot; }
inline UPoly mod(const UPoly& a, const UPoly& b) { return divmod(a, b).rem; }

// monic gcd; gcd(0, 0) = 0
inline UPoly gcd(UPoly a, UPoly b) {
    detail::require_same_field(a, b);
    while (!b.is_zero()) {
        UPoly r = mod(a, b);
        a = std::move(b);
        b = std::move(r);
    }
    return monic(a);
}

inline UPoly derivative(const UPoly& a) {
    const FieldCtx& F = *a.F;
    UPoly r(F);
    if (a.deg() < 1) return r;
    r.c.resize(a.c.size() - 1);
    for (std::size_t i = 1; i < a.c.size(); ++i) r.c[i - 1] = F.mul(a.c[i], F.from_int(i % F.p));
    r.trim();
    return r;
}

// second Hasse derivative: sum_j binom(j,2) a_j t^{j-2}; satisfies the product
// rule (fg)^{[2]} = f^{[2]} g + f' g' + f g^{[2]} in any characteristic
inline UPoly hasse2(const UPoly& a) {
    const FieldCtx& F = *a.F;
    UPoly r(F);
    if (a.deg() < 2) return r;
    r.c.resize(a.c.size() - 2);
    for (std::size_t j = 2; j < a.c.size(); ++j) {
        std::uint64_t binom = (std::uint64_t(j) * (j - 1) / 2) % F.p;
        r.c[j - 2] = F.mul(a.c[j], F.from_int(binom));
    }
    r.trim();
    return r;
}

inline FFElem eval(const UPoly& a, FFElem x) {
    const FieldCtx& F = *a.F;
    FFElem r = F.zero();
    for (std::size_t i = a.c.size(); i-- > 0;) r = F.add(F.mul(r, x), a.c[i]);
    return r;
}

// a(t + s), by the binomial expansion with Pascal rows mod p
inline UPoly taylor_shift(const UPoly& a, FFElem s) {
    const FieldCtx& F = *a.F;
    if (a.deg() < 1 || !s.v) return a;
    const std::size_t n = a.c.size();
    std::vector<std::uint32_t> binom(n, 0); // row i of Pascal's triangle mod p, built in place
    UPoly r(F);
    r.c.assign(n, F.zero());
    std::vector<FFElem> spow(n);
    spow[0] = F.one();
    for (std::size_t i = 1; i < n; ++i) spow[i] = F.mul(spow[i - 1], s);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j-- > 1;) binom[j] = (binom[j] + binom[j - 1]) % F.p;
        binom[i] = 1 % F.p;
        binom[0] = 1 % F.p;
        if (!a.c[i].v) continue;
        for (std::size_t j = 0; j <= i; ++j) {
            if (!binom[j]) continue;
            FFElem term = F.mul(a.c[i], F.mul(F.from_int(binom[j]), spow[i - j]));
            r.c[j] = F.add(r.c[j], term);
        }
    }
    r.trim();
    return r;
}

inline UPoly mulmod(const UPoly& a, const UPoly& b, const UPoly& m) { return mod(mul(a, b), m); }

// inverse of a modulo m (extended Euclid); requires gcd(a, m) constant
inline UPoly invmod(const UPoly& a, const UPoly& m) {
    detail::require_same_field(a, m);
    const FieldCtx& F = *a.F;
    UPoly r0 = m, r1 = mod(a, m);
    UPoly t0(F), t1 = upoly_const(F, F.one());
    while (!r1.is_zero()) {
        DivModResult qr = divmod(r0, r1);
        UPoly t2 = sub(t0, mul(qr.quot, t1));
        r0 = std::move(r1);
        r1 = std::move(qr.rem);
        t0 = std::move(t1);
        t1 = std::move(t2);
    }
    if (r0.deg() != 0) throw zero_division("modular inverse of a non-unit polynomial");
    return mod(scale(t0, F.inv(r0.lc())), m);
}

inline UPoly powmod(UPoly base, std::uint64_t e, const UPoly& m) {
    UPoly r = upoly_const(*base.F, base.F->one());
    r = mod(r, m);
    base = mod(base, m);
    while (e) {
        if (e & 1) r = mulmod(r, base, m);
        base = mulmod(base, base, m);
        e >>= 1;
    }
    return r;
}

// ---- resultant and discriminant ----

// Res(a, b) by the Euclidean scheme. Conventions at the degenerate ends:
// two constants give 1; a zero against anything of positive degree gives 0;
// a nonzero constant c against degree n gives c^n.
inline FFElem resultant(UPoly a, UPoly b) {
    detail::require_same_field(a, b);
    const FieldCtx& F = *a.F;
    if (a.deg() <= 0 && b.deg() <= 0) return F.one();
    if (a.is_zero() || b.is_zero()) return F.zero();
    FFElem acc = F.one();
    bool negate = false;
    while (b.deg() > 0) {
        if (a.deg() < b.deg()) {
            if ((a.deg() > 0) && (std::uint64_t(a.deg()) * std::uint64_t(b.deg())) % 2 == 1)
                negate = !negate;
            std::swap(a, b);
            continue; // b may have become constant
        }
        UPoly r = mod(a, b);
        if (r.is_zero()) return F.zero(); // b | a with deg b > 0
        // Res(a,b) = (-1)^{deg a deg b} lc(b)^{deg a - deg r} Res(b, r)
        if ((std::uint64_t(a.deg()) * std::uint64_t(b.deg())) % 2 == 1) negate = !negate;
        acc = F.mul(acc, F.pow(b.lc(), std::uint64_t(a.deg() - r.deg())));
        a = std::move(b);
        b = std::move(r);
    }
    // b is a nonzero constant now
    acc = F.mul(acc, F.pow(b.lc(), std::uint64_t(a.deg())));
    return negate ? F.neg(acc) : acc;
}

// disc(a) = (-1)^{N(N-1)/2} Res(a, a') * lc(a)^{N-2-deg a'}; zero whenever a'
// vanishes. The exponent is -1 (the familiar /lc) unless the characteristic
// kills the top derivative term, where plain /lc would be off by a power of
// lc and break the parity identity with the factor count.
inline FFElem discriminant(const UPoly& a) {
    const FieldCtx& F = *a.F;
    if (a.is_zero()) throw invalid_parameter("discriminant of the zero polynomial");
    UPoly ap = derivative(a);
    if (ap.is_zero()) return F.zero();
    FFElem r = resultant(a, ap);
    std::uint64_t N = std::uint64_t(a.deg());
    int e = int(N) - 2 - ap.deg();
    FFElem d = e >= 0 ? F.mul(r, F.pow(a.lc(), std::uint64_t(e))) : F.div(r, a.lc());
    return (N * (N - 1) / 2) % 2 ? F.neg(d) : d;
}

inline bool is_squarefree(const UPoly& a) {
    if (a.is_zero()) return false;
    if (a.deg() == 0) return true;
    UPoly ap = derivative(a);
    if (ap.is_zero()) return false; // p-th power
    return gcd(a, ap).deg() == 0;
}

// ---- factorization ----

struct Factorization {
    FFElem unit;                             // leading coefficient of the input
    std::vector<std::pair<UPoly, int>> parts; // monic irreducible, multiplicity
};

namespace detail {

// canonical factor order: by degree, then by coefficient codes compared from
// the top coefficient down
inline bool factor_less(const UPoly& a, const UPoly& b) {
    if (a.deg() != b.deg()) return a.deg() < b.deg();
    for (std::size_t i = a.c.size(); i-- > 0;)
        if (a.c[i].v != b.c[i].v) return a.c[i].v < b.c[i].v;
    return false;
}

// coefficientwise p-th root of a p-th power polynomial
inline UPoly pth_root(const UPoly& a) {
    const FieldCtx& F = *a.F;
    UPoly r(F);
    r.c.assign(a.c.size() / F.p + 1, F.zero());
    std::uint64_t root_exp = F.q / F.p; // inverse of Frobenius: x -> x^{p^{k-1}}
    for (std::size_t i = 0; i < a.c.size(); ++i) {
        if (!a.c[i].v) continue;
        if (i % F.p) throw error("internal: p-th root of a non-p-th-power");
        r.c[i / F.p] = F.pow(a.c[i], root_exp);
    }
    r.trim();
    return r;
}

inline void squarefree_parts(const UPoly& a, int mult, std::vector<std::pair<UPoly, int>>& out) {
    const FieldCtx& F = *a.F;
    if (a.deg() <= 0) return;
    UPoly ap = derivative(a);
    if (ap.is_zero()) {
        squarefree_parts(pth_root(a), mult * int(F.p), out);
        return;
    }
    UPoly c = gcd(a, ap);
    UPoly w = quotient(a, c);
    int i = 1;
    while (w.deg() > 0) {
        UPoly y = gcd(w, c);
        UPoly z = quotient(w, y);
        if (z.deg() > 0) out.emplace_back(monic(z), mult * i);
        ++i;
        w = std::move(y);
        c = quotient(c, w);
    }
    if (c.deg() > 0) squarefree_parts(pth_root(c), mult * int(F.p), out);
}

// distinct-degree split of a monic squarefree polynomial
inline std::vector<std::pair<UPoly, int>> ddf(UPoly g) {
    const FieldCtx& F = *g.F;
    std::vector<std::pair<UPoly, int>> out;
    UPoly x = upoly_x(F);
    UPoly h = mod(x, g);
    int d = 0;
    while (g.deg() >= 2 * (d + 1)) {
        ++d;
        h = powmod(h, F.q, g);
        UPoly G = gcd(sub(h, x), g);
        if (G.deg() > 0) {
            out.emplace_back(G, d);
            g = quotient(g, G);
            h = mod(h, g);
        }
    }
    if (g.deg() > 0) out.emplace_back(g, g.deg());
    return out;
}

// equal-degree split (Cantor-Zassenhaus); g monic squarefree, all factors of degree d
inline void edf(const UPoly& g, int d, CounterRng& rng, std::vector<UPoly>& out) {
    const FieldCtx& F = *g.F;
    if (g.deg() == d) {
        out.push_back(g);
        return;
    }
    UPoly split(F);
    for (int attempt = 0; attempt < 1024; ++attempt) {
        UPoly r(F);
        r.c.resize(std::size_t(g.deg()));
        for (auto& cv : r.c) cv = F.elem(rng.below(F.q));
        r.trim();
        if (r.deg() < 1) continue;
        UPoly s(F);
        if (F.odd_characteristic()) {
            // norm down to GF(q), then the square-detecting power (q-1)/2
            UPoly acc = mod(r, g);
            UPoly tmp = acc;
            for (int j = 1; j < d; ++j) {
                tmp = powmod(tmp, F.q, g);
                acc = mulmod(acc, tmp, g);
            }
            s = powmod(acc, (F.q - 1) / 2, g);
            s = sub(s, upoly_const(F, F.one()));
        } else {
            // absolute trace of r over GF(2)
            std::uint64_t bits = std::uint64_t(F.k) * std::uint64_t(d);
            UPoly tmp = mod(r, g);
            UPoly acc = tmp;
            for (std::uint64_t j = 1; j < bits; ++j) {
                tmp = mulmod(tmp, tmp, g);
                acc = add(acc, tmp);
            }
            s = acc;
        }
        UPoly G = gcd(s, g);
        if (G.deg() > 0 && G.deg() < g.deg()) {
            split = std::move(G);
            break;
        }
    }
    if (split.is_zero()) throw error("equal-degree splitting failed to find a factor");
    edf(split, d, rng, out);
    edf(quotient(g, split), d, rng, out);
}

} // namespace detail

inline Factorization factor(const UPoly& a) {
    if (a.is_zero()) throw invalid_parameter("factorization of the zero polynomial");
    Factorization res;
    res.unit = a.lc();
    std::vector<std::pair<UPoly, int>> sf;
    detail::squarefree_parts(monic(a), 1, sf);
    CounterRng rng(kDefaultSeed);
    for (const auto& [part, mult] : sf) {
        for (const auto& [blk, d] : detail::ddf(part)) {
            std::vector<UPoly> irr;
            detail::edf(blk, d, rng, irr);
            for (auto& f : irr) res.parts.emplace_back(std::move(f), mult);
        }
    }
    std::sort(res.parts.begin(), res.parts.end(), [](const auto& x, const auto& y) {
        if (x.first.deg() != y.first.deg() || x.first != y.first)
            return detail::factor_less(x.first, y.first);
        return x.second < y.second;
    });
#ifndef NDEBUG
    UPoly check = upoly_const(*a.F, res.unit);
    for (const auto& [f, m] : res.parts)
        for (int i = 0; i < m; ++i) check = mul(check, f);
    assert(check == a && "factor(): product of factors does not reproduce the input");
#endif
    return res;
}

inline bool is_irreducible(const UPoly& a) {
    const FieldCtx& F = *a.F;
    if (a.deg() <= 0) return false;
    if (a.deg() == 1) return true;
    UPoly f = monic(a);
    const int N = f.deg();
    std::vector<int> checkpoints;
    {
        int m = N;
        for (int l = 2; l * l <= m; ++l)
            if (m % l == 0) {
                checkpoints.push_back(N / l);
                while (m % l == 0) m /= l;
            }
        if (m > 1) checkpoints.push_back(N / m);
    }
    UPoly x = upoly_x(F);
    UPoly h = mod(x, f);
    for (int j = 1; j <= N; ++j) {
        h = powmod(h, F.q, f);
        for (int cp : checkpoints)
            if (j == cp && gcd(sub(h, x), f).deg() != 0) return false;
    }
    return h == mod(x, f);
}

// distinct roots of a in the base field, ascending by element code
inline std::vector<FFElem> roots(const UPoly& a) {
    const FieldCtx& F = *a.F;
    std::vector<FFElem> out;
    if (a.deg() <= 0) return out;
    UPoly x = upoly_x(F);
    UPoly lin = gcd(sub(powmod(x, F.q, a), x), a);
    if (lin.deg() <= 0) return out;
    CounterRng rng(kDefaultSeed);
    std::vector<UPoly> parts;
    detail::edf(lin, 1, rng, parts);
    for (const auto& l : parts) out.push_back(F.neg(l.at(0)));
    std::sort(out.begin(), out.end());
    return out;
}

// Frobenius cycle type: the multiset of irreducible factor degrees of a
// squarefree polynomial, as a partition of deg a sorted largest part first
using CycleType = std::vector<int>;

inline CycleType frobenius_class(const UPoly& a) {
    if (!is_squarefree(a)) throw not_separable("cycle type requested for a non-squarefree polynomial");
    CycleType ct;
    for (const auto& [blk, d] : detail::ddf(monic(a)))
        for (int i = 0; i < blk.deg() / d; ++i) ct.push_back(d);
    std::sort(ct.rbegin(), ct.rend());
    return ct;
}

inline std::string cycle_type_string(const CycleType& ct) {
    std::string s = "[";
    for (std::size_t i = 0; i < ct.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(ct[i]);
    }
    return s + "]";
}

inline int moebius(const UPoly& a) {
    if (a.is_zero()) throw invalid_parameter("moebius of the zero polynomial");
    if (a.deg() == 0) return 1;
    if (!is_squarefree(a)) return 0;
    int r = 0;
    for (const auto& [blk, d] : detail::ddf(monic(a))) r += blk.deg() / d;
    return (r % 2) ? -1 : +1;
}

// ell_e(a): falling factorial l(l-1)...(l-e+1) of the number l of distinct
// roots of a in the base field
inline std::uint64_t ell(const UPoly& a, int e) {
    if (e < 0) throw invalid_parameter("ell with negative order");
    std::uint64_t l = 0;
    if (a.deg() > 0) {
        UPoly x = upoly_x(*a.F);
        l = std::uint64_t(std::max(0, gcd(sub(powmod(x, a.F->q, a), x), a).deg()));
    }
    std::uint64_t r = 1;
    for (int i = 0; i < e; ++i) {
        if (l < std::uint64_t(i)) return 0;
        std::uint64_t factor_i = l - std::uint64_t(i);
        if (factor_i != 0 && r > UINT64_MAX / factor_i) throw error("ell overflow");
        r *= factor_i;
        if (r == 0) return 0;
    }
    return r;
}

// Stickelberger parity check: for squarefree a of degree N with r irreducible
// factors over odd q, chi(disc a) must equal (-1)^{N-r}
inline bool stickelberger_audit(const UPoly& a) {
    const FieldCtx& F = *a.F;
    if (!F.odd_characteristic())
        throw unsupported_characteristic("discriminant parity audit needs odd characteristic");
    if (!is_squarefree(a)) throw not_separable("discriminant parity audit needs a squarefree input");
    if (a.deg() <= 0) return true;
    int r = 0;
    for (const auto& [blk, d] : detail::ddf(monic(a))) r += blk.deg() / d;
    int chi = quadratic_character(discriminant(a), F);
    int expect = ((a.deg() - r) % 2) ? -1 : +1;
    return chi == expect;
}

// ---- subfield embeddings ----
//
// For from = GF(p^a) inside to = GF(p^{ab}) the map sends the power-basis
// generator of `from` to the smallest root (by element code) of `from`'s
// modulus inside `to`. Each (from, to) pair caches its root powers; note the
// choice is made per pair, so compose along one path when towers are involved.

namespace detail {

struct EmbedData {
    std::vector<FFElem> root_pow; // r^0 .. r^{from.k-1} inside `to`
};

inline const EmbedData& embed_data(const FieldCtx& from, const FieldCtx& to) {
    if (from.p != to.p || to.k % from.k != 0)
        throw incompatible_fields("no embedding: source field is not a subfield of the target");
    static std::mutex m;
    static std::map<std::pair<const FieldCtx*, const FieldCtx*>, EmbedData> cache;
    std::lock_guard<std::mutex> lock(m);
    auto key = std::make_pair(&from, &to);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    UPoly M(to);
    M.c.resize(from.k + 1);
    for (std::uint32_t i = 0; i <= from.k; ++i) M.c[i] = to.from_int(from.modulus[i]);
    M.trim();
    std::vector<FFElem> rs = roots(M); // splits completely in `to`
    if (rs.empty()) throw error("internal: modulus failed to split in the extension");
    EmbedData d;
    d.root_pow.resize(from.k);
    d.root_pow[0] = to.one();
    for (std::uint32_t i = 1; i < from.k; ++i) d.root_pow[i] = to.mul(d.root_pow[i - 1], rs[0]);
    return cache.emplace(key, std::move(d)).first->second;
}

} // namespace detail

inline FFElem embed(FFElem x, const FieldCtx& from, const FieldCtx& to) {
    if (&from == &to) return x;
    const auto& d = detail::embed_data(from, to);
    FFElem r = to.zero();
    for (std::uint32_t i = 0; i < from.k; ++i) {
        std::uint32_t ci = from.coeff(x, i);
        if (ci) r = to.add(r, to.mul(to.from_int(ci), d.root_pow[i]));
    }
    return r;
}

// true iff y lies in the embedded copy of `from` inside `to`
inline bool in_subfield(FFElem y, const FieldCtx& from, const FieldCtx& to) {
    if (&from == &to) return true;
    if (from.p != to.p || to.k % from.k != 0) return false;
    return frobenius(y, to, from.k) == y;
}

// inverse of embed() on its image; Gaussian elimination over GF(p)
inline FFElem embed_pullback(FFElem y, const FieldCtx& from, const FieldCtx& to) {
    if (&from == &to) return y;
    const auto& d = detail::embed_data(from, to);
    const std::uint32_t rows = to.k, cols = from.k;
    const std::uint32_t p = to.p;
    std::vector<std::vector<std::uint32_t>> A(rows, std::vector<std::uint32_t>(cols + 1, 0));
    for (std::uint32_t j = 0; j < cols; ++j)
        for (std::uint32_t i = 0; i < rows; ++i) A[i][j] = to.coeff(d.root_pow[j], i);
    for (std::uint32_t i = 0; i < rows; ++i) A[i][cols] = to.coeff(y, i);

    std::vector<std::int64_t> pivot_col(cols, -1);
    std::uint32_t row = 0;
    for (std::uint32_t col = 0; col < cols && row < rows; ++col) {
        std::uint32_t sel = row;
        while (sel < rows && A[sel][col] == 0) ++sel;
        if (sel == rows) continue;
        std::swap(A[sel], A[row]);
        std::uint32_t inv = detail::pf_inv_scalar(A[row][col], p);
        for (std::uint32_t j = col; j <= cols; ++j)
            A[row][j] = std::uint32_t(std::uint64_t(A[row][j]) * inv % p);
        for (std::uint32_t i = 0; i < rows; ++i) {
            if (i == row || A[i][col] == 0) continue;
            std::uint32_t f = A[i][col];
            for (std::uint32_t j = col; j <= cols; ++j)
                A[i][j] = std::uint32_t((A[i][j] + std::uint64_t(p - f) * A[row][j]) % p);
        }
        pivot_col[col] = row;
        ++row;
    }
    for (std::uint32_t i = row; i < rows; ++i)
        if (A[i][cols]) throw incompatible_fields("element does not lie in the requested subfield");
    std::vector<std::uint32_t> cs(cols, 0);
    for (std::uint32_t col = 0; col < cols; ++col)
        if (pivot_col[col] >= 0) cs[col] = A[std::size_t(pivot_col[col])][cols];
    return from.from_coeffs(cs);
}

// coefficientwise embedding of a polynomial into an extension
inline UPoly embed_poly(const UPoly& a, const FieldCtx& to) {
    if (a.F == &to) return a;
    UPoly r(to);
    r.c.reserve(a.c.size());
    for (FFElem x : a.c) r.c.push_back(embed(x, *a.F, to));
    r.trim();
    return r;
}

inline UPoly embed_pullback_poly(const UPoly& a, const FieldCtx& from) {
    if (a.F == &from) return a;
    UPoly r(from);
    r.c.reserve(a.c.size());
    for (FFElem x : a.c) r.c.push_back(embed_pullback(x, from, *a.F));
    r.trim();
    return r;
}

// ---- rendering ----

inline std::string coeff_string(const FieldCtx& F, FFElem a, bool wrap_composite) {
    std::string s = F.to_string(a);
    if (wrap_composite && s.find('+') != std::string::npos) s = "(" + s + ")";
    return s;
}

inline std::string to_string(const UPoly& a, const std::string& var = "t") {
    if (a.is_zero()) return "0";
    const FieldCtx& F = *a.F;
    std::string out;
    for (std::size_t i = a.c.size(); i-- > 0;) {
        if (!a.c[i].v) continue;
        if (!out.empty()) out += " + ";
        if (i == 0) {
            out += coeff_string(F, a.c[i], false);
            continue;
        }
        if (a.c[i].v != 1) out += coeff_string(F, a.c[i], true) + "*";
        out += (i == 1) ? var : var + "^" + std::to_string(i);
    }
    return out;
}

} // namespace ffbh
