#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "ffbh/polyring.hpp"

namespace ffbh {

// Bivariate polynomial F(t, x). Terms are kept in canonical order (x-exponent
// descending, then t-exponent descending), which is also the rendering order;
// no zero coefficients are stored.
struct BiTerm {
    int tdeg = 0;
    int xdeg = 0;
    FFElem coef;

    friend bool operator==(const BiTerm& a, const BiTerm& b) {
        return a.tdeg == b.tdeg && a.xdeg == b.xdeg && a.coef == b.coef;
    }
};

struct BiPoly {
    const FieldCtx* F = nullptr;
    std::vector<BiTerm> terms;

    BiPoly() = default;
    explicit BiPoly(const FieldCtx& f) : F(&f) {}

    bool is_zero() const { return terms.empty(); }

    friend bool operator==(const BiPoly& a, const BiPoly& b) { return a.F == b.F && a.terms == b.terms; }
    friend bool operator!=(const BiPoly& a, const BiPoly& b) { return !(a == b); }
};

namespace detail {

inline bool biterm_before(const BiTerm& a, const BiTerm& b) {
    if (a.xdeg != b.xdeg) return a.xdeg > b.xdeg;
    return a.tdeg > b.tdeg;
}

inline void require_same_field(const BiPoly& a, const BiPoly& b) {
    if (a.F != b.F) throw incompatible_fields("bivariate operands live over different fields");
}

} // namespace detail

inline BiPoly bi_normalized(const FieldCtx& F, std::vector<BiTerm> raw) {
    std::map<std::pair<int, int>, FFElem> acc; // key (xdeg, tdeg)
    for (const BiTerm& t : raw) {
        if (t.tdeg < 0 || t.xdeg < 0) throw invalid_parameter("negative exponent in bivariate term");
        auto key = std::make_pair(t.xdeg, t.tdeg);
        auto it = acc.find(key);
        if (it == acc.end())
            acc.emplace(key, t.coef);
        else
            it->second = F.add(it->second, t.coef);
    }
    BiPoly r(F);
    for (auto it = acc.rbegin(); it != acc.rend(); ++it)
        if (it->second.v) r.terms.push_back({it->first.second, it->first.first, it->second});
    return r;
}

inline BiPoly bi_zero(const FieldCtx& F) { return BiPoly(F); }
inline BiPoly bi_const(const FieldCtx& F, FFElem a) {
    BiPoly r(F);
    if (a.v) r.terms.push_back({0, 0, a});
    return r;
}
inline BiPoly bi_monomial(const FieldCtx& F, int tdeg, int xdeg, FFElem a) {
    BiPoly r(F);
    if (a.v) r.terms.push_back({tdeg, xdeg, a});
    return r;
}
inline BiPoly bi_t(const FieldCtx& F) { return bi_monomial(F, 1, 0, F.one()); }
inline BiPoly bi_x(const FieldCtx& F) { return bi_monomial(F, 0, 1, F.one()); }

inline int deg_x(const BiPoly& a) {
    int d = -1;
    for (const auto& t : a.terms) d = std::max(d, t.xdeg);
    return d;
}
inline int deg_t(const BiPoly& a) {
    int d = -1;
    for (const auto& t : a.terms) d = std::max(d, t.tdeg);
    return d;
}
inline int total_degree(const BiPoly& a) {
    int d = -1;
    for (const auto& t : a.terms) d = std::max(d, t.tdeg + t.xdeg);
    return d;
}

inline BiPoly add(const BiPoly& a, const BiPoly& b) {
    detail::require_same_field(a, b);
    std::vector<BiTerm> raw = a.terms;
    raw.insert(raw.end(), b.terms.begin(), b.terms.end());
    return bi_normalized(*a.F, std::move(raw));
}
inline BiPoly neg(const BiPoly& a) {
    BiPoly r = a;
    for (auto& t : r.terms) t.coef = a.F->neg(t.coef);
    return r;
}
inline BiPoly sub(const BiPoly& a, const BiPoly& b) { return add(a, neg(b)); }
inline BiPoly mul(const BiPoly& a, const BiPoly& b) {
    detail::require_same_field(a, b);
    const FieldCtx& F = *a.F;
    std::vector<BiTerm> raw;
    raw.reserve(a.terms.size() * b.terms.size());
    for (const auto& s : a.terms)
        for (const auto& t : b.terms) raw.push_back({s.tdeg + t.tdeg, s.xdeg + t.xdeg, F.mul(s.coef, t.coef)});
    return bi_normalized(F, std::move(raw));
}
inline BiPoly scale(const BiPoly& a, FFElem s) {
    if (!s.v) return BiPoly(*a.F);
    BiPoly r = a;
    for (auto& t : r.terms) t.coef = a.F->mul(t.coef, s);
    return r;
}

inline BiPoly bi_pow(const BiPoly& a, std::uint64_t e) {
    if (e > 0 && total_degree(a) > 0 && std::uint64_t(total_degree(a)) * e > 20000)
        throw invalid_parameter("exponent overflow: resulting degree too large");
    BiPoly r = bi_const(*a.F, a.F->one());
    BiPoly base = a;
    while (e) {
        if (e & 1) r = mul(r, base);
        base = mul(base, base);
        e >>= 1;
    }
    return r;
}

inline BiPoly bi_dx(const BiPoly& a) {
    const FieldCtx& F = *a.F;
    std::vector<BiTerm> raw;
    for (const auto& t : a.terms) {
        if (t.xdeg == 0) continue;
        FFElem c = F.mul(t.coef, F.from_int(std::uint64_t(t.xdeg) % F.p));
        if (c.v) raw.push_back({t.tdeg, t.xdeg - 1, c});
    }
    return bi_normalized(F, std::move(raw));
}
inline BiPoly bi_dt(const BiPoly& a) {
    const FieldCtx& F = *a.F;
    std::vector<BiTerm> raw;
    for (const auto& t : a.terms) {
        if (t.tdeg == 0) continue;
        FFElem c = F.mul(t.coef, F.from_int(std::uint64_t(t.tdeg) % F.p));
        if (c.v) raw.push_back({t.tdeg - 1, t.xdeg, c});
    }
    return bi_normalized(F, std::move(raw));
}

// coefficients of x^0..x^{deg_x} as univariate polynomials in t
inline std::vector<UPoly> x_coeffs(const BiPoly& a) {
    const FieldCtx& F = *a.F;
    std::vector<UPoly> out(std::size_t(deg_x(a) + 1), UPoly(F));
    for (const auto& t : a.terms) {
        UPoly& c = out[std::size_t(t.xdeg)];
        if (c.c.size() <= std::size_t(t.tdeg)) c.c.resize(std::size_t(t.tdeg) + 1, F.zero());
        c.c[std::size_t(t.tdeg)] = t.coef;
    }
    for (auto& c : out) c.trim();
    return out;
}

inline BiPoly from_x_coeffs(const FieldCtx& F, const std::vector<UPoly>& xc) {
    std::vector<BiTerm> raw;
    for (std::size_t j = 0; j < xc.size(); ++j) {
        if (xc[j].is_zero()) continue;
        if (xc[j].F != &F) throw incompatible_fields("coefficient polynomial over the wrong field");
        for (std::size_t i = 0; i < xc[j].c.size(); ++i)
            if (xc[j].c[i].v) raw.push_back({int(i), int(j), xc[j].c[i]});
    }
    return bi_normalized(F, std::move(raw));
}

inline BiPoly embed_bipoly(const BiPoly& a, const FieldCtx& to) {
    if (a.F == &to) return a;
    BiPoly r(to);
    r.terms.reserve(a.terms.size());
    for (const auto& t : a.terms) r.terms.push_back({t.tdeg, t.xdeg, embed(t.coef, *a.F, to)});
    return r;
}

// F(tau, x) as a univariate polynomial in x
inline UPoly specialize_t(const std::vector<UPoly>& xc, FFElem tau) {
    if (xc.empty()) throw invalid_parameter("specialization of the zero polynomial");
    const FieldCtx& F = *xc[0].F;
    UPoly u(F);
    u.c.resize(xc.size());
    for (std::size_t j = 0; j < xc.size(); ++j) u.c[j] = eval(xc[j], tau);
    u.trim();
    return u;
}
inline UPoly specialize_t(const BiPoly& a, FFElem tau) {
    if (a.is_zero()) return UPoly(*a.F);
    return specialize_t(x_coeffs(a), tau);
}

// F(t, f(t)); Horner in x with polynomial coefficients
inline UPoly substitute(const std::vector<UPoly>& xc, const UPoly& f) {
    if (xc.empty()) throw invalid_parameter("substitution into the zero polynomial");
    if (xc[0].F != f.F) throw incompatible_fields("substitution operand over the wrong field");
    UPoly r = xc.back();
    for (std::size_t j = xc.size() - 1; j-- > 0;) r = add(mul(r, f), xc[j]);
    return r;
}
inline UPoly substitute(const BiPoly& a, const UPoly& f) {
    if (a.F != f.F) throw incompatible_fields("substitution operand over the wrong field");
    if (a.is_zero()) return UPoly(*a.F);
    return substitute(x_coeffs(a), f);
}

// gcd of the x-coefficients in F_q[t]
inline UPoly content(const BiPoly& a) {
    UPoly g(*a.F);
    for (const UPoly& c : x_coeffs(a)) g = gcd(g, c);
    return g;
}

inline bool monic_in_x(const BiPoly& a) {
    int r = deg_x(a);
    if (r < 0) return false;
    UPoly top = x_coeffs(a)[std::size_t(r)];
    return top.deg() == 0 && top.lc() == a.F->one();
}

// ---- slope ----

// either -infinity or a nonnegative rational in lowest terms
struct SlopeValue {
    bool neg_inf = true;
    long long num = 0;
    long long den = 1;
};

inline SlopeValue slope(const BiPoly& a) {
    if (deg_x(a) < 1) throw invalid_parameter("slope needs positive x-degree");
    if (!monic_in_x(a)) throw invalid_parameter("slope is defined for polynomials monic in x");
    std::vector<UPoly> xc = x_coeffs(a);
    int r = deg_x(a);
    SlopeValue best;
    for (int j = 1; j <= r; ++j) {
        const UPoly& c = xc[std::size_t(r - j)];
        if (c.is_zero()) continue;
        long long d = c.deg();
        if (best.neg_inf || d * best.den > best.num * j) {
            long long g = std::gcd(d, (long long)j);
            best = {false, d / g, j / g};
        }
    }
    return best;
}

inline bool slope_at_most(const SlopeValue& s, long long n) {
    if (s.neg_inf) return true;
    return s.num <= n * s.den;
}

inline std::string to_string(const SlopeValue& s) {
    if (s.neg_inf) return "-inf";
    if (s.den == 1) return std::to_string(s.num);
    return std::to_string(s.num) + "/" + std::to_string(s.den);
}

// false iff every x-exponent carrying a nonzero coefficient is divisible by p,
// i.e. F lies in F_q[t][x^p]; the meaningful notion for irreducible F
inline bool is_separable_over_base_function_field(const BiPoly& a) {
    for (const auto& t : a.terms)
        if (t.xdeg % int(a.F->p) != 0) return true;
    return false;
}

// ---- rendering ----

inline std::string to_string(const BiPoly& a) {
    if (a.is_zero()) return "0";
    const FieldCtx& F = *a.F;
    std::string out;
    for (const auto& t : a.terms) {
        if (!out.empty()) out += " + ";
        std::string piece;
        if (t.coef.v != 1 || (t.tdeg == 0 && t.xdeg == 0)) piece = coeff_string(F, t.coef, true);
        auto append_var = [&piece](const char* v, int e) {
            if (e == 0) return;
            if (!piece.empty()) piece += "*";
            piece += v;
            if (e > 1) piece += "^" + std::to_string(e);
        };
        append_var("t", t.tdeg);
        append_var("x", t.xdeg);
        out += piece;
    }
    return out;
}

// ---- irreducibility over F_q(t) ----

namespace detail {

// x-coefficient vector form of a bivariate polynomial; entry j is the
// coefficient of x^j as a univariate polynomial (in t, or in the shifted
// local variable during lifting)
using XPoly = std::vector<UPoly>;

inline void xp_trim(XPoly& a) {
    while (!a.empty() && a.back().is_zero()) a.pop_back();
}

inline void trunc_upoly(UPoly& a, int cap) {
    if (a.c.size() > std::size_t(cap)) {
        a.c.resize(std::size_t(cap));
        a.trim();
    }
}

// product with every coefficient truncated modulo s^cap
inline XPoly xp_mul_trunc(const XPoly& a, const XPoly& b, int cap) {
    if (a.empty() || b.empty()) return {};
    const FieldCtx& F = *a[0].F;
    XPoly r(a.size() + b.size() - 1, UPoly(F));
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].is_zero()) continue;
        for (std::size_t j = 0; j < b.size(); ++j) {
            if (b[j].is_zero()) continue;
            UPoly p = mul(a[i], b[j]);
            trunc_upoly(p, cap);
            r[i + j] = ffbh::add(r[i + j], p);
        }
    }
    xp_trim(r);
    return r;
}

// coefficient of s^layer across the x-coefficients, as a polynomial in x
inline UPoly xp_layer(const XPoly& a, int layer, const FieldCtx& F) {
    UPoly r(F);
    r.c.resize(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r.c[i] = a[i].at(std::size_t(layer));
    r.trim();
    return r;
}

// 1/c as a power series modulo s^cap; needs c(0) != 0
inline UPoly series_inverse(const UPoly& c, int cap) {
    const FieldCtx& F = *c.F;
    FFElem c0 = c.at(0);
    if (!c0.v) throw error("internal: series inverse at a vanishing constant term");
    FFElem i0 = F.inv(c0);
    UPoly inv(F);
    inv.c.assign(std::size_t(cap), F.zero());
    inv.c[0] = i0;
    for (int i = 1; i < cap; ++i) {
        FFElem s = F.zero();
        for (int j = 1; j <= i; ++j) s = F.add(s, F.mul(c.at(std::size_t(j)), inv.c[std::size_t(i - j)]));
        inv.c[std::size_t(i)] = F.neg(F.mul(i0, s));
    }
    inv.trim();
    return inv;
}

// Multifactor linear Hensel lifting: Ghat is monic in x over E[s] (truncated
// mod s^cap) and bars is its coprime monic factorization at s = 0. Returns
// monic lifts g_i with prod g_i = Ghat mod s^cap.
inline std::vector<XPoly> hensel_lift(const XPoly& Ghat, const std::vector<UPoly>& bars, int cap) {
    const FieldCtx& F = *bars[0].F;
    const std::size_t m = bars.size();
    std::vector<UPoly> bezout(m);
    for (std::size_t i = 0; i < m; ++i) {
        UPoly prod = upoly_const(F, F.one());
        for (std::size_t l = 0; l < m; ++l)
            if (l != i) prod = mulmod(prod, bars[l], bars[i]);
        bezout[i] = invmod(prod, bars[i]);
    }
    std::vector<XPoly> g(m);
    for (std::size_t i = 0; i < m; ++i) {
        g[i].assign(bars[i].c.size(), UPoly(F));
        for (std::size_t j = 0; j < bars[i].c.size(); ++j) g[i][j] = upoly_const(F, bars[i].c[j]);
    }
    for (int layer = 1; layer < cap; ++layer) {
        XPoly prod = g[0];
        for (std::size_t i = 1; i < m; ++i) prod = xp_mul_trunc(prod, g[i], cap);
        XPoly diff(std::max(Ghat.size(), prod.size()), UPoly(F));
        for (std::size_t i = 0; i < diff.size(); ++i) {
            UPoly a = i < Ghat.size() ? Ghat[i] : UPoly(F);
            UPoly b = i < prod.size() ? prod[i] : UPoly(F);
            diff[i] = ffbh::sub(a, b);
        }
        UPoly err = xp_layer(diff, layer, F);
        if (err.is_zero()) continue;
        for (std::size_t i = 0; i < m; ++i) {
            UPoly delta = mod(mul(err, bezout[i]), bars[i]);
            for (std::size_t j = 0; j < delta.c.size(); ++j) {
                if (!delta.c[j].v) continue;
                UPoly& cj = g[i][j];
                if (cj.c.size() <= std::size_t(layer)) cj.c.resize(std::size_t(layer) + 1, F.zero());
                cj.c[std::size_t(layer)] = delta.c[j];
            }
        }
    }
    return g;
}

// exact division in F_q[t][x]: quotient of a by d when every elimination step
// divides exactly; false if a is not a multiple
inline bool xp_exact_divide(const XPoly& a_in, const XPoly& d, XPoly* quot_out) {
    if (d.empty()) return false;
    const FieldCtx& F = *d[0].F;
    XPoly rem = a_in;
    xp_trim(rem);
    const UPoly& L = d.back();
    XPoly quot;
    if (rem.size() >= d.size()) quot.assign(rem.size() - d.size() + 1, UPoly(F));
    while (rem.size() >= d.size()) {
        DivModResult qr = divmod(rem.back(), L);
        if (!qr.rem.is_zero()) return false;
        std::size_t off = rem.size() - d.size();
        quot[off] = qr.quot;
        for (std::size_t i = 0; i < d.size(); ++i)
            rem[off + i] = ffbh::sub(rem[off + i], mul(qr.quot, d[i]));
        if (!rem.back().is_zero()) return false;
        xp_trim(rem);
    }
    if (!rem.empty()) return false;
    if (quot_out) *quot_out = std::move(quot);
    return true;
}

struct TauPoint {
    const FieldCtx* E = nullptr; // extension GF(q^e) containing tau
    FFElem tau;
    UPoly u; // F(tau, x), squarefree of degree deg_x F
};

// Search GF(q), then extensions, for tau with F(tau, x) squarefree of full
// degree. At most (2 deg_x)(deg_t) values fail over the closure (leading
// coefficient root or discriminant root), so exhausting a field larger than
// that bound proves F is not squarefree over closure(F_q)(t), i.e. reducible
// for separable primitive F.
inline bool find_good_tau(const BiPoly& P, TauPoint* out) {
    const FieldCtx& base = *P.F;
    const int r = deg_x(P);
    const std::uint64_t bad_bound = 2ull * std::uint64_t(r) * std::uint64_t(deg_t(P));
    for (std::uint32_t e = 1;; ++e) {
        const FieldCtx& E = make_extension(base, e);
        std::vector<UPoly> xc = x_coeffs(embed_bipoly(P, E));
        for (std::uint64_t code = 0; code < E.q; ++code) {
            FFElem tau = E.elem(code);
            UPoly u = specialize_t(xc, tau);
            if (u.deg() == r && is_squarefree(u)) {
                *out = {&E, tau, std::move(u)};
                return true;
            }
        }
        if (E.q > bad_bound) return false;
    }
}

struct LiftContext {
    const FieldCtx* E = nullptr;
    FFElem tau;
    UPoly cshift;               // leading x-coefficient of F(tau + s, x), a unit series
    std::vector<XPoly> factors; // monic lifts modulo s^cap
    int cap = 0;
};

inline LiftContext lift_at_tau(const BiPoly& P, const TauPoint& tp) {
    const FieldCtx& E = *tp.E;
    LiftContext lc;
    lc.E = &E;
    lc.tau = tp.tau;
    lc.cap = 2 * deg_t(P) + 1;
    std::vector<UPoly> xc = x_coeffs(embed_bipoly(P, E));
    for (UPoly& c : xc) c = taylor_shift(c, tp.tau); // coefficients now in s = t - tau
    lc.cshift = xc.back();
    UPoly cinv = series_inverse(lc.cshift, lc.cap);
    XPoly Ghat(xc.size(), UPoly(E));
    for (std::size_t j = 0; j < xc.size(); ++j) {
        UPoly m = mul(xc[j], cinv);
        trunc_upoly(m, lc.cap);
        Ghat[j] = std::move(m);
    }
    std::vector<UPoly> bars;
    for (const auto& part : factor(tp.u).parts) bars.push_back(part.first);
    lc.factors = hensel_lift(Ghat, bars, lc.cap);
    return lc;
}

// Try every subset of the lifted factors (ascending size, then bitmask) as a
// candidate rational divisor of P; on success store the divisor (a proper
// factor over the base field, primitive, canonically scaled).
inline bool find_rational_divisor(const BiPoly& P, const LiftContext& lc, BiPoly* out) {
    const FieldCtx& base = *P.F;
    const FieldCtx& E = *lc.E;
    const int s = int(lc.factors.size());
    const XPoly fxc = x_coeffs(P);
    for (int size = 1; 2 * size <= s; ++size) {
        for (std::uint32_t mask = 1; mask < (1u << s); ++mask) {
            if (__builtin_popcount(mask) != size) continue;
            XPoly C{lc.cshift};
            for (int i = 0; i < s; ++i)
                if (mask & (1u << i)) C = xp_mul_trunc(C, lc.factors[std::size_t(i)], lc.cap);
            // back to the t coordinate, then strip content and normalize
            for (UPoly& c : C) c = taylor_shift(c, E.neg(lc.tau));
            xp_trim(C);
            UPoly cont(E);
            for (const UPoly& c : C) cont = gcd(cont, c);
            if (cont.deg() > 0)
                for (UPoly& c : C) c = quotient(c, cont);
            FFElem lead = C.back().lc(); // leading term in canonical order
            FFElem il = E.inv(lead);
            for (UPoly& c : C) c = ffbh::scale(c, il);
            if (&E != &base) {
                bool rational = true;
                for (std::size_t ci = 0; ci < C.size() && rational; ++ci)
                    for (FFElem v : C[ci].c)
                        if (!in_subfield(v, base, E)) {
                            rational = false;
                            break;
                        }
                if (!rational) continue;
            }
            XPoly D(C.size(), UPoly(base));
            for (std::size_t j = 0; j < C.size(); ++j) D[j] = embed_pullback_poly(C[j], base);
            if (xp_exact_divide(fxc, D, nullptr)) {
                if (out) *out = from_x_coeffs(base, D);
                return true;
            }
        }
    }
    return false;
}

} // namespace detail

// Irreducibility as an element of F_q(t)[x] together with primitivity in
// F_q[t]. Specialization at a squarefree fiber, Hensel lifting modulo
// (t - tau)^{2 deg_t + 1} and subset recombination with exact division.
inline bool is_irreducible_over_function_field(const BiPoly& P) {
    const FieldCtx& base = *P.F;
    const int r = deg_x(P);
    if (r < 1) throw invalid_parameter("function-field irreducibility needs positive x-degree");
    if (!is_separable_over_base_function_field(P))
        throw not_separable("polynomial lies in F_q[t][x^p]; no squarefree specialization exists");
    if (content(P).deg() > 0) return false;
    if (deg_t(P) <= 0) {
        UPoly u(base);
        u.c.resize(std::size_t(r) + 1);
        for (const auto& t : P.terms) u.c[std::size_t(t.xdeg)] = t.coef;
        u.trim();
        return is_irreducible(u);
    }
    detail::TauPoint tp;
    if (!detail::find_good_tau(P, &tp)) return false;
    Factorization fz = factor(tp.u);
    if (fz.parts.size() == 1) return true;
    detail::LiftContext lc = detail::lift_at_tau(P, tp);
    return !detail::find_rational_divisor(P, lc, nullptr);
}

// number of irreducible factors of P over F_q(t); P primitive with squarefree
// positive-x-degree part (every input this library feeds it is separable and
// squarefree, e.g. base changes of an irreducible polynomial)
inline int function_field_factor_count(const BiPoly& P) {
    const FieldCtx& base = *P.F;
    const int r = deg_x(P);
    if (r < 1) throw invalid_parameter("factor count needs positive x-degree");
    if (deg_t(P) <= 0) {
        UPoly u(base);
        u.c.resize(std::size_t(r) + 1);
        for (const auto& t : P.terms) u.c[std::size_t(t.xdeg)] = t.coef;
        u.trim();
        int n = 0;
        for (const auto& [f, mult] : factor(u).parts) n += mult;
        return n;
    }
    detail::TauPoint tp;
    if (!detail::find_good_tau(P, &tp))
        throw not_separable("factor count requested for a non-squarefree polynomial");
    Factorization fz = factor(tp.u);
    if (fz.parts.size() == 1) return 1;
    detail::LiftContext lc = detail::lift_at_tau(P, tp);
    BiPoly div(base);
    if (!detail::find_rational_divisor(P, lc, &div)) return 1;
    detail::XPoly quot;
    if (!detail::xp_exact_divide(x_coeffs(P), x_coeffs(div), &quot))
        throw error("internal: recombination divisor stopped dividing");
    return 1 + function_field_factor_count(from_x_coeffs(base, quot));
}

// rational points of the affine curve F = 0 over the given field (the caller
// embeds first); root counting per fiber via gcd with X^q - X
inline std::uint64_t count_curve_points(const BiPoly& P) {
    const FieldCtx& E = *P.F;
    std::vector<UPoly> xc = x_coeffs(P);
    UPoly X = upoly_x(E);
    std::uint64_t n = 0;
    for (std::uint64_t code = 0; code < E.q; ++code) {
        UPoly u = specialize_t(xc, E.elem(code));
        if (u.deg() < 1) continue; // nonzero constant fiber: no roots
        n += std::uint64_t(std::max(0, gcd(sub(powmod(X, E.q, u), X), u).deg()));
    }
    return n;
}

struct MuRow {
    int k = 0;
    int nu = 0;          // irreducible factor count over GF(q^k)
    bool gcd_ok = false; // nu == gcd(mu, k)
    bool have_points = false;
    std::uint64_t points = 0;
    std::uint64_t expected_points = 0;
    bool lw_consistent = true;
};

struct MuReport {
    int mu = 1;
    std::vector<MuRow> rows;
};

// mu = number of absolutely irreducible conjugate factors of an irreducible
// separable P: base-change factor counts nu(k) for k up to the total degree
// peak exactly at k = mu. Lang-Weil point counts are attached as a
// consistency signal only (components conjugate away from GF(q^k) contribute
// O(sqrt(q^k)) points, so the expectation is mu*q^k when mu | k and 0 else).
inline MuReport absolute_factor_report(const BiPoly& P, std::uint64_t point_budget = 100000) {
    const FieldCtx& base = *P.F;
    if (deg_x(P) < 1) throw invalid_parameter("absolute factor count needs positive x-degree");
    if (!is_separable_over_base_function_field(P))
        throw not_separable("absolute factor count needs a separable polynomial");
    if (!is_irreducible_over_function_field(P))
        throw hypothesis_violated("absolute factor count needs an irreducible polynomial");
    const int D = total_degree(P);
    MuReport rep;
    std::vector<int> nu(std::size_t(D) + 1, 0);
    for (int k = 1; k <= D; ++k) {
        const FieldCtx& E = make_extension(base, std::uint32_t(k));
        nu[std::size_t(k)] = function_field_factor_count(embed_bipoly(P, E));
        rep.mu = std::max(rep.mu, nu[std::size_t(k)]);
    }
    for (int k = 1; k <= D; ++k) {
        MuRow row;
        row.k = k;
        row.nu = nu[std::size_t(k)];
        row.gcd_ok = row.nu == std::gcd(rep.mu, k);
        long double qk = 1;
        for (int i = 0; i < k; ++i) qk *= base.q;
        if (qk <= (long double)point_budget) {
            const FieldCtx& E = make_extension(base, std::uint32_t(k));
            row.have_points = true;
            row.points = count_curve_points(embed_bipoly(P, E));
            std::uint64_t Q = std::uint64_t(qk);
            row.expected_points = (k % rep.mu == 0) ? std::uint64_t(rep.mu) * Q : 0;
            long double slack = (long double)D * D * (std::sqrt((long double)Q) + 1);
            long double dev = row.points >= row.expected_points ? row.points - row.expected_points
                                                                : row.expected_points - row.points;
            row.lw_consistent = dev <= slack;
        }
        rep.rows.push_back(row);
    }
    return rep;
}

inline int absolute_factor_count(const BiPoly& P) { return absolute_factor_report(P).mu; }

// Generic degree N = deg_t F(t, f) for generic f of degree n. Formula path
// (deg_x F) * n under the monic-and-slope hypothesis; otherwise the maximum
// over 5 random degree-n specializations with coefficients in GF(q^K),
// q^K >= 2^20, so each trial misses the generic value with probability
// < 2^-15 (Schwartz-Zippel on the coefficient resultant).
inline int generic_degree(const BiPoly& P, int n, std::uint64_t seed = kDefaultSeed) {
    if (deg_x(P) < 1) throw invalid_parameter("generic degree needs positive x-degree");
    if (n < 1) throw invalid_parameter("generic degree needs n >= 1");
    const FieldCtx& base = *P.F;
    if (monic_in_x(P) && slope_at_most(slope(P), n)) return deg_x(P) * n;
    std::uint32_t K = 1;
    long double qk = base.q;
    while (qk < 1048576.0L) {
        qk *= base.q;
        ++K;
    }
    const FieldCtx& E = make_extension(base, K);
    std::vector<UPoly> xc = x_coeffs(embed_bipoly(P, E));
    int best = -1;
    for (std::uint64_t trial = 0; trial < 5; ++trial) {
        CounterRng rng = derive_rng(seed, trial);
        UPoly f(E);
        f.c.resize(std::size_t(n) + 1);
        for (int i = 0; i < n; ++i) f.c[std::size_t(i)] = E.elem(rng.below(E.q));
        f.c[std::size_t(n)] = E.elem(1 + rng.below(E.q - 1));
        best = std::max(best, substitute(xc, f).deg());
    }
    return std::max(best, 0);
}

// associates in F_q[t][x]: equal up to a nonzero scalar of F_q
inline bool are_associates(const BiPoly& a, const BiPoly& b) {
    detail::require_same_field(a, b);
    if (a.is_zero() || b.is_zero()) return a.is_zero() && b.is_zero();
    if (a.terms.size() != b.terms.size()) return false;
    const FieldCtx& F = *a.F;
    FFElem ratio = F.div(b.terms[0].coef, a.terms[0].coef);
    for (std::size_t i = 0; i < a.terms.size(); ++i) {
        if (a.terms[i].tdeg != b.terms[i].tdeg || a.terms[i].xdeg != b.terms[i].xdeg) return false;
        if (F.mul(a.terms[i].coef, ratio) != b.terms[i].coef) return false;
    }
    return true;
}

} // namespace ffbh
