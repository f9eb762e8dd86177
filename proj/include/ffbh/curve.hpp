#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "ffbh/bivar.hpp"

namespace ffbh {

// A point of the affine curve F(t, x) = 0 realized in an explicit finite
// extension, together with its multiplicity (degree of the lowest form of the
// Taylor expansion at the point).
struct CurvePoint {
    const FieldCtx* field = nullptr;
    FFElem tau, xi;
    int multiplicity = 0;
};

inline FFElem bi_eval(const BiPoly& P, FFElem tau, FFElem xi) {
    const FieldCtx& F = *P.F;
    FFElem r = F.zero();
    for (const auto& t : P.terms)
        r = F.add(r, F.mul(t.coef, F.mul(F.pow(tau, std::uint64_t(t.tdeg)), F.pow(xi, std::uint64_t(t.xdeg)))));
    return r;
}

namespace detail {

// Res_x of two bivariate polynomials as an element of F_q[t]: Sylvester
// matrix with univariate entries, fraction-free Bareiss elimination (every
// division below is exact in F_q[t])
inline UPoly resultant_x(const BiPoly& A, const BiPoly& B) {
    require_same_field(A, B);
    const FieldCtx& F = *A.F;
    const int m = deg_x(A), n = deg_x(B);
    if (m <= 0 && n <= 0) return upoly_const(F, F.one());
    if (A.is_zero() || B.is_zero()) return UPoly(F);
    std::vector<UPoly> a = x_coeffs(A), b = x_coeffs(B);
    if (m == 0) {
        UPoly r = upoly_const(F, F.one());
        for (int i = 0; i < n; ++i) r = mul(r, a[0]);
        return r;
    }
    if (n == 0) {
        UPoly r = upoly_const(F, F.one());
        for (int i = 0; i < m; ++i) r = mul(r, b[0]);
        return r;
    }
    const int N = m + n;
    std::vector<std::vector<UPoly>> M(static_cast<std::size_t>(N), std::vector<UPoly>(std::size_t(N), UPoly(F)));
    for (int row = 0; row < n; ++row)
        for (int j = 0; j <= m; ++j) M[std::size_t(row)][std::size_t(row + j)] = a[std::size_t(m - j)];
    for (int row = 0; row < m; ++row)
        for (int j = 0; j <= n; ++j) M[std::size_t(n + row)][std::size_t(row + j)] = b[std::size_t(n - j)];

    bool negate = false;
    UPoly prev = upoly_const(F, F.one());
    for (int k = 0; k < N - 1; ++k) {
        if (M[std::size_t(k)][std::size_t(k)].is_zero()) {
            int sel = -1;
            for (int i = k + 1; i < N; ++i)
                if (!M[std::size_t(i)][std::size_t(k)].is_zero()) {
                    sel = i;
                    break;
                }
            if (sel < 0) return UPoly(F); // column of zeros: determinant vanishes
            std::swap(M[std::size_t(k)], M[std::size_t(sel)]);
            negate = !negate;
        }
        for (int i = k + 1; i < N; ++i) {
            for (int j = k + 1; j < N; ++j) {
                UPoly num = sub(mul(M[std::size_t(k)][std::size_t(k)], M[std::size_t(i)][std::size_t(j)]),
                                mul(M[std::size_t(i)][std::size_t(k)], M[std::size_t(k)][std::size_t(j)]));
                DivModResult qr = divmod(num, prev);
                M[std::size_t(i)][std::size_t(j)] = std::move(qr.quot);
            }
            M[std::size_t(i)][std::size_t(k)] = UPoly(F);
        }
        prev = M[std::size_t(k)][std::size_t(k)];
    }
    UPoly det = M[std::size_t(N - 1)][std::size_t(N - 1)];
    return negate ? neg(det) : det;
}

} // namespace detail

// Multiplicity of the curve point (tau, xi): minimal total degree in the
// exact binomial expansion of F(t + tau, x + xi). The point must lie on the
// curve; coordinates live in the field of P (embed first for extensions).
inline int multiplicity(const BiPoly& P, FFElem tau, FFElem xi) {
    const FieldCtx& F = *P.F;
    if (P.is_zero()) throw invalid_parameter("multiplicity of a point on the zero polynomial");
    if (bi_eval(P, tau, xi).v != 0) throw invalid_parameter("point does not lie on the curve");
    const int dmax = std::max(deg_t(P), deg_x(P));
    // Pascal triangle mod p up to the largest exponent
    std::vector<std::vector<std::uint32_t>> binom(std::size_t(dmax) + 1);
    for (int i = 0; i <= dmax; ++i) {
        binom[std::size_t(i)].assign(std::size_t(i) + 1, 1);
        for (int j = 1; j < i; ++j)
            binom[std::size_t(i)][std::size_t(j)] =
                (binom[std::size_t(i) - 1][std::size_t(j) - 1] + binom[std::size_t(i) - 1][std::size_t(j)]) % F.p;
    }
    std::vector<FFElem> tpow(std::size_t(deg_t(P)) + 1), xpow(std::size_t(deg_x(P)) + 1);
    tpow[0] = F.one();
    for (std::size_t i = 1; i < tpow.size(); ++i) tpow[i] = F.mul(tpow[i - 1], tau);
    xpow[0] = F.one();
    for (std::size_t i = 1; i < xpow.size(); ++i) xpow[i] = F.mul(xpow[i - 1], xi);

    std::map<std::pair<int, int>, FFElem> shifted;
    for (const auto& term : P.terms) {
        for (int al = 0; al <= term.tdeg; ++al) {
            std::uint32_t bt = binom[std::size_t(term.tdeg)][std::size_t(al)];
            if (!bt) continue;
            FFElem ct = F.mul(term.coef, F.mul(F.from_int(bt), tpow[std::size_t(term.tdeg - al)]));
            if (!ct.v) continue;
            for (int be = 0; be <= term.xdeg; ++be) {
                std::uint32_t bx = binom[std::size_t(term.xdeg)][std::size_t(be)];
                if (!bx) continue;
                FFElem c = F.mul(ct, F.mul(F.from_int(bx), xpow[std::size_t(term.xdeg - be)]));
                if (!c.v) continue;
                auto key = std::make_pair(al, be);
                auto it = shifted.find(key);
                if (it == shifted.end())
                    shifted.emplace(key, c);
                else
                    it->second = F.add(it->second, c);
            }
        }
    }
    int best = -1;
    for (const auto& [key, c] : shifted) {
        if (!c.v) continue;
        int tot = key.first + key.second;
        if (best < 0 || tot < best) best = tot;
    }
    if (best < 0) throw invalid_parameter("multiplicity of a point on the zero polynomial");
    return best;
}

// All points of F = 0 over the algebraic closure with multiplicity >= 2, each
// realized in the smallest extension containing it. Elimination: tau must be
// a common root of Res_x(F, F_x) and Res_x(F, F_t) (a Sylvester kernel
// argument that survives leading-coefficient drop), xi a common root of the
// specialized F, F_x, F_t. Requires F squarefree with separable factors of
// positive x-degree, detected through a vanishing resultant.
inline std::vector<CurvePoint> singular_points(const BiPoly& P) {
    const FieldCtx& base = *P.F;
    if (deg_x(P) < 1) throw invalid_parameter("singular-point search needs positive x-degree");
    if (content(P).deg() > 0)
        throw invalid_parameter("singular-point search needs constant content (factors of positive x-degree)");
    BiPoly Px = bi_dx(P);
    if (Px.is_zero()) throw not_separable("curve has an inseparable factor (F_x vanishes identically)");
    UPoly R1 = detail::resultant_x(P, Px);
    if (R1.is_zero()) throw not_separable("curve polynomial is not squarefree");
    BiPoly Pt = bi_dt(P);
    UPoly R = Pt.is_zero() ? monic(R1) : gcd(R1, detail::resultant_x(P, Pt));

    std::vector<CurvePoint> out;
    if (R.deg() < 1) return out;
    for (const auto& rho_part : factor(R).parts) {
        const UPoly& rho = rho_part.first;
        const FieldCtx& E = make_extension(base, std::uint32_t(rho.deg()));
        BiPoly PE = embed_bipoly(P, E);
        BiPoly PxE = embed_bipoly(Px, E);
        BiPoly PtE = embed_bipoly(Pt, E);
        for (FFElem tau : roots(embed_poly(rho, E))) {
            UPoly g = gcd(specialize_t(PE, tau), specialize_t(PxE, tau));
            if (!Pt.is_zero()) g = gcd(g, specialize_t(PtE, tau));
            if (g.deg() < 1) continue;
            for (const auto& sigma_part : factor(g).parts) {
                const UPoly& sigma = sigma_part.first;
                const FieldCtx& E2 = make_extension(E, std::uint32_t(sigma.deg()));
                BiPoly PE2 = embed_bipoly(P, E2);
                FFElem tau2 = embed(tau, E, E2);
                for (FFElem xi : roots(embed_poly(sigma, E2))) {
                    CurvePoint cp;
                    cp.field = &E2;
                    cp.tau = tau2;
                    cp.xi = xi;
                    cp.multiplicity = multiplicity(PE2, tau2, xi);
                    out.push_back(cp);
                }
            }
        }
    }
    std::sort(out.begin(), out.end(), [](const CurvePoint& a, const CurvePoint& b) {
        if (a.field->k != b.field->k) return a.field->k < b.field->k;
        if (a.tau.v != b.tau.v) return a.tau.v < b.tau.v;
        return a.xi.v < b.xi.v;
    });
    return out;
}

// #{P : m_P > 2} with the Bezout-type sanity bound (total degree)^2 / 2
inline int count_high_multiplicity(const BiPoly& P) {
    int count = 0;
    for (const CurvePoint& cp : singular_points(P))
        if (cp.multiplicity > 2) ++count;
    int td = total_degree(P);
    if (2 * count > td * td)
        throw error("singular-point count exceeds the Bezout bound; implementation bug");
    return count;
}

} // namespace ffbh
