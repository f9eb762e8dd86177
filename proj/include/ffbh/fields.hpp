#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

#include "ffbh/rng.hpp"

namespace ffbh {

struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct invalid_parameter : error {
    using error::error;
};
struct incompatible_fields : error {
    using error::error;
};
struct unsupported_characteristic : error {
    using error::error;
};
struct zero_division : error {
    using error::error;
};
// raised where an operation requires a squarefree/separable input and got none
struct not_separable : error {
    using error::error;
};
struct hypothesis_violated : error {
    using error::error;
};
struct parse_error : error {
    std::size_t position; // 1-based offset into the source string
    parse_error(const std::string& msg, std::size_t pos)
        : error(msg + " at position " + std::to_string(pos)), position(pos) {}
};

// Element of GF(p^k), stored as the integer code sum c_i * p^i of its
// coordinate vector (c_0,...,c_{k-1}) w.r.t. the power basis of the modulus.
// All arithmetic goes through the owning FieldCtx.
struct FFElem {
    std::uint64_t v = 0;

    friend bool operator==(FFElem a, FFElem b) { return a.v == b.v; }
    friend bool operator!=(FFElem a, FFElem b) { return a.v != b.v; }
    friend bool operator<(FFElem a, FFElem b) { return a.v < b.v; } // enumeration order
};

namespace detail {

constexpr int kMaxDigits = 64;

inline bool is_prime_u32(std::uint32_t n) {
    if (n < 2) return false;
    for (std::uint32_t d = 2; d * std::uint64_t(d) <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

// ---- polynomials over the prime field GF(p), coefficient vectors of residues ----
// Only used for modulus selection; everything else runs on UPoly.

using PfPoly = std::vector<std::uint32_t>; // [i] = coeff of X^i, no trailing zeros

inline void pf_trim(PfPoly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

inline PfPoly pf_mulmod(const PfPoly& a, const PfPoly& b, const PfPoly& mod, std::uint32_t p) {
    if (a.empty() || b.empty()) return {};
    std::vector<std::uint64_t> acc(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!a[i]) continue;
        for (std::size_t j = 0; j < b.size(); ++j) acc[i + j] += std::uint64_t(a[i]) * b[j] % p;
    }
    const std::size_t k = mod.size() - 1; // mod is monic of degree k
    for (std::size_t i = acc.size(); i-- > k;) {
        std::uint64_t c = acc[i] % p;
        if (!c) continue;
        acc[i] = 0;
        for (std::size_t j = 0; j < k; ++j) acc[i - k + j] += c * (p - mod[j]) % p;
    }
    PfPoly r(std::min<std::size_t>(acc.size(), k));
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = std::uint32_t(acc[i] % p);
    pf_trim(r);
    return r;
}

inline PfPoly pf_powmod(PfPoly base, std::uint64_t e, const PfPoly& mod, std::uint32_t p) {
    PfPoly r{1};
    while (e) {
        if (e & 1) r = pf_mulmod(r, base, mod, p);
        base = pf_mulmod(base, base, mod, p);
        e >>= 1;
    }
    return r;
}

inline PfPoly pf_sub(PfPoly a, const PfPoly& b, std::uint32_t p) {
    if (a.size() < b.size()) a.resize(b.size(), 0);
    for (std::size_t i = 0; i < b.size(); ++i) a[i] = std::uint32_t((a[i] + std::uint64_t(p) - b[i]) % p);
    pf_trim(a);
    return a;
}

inline std::uint32_t pf_inv_scalar(std::uint32_t a, std::uint32_t p) {
    // Fermat; p prime, a != 0
    std::uint64_t r = 1, b = a % p, e = p - 2;
    while (e) {
        if (e & 1) r = r * b % p;
        b = b * b % p;
        e >>= 1;
    }
    return std::uint32_t(r);
}

inline PfPoly pf_gcd(PfPoly a, PfPoly b, std::uint32_t p) {
    pf_trim(a);
    pf_trim(b);
    while (!b.empty()) {
        // a mod b
        std::uint32_t invl = pf_inv_scalar(b.back(), p);
        while (a.size() >= b.size()) {
            std::uint64_t c = std::uint64_t(a.back()) * invl % p;
            std::size_t off = a.size() - b.size();
            for (std::size_t i = 0; i < b.size(); ++i)
                a[off + i] = std::uint32_t((a[off + i] + std::uint64_t(p) - c * b[i] % p) % p);
            pf_trim(a);
            if (a.empty()) break;
        }
        std::swap(a, b);
    }
    return a;
}

// Rabin test: f (monic, degree m over GF(p)) is irreducible iff X^{p^m} = X mod f
// and gcd(X^{p^{m/l}} - X, f) = 1 for every prime l | m.
inline bool pf_irreducible(const PfPoly& f, std::uint32_t p) {
    const std::size_t m = f.size() - 1;
    if (m == 0) return false;
    if (m == 1) return true;
    std::vector<std::size_t> checkpoints; // m/l for prime l | m
    {
        std::size_t mm = m;
        for (std::size_t l = 2; l * l <= mm; ++l)
            if (mm % l == 0) {
                checkpoints.push_back(m / l);
                while (mm % l == 0) mm /= l;
            }
        if (mm > 1) checkpoints.push_back(m / mm);
    }
    PfPoly h{0, 1}; // X
    const PfPoly x = h;
    for (std::size_t j = 1; j <= m; ++j) {
        h = pf_powmod(h, p, f, p);
        for (std::size_t cp : checkpoints)
            if (j == cp) {
                PfPoly g = pf_gcd(pf_sub(h, x, p), f, p);
                if (g.size() != 1) return false;
            }
    }
    return h == x;
}

// lexicographically least monic irreducible of degree k over GF(p), in the order
// given by the integer code sum c_i p^i of the non-leading coefficients
inline PfPoly least_irreducible(std::uint32_t p, std::uint32_t k) {
    PfPoly f(k + 1, 0);
    f[k] = 1;
    if (k == 1) return f; // X itself
    for (std::uint64_t code = 0;; ++code) {
        std::uint64_t c = code;
        for (std::uint32_t i = 0; i < k; ++i) {
            f[i] = std::uint32_t(c % p);
            c /= p;
        }
        if (c) throw error("no irreducible polynomial found (exhausted search space)");
        if (pf_irreducible(f, p)) return f;
    }
}

struct Registry; // defined after FieldCtx

} // namespace detail

// Immutable description of GF(p^k). Instances are interned (see field()), so raw
// pointers to them stay valid for the whole process and pointer equality means
// field equality.
class FieldCtx {
  public:
    const std::uint32_t p;
    const std::uint32_t k;
    const std::uint64_t q; // p^k
    const std::vector<std::uint32_t> modulus; // length k+1, monic, irreducible over GF(p)

    FieldCtx(const FieldCtx&) = delete;
    FieldCtx& operator=(const FieldCtx&) = delete;

    FFElem zero() const { return {0}; }
    FFElem one() const { return {1}; }
    FFElem elem(std::uint64_t code) const {
        if (code >= q) throw invalid_parameter("element code out of range");
        return {code};
    }
    // i-th element in enumeration order (lexicographic on coefficient vectors,
    // least-significant coordinate first; 0 first, 1 second)
    FFElem elem_at(std::uint64_t i) const { return elem(i); }

    std::uint32_t coeff(FFElem a, std::uint32_t i) const {
        std::uint64_t v = a.v;
        for (std::uint32_t j = 0; j < i; ++j) v /= p;
        return std::uint32_t(v % p);
    }
    FFElem from_coeffs(const std::vector<std::uint32_t>& cs) const {
        if (cs.size() > k) throw invalid_parameter("coefficient vector longer than field degree");
        std::uint64_t v = 0;
        for (std::size_t i = cs.size(); i-- > 0;) {
            if (cs[i] >= p) throw invalid_parameter("coefficient not reduced mod p");
            v = v * p + cs[i];
        }
        return {v};
    }
    FFElem from_int(std::uint64_t n) const { return {n % p}; } // prime-subfield constant
    FFElem generator_power_basis() const { return k > 1 ? FFElem{p} : FFElem{0}; } // the class of u

    bool odd_characteristic() const { return p != 2; }

    FFElem add(FFElem a, FFElem b) const {
        if (!add_tab_.empty()) return {add_tab_[a.v * q + b.v]};
        return add_generic(a, b);
    }
    FFElem sub(FFElem a, FFElem b) const { return add(a, neg(b)); }
    FFElem neg(FFElem a) const {
        if (!neg_tab_.empty()) return {neg_tab_[a.v]};
        return neg_generic(a);
    }
    FFElem mul(FFElem a, FFElem b) const {
        if (!mul_tab_.empty()) return {mul_tab_[a.v * q + b.v]};
        return mul_generic(a, b);
    }
    FFElem inv(FFElem a) const {
        if (a.v == 0) throw zero_division("inverse of zero field element");
        if (!inv_tab_.empty()) return {inv_tab_[a.v]};
        return pow(a, q - 2);
    }
    FFElem div(FFElem a, FFElem b) const { return mul(a, inv(b)); }
    FFElem pow(FFElem a, std::uint64_t e) const {
        FFElem r = one(), b = a;
        while (e) {
            if (e & 1) r = mul(r, b);
            b = mul(b, b);
            e >>= 1;
        }
        return r;
    }

    // rendered as a polynomial in the generator u, e.g. "2*u+1"; prime fields render bare residues
    std::string to_string(FFElem a) const {
        if (k == 1) return std::to_string(a.v);
        std::string out;
        for (std::uint32_t i = k; i-- > 0;) {
            std::uint32_t c = coeff(a, i);
            if (!c) continue;
            if (!out.empty()) out += "+";
            if (i == 0) {
                out += std::to_string(c);
                continue;
            }
            if (c != 1) out += std::to_string(c) + "*";
            out += (i == 1) ? "u" : "u^" + std::to_string(i);
        }
        return out.empty() ? "0" : out;
    }
    std::string modulus_string() const {
        std::string out;
        for (std::uint32_t i = k + 1; i-- > 0;) {
            std::uint32_t c = (i == k) ? 1u : modulus[i];
            if (!c) continue;
            if (!out.empty()) out += "+";
            if (i == 0) {
                out += std::to_string(c);
                continue;
            }
            if (c != 1) out += std::to_string(c) + "*";
            out += (i == 1) ? "u" : "u^" + std::to_string(i);
        }
        return out;
    }

  private:
    friend struct detail::Registry;

    FieldCtx(std::uint32_t p_, std::uint32_t k_, std::vector<std::uint32_t> mod_, std::uint64_t q_)
        : p(p_), k(k_), q(q_), modulus(std::move(mod_)) {
        if (q <= kTableLimit) build_tables();
    }

    static constexpr std::uint64_t kTableLimit = 2501;

    std::vector<std::uint16_t> add_tab_, mul_tab_, neg_tab_, inv_tab_;

    void decode(FFElem a, std::uint32_t* d) const {
        std::uint64_t v = a.v;
        for (std::uint32_t i = 0; i < k; ++i) {
            d[i] = std::uint32_t(v % p);
            v /= p;
        }
    }
    FFElem encode(const std::uint32_t* d) const {
        std::uint64_t v = 0;
        for (std::uint32_t i = k; i-- > 0;) v = v * p + d[i];
        return {v};
    }

    FFElem add_generic(FFElem a, FFElem b) const {
        std::uint32_t x[detail::kMaxDigits], y[detail::kMaxDigits];
        decode(a, x);
        decode(b, y);
        for (std::uint32_t i = 0; i < k; ++i) {
            x[i] += y[i];
            if (x[i] >= p) x[i] -= p;
        }
        return encode(x);
    }
    FFElem neg_generic(FFElem a) const {
        std::uint32_t x[detail::kMaxDigits];
        decode(a, x);
        for (std::uint32_t i = 0; i < k; ++i) x[i] = x[i] ? p - x[i] : 0;
        return encode(x);
    }
    FFElem mul_generic(FFElem a, FFElem b) const {
        std::uint32_t x[detail::kMaxDigits], y[detail::kMaxDigits];
        std::uint64_t acc[2 * detail::kMaxDigits] = {};
        decode(a, x);
        decode(b, y);
        for (std::uint32_t i = 0; i < k; ++i) {
            if (!x[i]) continue;
            for (std::uint32_t j = 0; j < k; ++j) acc[i + j] += std::uint64_t(x[i]) * y[j] % p;
        }
        for (std::uint32_t i = 2 * k - 1; i >= k; --i) {
            std::uint64_t c = acc[i] % p;
            if (!c) continue;
            for (std::uint32_t j = 0; j < k; ++j) acc[i - k + j] += c * (p - modulus[j]) % p;
            if (i == k) break;
        }
        std::uint32_t r[detail::kMaxDigits];
        for (std::uint32_t i = 0; i < k; ++i) r[i] = std::uint32_t(acc[i] % p);
        return encode(r);
    }

    void build_tables() {
        neg_tab_.resize(q);
        inv_tab_.resize(q);
        add_tab_.resize(q * q);
        mul_tab_.resize(q * q);
        for (std::uint64_t a = 0; a < q; ++a) {
            neg_tab_[a] = std::uint16_t(neg_generic({a}).v);
            for (std::uint64_t b = a; b < q; ++b) {
                std::uint16_t s = std::uint16_t(add_generic({a}, {b}).v);
                std::uint16_t m = std::uint16_t(mul_generic({a}, {b}).v);
                add_tab_[a * q + b] = add_tab_[b * q + a] = s;
                mul_tab_[a * q + b] = mul_tab_[b * q + a] = m;
            }
        }
        inv_tab_[0] = 0;
        for (std::uint64_t a = 1; a < q; ++a) {
            FFElem r = {1}, b = {a};
            std::uint64_t e = q - 2;
            while (e) {
                if (e & 1) r = {mul_tab_[r.v * q + b.v]};
                b = {mul_tab_[b.v * q + b.v]};
                e >>= 1;
            }
            inv_tab_[a] = std::uint16_t(r.v);
        }
    }
};

namespace detail {

struct Registry {
    std::mutex m;
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::unique_ptr<FieldCtx>> fields;

    static Registry& instance() {
        static Registry r;
        return r;
    }

    const FieldCtx& get(std::uint32_t p, std::uint32_t k) {
        std::lock_guard<std::mutex> lock(m);
        auto key = std::make_pair(p, k);
        auto it = fields.find(key);
        if (it != fields.end()) return *it->second;
        // q must fit the element code (and leave room for q*q table indexing)
        long double qld = 1;
        for (std::uint32_t i = 0; i < k; ++i) qld *= p;
        if (qld >= 9.2e18L) throw invalid_parameter("field too large: p^k exceeds the supported element range");
        std::uint64_t q = 1;
        for (std::uint32_t i = 0; i < k; ++i) q *= p;
        PfPoly mod = least_irreducible(p, k);
        std::vector<std::uint32_t> modv(mod.begin(), mod.end());
        auto ctx = std::unique_ptr<FieldCtx>(new FieldCtx(p, k, std::move(modv), q));
        const FieldCtx& ref = *ctx;
        fields.emplace(key, std::move(ctx));
        return ref;
    }
};

} // namespace detail

// Interned GF(p^k); repeated calls return the same object.
inline const FieldCtx& field(std::uint32_t p, std::uint32_t k = 1) {
    if (!detail::is_prime_u32(p)) throw invalid_parameter("characteristic must be prime, got " + std::to_string(p));
    if (k == 0) throw invalid_parameter("extension degree must be positive");
    if (k > std::uint32_t(detail::kMaxDigits)) throw invalid_parameter("extension degree too large");
    return detail::Registry::instance().get(p, k);
}

// GF(p^{k * base.k}) with the deterministic (lexicographically least) modulus.
// Same-sized extensions of different towers intern to the same context.
inline const FieldCtx& make_extension(const FieldCtx& base, std::uint32_t k) {
    if (k == 0) throw invalid_parameter("extension degree must be positive");
    return field(base.p, base.k * k);
}

inline std::uint64_t field_size(const FieldCtx& ctx) { return ctx.q; }

// x^{p^e}; e < 0 means e = k, i.e. the q-power map
inline FFElem frobenius(FFElem x, const FieldCtx& ctx, std::int64_t e = -1) {
    if (e < 0) e = ctx.k;
    e %= ctx.k; // x^{p^k} = x
    std::uint64_t pe = 1;
    for (std::int64_t i = 0; i < e; ++i) pe *= ctx.p;
    return ctx.pow(x, pe);
}

// 0 on 0, +1 on nonzero squares, -1 otherwise; odd characteristic only
inline int quadratic_character(FFElem x, const FieldCtx& ctx) {
    if (!ctx.odd_characteristic())
        throw unsupported_characteristic("quadratic character undefined in characteristic 2");
    if (x.v == 0) return 0;
    return ctx.pow(x, (ctx.q - 1) / 2) == ctx.one() ? +1 : -1;
}

// all q elements in enumeration order
inline std::vector<FFElem> enumerate_field(const FieldCtx& ctx) {
    std::vector<FFElem> out;
    out.reserve(ctx.q);
    for (std::uint64_t i = 0; i < ctx.q; ++i) out.push_back({i});
    return out;
}

} // namespace ffbh
