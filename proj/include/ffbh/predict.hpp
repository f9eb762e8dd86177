#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <boost/rational.hpp>

#include "ffbh/polyring.hpp"

namespace ffbh {

using Rat = boost::rational<long long>;

inline double rat_value(const Rat& r) { return double(r.numerator()) / double(r.denominator()); }

inline std::string rat_string(const Rat& r) {
    if (r.denominator() == 1) return std::to_string(r.numerator());
    return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

namespace detail {

inline long long checked_mul_ll(long long a, long long b) {
    long long r;
    if (__builtin_mul_overflow(a, b, &r)) throw invalid_parameter("integer overflow in exact arithmetic");
    return r;
}

} // namespace detail

// q^{n+1} (or any small power) as an exact long long
inline long long int_pow_checked(std::uint64_t base, int exp) {
    if (exp < 0) throw invalid_parameter("negative exponent");
    long long r = 1;
    for (int i = 0; i < exp; ++i) r = detail::checked_mul_ll(r, (long long)base);
    return r;
}

// all partitions of N, parts descending, in descending lexicographic order
inline std::vector<CycleType> partitions(int N) {
    std::vector<CycleType> out;
    CycleType cur;
    auto rec = [&](auto&& self, int rest, int maxpart) -> void {
        if (rest == 0) {
            out.push_back(cur);
            return;
        }
        for (int first = std::min(rest, maxpart); first >= 1; --first) {
            cur.push_back(first);
            self(self, rest - first, first);
            cur.pop_back();
        }
    };
    if (N >= 0) rec(rec, N, N == 0 ? 1 : N);
    return out;
}

// probability that a uniform permutation of S_N has the given cycle type:
// 1 / (prod_k k^{c_k} c_k!) with c_k the number of parts equal to k
inline Rat cycle_type_probability(const CycleType& type) {
    if (type.empty()) throw invalid_parameter("empty cycle type");
    std::map<int, int> mult;
    for (int part : type) {
        if (part < 1) throw invalid_parameter("cycle type with a nonpositive part");
        ++mult[part];
    }
    long long denom = 1;
    for (const auto& [k, c] : mult) {
        for (int i = 0; i < c; ++i) denom = detail::checked_mul_ll(denom, k);
        for (int i = 2; i <= c; ++i) denom = detail::checked_mul_ll(denom, i);
    }
    return Rat(1, denom);
}

// Uniform permutation of N points carrying mu labeled blocks cyclically. Its
// cycle structure is determined by pi^mu restricted to the first block, a
// uniform element of S_{N/mu}, with every cycle length d turning into mu*d.
struct TwistedModel {
    int N = 1;
    int mu = 1;
    int block = 1;

    TwistedModel(int N_, int mu_) : N(N_), mu(mu_) {
        if (N < 1 || mu < 1 || N % mu != 0) throw invalid_parameter("block count must divide the degree");
        block = N / mu;
    }
};

inline std::map<CycleType, Rat> twisted_cycle_distribution(const TwistedModel& model) {
    std::map<CycleType, Rat> out;
    for (const CycleType& part : partitions(model.block)) {
        CycleType type;
        type.reserve(part.size());
        for (int d : part) type.push_back(d * model.mu);
        out[type] += cycle_type_probability(part);
    }
    return out;
}

// true iff the type can occur for the model, i.e. every part is a multiple of mu
inline bool twisted_supports(const TwistedModel& model, const CycleType& type) {
    for (int part : type)
        if (part % model.mu != 0) return false;
    return true;
}

struct Prediction {
    std::uint64_t q = 0;
    int n = 0;
    double tolerance_c = 3.0;
    double window = 0; // c * q^{-1/2}, the relative tolerance
    std::vector<int> mu, N;
    Rat all_irreducible_prob{0}; // prod mu_i / N_i
    Rat main_term{0};            // all_irreducible_prob * q^{n+1}
    double main_term_value = 0;
    std::vector<std::map<CycleType, Rat>> marginals; // per-polynomial cycle-type laws
    int m = 0;
    Rat sign_prob{0};       // each Moebius sign pattern: 1 / 2^m
    Rat per_pattern_count{0}; // q^{n+1} / 2^m
};

inline Prediction bh_prediction(const std::vector<int>& mu_list, const std::vector<int>& N_list,
                                std::uint64_t q, int n, double tolerance_c = 3.0) {
    if (mu_list.empty() || mu_list.size() != N_list.size())
        throw invalid_parameter("mu and N lists must be nonempty and of equal length");
    if (n < 1) throw invalid_parameter("n must be positive");
    Prediction p;
    p.q = q;
    p.n = n;
    p.m = int(mu_list.size());
    p.tolerance_c = tolerance_c;
    p.window = tolerance_c / std::sqrt(double(q));
    p.mu = mu_list;
    p.N = N_list;
    p.all_irreducible_prob = Rat(1);
    for (std::size_t i = 0; i < mu_list.size(); ++i) {
        int mu = mu_list[i], N = N_list[i];
        if (mu < 1 || N < 1 || N % mu != 0)
            throw invalid_parameter("each block count must divide the corresponding degree");
        p.all_irreducible_prob *= Rat(mu, N);
        p.marginals.push_back(twisted_cycle_distribution(TwistedModel(N, mu)));
    }
    long long qn1 = int_pow_checked(q, n + 1);
    p.main_term = p.all_irreducible_prob * Rat(qn1);
    p.main_term_value = rat_value(p.main_term);
    // the Moebius sign law is a statement about the untwisted situation: any
    // mu_i > 1 pins chi(disc) of that factor, so no equidistribution claim
    bool plain = true;
    for (int mu : p.mu) plain = plain && mu == 1;
    if (plain) {
        p.sign_prob = Rat(1, 1ll << std::min(p.m, 62));
        p.per_pattern_count = Rat(qn1) * p.sign_prob;
    }
    return p;
}

// product of per-polynomial probabilities; zero off the support
inline Rat joint_type_prediction(const std::vector<TwistedModel>& models, const std::vector<CycleType>& types) {
    if (models.size() != types.size()) throw invalid_parameter("joint prediction shape mismatch");
    Rat r(1);
    for (std::size_t i = 0; i < models.size(); ++i) {
        int sum = 0;
        for (int part : types[i]) sum += part;
        if (sum != models[i].N) throw invalid_parameter("cycle type does not sum to the generic degree");
        std::map<CycleType, Rat> dist = twisted_cycle_distribution(models[i]);
        auto it = dist.find(types[i]);
        if (it == dist.end()) return Rat(0);
        r *= it->second;
    }
    return r;
}

// each of the 2^m Moebius sign patterns is predicted q^{n+1} / 2^m
inline Prediction chowla_prediction(int m, std::uint64_t q, int n, double tolerance_c = 3.0) {
    if (m < 1 || m > 62) throw invalid_parameter("pattern count out of range");
    Prediction p;
    p.q = q;
    p.n = n;
    p.m = m;
    p.tolerance_c = tolerance_c;
    p.window = tolerance_c / std::sqrt(double(q));
    long long qn1 = int_pow_checked(q, n + 1);
    p.sign_prob = Rat(1, 1ll << m);
    p.per_pattern_count = Rat(qn1) * p.sign_prob;
    return p;
}

} // namespace ffbh
