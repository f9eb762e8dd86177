#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include "ffbh/bivar.hpp"
#include "ffbh/predict.hpp"
#include "ffbh/rng.hpp"

namespace ffbh {

struct ExperimentConfig {
    const FieldCtx* ctx = nullptr;
    std::vector<BiPoly> F;
    int n = 1;
    bool sample_mode = false;
    std::uint64_t samples = 0; // draws when sampling
    std::uint64_t seed = kDefaultSeed;
    int shards = 1;
    double tolerance_c = 3.0;
    bool audit_transitivity = false;
    bool audit_disc_square = false;
    bool audit_stickelberger = false;
};

struct Tally {
    std::uint64_t processed = 0;          // specializations enumerated or drawn
    std::uint64_t total_valid = 0;        // degree-correct with squarefree product
    std::uint64_t skipped_degenerate = 0;
    std::uint64_t all_irreducible = 0;
    std::map<std::vector<CycleType>, std::uint64_t> joint;
    std::vector<std::map<CycleType, std::uint64_t>> marginal;
    std::map<std::vector<int>, std::uint64_t> signs; // Moebius sign pattern
    std::uint64_t ell_sum = 0;            // sum of ell_{n+1} over the first polynomial
    std::uint64_t stickelberger_checked = 0;
    std::uint64_t stickelberger_violations = 0;
    std::uint64_t disc_square_count = 0;  // chi(disc) = +1 among valid (single F, odd q)

    void merge(const Tally& o) {
        processed += o.processed;
        total_valid += o.total_valid;
        skipped_degenerate += o.skipped_degenerate;
        all_irreducible += o.all_irreducible;
        for (const auto& [k, v] : o.joint) joint[k] += v;
        if (marginal.size() < o.marginal.size()) marginal.resize(o.marginal.size());
        for (std::size_t i = 0; i < o.marginal.size(); ++i)
            for (const auto& [k, v] : o.marginal[i]) marginal[i][k] += v;
        for (const auto& [k, v] : o.signs) signs[k] += v;
        ell_sum += o.ell_sum;
        stickelberger_checked += o.stickelberger_checked;
        stickelberger_violations += o.stickelberger_violations;
        disc_square_count += o.disc_square_count;
    }
};

namespace detail {

struct HarnessPrep {
    std::vector<std::vector<UPoly>> xc; // x-coefficients of each F_i
    std::vector<int> N;                 // generic specialization degrees
    std::uint64_t qn = 1;               // q^n
    std::uint64_t total = 0;            // q^n (q-1) in exhaustive mode
};

inline HarnessPrep harness_prep(const ExperimentConfig& cfg) {
    if (!cfg.ctx) throw invalid_parameter("experiment without a field");
    if (cfg.F.empty()) throw invalid_parameter("experiment without polynomials");
    if (cfg.n < 1) throw invalid_parameter("specialization degree must be positive");
    HarnessPrep prep;
    for (const BiPoly& Fi : cfg.F) {
        if (Fi.F != cfg.ctx) throw incompatible_fields("polynomial not over the experiment field");
        prep.xc.push_back(x_coeffs(Fi));
        prep.N.push_back(generic_degree(Fi, cfg.n, cfg.seed));
    }
    long long qn = int_pow_checked(cfg.ctx->q, cfg.n);
    prep.qn = std::uint64_t(qn);
    prep.total = std::uint64_t(detail::checked_mul_ll(qn, (long long)(cfg.ctx->q - 1)));
    return prep;
}

// one shard: indices [lo, hi) of the enumeration (or of the sample draws)
inline void harness_shard(const ExperimentConfig& cfg, const HarnessPrep& prep,
                          std::uint64_t lo, std::uint64_t hi, Tally* out) {
    const FieldCtx& K = *cfg.ctx;
    const std::size_t m = cfg.F.size();
    Tally tally;
    tally.marginal.resize(m);

    const bool odd = K.p != 2;
    const bool want_stick = cfg.audit_stickelberger && odd;
    const bool want_disc = cfg.audit_disc_square && odd && m == 1;
    const int e = cfg.n + 1;

    UPoly g(K);
    g.c.assign(std::size_t(cfg.n) + 1, K.zero());
    std::vector<UPoly> values;
    values.reserve(m);
    std::vector<CycleType> key(m);
    std::vector<int> signkey(m);

    for (std::uint64_t idx = lo; idx < hi; ++idx) {
        if (cfg.sample_mode) {
            CounterRng rng = derive_rng(cfg.seed, idx);
            for (int j = 0; j < cfg.n; ++j) g.c[std::size_t(j)] = FFElem{rng.below(K.q)};
            g.c[std::size_t(cfg.n)] = FFElem{1 + rng.below(K.q - 1)};
        } else {
            std::uint64_t rem = idx % prep.qn;
            for (int j = 0; j < cfg.n; ++j) {
                g.c[std::size_t(j)] = FFElem{rem % K.q};
                rem /= K.q;
            }
            g.c[std::size_t(cfg.n)] = FFElem{1 + idx / prep.qn};
        }
        ++tally.processed;

        values.clear();
        bool ok = true;
        for (std::size_t i = 0; i < m && ok; ++i) {
            values.push_back(substitute(prep.xc[i], g));
            ok = values.back().deg() == prep.N[i];
        }
        if (ok) {
            UPoly prod = values[0];
            for (std::size_t i = 1; i < m; ++i) prod = mul(prod, values[i]);
            ok = is_squarefree(prod);
        }
        if (!ok) {
            ++tally.skipped_degenerate;
            continue;
        }
        ++tally.total_valid;

        bool all_irred = true;
        for (std::size_t i = 0; i < m; ++i) {
            key[i] = frobenius_class(values[i]);
            tally.marginal[i][key[i]] += 1;
            signkey[i] = (key[i].size() % 2) ? -1 : +1;
            if (key[i].size() != 1) all_irred = false;

            if (want_stick) {
                int chi = quadratic_character(discriminant(values[i]), K);
                int expect = ((prep.N[i] - int(key[i].size())) % 2 == 0) ? +1 : -1;
                ++tally.stickelberger_checked;
                if (chi != expect) ++tally.stickelberger_violations;
            }
        }
        tally.joint[key] += 1;
        tally.signs[signkey] += 1;
        if (all_irred) ++tally.all_irreducible;

        std::uint64_t l = 0;
        for (int part : key[0])
            if (part == 1) ++l;
        std::uint64_t fall = 1;
        for (int j = 0; j < e && fall; ++j) fall *= (l > std::uint64_t(j)) ? l - std::uint64_t(j) : 0;
        tally.ell_sum += fall;

        if (want_disc && quadratic_character(discriminant(values[0]), K) == 1)
            ++tally.disc_square_count;
    }
    *out = std::move(tally);
}

} // namespace detail

inline Tally run_experiment(const ExperimentConfig& cfg) {
    detail::HarnessPrep prep = detail::harness_prep(cfg);
    std::uint64_t total = cfg.sample_mode ? cfg.samples : prep.total;
    if (cfg.sample_mode && cfg.samples == 0) throw invalid_parameter("sample mode with zero draws");
    int shards = std::max(1, cfg.shards);
    if (std::uint64_t(shards) > total) shards = int(total);

    std::vector<Tally> parts(static_cast<std::size_t>(shards));
    if (shards == 1) {
        detail::harness_shard(cfg, prep, 0, total, &parts[0]);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(std::size_t(shards));
        for (int s = 0; s < shards; ++s) {
            std::uint64_t lo = total * std::uint64_t(s) / std::uint64_t(shards);
            std::uint64_t hi = total * std::uint64_t(s + 1) / std::uint64_t(shards);
            pool.emplace_back(detail::harness_shard, std::cref(cfg), std::cref(prep), lo, hi, &parts[std::size_t(s)]);
        }
        for (std::thread& th : pool) th.join();
    }
    Tally tally;
    tally.marginal.resize(cfg.F.size());
    for (const Tally& part : parts) tally.merge(part);
    return tally;
}

// ---- audits ----

struct TransitivityAudit {
    std::uint64_t sum = 0;
    double normalized = 0; // sum / q^{n+1}
    double window = 0;
    bool pass = false;
};

// average of ell_{n+1} against q^{n+1}: the group-theoretic mean of the
// falling factorial of fixed points is 1 exactly when the Galois group of the
// generic specialization is (n+1)-transitive
inline TransitivityAudit transitivity_audit(const ExperimentConfig& cfg, const Tally& tally) {
    if (cfg.F.size() != 1) throw invalid_parameter("transitivity audit requires a single polynomial");
    if (cfg.sample_mode) throw invalid_parameter("transitivity audit requires exhaustive mode");
    if (absolute_factor_count(cfg.F[0]) != 1)
        throw hypothesis_violated("transitivity audit requires a geometrically irreducible polynomial");
    TransitivityAudit a;
    a.sum = tally.ell_sum;
    a.normalized = double((long double)tally.ell_sum / std::pow((long double)cfg.ctx->q, cfg.n + 1));
    a.window = cfg.tolerance_c / std::sqrt(double(cfg.ctx->q));
    a.pass = std::fabs(a.normalized - 1.0) <= a.window;
    return a;
}

struct DiscSquareAudit {
    std::uint64_t count = 0;
    double fraction = 0;
    double window = 0;
    bool pass = false;
};

// fraction of valid specializations whose discriminant is a nonzero square;
// compared through |2 fraction - 1| so that a constant statistic cannot pass
inline DiscSquareAudit disc_square_audit(const ExperimentConfig& cfg, const Tally& tally) {
    if (!cfg.ctx || cfg.ctx->p == 2)
        throw unsupported_characteristic("discriminant-square audit needs odd characteristic");
    if (cfg.F.size() != 1) throw invalid_parameter("discriminant-square audit requires a single polynomial");
    if (!monic_in_x(cfg.F[0]) || !slope_at_most(slope(cfg.F[0]), cfg.n))
        throw hypothesis_violated("discriminant-square audit requires a monic polynomial of slope at most n");
    if (tally.total_valid == 0) throw invalid_parameter("no valid specializations to audit");
    DiscSquareAudit a;
    a.count = tally.disc_square_count;
    a.fraction = double(tally.disc_square_count) / double(tally.total_valid);
    a.window = cfg.tolerance_c / std::sqrt(double(cfg.ctx->q));
    a.pass = std::fabs(2.0 * a.fraction - 1.0) <= a.window;
    return a;
}

// ---- comparison against the prediction ----

struct ReportRow {
    std::string name;
    bool has_pred = false;
    Rat predicted{0};
    double predicted_value = 0;
    double observed = 0;
    double rel_dev = 0; // relative deviation, or the raw distance on absolute rows
    double window = 0;
    double stderr_v = 0; // sampling standard error on the count scale
    bool absolute = false;
    bool pass = false;
    std::string basis;
};

struct ComparisonReport {
    std::vector<ReportRow> rows;
    bool pass = true;

    void add(ReportRow row) {
        pass = pass && row.pass;
        rows.push_back(std::move(row));
    }
};

namespace detail {

// count-scale row; in sample mode the observed count is scaled up to the full
// enumeration and a 3 sigma binomial fallback applies
inline ReportRow count_row(const ExperimentConfig& cfg, const HarnessPrep& prep, std::string name,
                           Rat predicted, double window, std::uint64_t raw) {
    ReportRow row;
    row.name = std::move(name);
    row.has_pred = true;
    row.predicted = predicted;
    row.predicted_value = rat_value(predicted);
    row.window = window;
    if (!cfg.sample_mode) {
        row.observed = double(raw);
        if (row.predicted_value == 0) {
            row.absolute = true;
            row.rel_dev = row.observed;
            row.pass = raw == 0;
            row.basis = "exact";
        } else {
            row.rel_dev = std::fabs(row.observed / row.predicted_value - 1.0);
            row.pass = row.rel_dev <= window;
            row.basis = "relative";
        }
        return row;
    }
    long double draws = (long double)(cfg.samples ? cfg.samples : 1);
    long double universe = (long double)prep.total;
    long double phat = (long double)raw / draws;
    long double est = phat * universe;
    row.observed = double(est);
    row.stderr_v = double(std::sqrt(phat * (1.0L - phat) / draws) * universe);
    if (row.predicted_value == 0) {
        row.absolute = true;
        row.rel_dev = row.observed;
        row.pass = raw == 0;
        row.basis = "exact";
        return row;
    }
    row.rel_dev = std::fabs(row.observed / row.predicted_value - 1.0);
    if (row.rel_dev <= window) {
        row.pass = true;
        row.basis = "relative";
    } else {
        row.pass = std::fabs(row.observed - row.predicted_value) <= 3.0 * row.stderr_v;
        row.basis = "stderr";
    }
    return row;
}

inline std::string joint_name(const std::vector<CycleType>& key) {
    std::string s = "joint[";
    for (std::size_t i = 0; i < key.size(); ++i) {
        if (i) s += ",";
        s += cycle_type_string(key[i]);
    }
    return s + "]";
}

inline std::string sign_name(const std::vector<int>& key) {
    std::string s = "sign[";
    for (int v : key) s += (v > 0) ? '+' : '-';
    return s + "]";
}

} // namespace detail

inline ComparisonReport compare(const ExperimentConfig& cfg, const Tally& tally, const Prediction& pred,
                                std::vector<std::vector<CycleType>> joint_types = {}) {
    detail::HarnessPrep prep = detail::harness_prep(cfg);
    const std::size_t m = cfg.F.size();
    ComparisonReport rep;
    const double window = pred.window;
    long long qn1 = int_pow_checked(cfg.ctx->q, cfg.n + 1);

    if (pred.all_irreducible_prob != Rat(0))
        rep.add(detail::count_row(cfg, prep, "all_irreducible", pred.main_term, window, tally.all_irreducible));

    const bool have_marginals = pred.marginals.size() == m;
    if (have_marginals) {
        std::vector<TwistedModel> models;
        for (std::size_t i = 0; i < m; ++i) models.emplace_back(pred.N[i], pred.mu[i]);

        if (joint_types.empty()) {
            std::vector<CycleType> full;
            for (std::size_t i = 0; i < m; ++i) full.push_back(CycleType{pred.N[i]});
            joint_types.push_back(std::move(full));
        }
        for (const auto& types : joint_types) {
            Rat prob = joint_type_prediction(models, types);
            std::uint64_t raw = 0;
            auto it = tally.joint.find(types);
            if (it != tally.joint.end()) raw = it->second;
            rep.add(detail::count_row(cfg, prep, detail::joint_name(types), Rat(qn1) * prob, window, raw));
        }

        // total variation distance per marginal histogram
        for (std::size_t i = 0; i < m; ++i) {
            std::map<CycleType, Rat> law = twisted_cycle_distribution(models[i]);
            double tv = 0;
            std::uint64_t denom = tally.total_valid ? tally.total_valid : 1;
            std::map<CycleType, double> diff;
            for (const auto& [ct, p] : law) diff[ct] = rat_value(p);
            if (i < tally.marginal.size())
                for (const auto& [ct, cnt] : tally.marginal[i]) diff[ct] -= double(cnt) / double(denom);
            for (const auto& [ct, d] : diff) tv += std::fabs(d);
            tv /= 2;
            ReportRow row;
            row.name = "tv[" + std::to_string(i) + "]";
            row.observed = tv;
            row.rel_dev = tv;
            row.window = window;
            row.absolute = true;
            row.pass = tv <= window;
            row.basis = "absolute";
            rep.add(std::move(row));
        }

        // cycle types incompatible with the twisted model must never occur
        bool any_twisted = false;
        std::uint64_t violations = 0;
        for (std::size_t i = 0; i < m; ++i) {
            if (pred.mu[i] == 1) continue;
            any_twisted = true;
            if (i >= tally.marginal.size()) continue;
            for (const auto& [ct, cnt] : tally.marginal[i])
                if (!twisted_supports(models[i], ct)) violations += cnt;
        }
        if (any_twisted) {
            ReportRow row;
            row.name = "support_violations";
            row.has_pred = true;
            row.observed = double(violations);
            row.rel_dev = double(violations);
            row.absolute = true;
            row.pass = violations == 0;
            row.basis = "exact";
            rep.add(std::move(row));
        }
    }

    if (pred.sign_prob != Rat(0) && m <= 20) {
        for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << m); ++mask) {
            std::vector<int> key(m);
            for (std::size_t i = 0; i < m; ++i) key[i] = (mask >> i) & 1 ? -1 : +1;
            std::uint64_t raw = 0;
            auto it = tally.signs.find(key);
            if (it != tally.signs.end()) raw = it->second;
            rep.add(detail::count_row(cfg, prep, detail::sign_name(key), pred.per_pattern_count, window, raw));
        }
    }

    if (cfg.audit_transitivity) {
        TransitivityAudit a = transitivity_audit(cfg, tally);
        ReportRow row;
        row.name = "transitivity_avg";
        row.has_pred = true;
        row.predicted = Rat(1);
        row.predicted_value = 1;
        row.observed = a.normalized;
        row.rel_dev = std::fabs(a.normalized - 1.0);
        row.window = a.window;
        row.pass = a.pass;
        row.basis = "relative";
        rep.add(std::move(row));
    }

    if (cfg.audit_disc_square) {
        DiscSquareAudit a = disc_square_audit(cfg, tally);
        ReportRow row;
        row.name = "disc_square_fraction";
        row.has_pred = true;
        row.predicted = Rat(1, 2);
        row.predicted_value = 0.5;
        row.observed = a.fraction;
        row.rel_dev = std::fabs(2.0 * a.fraction - 1.0);
        row.window = a.window;
        row.pass = a.pass;
        row.basis = "relative";
        rep.add(std::move(row));
    }

    if (cfg.audit_stickelberger && cfg.ctx->p != 2) {
        ReportRow row;
        row.name = "stickelberger_violations";
        row.has_pred = true;
        row.observed = double(tally.stickelberger_violations);
        row.rel_dev = row.observed;
        row.absolute = true;
        row.pass = tally.stickelberger_violations == 0;
        row.basis = "exact";
        rep.add(std::move(row));
    }

    {
        ReportRow row;
        row.name = "degenerate_fraction";
        std::uint64_t denom = tally.processed ? tally.processed : 1;
        row.observed = double(tally.skipped_degenerate) / double(denom);
        row.rel_dev = row.observed;
        row.window = 10.0 / double(cfg.ctx->q);
        row.absolute = true;
        if (cfg.ctx->q >= 25) {
            row.pass = row.observed <= row.window;
            row.basis = "absolute";
        } else {
            row.pass = true;
            row.basis = "not-enforced";
        }
        rep.add(std::move(row));
    }

    return rep;
}

} // namespace ffbh
