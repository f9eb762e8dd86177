#include <catch2/catch_amalgamated.hpp>

#include "ffbh/harness.hpp"
#include "ffbh/expr.hpp"
#include "oracles.hpp"

using namespace ffbh;

namespace {

const FieldCtx& F5 = field(5);
const FieldCtx& F9 = field(3, 2);
const FieldCtx& F16 = field(2, 4);
const FieldCtx& F25 = field(5, 2);

ExperimentConfig make_cfg(const FieldCtx& K, std::vector<BiPoly> polys, int n) {
    ExperimentConfig cfg;
    cfg.ctx = &K;
    cfg.F = std::move(polys);
    cfg.n = n;
    return cfg;
}

bool same_tally(const Tally& a, const Tally& b) {
    return a.processed == b.processed && a.total_valid == b.total_valid &&
           a.skipped_degenerate == b.skipped_degenerate && a.all_irreducible == b.all_irreducible &&
           a.joint == b.joint && a.marginal == b.marginal && a.signs == b.signs && a.ell_sum == b.ell_sum &&
           a.stickelberger_checked == b.stickelberger_checked &&
           a.stickelberger_violations == b.stickelberger_violations && a.disc_square_count == b.disc_square_count;
}

const ReportRow& row_named(const ComparisonReport& rep, const std::string& name) {
    for (const ReportRow& row : rep.rows)
        if (row.name == name) return row;
    FAIL("missing row " + name);
    return rep.rows.front();
}

} // namespace

TEST_CASE("exhaustive enumeration of cubic specializations over GF(5)") {
    ExperimentConfig cfg = make_cfg(F5, {parse_poly("x", F5)}, 3);
    cfg.audit_stickelberger = true;
    Tally tally = run_experiment(cfg);

    // brute count over all 500 cubics: a cubic is irreducible iff it has no
    // root, and non-squarefree iff some root is shared with the derivative
    std::uint64_t irreducible = 0, degenerate = 0, one_root = 0, split = 0;
    for (std::uint64_t a = 1; a < 5; ++a)
        for (std::uint64_t c2 = 0; c2 < 5; ++c2)
            for (std::uint64_t c1 = 0; c1 < 5; ++c1)
                for (std::uint64_t c0 = 0; c0 < 5; ++c0) {
                    UPoly f(F5);
                    f.c = {F5.elem(c0), F5.elem(c1), F5.elem(c2), F5.elem(a)};
                    UPoly fp(F5);
                    fp.c = {F5.elem(c1), F5.mul(F5.elem(2), F5.elem(c2)),
                            F5.mul(F5.elem(3), F5.elem(a))};
                    int roots = 0;
                    bool repeated = false;
                    for (std::uint64_t tau = 0; tau < 5; ++tau)
                        if (oracle::horner(f, F5.elem(tau)).v == 0) {
                            ++roots;
                            if (oracle::horner(fp, F5.elem(tau)).v == 0) repeated = true;
                        }
                    if (repeated) {
                        ++degenerate;
                        continue;
                    }
                    if (roots == 0) ++irreducible;
                    if (roots == 1) ++one_root;
                    if (roots == 3) ++split;
                }

    CHECK(tally.processed == 500);
    CHECK(tally.skipped_degenerate == degenerate);
    CHECK(tally.total_valid == irreducible + one_root + split);
    CHECK(tally.all_irreducible == irreducible);
    CHECK(tally.all_irreducible == 160);
    CHECK(tally.total_valid == 400);

    REQUIRE(tally.marginal.size() == 1);
    CHECK(tally.marginal[0].at({3}) == irreducible);
    CHECK(tally.marginal[0].at({2, 1}) == one_root);
    CHECK(tally.marginal[0].at({1, 1, 1}) == split);
    CHECK(tally.joint.at({{3}}) == irreducible);
    CHECK(tally.joint.at({{2, 1}}) == one_root);

    // sign = parity of the number of irreducible factors
    CHECK(tally.signs.at({-1}) == irreducible + split);
    CHECK(tally.signs.at({+1}) == one_root);

    // falling factorial of the root count with e = 4 vanishes for cubics
    CHECK(tally.ell_sum == 0);

    CHECK(tally.stickelberger_checked == tally.total_valid);
    CHECK(tally.stickelberger_violations == 0);
}

TEST_CASE("shard splitting does not change the tally") {
    ExperimentConfig cfg = make_cfg(F5, {parse_poly("x^2 - t", F5)}, 2);
    Tally one = run_experiment(cfg);
    cfg.shards = 3;
    Tally three = run_experiment(cfg);
    cfg.shards = 7;
    Tally seven = run_experiment(cfg);
    CHECK(same_tally(one, three));
    CHECK(same_tally(one, seven));
    CHECK(one.processed == 100);
}

TEST_CASE("sampling is deterministic in the seed and shard-stable") {
    ExperimentConfig cfg = make_cfg(F25, {parse_poly("x^2 - t", F25)}, 3);
    cfg.sample_mode = true;
    cfg.samples = 2000;
    cfg.seed = 42;
    Tally first = run_experiment(cfg);
    Tally second = run_experiment(cfg);
    CHECK(same_tally(first, second));
    CHECK(first.processed == 2000);

    cfg.shards = 4;
    Tally sharded = run_experiment(cfg);
    CHECK(same_tally(first, sharded));

    cfg.shards = 1;
    cfg.seed = 43;
    Tally other = run_experiment(cfg);
    CHECK(other.processed == 2000);
    CHECK_FALSE(same_tally(first, other)); // different draws almost surely

    cfg.samples = 0;
    CHECK_THROWS_AS(run_experiment(cfg), invalid_parameter);
}

TEST_CASE("configuration validation") {
    CHECK_THROWS_AS(run_experiment(make_cfg(F5, {}, 3)), invalid_parameter);
    CHECK_THROWS_AS(run_experiment(make_cfg(F5, {parse_poly("x", F5)}, 0)), invalid_parameter);
    CHECK_THROWS_AS(run_experiment(make_cfg(F5, {parse_poly("x", F9)}, 2)), incompatible_fields);
    ExperimentConfig cfg;
    cfg.F = {parse_poly("x", F5)};
    cfg.n = 2;
    CHECK_THROWS_AS(run_experiment(cfg), invalid_parameter); // no field
}

TEST_CASE("transitivity audit on a full symmetric specialization family") {
    ExperimentConfig cfg = make_cfg(F9, {parse_poly("x^2 - t", F9)}, 3);
    Tally tally = run_experiment(cfg);

    // consistency with the marginal histogram: ell is the falling factorial
    // of the number of fixed points (parts equal to 1)
    std::uint64_t expect = 0;
    for (const auto& [type, count] : tally.marginal[0]) {
        std::uint64_t ones = 0;
        for (int part : type)
            if (part == 1) ++ones;
        expect += count * oracle::falling(ones, 4);
    }
    CHECK(tally.ell_sum == expect);
    CHECK(tally.ell_sum > 0);

    TransitivityAudit audit = transitivity_audit(cfg, tally);
    CHECK(audit.sum == tally.ell_sum);
    CHECK(audit.window == Catch::Approx(1.0));
    CHECK(audit.normalized > 0.0);
    CHECK(audit.pass); // q = 9 is rough, but the window 3 q^{-1/2} = 1 absorbs it

    ExperimentConfig sampled = cfg;
    sampled.sample_mode = true;
    sampled.samples = 10;
    CHECK_THROWS_AS(transitivity_audit(sampled, tally), invalid_parameter);

    ExperimentConfig twopolys = make_cfg(F9, {parse_poly("x", F9), parse_poly("x + t", F9)}, 3);
    CHECK_THROWS_AS(transitivity_audit(twopolys, Tally{}), invalid_parameter);

    ExperimentConfig notgeom = make_cfg(F25, {parse_poly("x^2 - 2*t^2", F25)}, 3);
    CHECK_THROWS_AS(transitivity_audit(notgeom, Tally{}), hypothesis_violated);
}

TEST_CASE("discriminant square audit") {
    ExperimentConfig cfg = make_cfg(F25, {parse_poly("x^2 - t", F25)}, 1);
    cfg.audit_disc_square = true;
    Tally tally = run_experiment(cfg);

    // brute count: g = (a t + b)^2 - t has disc != 0 square for about half
    std::set<std::uint64_t> squares = oracle::square_codes(F25);
    std::uint64_t plus = 0, valid = 0;
    for (std::uint64_t a = 1; a < 25; ++a)
        for (std::uint64_t b = 0; b < 25; ++b) {
            UPoly f(F25);
            f.c = {F25.elem(b), F25.elem(a)};
            UPoly g = sub(mul(f, f), upoly_x(F25));
            REQUIRE(g.deg() == 2);
            FFElem A = g.c[2], B = g.c[1], C = g.c[0];
            FFElem disc = F25.sub(F25.mul(B, B), F25.mul(F25.from_int(4), F25.mul(A, C)));
            if (!disc.v) continue;
            ++valid;
            if (oracle::chi_by_table(squares, disc) == 1) ++plus;
        }
    CHECK(tally.total_valid == valid);
    CHECK(tally.disc_square_count == plus);

    DiscSquareAudit audit = disc_square_audit(cfg, tally);
    CHECK(audit.count == plus);
    CHECK(audit.fraction == Catch::Approx(double(plus) / double(valid)));
    CHECK(audit.pass);

    ExperimentConfig even = make_cfg(F16, {parse_poly("x^2 + x + t", F16)}, 1);
    CHECK_THROWS_AS(disc_square_audit(even, Tally{}), unsupported_characteristic);
    ExperimentConfig nonmonic = make_cfg(F25, {parse_poly("t*x + 1", F25)}, 1);
    CHECK_THROWS_AS(disc_square_audit(nonmonic, Tally{}), hypothesis_violated);
    ExperimentConfig steep = make_cfg(F25, {parse_poly("x^2 - t^5", F25)}, 1);
    CHECK_THROWS_AS(disc_square_audit(steep, Tally{}), hypothesis_violated);
    CHECK_THROWS_AS(disc_square_audit(cfg, Tally{}), invalid_parameter); // nothing valid
}

TEST_CASE("comparison report for the plain cubic family") {
    ExperimentConfig cfg = make_cfg(F5, {parse_poly("x", F5)}, 3);
    cfg.audit_stickelberger = true;
    Tally tally = run_experiment(cfg);
    Prediction pred = bh_prediction({1}, {3}, 5, 3);
    ComparisonReport rep = compare(cfg, tally, pred);

    const ReportRow& irr = row_named(rep, "all_irreducible");
    CHECK(irr.has_pred);
    CHECK(irr.predicted == Rat(625, 3));
    CHECK(irr.observed == 160.0);
    CHECK(irr.rel_dev == Catch::Approx(std::fabs(160.0 * 3 / 625.0 - 1.0)));
    CHECK(irr.basis == "relative");
    CHECK(irr.pass);

    const ReportRow& joint = row_named(rep, "joint[[3]]");
    CHECK(joint.predicted == Rat(625, 3));
    CHECK(joint.observed == 160.0);
    CHECK(joint.pass);

    const ReportRow& tv = row_named(rep, "tv[0]");
    CHECK(tv.absolute);
    // observed law (0.4, 0.5, 0.1) against (1/3, 1/2, 1/6)
    CHECK(tv.observed == Catch::Approx(1.0 / 15.0));
    CHECK(tv.pass);

    const ReportRow& plus = row_named(rep, "sign[+]");
    CHECK(plus.observed == 200.0);
    CHECK(plus.predicted == Rat(625, 2));
    CHECK(plus.pass);
    const ReportRow& minus = row_named(rep, "sign[-]");
    CHECK(minus.observed == 200.0);
    CHECK(minus.pass);

    const ReportRow& stick = row_named(rep, "stickelberger_violations");
    CHECK(stick.observed == 0.0);
    CHECK(stick.basis == "exact");
    CHECK(stick.pass);

    const ReportRow& degen = row_named(rep, "degenerate_fraction");
    CHECK(degen.observed == Catch::Approx(0.2));
    CHECK(degen.basis == "not-enforced"); // q < 25
    CHECK(degen.pass);

    CHECK(rep.pass);

    // a tolerance too tight to absorb the q = 5 fluctuation must fail the row
    Prediction tight = bh_prediction({1}, {3}, 5, 3, 0.01);
    ComparisonReport strict = compare(cfg, tally, tight);
    CHECK_FALSE(row_named(strict, "all_irreducible").pass);
    CHECK_FALSE(strict.pass);
}

TEST_CASE("comparison report for a twisted family") {
    FFElem a = F25.elem(5); // generator, a non-square
    REQUIRE(quadratic_character(a, F25) == -1);
    BiPoly twisted = sub(parse_poly("x^2", F25), mul(bi_const(F25, a), parse_poly("t^2", F25)));
    ExperimentConfig cfg = make_cfg(F25, {twisted}, 1);
    Tally tally = run_experiment(cfg);

    CHECK(tally.processed == 600);
    CHECK(tally.skipped_degenerate == 24); // exactly the specializations with f(0) = 0
    CHECK(tally.total_valid == 576);
    CHECK(tally.all_irreducible == 576); // chi(disc) = chi(4 u b^2) = -1 throughout

    Prediction pred = bh_prediction({2}, {2}, 25, 1);
    ComparisonReport rep = compare(cfg, tally, pred);

    const ReportRow& irr = row_named(rep, "all_irreducible");
    CHECK(irr.predicted == Rat(625));
    CHECK(irr.observed == 576.0);
    CHECK(irr.pass);

    const ReportRow& viol = row_named(rep, "support_violations");
    CHECK(viol.observed == 0.0);
    CHECK(viol.pass);

    const ReportRow& tv = row_named(rep, "tv[0]");
    CHECK(tv.observed == 0.0); // the forced type [2] is the whole law
    CHECK(tv.pass);

    const ReportRow& degen = row_named(rep, "degenerate_fraction");
    CHECK(degen.observed == Catch::Approx(0.04));
    CHECK(degen.basis == "absolute");
    CHECK(degen.pass); // 0.04 <= 10/25

    CHECK(rep.pass);
}

TEST_CASE("count rows in sample mode fall back to the binomial error") {
    ExperimentConfig cfg = make_cfg(F25, {parse_poly("x", F25)}, 1);
    cfg.sample_mode = true;
    cfg.samples = 100;
    detail::HarnessPrep prep = detail::harness_prep(cfg);
    REQUIRE(prep.total == 600);

    ReportRow row = detail::count_row(cfg, prep, "demo", Rat(290), 0.001, 50);
    CHECK(row.observed == Catch::Approx(300.0)); // 50/100 of 600
    CHECK(row.stderr_v == Catch::Approx(30.0));
    CHECK(row.basis == "stderr");
    CHECK(row.pass); // |300 - 290| <= 90

    ReportRow far = detail::count_row(cfg, prep, "demo", Rat(100), 0.001, 50);
    CHECK(far.basis == "stderr");
    CHECK_FALSE(far.pass);

    ReportRow zero = detail::count_row(cfg, prep, "demo", Rat(0), 0.001, 0);
    CHECK(zero.basis == "exact");
    CHECK(zero.pass);
    ReportRow zbad = detail::count_row(cfg, prep, "demo", Rat(0), 0.001, 1);
    CHECK_FALSE(zbad.pass);
}

TEST_CASE("characteristic two runs skip quadratic-character statistics") {
    ExperimentConfig cfg = make_cfg(F16, {parse_poly("x^2 + x + t", F16)}, 1);
    cfg.audit_stickelberger = true;
    Tally tally = run_experiment(cfg);
    CHECK(tally.processed == 240);
    CHECK(tally.stickelberger_checked == 0);
    CHECK(tally.disc_square_count == 0);
    CHECK(tally.total_valid > 0);

    Prediction pred = bh_prediction({1}, {2}, 16, 1);
    ComparisonReport rep = compare(cfg, tally, pred);
    for (const ReportRow& row : rep.rows) CHECK(row.name != "stickelberger_violations");
}
