#include <catch2/catch_amalgamated.hpp>

#include "ffbh/fields.hpp"
#include "ffbh/rng.hpp"
#include "oracles.hpp"

using namespace ffbh;

namespace {

// lex-least monic irreducible of degree k over GF(p), found by raw enumeration
// and trial division, nothing shared with the library
oracle::IntPoly least_irreducible_by_scan(int p, int k) {
    std::uint64_t count = 1;
    for (int i = 0; i < k; ++i) count *= std::uint64_t(p);
    for (std::uint64_t code = 0; code < count; ++code) {
        oracle::IntPoly f = oracle::ip_from_code(code, k, p, true);
        if (oracle::ip_irreducible(f, p)) return f;
    }
    FAIL("no irreducible polynomial found");
    return {};
}

} // namespace

TEST_CASE("moduli are the lex-least monic irreducibles") {
    struct Fixture {
        std::uint32_t p, k;
        std::vector<std::uint32_t> modulus; // coefficient of T^i at index i
    };
    // hand-derived fixtures, pinned so a modulus change cannot slip through
    const std::vector<Fixture> fixtures = {
        {2, 2, {1, 1, 1}},       // T^2+T+1
        {2, 3, {1, 1, 0, 1}},    // T^3+T+1
        {3, 2, {1, 0, 1}},       // T^2+1
        {2, 4, {1, 1, 0, 0, 1}}, // T^4+T+1
        {5, 2, {2, 0, 1}},       // T^2+2
        {3, 3, {1, 2, 0, 1}},    // T^3+2T+1
        {7, 2, {1, 0, 1}},       // T^2+1
    };
    for (const auto& fx : fixtures) {
        CAPTURE(fx.p, fx.k);
        const FieldCtx& F = field(fx.p, fx.k);
        CHECK(F.modulus == fx.modulus);
        oracle::IntPoly scan = least_irreducible_by_scan(int(fx.p), int(fx.k));
        REQUIRE(scan.size() == fx.k + 1);
        for (std::uint32_t i = 0; i <= fx.k; ++i) CHECK(std::uint32_t(scan[i]) == fx.modulus[i]);
    }
}

TEST_CASE("prime field arithmetic is arithmetic mod p") {
    const FieldCtx& F = field(13);
    for (std::uint64_t a = 0; a < 13; ++a)
        for (std::uint64_t b = 0; b < 13; ++b) {
            CHECK(F.add(F.elem(a), F.elem(b)).v == (a + b) % 13);
            CHECK(F.mul(F.elem(a), F.elem(b)).v == (a * b) % 13);
            CHECK(F.sub(F.elem(a), F.elem(b)).v == (a + 13 - b) % 13);
        }
}

TEST_CASE("field axioms hold on full small fields") {
    for (auto [p, k] : {std::pair<std::uint32_t, std::uint32_t>{3, 2}, {2, 4}, {5, 2}, {3, 3}}) {
        const FieldCtx& F = field(p, k);
        CAPTURE(p, k);
        for (std::uint64_t a = 0; a < F.q; ++a) {
            FFElem x = F.elem(a);
            CHECK(F.add(x, F.zero()) == x);
            CHECK(F.mul(x, F.one()) == x);
            CHECK(F.add(x, F.neg(x)) == F.zero());
            if (a) CHECK(F.mul(x, F.inv(x)) == F.one());
            for (std::uint64_t b = 0; b < F.q; ++b) {
                FFElem y = F.elem(b);
                CHECK(F.add(x, y) == F.add(y, x));
                CHECK(F.mul(x, y) == F.mul(y, x));
            }
        }
        CounterRng rng = derive_rng(kDefaultSeed, F.q);
        for (int trial = 0; trial < 2000; ++trial) {
            FFElem x = F.elem(rng.below(F.q)), y = F.elem(rng.below(F.q)), z = F.elem(rng.below(F.q));
            CHECK(F.add(F.add(x, y), z) == F.add(x, F.add(y, z)));
            CHECK(F.mul(F.mul(x, y), z) == F.mul(x, F.mul(y, z)));
            CHECK(F.mul(x, F.add(y, z)) == F.add(F.mul(x, y), F.mul(x, z)));
        }
    }
}

TEST_CASE("large fields use the generic path and still satisfy the axioms") {
    // all beyond the lookup-table limit
    for (auto [p, k] : {std::pair<std::uint32_t, std::uint32_t>{59, 2}, {2, 13}, {7, 5}, {2, 40}}) {
        const FieldCtx& F = field(p, k);
        CAPTURE(p, k);
        CounterRng rng = derive_rng(kDefaultSeed, p + k);
        for (int trial = 0; trial < 500; ++trial) {
            FFElem x = F.elem(rng.below(F.q)), y = F.elem(rng.below(F.q)), z = F.elem(rng.below(F.q));
            CHECK(F.add(F.add(x, y), z) == F.add(x, F.add(y, z)));
            CHECK(F.mul(F.mul(x, y), z) == F.mul(x, F.mul(y, z)));
            CHECK(F.mul(x, F.add(y, z)) == F.add(F.mul(x, y), F.mul(x, z)));
            CHECK(F.sub(x, x) == F.zero());
            if (x.v) CHECK(F.mul(x, F.inv(x)) == F.one());
            // Frobenius is additive and fixes exactly the prime subfield elements of GF(p)
            CHECK(F.pow(F.add(x, y), F.p) == F.add(F.pow(x, F.p), F.pow(y, F.p)));
        }
    }
}

TEST_CASE("element codes enumerate coefficient vectors least significant first") {
    const FieldCtx& F = field(3, 2);
    REQUIRE(field_size(F) == 9);
    CHECK(F.elem_at(0) == F.zero());
    CHECK(F.elem_at(1) == F.one());
    // code 5 = 2 + 1*3: coefficients (2, 1)
    CHECK(F.coeff(F.elem(5), 0) == 2);
    CHECK(F.coeff(F.elem(5), 1) == 1);
    CHECK(F.from_coeffs({2, 1}) == F.elem(5));
    CHECK_THROWS_AS(F.elem(9), invalid_parameter);
    CHECK_THROWS_AS(F.from_coeffs({3}), invalid_parameter);
    std::size_t n = 0;
    for (FFElem x : enumerate_field(F)) {
        CHECK(x.v == n);
        ++n;
    }
    CHECK(n == 9);
}

TEST_CASE("rendering") {
    const FieldCtx& F5 = field(5);
    CHECK(F5.to_string(F5.elem(3)) == "3");
    const FieldCtx& F9 = field(3, 2);
    CHECK(F9.to_string(F9.zero()) == "0");
    CHECK(F9.to_string(F9.one()) == "1");
    CHECK(F9.to_string(F9.elem(3)) == "u");
    CHECK(F9.to_string(F9.elem(5)) == "u+2");
    CHECK(F9.to_string(F9.elem(7)) == "2*u+1");
    std::set<std::string> seen;
    for (FFElem x : enumerate_field(F9)) seen.insert(F9.to_string(x));
    CHECK(seen.size() == 9); // injective
    CHECK(F9.modulus_string() == "u^2+1");
}

TEST_CASE("frobenius") {
    for (auto [p, k] : {std::pair<std::uint32_t, std::uint32_t>{2, 4}, {3, 3}, {5, 2}}) {
        const FieldCtx& F = field(p, k);
        CAPTURE(p, k);
        for (FFElem x : enumerate_field(F)) {
            CHECK(frobenius(x, F, 1) == F.pow(x, F.p));
            CHECK(frobenius(x, F) == x);      // default: full k-fold power, the identity
            CHECK(frobenius(x, F, int(F.k)) == x);
        }
        for (FFElem x : enumerate_field(F))
            for (FFElem y : enumerate_field(F))
                CHECK(frobenius(F.add(x, y), F, 1) == F.add(frobenius(x, F, 1), frobenius(y, F, 1)));
    }
}

TEST_CASE("quadratic character matches the square table") {
    for (auto [p, k] : {std::pair<std::uint32_t, std::uint32_t>{5, 1}, {7, 1}, {5, 2}, {3, 3}, {7, 2}}) {
        const FieldCtx& F = field(p, k);
        CAPTURE(p, k);
        auto squares = oracle::square_codes(F);
        CHECK(squares.size() == (F.q - 1) / 2); // exactly half the units are squares
        for (FFElem x : enumerate_field(F))
            CHECK(quadratic_character(x, F) == oracle::chi_by_table(squares, x));
        // multiplicativity
        CounterRng rng = derive_rng(kDefaultSeed, F.q + 1);
        for (int trial = 0; trial < 200; ++trial) {
            FFElem x = F.elem(rng.below(F.q)), y = F.elem(rng.below(F.q));
            CHECK(quadratic_character(F.mul(x, y), F) ==
                  quadratic_character(x, F) * quadratic_character(y, F));
        }
    }
    CHECK_THROWS_AS(quadratic_character(field(2, 4).one(), field(2, 4)), unsupported_characteristic);
}

TEST_CASE("registry interns fields and rejects bad parameters") {
    CHECK(&field(5, 2) == &field(5, 2));
    CHECK(&make_extension(field(5, 2), 3) == &field(5, 6));
    CHECK(field(5, 2).q == 25);
    CHECK_THROWS_AS(field(25), invalid_parameter); // composite: must be written 5^2
    CHECK_THROWS_AS(field(1), invalid_parameter);
    CHECK_THROWS_AS(field(6), invalid_parameter);
    CHECK_THROWS_AS(field(3, 0), invalid_parameter);
    CHECK_THROWS_AS(field(3, 45), invalid_parameter); // 3^45 does not fit the element type
    CHECK(field(2).odd_characteristic() == false);
    CHECK(field(3).odd_characteristic() == true);
}

TEST_CASE("division by zero throws") {
    const FieldCtx& F = field(5, 2);
    CHECK_THROWS_AS(F.inv(F.zero()), zero_division);
    CHECK_THROWS_AS(F.div(F.one(), F.zero()), zero_division);
}
