// Tour of the factorization layer: univariate factoring over GF(9),
// Frobenius cycle types, the absolutely-irreducible factor count of a
// bivariate curve, and its singular points.

#include <iostream>

#include "ffbh/curve.hpp"
#include "ffbh/expr.hpp"
#include "ffbh/report.hpp"

int main() {
    const ffbh::FieldCtx& F9 = ffbh::field(3, 2);
    const ffbh::FieldCtx& F3 = ffbh::field(3);

    // t^9 - t splits into the nine linear factors t - a, a in GF(9)
    ffbh::UPoly a = ffbh::sub(ffbh::upoly_monomial(F9, 9, F9.one()),
                              ffbh::upoly_monomial(F9, 1, F9.one()));
    ffbh::Factorization fac = ffbh::factor(a);
    std::cout << "t^9 - t over GF(9) factors as:\n";
    for (const auto& [part, mult] : fac.parts)
        std::cout << "  (" << ffbh::to_string(part) << ")"
                  << (mult > 1 ? "^" + std::to_string(mult) : "") << "\n";

    // cycle type of Frobenius on the roots of a squarefree sextic
    auto e = [&](std::uint64_t v) { return F3.elem(v); };
    ffbh::UPoly q1(F3, {e(1), e(0), e(1)});        // t^2 + 1
    ffbh::UPoly q2(F3, {e(1), e(2), e(0), e(1)});  // t^3 + 2t + 1
    ffbh::UPoly q3(F3, {e(1), e(1)});              // t + 1
    ffbh::UPoly b = ffbh::mul(ffbh::mul(q1, q2), q3);
    std::cout << "\n" << ffbh::to_string(b) << " over GF(3):\n";
    std::cout << "  cycle type " << ffbh::cycle_type_string(ffbh::frobenius_class(b)) << "\n";
    std::cout << "  discriminant " << F3.to_string(ffbh::discriminant(b))
              << ", quadratic character "
              << ffbh::quadratic_character(ffbh::discriminant(b), F3) << "\n";
    std::cout << "  sign prediction consistent: "
              << (ffbh::stickelberger_audit(b) ? "yes" : "no") << "\n";

    // x^2 + 1 is irreducible over GF(3)(t) but splits over GF(9)(t)
    ffbh::BiPoly P = ffbh::parse_poly("x^2 + 1", F3);
    ffbh::MuReport rep = ffbh::absolute_factor_report(P);
    std::cout << "\nabsolutely irreducible factors of x^2 + 1 over GF(3): mu = "
              << rep.mu << "\n";
    for (const auto& row : rep.rows) {
        std::cout << "  over GF(3^" << row.k << "): " << row.nu << " factor(s)";
        if (row.have_points)
            std::cout << ", " << row.points << " curve points (expected " << row.expected_points
                      << ")";
        std::cout << "\n";
    }

    // a nodal curve and where it is singular
    ffbh::BiPoly Q = ffbh::parse_poly("x^2 - t^2", ffbh::field(5));
    std::cout << "\nsingular points of x^2 - t^2 over GF(5):\n";
    for (const auto& pt : ffbh::singular_points(Q))
        std::cout << "  (t, x) = (" << pt.field->to_string(pt.tau) << ", "
                  << pt.field->to_string(pt.xi) << "), multiplicity " << pt.multiplicity << "\n";
    return 0;
}
