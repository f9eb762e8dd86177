// Predict vs. observe for the family x^2 - t over GF(25): check the
// hypotheses, print the exact main term, enumerate every cubic
// specialization, and show how far the counts land from the prediction.

#include <iostream>

#include "ffbh/conditions.hpp"
#include "ffbh/expr.hpp"
#include "ffbh/harness.hpp"
#include "ffbh/report.hpp"

int main() {
    const ffbh::FieldCtx& F = ffbh::field(5, 2);
    ffbh::BiPoly P = ffbh::parse_poly("x^2 - t", F);
    int n = 3;

    ffbh::ConditionsReport cond = ffbh::check_conditions({P}, n, ffbh::TheoremPath::monic);
    std::cout << "hypotheses (theorem " << ffbh::to_string(cond.path) << "):\n";
    for (const auto& e : cond.entries)
        std::cout << "  " << (e.ok ? "ok  " : "FAIL") << " " << e.name << "\n";
    if (!cond.pass) return 1;

    ffbh::Prediction pred = ffbh::bh_prediction(cond.mu, cond.N, F.q, n);
    std::cout << "\nmu = " << cond.mu[0] << ", generic degree N = " << cond.N[0] << "\n";
    std::cout << "P(all irreducible) = " << ffbh::rat_string(pred.all_irreducible_prob) << "\n";
    std::cout << "main term          = " << ffbh::rat_string(pred.main_term) << " ~ "
              << pred.main_term_value << "\n";
    std::cout << "tolerance window   = " << pred.window << "\n";

    ffbh::ExperimentConfig cfg;
    cfg.ctx = &F;
    cfg.F = {P};
    cfg.n = n;
    ffbh::Tally tally = ffbh::run_experiment(cfg);
    std::cout << "\nenumerated " << tally.processed << " specializations, "
              << tally.total_valid << " valid, " << tally.all_irreducible
              << " with x^2 - f(t) irreducible\n";

    ffbh::ComparisonReport cmp = ffbh::compare(cfg, tally, pred);
    std::cout << "\nstatistic              observed   predicted  rel.dev\n";
    for (const auto& row : cmp.rows) {
        std::cout << "  " << row.name;
        for (std::size_t i = row.name.size(); i < 21; ++i) std::cout << ' ';
        std::cout << row.observed << "  ";
        if (row.has_pred) std::cout << row.predicted_value << "  " << row.rel_dev;
        std::cout << (row.pass ? "" : "  FAIL") << "\n";
    }
    std::cout << "\noverall: " << (cmp.pass ? "within tolerance" : "OUT OF TOLERANCE") << "\n";
    return cmp.pass ? 0 : 1;
}
