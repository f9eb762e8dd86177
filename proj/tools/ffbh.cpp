// ffbh: finite-field Bateman-Horn predictions and empirical verification.
//
// Subcommands:
//   check     hypothesis check for a family of bivariate polynomials
//   predict   exact main terms and cycle-type laws
//   run       enumerate or sample specializations and compare to predictions
//   singular  singular points of the curve F = 0
//   mu        absolutely irreducible factor count with point-count evidence
//
// Exit codes: 0 pass, 1 statistical failure, 2 hypothesis failure, 3 usage.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ffbh/conditions.hpp"
#include "ffbh/curve.hpp"
#include "ffbh/expr.hpp"
#include "ffbh/harness.hpp"
#include "ffbh/report.hpp"

namespace {

struct SeedChoice {
    std::uint64_t value = ffbh::kDefaultSeed;
    std::string source = "default";
};

SeedChoice resolve_seed(bool flag_given, std::uint64_t flag_value) {
    if (flag_given) return {flag_value, "flag"};
    const char* env = std::getenv("FFBH_SEED");
    if (env && *env) {
        std::string s(env);
        std::uint64_t v = 0;
        for (char c : s) {
            if (c < '0' || c > '9') throw ffbh::invalid_parameter("FFBH_SEED must be a nonnegative integer");
            std::uint64_t d = std::uint64_t(c - '0');
            if (v > (UINT64_MAX - d) / 10) throw ffbh::invalid_parameter("FFBH_SEED out of range");
            v = v * 10 + d;
        }
        return {v, "env"};
    }
    return {ffbh::kDefaultSeed, "default"};
}

// reports are always materialized fully before anything is written
void emit(const std::string& payload, const std::string& outfile) {
    if (outfile.empty()) {
        std::fwrite(payload.data(), 1, payload.size(), stdout);
        std::fflush(stdout);
        return;
    }
    std::ofstream out(outfile, std::ios::binary);
    if (!out) throw ffbh::invalid_parameter("cannot open output file: " + outfile);
    out.write(payload.data(), std::streamsize(payload.size()));
    if (!out) throw ffbh::invalid_parameter("cannot write output file: " + outfile);
}

struct CommonArgs {
    std::string field_desc;
    std::vector<std::string> poly_src;
    int n = 0;
    std::string theorem = "1.1";
    double tolerance_c = 3.0;
    std::uint64_t seed_flag = 0;
    CLI::Option* seed_opt = nullptr;
    std::string out;

    const ffbh::FieldCtx* ctx = nullptr;
    std::vector<ffbh::BiPoly> polys;
    ffbh::TheoremPath path = ffbh::TheoremPath::monic;
    SeedChoice seed;

    void materialize() {
        ctx = &ffbh::parse_field(field_desc);
        for (const std::string& src : poly_src) polys.push_back(ffbh::parse_poly(src, *ctx));
        path = theorem == "1.4" ? ffbh::TheoremPath::nonmonic : ffbh::TheoremPath::monic;
        seed = resolve_seed(seed_opt && seed_opt->count() > 0, seed_flag);
    }

    ffbh::Json runspec(const std::string& command) const {
        ffbh::Json j;
        j["command"] = command;
        j["field"] = ffbh::field_string(*ctx);
        j["modulus"] = ctx->modulus_string();
        ffbh::Json ps = ffbh::Json::array();
        for (const auto& P : polys) ps.push_back(ffbh::to_string(P));
        j["polys"] = std::move(ps);
        j["n"] = n;
        j["theorem"] = theorem;
        j["tolerance_c"] = tolerance_c;
        j["seed"] = seed.value;
        j["seed_source"] = seed.source;
        return j;
    }
};

void add_common(CLI::App* cmd, CommonArgs& args, bool with_n) {
    cmd->add_option("--field", args.field_desc, "field size, a prime p or prime power p^k")->required();
    cmd->add_option("--poly", args.poly_src, "polynomial in t and x (repeatable)")->required()->take_all();
    if (with_n) {
        cmd->add_option("--n", args.n, "degree of the substituted polynomials")->required();
        cmd->add_option("--theorem", args.theorem, "hypothesis set: 1.1 (monic) or 1.4 (non-monic)")
            ->check(CLI::IsMember({"1.1", "1.4"}));
        cmd->add_option("--tolerance-c", args.tolerance_c, "tolerance constant c in c*q^{-1/2}")
            ->check(CLI::PositiveNumber);
        args.seed_opt = cmd->add_option("--seed", args.seed_flag, "seed for randomized subroutines");
    }
    cmd->add_option("--out", args.out, "write the report to this file instead of stdout");
}

int emit_json(const ffbh::Json& j, const std::string& outfile) {
    emit(j.dump(2) + "\n", outfile);
    return 0;
}

int cmd_check(CommonArgs& args) {
    args.materialize();
    ffbh::ConditionsReport rep = ffbh::check_conditions(args.polys, args.n, args.path, args.seed.value);
    ffbh::Json j;
    j["meta"] = ffbh::Json{{"format", 1}};
    j["runspec"] = args.runspec("check");
    j["conditions"] = ffbh::conditions_json(rep);
    j["pass"] = rep.pass;
    emit_json(j, args.out);
    return rep.pass ? 0 : 2;
}

int cmd_predict(CommonArgs& args, bool force) {
    args.materialize();
    ffbh::ConditionsReport rep = ffbh::check_conditions(args.polys, args.n, args.path, args.seed.value);
    ffbh::Json j;
    j["meta"] = ffbh::Json{{"format", 1}};
    ffbh::Json spec = args.runspec("predict");
    spec["force"] = force;
    j["runspec"] = std::move(spec);
    j["conditions"] = ffbh::conditions_json(rep);
    if (!rep.pass && !force) {
        j["pass"] = false;
        emit_json(j, args.out);
        return 2;
    }
    ffbh::Prediction pred =
        ffbh::bh_prediction(rep.mu, rep.N, args.ctx->q, args.n, args.tolerance_c);
    j["prediction"] = ffbh::prediction_json(pred);
    j["pass"] = rep.pass;
    emit_json(j, args.out);
    return 0;
}

int cmd_run(CommonArgs& args, bool force, const std::string& mode, std::uint64_t samples, int shards,
            const std::vector<std::string>& audits, const std::string& format) {
    args.materialize();
    if (mode != "exhaustive" && mode != "sample")
        throw ffbh::invalid_parameter("--mode must be exhaustive or sample");
    if (mode == "sample" && samples == 0)
        throw ffbh::invalid_parameter("sample mode requires --samples");
    if (shards < 1) throw ffbh::invalid_parameter("--shards must be at least 1");

    ffbh::ExperimentConfig cfg;
    cfg.ctx = args.ctx;
    cfg.F = args.polys;
    cfg.n = args.n;
    cfg.sample_mode = mode == "sample";
    cfg.samples = samples;
    cfg.seed = args.seed.value;
    cfg.shards = shards;
    cfg.tolerance_c = args.tolerance_c;
    for (const std::string& a : audits) {
        if (a == "transitivity") cfg.audit_transitivity = true;
        else if (a == "disc") cfg.audit_disc_square = true;
        else if (a == "stickelberger") cfg.audit_stickelberger = true;
        else throw ffbh::invalid_parameter("unknown audit: " + a);
    }

    ffbh::ConditionsReport conditions =
        ffbh::check_conditions(args.polys, args.n, args.path, args.seed.value);

    ffbh::Json spec = args.runspec("run");
    spec["force"] = force;
    spec["mode"] = mode;
    spec["samples"] = samples;
    std::uint64_t universe = cfg.sample_mode ? samples : ffbh::detail::harness_prep(cfg).total;
    int resolved = std::max(1, shards);
    if (std::uint64_t(resolved) > universe) resolved = int(universe);
    spec["shards"] = resolved;
    spec["audits"] = audits;
    spec["format"] = format;

    ffbh::Json j;
    j["meta"] = ffbh::Json{{"format", 1}};
    j["runspec"] = std::move(spec);
    j["conditions"] = ffbh::conditions_json(conditions);
    if (!conditions.pass && !force) {
        j["pass"] = false;
        emit_json(j, args.out);
        return 2;
    }

    ffbh::Prediction pred =
        ffbh::bh_prediction(conditions.mu, conditions.N, args.ctx->q, args.n, args.tolerance_c);
    ffbh::Tally tally = ffbh::run_experiment(cfg);
    ffbh::ComparisonReport cmp = ffbh::compare(cfg, tally, pred);

    if (format == "csv") {
        emit(ffbh::comparison_csv(cmp), args.out);
        return cmp.pass ? 0 : 1;
    }
    j["prediction"] = ffbh::prediction_json(pred);
    j["tally"] = ffbh::tally_json(tally);
    j["comparison"] = ffbh::comparison_json(cmp);
    j["pass"] = cmp.pass;
    emit_json(j, args.out);
    return cmp.pass ? 0 : 1;
}

int cmd_singular(CommonArgs& args) {
    args.materialize();
    if (args.polys.size() != 1) throw ffbh::invalid_parameter("singular takes exactly one polynomial");
    std::vector<ffbh::CurvePoint> pts = ffbh::singular_points(args.polys[0]);
    int high = ffbh::count_high_multiplicity(args.polys[0]);
    ffbh::Json j;
    j["meta"] = ffbh::Json{{"format", 1}};
    j["runspec"] = args.runspec("singular");
    j["points"] = ffbh::curve_points_json(pts);
    j["high_multiplicity_count"] = high;
    emit_json(j, args.out);
    return 0;
}

int cmd_mu(CommonArgs& args) {
    args.materialize();
    if (args.polys.size() != 1) throw ffbh::invalid_parameter("mu takes exactly one polynomial");
    ffbh::MuReport rep = ffbh::absolute_factor_report(args.polys[0]);
    ffbh::Json j;
    j["meta"] = ffbh::Json{{"format", 1}};
    j["runspec"] = args.runspec("mu");
    j["mu_report"] = ffbh::mu_json(rep);
    emit_json(j, args.out);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"finite-field Bateman-Horn predictions and verification"};
    app.require_subcommand(1);

    CommonArgs check_args, predict_args, run_args, singular_args, mu_args;
    bool predict_force = false, run_force = false;
    std::string run_mode = "exhaustive";
    std::uint64_t run_samples = 0;
    int run_shards = 1;
    std::vector<std::string> run_audits;
    std::string run_format = "json";

    CLI::App* check = app.add_subcommand("check", "verify the hypotheses");
    add_common(check, check_args, true);

    CLI::App* predict = app.add_subcommand("predict", "exact predictions");
    add_common(predict, predict_args, true);
    predict->add_flag("--force", predict_force, "predict even when the hypothesis check fails");

    CLI::App* run = app.add_subcommand("run", "enumerate specializations and compare");
    add_common(run, run_args, true);
    run->add_option("--mode", run_mode, "exhaustive or sample")->check(CLI::IsMember({"exhaustive", "sample"}));
    run->add_option("--samples", run_samples, "number of draws in sample mode");
    run->add_option("--shards", run_shards, "worker thread count");
    run->add_option("--audits", run_audits, "comma separated: transitivity,disc,stickelberger")
        ->delimiter(',');
    run->add_option("--format", run_format, "report format")->check(CLI::IsMember({"json", "csv"}));
    run->add_flag("--force", run_force, "run even when the hypothesis check fails");

    CLI::App* singular = app.add_subcommand("singular", "singular points of the curve F = 0");
    add_common(singular, singular_args, false);

    CLI::App* mu = app.add_subcommand("mu", "absolutely irreducible factor count");
    add_common(mu, mu_args, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 3;
    }

    try {
        if (*check) return cmd_check(check_args);
        if (*predict) return cmd_predict(predict_args, predict_force);
        if (*run)
            return cmd_run(run_args, run_force, run_mode, run_samples, run_shards, run_audits, run_format);
        if (*singular) return cmd_singular(singular_args);
        if (*mu) return cmd_mu(mu_args);
    } catch (const ffbh::parse_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const ffbh::invalid_parameter& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const ffbh::incompatible_fields& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const ffbh::error& e) {
        // hypothesis_violated, not_separable, unsupported_characteristic, internal
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 3;
}
