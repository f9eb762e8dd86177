#pragma once

#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ffbh/conditions.hpp"
#include "ffbh/curve.hpp"
#include "ffbh/harness.hpp"

namespace ffbh {

using Json = nlohmann::ordered_json;

inline std::string field_string(const FieldCtx& F) {
    std::string s = std::to_string(F.p);
    if (F.k > 1) s += "^" + std::to_string(F.k);
    return s;
}

inline Json rat_json(const Rat& r) { return rat_string(r); }

inline std::string sign_pattern_string(const std::vector<int>& key) {
    std::string s;
    for (int v : key) s += (v > 0) ? '+' : '-';
    return s;
}

inline std::string joint_key_string(const std::vector<CycleType>& key) {
    std::string s;
    for (std::size_t i = 0; i < key.size(); ++i) {
        if (i) s += ",";
        s += cycle_type_string(key[i]);
    }
    return s;
}

inline Json tally_json(const Tally& t) {
    Json j;
    j["processed"] = t.processed;
    j["total_valid"] = t.total_valid;
    j["skipped_degenerate"] = t.skipped_degenerate;
    j["all_irreducible"] = t.all_irreducible;
    Json joint = Json::object();
    for (const auto& [k, v] : t.joint) joint[joint_key_string(k)] = v;
    j["joint"] = std::move(joint);
    Json marg = Json::array();
    for (const auto& mi : t.marginal) {
        Json one = Json::object();
        for (const auto& [ct, v] : mi) one[cycle_type_string(ct)] = v;
        marg.push_back(std::move(one));
    }
    j["marginal"] = std::move(marg);
    Json signs = Json::object();
    for (const auto& [k, v] : t.signs) signs[sign_pattern_string(k)] = v;
    j["signs"] = std::move(signs);
    j["ell_sum"] = t.ell_sum;
    j["stickelberger_checked"] = t.stickelberger_checked;
    j["stickelberger_violations"] = t.stickelberger_violations;
    j["disc_square_count"] = t.disc_square_count;
    return j;
}

inline Json prediction_json(const Prediction& p) {
    Json j;
    j["q"] = p.q;
    j["n"] = p.n;
    j["m"] = p.m;
    j["tolerance_c"] = p.tolerance_c;
    j["window"] = p.window;
    j["mu"] = p.mu;
    j["N"] = p.N;
    j["all_irreducible_prob"] = rat_json(p.all_irreducible_prob);
    j["main_term"] = rat_json(p.main_term);
    j["main_term_value"] = p.main_term_value;
    Json marg = Json::array();
    for (const auto& law : p.marginals) {
        Json one = Json::object();
        for (const auto& [ct, prob] : law) one[cycle_type_string(ct)] = rat_json(prob);
        marg.push_back(std::move(one));
    }
    j["marginals"] = std::move(marg);
    j["sign_prob"] = rat_json(p.sign_prob);
    j["per_pattern_count"] = rat_json(p.per_pattern_count);
    return j;
}

inline Json conditions_json(const ConditionsReport& r) {
    Json j;
    j["theorem"] = to_string(r.path);
    Json entries = Json::array();
    for (const auto& e : r.entries) {
        Json one;
        one["name"] = e.name;
        one["ok"] = e.ok;
        one["message"] = e.message;
        entries.push_back(std::move(one));
    }
    j["entries"] = std::move(entries);
    j["mu"] = r.mu;
    j["N"] = r.N;
    j["pass"] = r.pass;
    return j;
}

inline Json row_json(const ReportRow& row) {
    Json j;
    j["name"] = row.name;
    j["has_pred"] = row.has_pred;
    j["predicted"] = rat_json(row.predicted);
    j["predicted_value"] = row.predicted_value;
    j["observed"] = row.observed;
    j["rel_dev"] = row.rel_dev;
    j["window"] = row.window;
    j["stderr"] = row.stderr_v;
    j["absolute"] = row.absolute;
    j["pass"] = row.pass;
    j["basis"] = row.basis;
    return j;
}

inline Json comparison_json(const ComparisonReport& r) {
    Json j;
    Json rows = Json::array();
    for (const auto& row : r.rows) rows.push_back(row_json(row));
    j["rows"] = std::move(rows);
    j["pass"] = r.pass;
    return j;
}

inline Json mu_json(const MuReport& r) {
    Json j;
    j["mu"] = r.mu;
    Json rows = Json::array();
    for (const auto& row : r.rows) {
        Json one;
        one["k"] = row.k;
        one["nu"] = row.nu;
        one["gcd_ok"] = row.gcd_ok;
        one["have_points"] = row.have_points;
        if (row.have_points) {
            one["points"] = row.points;
            one["expected_points"] = row.expected_points;
            one["lw_consistent"] = row.lw_consistent;
        }
        rows.push_back(std::move(one));
    }
    j["rows"] = std::move(rows);
    return j;
}

inline Json curve_points_json(const std::vector<CurvePoint>& pts) {
    Json arr = Json::array();
    for (const auto& pt : pts) {
        Json one;
        one["field"] = field_string(*pt.field);
        one["tau"] = pt.field->to_string(pt.tau);
        one["xi"] = pt.field->to_string(pt.xi);
        one["multiplicity"] = pt.multiplicity;
        arr.push_back(std::move(one));
    }
    return arr;
}

// CSV projection of a comparison report; rationals split into numerator and
// denominator so nothing is lost to rounding
inline std::string comparison_csv(const ComparisonReport& r) {
    std::ostringstream out;
    out << "statistic,predicted_num,predicted_den,predicted_float,observed,rel_dev,window,stderr,pass\n";
    out.precision(17);
    for (const auto& row : r.rows) {
        out << row.name << "," << row.predicted.numerator() << "," << row.predicted.denominator() << ","
            << row.predicted_value << "," << row.observed << "," << row.rel_dev << "," << row.window << ","
            << row.stderr_v << "," << (row.pass ? "true" : "false") << "\n";
    }
    return out.str();
}

} // namespace ffbh
