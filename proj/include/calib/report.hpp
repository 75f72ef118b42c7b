#pragma once

// Verification reports: per-point residual records, aggregates, verdicts and
// JSON/CSV serialization.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <iomanip>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "calib/errors.hpp"

namespace calib {

inline constexpr const char* kVersion = "1.0.0";

enum class Verdict { PASS, FAIL, MIXED };

inline std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::PASS:
            return "PASS";
        case Verdict::FAIL:
            return "FAIL";
        case Verdict::MIXED:
            return "MIXED";
    }
    return "FAIL";
}

inline Verdict verdict_from_string(const std::string& s) {
    if (s == "PASS") return Verdict::PASS;
    if (s == "FAIL") return Verdict::FAIL;
    if (s == "MIXED") return Verdict::MIXED;
    throw config_error("unknown verdict: " + s);
}

// Ordered name/value pairs; column order in CSV follows insertion order.
using NamedValues = std::vector<std::pair<std::string, double>>;

struct PointRecord {
    std::vector<double> u;
    std::vector<double> t;
    NamedValues residuals;
    NamedValues criteria;

    bool operator==(const PointRecord&) const = default;
};

struct VerificationReport {
    std::string suite;
    nlohmann::ordered_json config = nlohmann::ordered_json::object();
    std::vector<PointRecord> points;
    std::map<std::string, double> agg_max;
    std::map<std::string, double> agg_median;
    Verdict verdict = Verdict::PASS;
    std::string diagnostic;
    std::string version = kVersion;
    std::string timestamp;

    bool operator==(const VerificationReport&) const = default;
};

inline double median_of(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

inline void compute_aggregates(VerificationReport& r) {
    std::map<std::string, std::vector<double>> cols;
    for (const auto& p : r.points) {
        for (const auto& [k, v] : p.residuals) cols["residual." + k].push_back(v);
        for (const auto& [k, v] : p.criteria) cols["criterion." + k].push_back(v);
    }
    r.agg_max.clear();
    r.agg_median.clear();
    for (const auto& [k, v] : cols) {
        double m = 0;
        for (double x : v) m = std::isnan(x) || std::isnan(m) ? std::numeric_limits<double>::quiet_NaN() : std::max(m, std::abs(x));
        r.agg_max[k] = m;
        r.agg_median[k] = median_of(v);
    }
}

struct VerdictPolicy {
    double tol = 1e-4;         // zero threshold
    double separation = 1e-3;  // nonzero values must exceed this
    bool biconditional = true; // compare residual zero-ness against criterion zero-ness
};

inline double max_abs(const NamedValues& v) {
    double m = 0;
    for (const auto& [k, x] : v) {
        if (std::isnan(x)) return std::numeric_limits<double>::quiet_NaN();
        m = std::max(m, std::abs(x));
    }
    return m;
}

// PASS: every point has zero residuals (and zero criteria under the
// biconditional). FAIL: zero-ness of residuals and criteria agrees at every
// point but some residual is nonzero. MIXED: the biconditional breaks at some
// point, or a value falls between tol and separation.
inline void apply_verdict(VerificationReport& r, const VerdictPolicy& pol) {
    bool any_nonzero = false, mixed = false;
    for (size_t i = 0; i < r.points.size(); ++i) {
        const auto& p = r.points[i];
        const double res = max_abs(p.residuals), crit = max_abs(p.criteria);
        if (std::isnan(res) || std::isnan(crit)) {
            r.verdict = Verdict::FAIL;
            std::ostringstream os;
            os << std::setprecision(17) << "NaN at point " << i << " u=[";
            for (size_t k = 0; k < p.u.size(); ++k) os << (k ? "," : "") << p.u[k];
            os << "] t=[";
            for (size_t k = 0; k < p.t.size(); ++k) os << (k ? "," : "") << p.t[k];
            os << "]";
            r.diagnostic = os.str();
            return;
        }
        auto band = [&](double x) { return x >= pol.tol && x <= pol.separation; };
        if (band(res) || (pol.biconditional && band(crit))) mixed = true;
        const bool rz = res < pol.tol, cz = crit < pol.tol;
        if (pol.biconditional && !p.criteria.empty() && rz != cz) mixed = true;
        if (!rz) any_nonzero = true;
    }
    r.verdict = mixed ? Verdict::MIXED : (any_nonzero ? Verdict::FAIL : Verdict::PASS);
}

inline int exit_code(Verdict v) { return v == Verdict::PASS ? 0 : 1; }

inline std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

// ---------------------------------------------------------------------------
// JSON

namespace detail {

inline nlohmann::ordered_json number(double x) {
    if (std::isfinite(x)) return x;
    return nullptr;
}

inline double from_number(const nlohmann::ordered_json& j) {
    return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

inline nlohmann::ordered_json named(const NamedValues& v) {
    nlohmann::ordered_json o = nlohmann::ordered_json::object();
    for (const auto& [k, x] : v) o[k] = number(x);
    return o;
}

inline NamedValues unnamed(const nlohmann::ordered_json& o) {
    NamedValues v;
    for (auto it = o.begin(); it != o.end(); ++it) v.emplace_back(it.key(), from_number(it.value()));
    return v;
}

}  // namespace detail

inline nlohmann::ordered_json to_json(const VerificationReport& r) {
    nlohmann::ordered_json j;
    j["suite"] = r.suite;
    j["config"] = r.config;
    j["points"] = nlohmann::ordered_json::array();
    for (const auto& p : r.points) {
        nlohmann::ordered_json q;
        q["u"] = nlohmann::ordered_json::array();
        for (double x : p.u) q["u"].push_back(detail::number(x));
        q["t"] = nlohmann::ordered_json::array();
        for (double x : p.t) q["t"].push_back(detail::number(x));
        q["residuals"] = detail::named(p.residuals);
        q["criteria"] = detail::named(p.criteria);
        j["points"].push_back(q);
    }
    nlohmann::ordered_json mx = nlohmann::ordered_json::object(), md = nlohmann::ordered_json::object();
    for (const auto& [k, v] : r.agg_max) mx[k] = detail::number(v);
    for (const auto& [k, v] : r.agg_median) md[k] = detail::number(v);
    j["aggregates"] = {{"max", mx}, {"median", md}};
    j["verdict"] = to_string(r.verdict);
    if (!r.diagnostic.empty()) j["diagnostic"] = r.diagnostic;
    j["provenance"] = {{"version", r.version}, {"timestamp", r.timestamp}};
    return j;
}

inline VerificationReport from_json(const nlohmann::ordered_json& j) {
    VerificationReport r;
    r.suite = j.at("suite").get<std::string>();
    r.config = j.at("config");
    for (const auto& q : j.at("points")) {
        PointRecord p;
        for (const auto& x : q.at("u")) p.u.push_back(detail::from_number(x));
        for (const auto& x : q.at("t")) p.t.push_back(detail::from_number(x));
        p.residuals = detail::unnamed(q.at("residuals"));
        p.criteria = detail::unnamed(q.at("criteria"));
        r.points.push_back(std::move(p));
    }
    const auto& ag = j.at("aggregates");
    for (auto it = ag.at("max").begin(); it != ag.at("max").end(); ++it) r.agg_max[it.key()] = detail::from_number(it.value());
    for (auto it = ag.at("median").begin(); it != ag.at("median").end(); ++it)
        r.agg_median[it.key()] = detail::from_number(it.value());
    r.verdict = verdict_from_string(j.at("verdict").get<std::string>());
    r.diagnostic = j.value("diagnostic", "");
    const auto& pv = j.at("provenance");
    r.version = pv.at("version").get<std::string>();
    r.timestamp = pv.at("timestamp").get<std::string>();
    return r;
}

inline std::string emit_json(const VerificationReport& r) { return to_json(r).dump(2) + "\n"; }

inline VerificationReport parse_json(const std::string& s) { return from_json(nlohmann::ordered_json::parse(s)); }

// ---------------------------------------------------------------------------
// CSV: index, pass, u..., t..., residuals..., criteria...

inline std::string emit_csv(const VerificationReport& r, double tol = 1e-4) {
    std::ostringstream os;
    os << std::setprecision(17);
    size_t nu = 0, nt = 0;
    NamedValues res_cols, crit_cols;
    if (!r.points.empty()) {
        nu = r.points[0].u.size();
        nt = r.points[0].t.size();
        res_cols = r.points[0].residuals;
        crit_cols = r.points[0].criteria;
    }
    os << "index,pass";
    for (size_t k = 0; k < nu; ++k) os << ",u" << k + 1;
    for (size_t k = 0; k < nt; ++k) os << ",t" << k + 1;
    for (const auto& [name, v] : res_cols) os << ",residual." << name;
    for (const auto& [name, v] : crit_cols) os << ",criterion." << name;
    os << "\n";
    for (size_t i = 0; i < r.points.size(); ++i) {
        const auto& p = r.points[i];
        const double m = max_abs(p.residuals);
        os << i << "," << (m < tol ? 1 : 0);
        for (double x : p.u) os << "," << x;
        for (double x : p.t) os << "," << x;
        for (const auto& [name, v] : p.residuals) os << "," << v;
        for (const auto& [name, v] : p.criteria) os << "," << v;
        os << "\n";
    }
    return os.str();
}

}  // namespace calib
