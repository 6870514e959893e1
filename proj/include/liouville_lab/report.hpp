#pragma once

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace liouville_lab {

enum class Provenance { paper, trivial, derived };

inline const char* to_string(Provenance p) {
    switch (p) {
        case Provenance::paper: return "paper";
        case Provenance::trivial: return "trivial";
        case Provenance::derived: return "derived";
    }
    return "derived";
}

inline Provenance provenance_from_string(const std::string& s) {
    if (s == "paper") return Provenance::paper;
    if (s == "trivial") return Provenance::trivial;
    if (s == "derived") return Provenance::derived;
    throw std::invalid_argument("unknown provenance: " + s);
}

using ParamMap = std::map<std::string, std::string>;

inline std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct ReportEntry {
    std::string check_id;
    ParamMap params;
    double measured = 0;
    double expected = 0;
    double abs_err = 0;
    double rel_err = 0;
    double tolerance = 0;
    bool pass = false;
    Provenance provenance = Provenance::derived;

    bool operator==(const ReportEntry&) const = default;
};

// rel_err falls back to abs_err when expected is zero.
inline ReportEntry make_entry(std::string id, ParamMap params, double measured, double expected, double tol,
                              Provenance prov) {
    ReportEntry e;
    e.check_id = std::move(id);
    e.params = std::move(params);
    e.measured = measured;
    e.expected = expected;
    e.tolerance = tol;
    e.provenance = prov;
    e.abs_err = std::abs(measured - expected);
    e.rel_err = expected == 0 ? e.abs_err : e.abs_err / std::abs(expected);
    e.pass = std::isfinite(measured) && (e.abs_err <= tol || e.rel_err <= tol);
    return e;
}

// Inequality lo <= measured <= hi: expected is the nearest admissible value
// and the tolerance is zero, so the entry passes exactly when in range.
inline ReportEntry make_bound_entry(std::string id, ParamMap params, double measured, double lo, double hi,
                                    Provenance prov) {
    double expected = std::isfinite(measured) ? std::clamp(measured, lo, hi) : lo;
    auto e = make_entry(std::move(id), std::move(params), measured, expected, 0.0, prov);
    e.pass = std::isfinite(measured) && measured >= lo && measured <= hi;
    return e;
}

inline void sort_entries(std::vector<ReportEntry>& v) {
    std::stable_sort(v.begin(), v.end(), [](const ReportEntry& a, const ReportEntry& b) {
        if (a.check_id != b.check_id) return a.check_id < b.check_id;
        return a.params < b.params;
    });
}

inline bool all_pass(const std::vector<ReportEntry>& v) {
    return std::all_of(v.begin(), v.end(), [](const ReportEntry& e) { return e.pass; });
}

namespace detail {

inline nlohmann::json number_json(double v) {
    if (std::isfinite(v)) return v;
    if (std::isnan(v)) return "nan";
    return v > 0 ? "inf" : "-inf";
}

inline double number_from_json(const nlohmann::json& j) {
    if (j.is_number()) return j.get<double>();
    const std::string s = j.get<std::string>();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    throw std::invalid_argument("bad number in report: " + s);
}

inline std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

}  // namespace detail

inline nlohmann::json to_json(const ReportEntry& e) {
    nlohmann::json j;
    j["check_id"] = e.check_id;
    j["params"] = e.params;
    j["measured"] = detail::number_json(e.measured);
    j["expected"] = detail::number_json(e.expected);
    j["abs_err"] = detail::number_json(e.abs_err);
    j["rel_err"] = detail::number_json(e.rel_err);
    j["tolerance"] = detail::number_json(e.tolerance);
    j["pass"] = e.pass;
    j["provenance"] = to_string(e.provenance);
    return j;
}

inline ReportEntry entry_from_json(const nlohmann::json& j) {
    ReportEntry e;
    e.check_id = j.at("check_id").get<std::string>();
    e.params = j.at("params").get<ParamMap>();
    e.measured = detail::number_from_json(j.at("measured"));
    e.expected = detail::number_from_json(j.at("expected"));
    e.abs_err = detail::number_from_json(j.at("abs_err"));
    e.rel_err = detail::number_from_json(j.at("rel_err"));
    e.tolerance = detail::number_from_json(j.at("tolerance"));
    e.pass = j.at("pass").get<bool>();
    e.provenance = provenance_from_string(j.at("provenance").get<std::string>());
    return e;
}

inline void emit_json(std::ostream& os, const std::vector<ReportEntry>& v) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& e : v) arr.push_back(to_json(e));
    os << arr.dump(v.empty() ? -1 : 2);
    if (!v.empty()) os << '\n';
}

inline std::vector<ReportEntry> parse_json_report(const std::string& text) {
    std::vector<ReportEntry> out;
    for (const auto& j : nlohmann::json::parse(text)) out.push_back(entry_from_json(j));
    return out;
}

// params are written as k=v pairs joined by ';'.
inline void emit_csv(std::ostream& os, const std::vector<ReportEntry>& v) {
    os << "check_id,params,measured,expected,abs_err,rel_err,tolerance,pass,provenance\n";
    for (const auto& e : v) {
        std::string p;
        for (const auto& [k, val] : e.params) p += (p.empty() ? "" : ";") + k + "=" + val;
        os << detail::csv_quote(e.check_id) << ',' << detail::csv_quote(p) << ',' << fmt17(e.measured) << ','
           << fmt17(e.expected) << ',' << fmt17(e.abs_err) << ',' << fmt17(e.rel_err) << ','
           << fmt17(e.tolerance) << ',' << (e.pass ? "true" : "false") << ',' << to_string(e.provenance) << '\n';
    }
}

}  // namespace liouville_lab
