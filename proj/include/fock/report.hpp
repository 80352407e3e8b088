#pragma once

// Report records (nlohmann ordered_json) and the json-lines / csv emitters.
// Non-finite numbers are written as null in JSON and as inf / -inf / nan in CSV.

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fock/carleson.hpp"
#include "fock/compop.hpp"
#include "fock/geometry.hpp"
#include "fock/suite.hpp"

namespace fock {

using Record = nlohmann::ordered_json;

namespace detail {

inline Record num(double v) { return std::isfinite(v) ? Record(v) : Record(nullptr); }

inline Record num_array(std::span<const double> vs) {
    Record a = Record::array();
    for (double v : vs) a.push_back(num(v));
    return a;
}

inline Record point_array(const Point& p) {
    Record a = Record::array();
    for (int j = 0; j < p.dim(); ++j) {
        a.push_back(p[j].real());
        a.push_back(p[j].imag());
    }
    return a;
}

} // namespace detail

inline Record params_record(const Params& p) {
    Record r;
    r["n"] = p.n;
    r["alpha"] = p.alpha;
    r["m"] = p.m;
    r["p"] = std::isinf(p.p) ? Record("inf") : Record(p.p);
    r["q"] = std::isinf(p.q) ? Record("inf") : Record(p.q);
    return r;
}

inline Record lattice_record(const Lattice& lat, bool include_centers = true) {
    Record r;
    r["record"] = "lattice";
    r["n"] = lat.dim;
    r["separation"] = lat.separation;
    r["domain_radius"] = lat.domain_radius;
    r["center_count"] = lat.centers.size();
    if (include_centers) {
        Record c = Record::array();
        for (const auto& z : lat.centers) c.push_back(detail::point_array(z));
        r["centers"] = std::move(c);
    }
    return r;
}

inline Record lattice_report_record(const LatticeReport& rep, std::size_t probes, std::uint64_t seed, std::size_t multiplicity) {
    Record r;
    r["record"] = "lattice_report";
    r["min_pair_distance"] = detail::num(rep.min_pair_distance);
    r["uncovered_probe_count"] = rep.uncovered_probe_count;
    r["probe_count"] = probes;
    r["seed"] = seed;
    r["covering_multiplicity_2r"] = multiplicity;
    return r;
}

inline std::vector<Record> carleson_records(const CarlesonVerdict& v) {
    std::vector<Record> out;
    for (const auto& e : v.criteria) {
        Record r;
        r["record"] = "criterion";
        r["name"] = e.name;
        r["value"] = detail::num(e.value);
        r["divergent"] = e.divergent;
        out.push_back(std::move(r));
    }
    Record r;
    r["record"] = "carleson_verdict";
    r["regime"] = regime_name(v.regime);
    r["s"] = v.s;
    r["t"] = v.t;
    r["r"] = v.r;
    r["criterion_exponent"] = std::isinf(v.criterion_exponent) ? Record("inf") : Record(v.criterion_exponent);
    r["is_carleson"] = v.is_carleson;
    r["is_vanishing"] = v.is_vanishing;
    r["embedding_lower_bound"] = detail::num(v.embedding_lower_bound);
    r["lower_bound_divergent"] = v.lower_bound_divergent;
    r["criteria_band"] = detail::num(v.criteria_band);
    r["comparability_band"] = detail::num(v.comparability_band);
    r["band_basis"] = "engineering threshold";
    r["radii"] = detail::num_array(v.radii);
    r["vanishing_profile"] = detail::num_array(v.profile);
    out.push_back(std::move(r));
    return out;
}

inline Record compop_record(const CompOpVerdict& v, const std::optional<DirectNormResult>& direct = std::nullopt) {
    Record r;
    r["record"] = "compop_verdict";
    r["regime"] = regime_name(v.regime);
    r["bounded"] = v.bounded;
    r["compact"] = v.compact;
    r["norm_estimate"] = detail::num(v.norm_estimate);
    r["essential_norm_estimate"] = v.essential_norm_estimate ? detail::num(*v.essential_norm_estimate) : Record(nullptr);
    r["outside_corollary_scope"] = v.outside_corollary_scope;
    if (direct) {
        r["direct_norm"] = detail::num(direct->value);
        r["direct_exceeded_cap"] = direct->exceeded_cap;
        r["direct_probes"] = direct->probes;
    }
    if (v.symbol_check) {
        r["symbol_op_norm"] = v.symbol_check->op_norm;
        r["admissible_bounded"] = v.symbol_check->admissible_bounded;
        r["admissible_compact"] = v.symbol_check->admissible_compact;
        r["witness_count"] = v.symbol_check->witnesses.size();
    } else {
        r["symbol_op_norm"] = nullptr;
        r["admissible_bounded"] = nullptr;
        r["admissible_compact"] = nullptr;
        r["witness_count"] = nullptr;
    }
    for (const auto& [k, val] : v.transform_summary) r["transform_" + k] = detail::num(val);
    return r;
}

inline Record suite_record(const SuiteResult& s) {
    Record r;
    r["record"] = "suite_scenario";
    r["scenario"] = s.name;
    Record body = compop_record(s.verdict, s.direct);
    body.erase("record");
    for (auto& [k, v] : body.items()) r[k] = v;
    r["norm_band"] = s.norm_band ? detail::num(*s.norm_band) : Record(nullptr);
    r["pullback_is_carleson"] = s.pullback_is_carleson ? Record(*s.pullback_is_carleson) : Record(nullptr);
    r["expect_bounded"] = s.expect_bounded;
    r["expect_compact"] = s.expect_compact;
    r["matches_expectation"] = s.verdict.bounded == s.expect_bounded && s.verdict.compact == s.expect_compact;
    return r;
}

enum class ReportFormat { json_lines, csv };

namespace detail {

inline std::string csv_cell(const Record& v) {
    if (v.is_null()) return "";
    if (v.is_string()) {
        const std::string s = v.get<std::string>();
        if (s.find_first_of(",\"\n") == std::string::npos) return s;
        std::string q = "\"";
        for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
        return q + "\"";
    }
    if (v.is_array()) {
        std::string s;
        for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ";" : "") + (v[i].is_array() ? v[i].dump() : csv_cell(v[i]));
        return "\"" + s + "\"";
    }
    return v.dump();
}

} // namespace detail

/// json-lines: one compact record per line. csv: header row (union of keys in first
/// appearance order) and one row per record; absent keys are empty cells.
inline std::string emit_report(const std::vector<Record>& results, ReportFormat format, const std::vector<std::string>& csv_header = {}) {
    std::ostringstream os;
    if (format == ReportFormat::json_lines) {
        for (const auto& r : results) os << r.dump() << '\n';
        return os.str();
    }
    std::vector<std::string> keys = csv_header;
    for (const auto& r : results)
        for (const auto& [k, v] : r.items())
            if (std::find(keys.begin(), keys.end(), k) == keys.end()) keys.push_back(k);
    for (std::size_t i = 0; i < keys.size(); ++i) os << (i ? "," : "") << keys[i];
    os << '\n';
    for (const auto& r : results) {
        for (std::size_t i = 0; i < keys.size(); ++i) {
            if (i) os << ',';
            if (r.contains(keys[i])) os << detail::csv_cell(r[keys[i]]);
        }
        os << '\n';
    }
    return os.str();
}

} // namespace fock
