#pragma once

// Scenario runner behind the fockcli tool: strict record parsing, dispatch, report assembly.

#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fock/carleson.hpp"
#include "fock/compop.hpp"
#include "fock/geometry.hpp"
#include "fock/parallel.hpp"
#include "fock/report.hpp"
#include "fock/suite.hpp"

namespace fock::cli {

using json = nlohmann::json;

enum ExitCode : int { kOk = 0, kConfigError = 2, kIoError = 3, kDivergence = 4 };

class ConfigError : public Error {
public:
    ConfigError(std::string field, const std::string& what) : Error(field + ": " + what), field_(std::move(field)) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

class IoError : public Error {
public:
    IoError(std::string path, const std::string& what) : Error(path + ": " + what), path_(std::move(path)) {}
    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

inline const std::vector<std::string>& commands() {
    static const std::vector<std::string> c{"lattice", "carleson", "compop", "verify-norms", "suite"};
    return c;
}

struct ScenarioConfig {
    std::string command;
    Params params;
    double r = 1.0;
    double t = 0.0; ///< 0 selects t = q
    double domain_radius = 6.0;
    std::optional<json> measure, function, symbol;
    std::optional<double> tail_tol;
    std::optional<int> cells;
    std::vector<double> radii{2, 3, 4, 5, 6};
    std::uint64_t seed = 20240601;
    ReportFormat format = ReportFormat::json_lines;
    std::string out_path; ///< empty writes to the returned bytes only
};

namespace detail {

inline void only_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
    if (!j.is_object()) throw ConfigError(where, "expected an object");
    for (const auto& [k, v] : j.items()) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || k == a;
        if (!ok) throw ConfigError(where + "." + k, "unknown key");
    }
}

inline const json& need(const json& j, const char* key, const std::string& where) {
    if (!j.contains(key)) throw ConfigError(where + "." + key, "required key missing");
    return j.at(key);
}

inline double number(const json& v, const std::string& field, bool allow_inf = false) {
    if (allow_inf && v.is_string() && v.get<std::string>() == "inf") return kInf;
    if (!v.is_number()) throw ConfigError(field, allow_inf ? "expected a number or \"inf\"" : "expected a number");
    return v.get<double>();
}

inline int integer(const json& v, const std::string& field) {
    if (!v.is_number_integer()) throw ConfigError(field, "expected an integer");
    return v.get<int>();
}

inline cplx complex_pair(const json& v, const std::string& field) {
    if (!v.is_array() || v.size() != 2) throw ConfigError(field, "expected [re, im]");
    return {number(v[0], field), number(v[1], field)};
}

inline Point point(const json& v, int n, const std::string& field, std::size_t offset = 0, std::size_t extra = 0) {
    if (!v.is_array() || v.size() != 2 * static_cast<std::size_t>(n) + offset + extra)
        throw ConfigError(field, "expected " + std::to_string(2 * n) + " real coordinates");
    Point z(n);
    for (int j = 0; j < n; ++j) z[j] = {number(v[offset + 2 * j], field), number(v[offset + 2 * j + 1], field)};
    return z;
}

} // namespace detail

/// Params record: n, alpha, m, p, q required (p, q may be "inf"); r, t, domain_radius optional.
inline void parse_params(const json& j, ScenarioConfig& cfg) {
    using namespace detail;
    only_keys(j, {"n", "alpha", "m", "p", "q", "r", "t", "domain_radius"}, "params");
    Params p;
    p.n = integer(need(j, "n", "params"), "params.n");
    p.alpha = number(need(j, "alpha", "params"), "params.alpha");
    p.m = integer(need(j, "m", "params"), "params.m");
    p.p = number(need(j, "p", "params"), "params.p", true);
    p.q = number(need(j, "q", "params"), "params.q", true);
    try {
        p.validate();
    } catch (const InvalidArgument& e) {
        throw ConfigError("params." + e.field(), e.what());
    }
    cfg.params = p;
    if (j.contains("r")) cfg.r = number(j["r"], "params.r");
    if (j.contains("t")) cfg.t = number(j["t"], "params.t");
    if (j.contains("domain_radius")) cfg.domain_radius = number(j["domain_radius"], "params.domain_radius");
    if (!(cfg.r > 0.0) || !std::isfinite(cfg.r)) throw ConfigError("params.r", "must be positive and finite");
    if (j.contains("t") && (!(cfg.t > 0.0) || !std::isfinite(cfg.t))) throw ConfigError("params.t", "must be positive and finite");
    if (!(cfg.domain_radius > 0.0) || !std::isfinite(cfg.domain_radius))
        throw ConfigError("params.domain_radius", "must be positive and finite");
}

inline Polynomial parse_polynomial(const json& j, int n, const std::string& where) {
    using namespace detail;
    only_keys(j, {"kind", "coeffs"}, where);
    const json& cs = need(j, "coeffs", where);
    if (!cs.is_array()) throw ConfigError(where + ".coeffs", "expected an array");
    Polynomial poly{n, {}};
    for (std::size_t i = 0; i < cs.size(); ++i) {
        const std::string f = where + ".coeffs[" + std::to_string(i) + "]";
        const json& e = cs[i];
        if (!e.is_array() || e.size() != static_cast<std::size_t>(n) + 2) throw ConfigError(f, "expected [beta_1..beta_n, re, im]");
        MultiIndex beta{};
        for (int k = 0; k < n; ++k) {
            beta[k] = integer(e[k], f);
            if (beta[k] < 0) throw ConfigError(f, "multi-index entries must be nonnegative");
        }
        poly.coeffs[beta] += cplx{number(e[n], f), number(e[n + 1], f)};
    }
    std::erase_if(poly.coeffs, [](const auto& kv) { return kv.second == cplx{}; });
    return poly;
}

inline EntireFunction parse_function(const json& j, int n, const std::string& where = "function") {
    using namespace detail;
    if (!j.is_object()) throw ConfigError(where, "expected an object");
    const json& kind = need(j, "kind", where);
    if (kind == "poly") return parse_polynomial(j, n, where);
    if (kind == "kernel") {
        only_keys(j, {"kind", "center", "normalized", "m_scaled", "coeff"}, where);
        KernelTerm term;
        term.center = point(need(j, "center", where), n, where + ".center");
        term.normalized = j.value("normalized", false);
        term.sobolev_scaled = j.value("m_scaled", false);
        if (term.sobolev_scaled && !term.normalized) throw ConfigError(where + ".m_scaled", "requires normalized = true");
        if (j.contains("coeff")) term.coeff = complex_pair(j["coeff"], where + ".coeff");
        return KernelCombo{n, {term}};
    }
    throw ConfigError(where + ".kind", "expected \"poly\" or \"kernel\"");
}

inline Measure parse_measure(const json& j, int n) {
    using namespace detail;
    const std::string where = "measure";
    if (!j.is_object()) throw ConfigError(where, "expected an object");
    const json& kind = need(j, "kind", where);
    try {
        if (kind == "atomic") {
            only_keys(j, {"kind", "atoms"}, where);
            const json& as = need(j, "atoms", where);
            if (!as.is_array()) throw ConfigError("measure.atoms", "expected an array");
            std::vector<Atom> atoms;
            for (std::size_t i = 0; i < as.size(); ++i) {
                const std::string f = "measure.atoms[" + std::to_string(i) + "]";
                Atom a{point(as[i], n, f, 0, 1), number(as[i][2 * n], f)};
                atoms.push_back(a);
            }
            return Measure::atomic(n, std::move(atoms));
        }
        if (kind == "lattice_atoms") {
            only_keys(j, {"kind", "r", "domain_radius", "weight"}, where);
            const double r = number(need(j, "r", where), "measure.r");
            const double R = number(need(j, "domain_radius", where), "measure.domain_radius");
            const double w = j.contains("weight") ? number(j["weight"], "measure.weight") : 1.0;
            const Lattice lat = make_lattice(R, r, n);
            std::vector<Atom> atoms;
            for (const auto& c : lat.centers) atoms.push_back({c, w});
            return Measure::atomic(n, std::move(atoms));
        }
        if (kind == "density") {
            only_keys(j, {"kind", "id", "params", "truncation"}, where);
            const json& id = need(j, "id", where);
            Density d;
            if (id == "lebesgue") d.kind = DensityKind::lebesgue;
            else if (id == "gaussian") d.kind = DensityKind::gaussian;
            else if (id == "polygrowth") d.kind = DensityKind::polygrowth;
            else if (id == "ring") d.kind = DensityKind::ring;
            else throw ConfigError("measure.id", "expected lebesgue, gaussian, polygrowth or ring");
            const json ps = j.value("params", json::object());
            switch (d.kind) {
            case DensityKind::lebesgue: only_keys(ps, {"scale"}, "measure.params"); break;
            case DensityKind::gaussian: only_keys(ps, {"c", "scale"}, "measure.params"); break;
            case DensityKind::polygrowth: only_keys(ps, {"a", "scale"}, "measure.params"); break;
            case DensityKind::ring: only_keys(ps, {"center_radius", "width", "scale"}, "measure.params"); break;
            }
            if (ps.contains("c")) d.c = number(ps["c"], "measure.params.c");
            if (ps.contains("a")) d.a = number(ps["a"], "measure.params.a");
            if (ps.contains("center_radius")) d.center_radius = number(ps["center_radius"], "measure.params.center_radius");
            if (ps.contains("width")) d.width = number(ps["width"], "measure.params.width");
            if (ps.contains("scale")) d.scale = number(ps["scale"], "measure.params.scale");
            if (j.contains("truncation")) d.truncation = number(j["truncation"], "measure.truncation");
            return Measure::density(n, d);
        }
    } catch (const InvalidArgument& e) {
        throw ConfigError("measure." + e.field(), e.what());
    }
    throw ConfigError("measure.kind", "expected \"atomic\", \"lattice_atoms\" or \"density\"");
}

inline SymbolPair parse_symbol(const json& j, int n) {
    using namespace detail;
    only_keys(j, {"u", "psi"}, "symbol");
    const EntireFunction u = parse_function(need(j, "u", "symbol"), n, "symbol.u");
    const json& psi = need(j, "psi", "symbol");
    if (!psi.is_object()) throw ConfigError("symbol.psi", "expected an object");
    const json& kind = need(psi, "kind", "symbol.psi");
    if (kind == "affine") {
        only_keys(psi, {"kind", "A", "B"}, "symbol.psi");
        const json& A = need(psi, "A", "symbol.psi");
        const json& B = need(psi, "B", "symbol.psi");
        if (!A.is_array() || A.size() != static_cast<std::size_t>(n * n))
            throw ConfigError("symbol.psi.A", "expected n*n [re, im] entries in row-major order");
        Eigen::MatrixXcd Am(n, n);
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c) Am(r, c) = complex_pair(A[r * n + c], "symbol.psi.A");
        const Point b = point(B, n, "symbol.psi.B");
        Eigen::VectorXcd Bv(n);
        for (int k = 0; k < n; ++k) Bv(k) = b[k];
        return SymbolPair(u, AffineMap(Am, Bv));
    }
    if (kind == "poly") {
        only_keys(psi, {"kind", "coords"}, "symbol.psi");
        const json& cs = need(psi, "coords", "symbol.psi");
        if (!cs.is_array() || cs.size() != static_cast<std::size_t>(n)) throw ConfigError("symbol.psi.coords", "expected n polynomial records");
        PolynomialMap pm;
        for (int k = 0; k < n; ++k) pm.coords.push_back(parse_polynomial(cs[k], n, "symbol.psi.coords[" + std::to_string(k) + "]"));
        return SymbolPair(u, pm);
    }
    throw ConfigError("symbol.psi.kind", "expected \"affine\" or \"poly\"");
}

inline json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError(path, "cannot open for reading");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(path, std::string("invalid JSON: ") + e.what());
    }
}

inline void write_file(const std::string& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(path, "cannot open for writing");
    out << bytes;
    out.flush();
    if (!out) throw IoError(path, "write failed");
}

/// Resolved configuration echoed as the first record of every report.
inline Record config_record(const ScenarioConfig& cfg) {
    Record r;
    r["record"] = "config";
    r["command"] = cfg.command;
    Record p = params_record(cfg.params);
    p["r"] = cfg.r;
    p["t"] = cfg.t > 0.0 ? Record(cfg.t) : (cfg.params.q_infinite() ? Record("inf") : Record(cfg.params.q));
    p["domain_radius"] = cfg.domain_radius;
    r["params"] = std::move(p);
    r["measure"] = cfg.measure ? Record::parse(cfg.measure->dump()) : Record(nullptr);
    r["function"] = cfg.function ? Record::parse(cfg.function->dump()) : Record(nullptr);
    r["symbol"] = cfg.symbol ? Record::parse(cfg.symbol->dump()) : Record(nullptr);
    r["tail_tol"] = cfg.tail_tol.value_or(1e-12);
    r["cells"] = cfg.cells ? Record(*cfg.cells) : Record("auto");
    r["radii"] = fock::detail::num_array(cfg.radii);
    r["seed"] = cfg.seed;
    r["format"] = cfg.format == ReportFormat::csv ? "csv" : "json-lines";
    return r;
}

namespace detail {

inline NormOptions norm_options(const ScenarioConfig& cfg) {
    NormOptions o;
    if (cfg.tail_tol) o.tail_tol = *cfg.tail_tol;
    if (cfg.cells) o.cells = *cfg.cells;
    return o;
}

inline CompopOptions compop_options(const ScenarioConfig& cfg) {
    CompopOptions o;
    if (cfg.tail_tol) o.tail_tol = *cfg.tail_tol;
    if (cfg.cells) o.cells = *cfg.cells;
    o.seed = cfg.seed;
    return o;
}

inline double resolved_t(const ScenarioConfig& cfg) { return cfg.t > 0.0 ? cfg.t : cfg.params.q; }

inline std::vector<Record> run_lattice(const ScenarioConfig& cfg) {
    const Lattice lat = make_lattice(cfg.domain_radius, cfg.r, cfg.params.n);
    constexpr std::size_t kProbes = 100000;
    const LatticeReport rep = verify_lattice(lat, kProbes, cfg.seed);
    Rng rng(cfg.seed ^ 0x9e3779b97f4a7c15ull);
    std::vector<Point> probes;
    for (int i = 0; i < 20000; ++i) probes.push_back(rng.in_ball(Point::origin(cfg.params.n), cfg.domain_radius));
    const std::size_t mult = covering_multiplicity(lat, 2.0 * cfg.r, probes);
    return {lattice_record(lat), lattice_report_record(rep, kProbes, cfg.seed, mult)};
}

inline std::vector<Record> run_carleson(const ScenarioConfig& cfg) {
    if (!cfg.measure) throw ConfigError("measure", "the carleson command needs --measure");
    if (cfg.params.q_infinite()) throw ConfigError("params.q", "Carleson classification needs finite q");
    const Measure mu = parse_measure(*cfg.measure, cfg.params.n);
    CarlesonOptions opt;
    if (cfg.tail_tol) opt.criteria.tail_tol = *cfg.tail_tol;
    opt.norms = norm_options(cfg);
    opt.radii = cfg.radii;
    opt.family.seed = cfg.seed;
    return carleson_records(classify_carleson(mu, cfg.params, resolved_t(cfg), cfg.r, opt));
}

inline std::vector<Record> run_compop(const ScenarioConfig& cfg) {
    if (!cfg.symbol) throw ConfigError("symbol", "the compop command needs --symbol");
    const SymbolPair sym = parse_symbol(*cfg.symbol, cfg.params.n);
    const CompopOptions opt = compop_options(cfg);
    const CompOpVerdict v = classify_compop(sym, cfg.params, cfg.radii, opt);
    std::optional<DirectNormResult> direct;
    if (!cfg.params.p_infinite() && !cfg.params.q_infinite()) direct = direct_operator_norm(sym, cfg.params, opt, norm_options(cfg));
    return {compop_record(v, direct)};
}

inline std::vector<Record> run_verify_norms(const ScenarioConfig& cfg) {
    if (!cfg.function) throw ConfigError("function", "the verify-norms command needs --function");
    const EntireFunction f = parse_function(*cfg.function, cfg.params.n);
    const Params& P = cfg.params;
    const ScaledFn g = [&f, &P](const Point& z) { return f.eval_scaled(z, P.alpha, P.m); };
    const NormResult nr = weighted_norm(g, P.alpha, P.p, P.m, P.n, window_of(f, P.n), norm_options(cfg));
    if (nr.divergent) throw NonIntegrable("function: norm integrand grows with the truncation radius");
    Record r;
    r["record"] = "norm";
    r["kind"] = f.is_polynomial() ? "poly" : "kernel";
    r["value"] = fock::detail::num(nr.value);
    r["error_estimate"] = fock::detail::num(nr.error_estimate);
    std::vector<Point> samples;
    Rng rng(cfg.seed);
    for (int i = 0; i < 2000; ++i) samples.push_back(rng.in_ball(Point::origin(P.n), 6.0));
    r["pointwise_bound_ratio"] = nr.value > 0.0 ? fock::detail::num(pointwise_bound_ratio(f, P, samples, nr.value)) : Record(nullptr);
    if (f.is_polynomial() && P.m > 0) {
        const double dn = derivative_norm(f, P, norm_options(cfg));
        r["derivative_norm"] = fock::detail::num(dn);
        r["derivative_ratio"] = nr.value > 0.0 ? fock::detail::num(dn / nr.value) : Record(nullptr);
    }
    return {r};
}

inline std::vector<Record> run_suite_command(const ScenarioConfig& cfg) {
    if (cfg.params.n != 1) throw ConfigError("params.n", "the composition suite is defined for n = 1");
    SuiteOptions opt;
    opt.radii = cfg.radii;
    opt.compop = compop_options(cfg);
    opt.norms = norm_options(cfg);
    opt.t = cfg.t;
    opt.r = cfg.r;
    std::vector<Record> out;
    for (const auto& s : run_suite(cfg.params, opt)) out.push_back(suite_record(s));
    return out;
}

} // namespace detail

struct RunOutcome {
    int exit_code = kOk;
    std::string report;       ///< emitted bytes (also written to out_path when set)
    std::optional<Record> error;
};

inline Record error_record(const char* kind, const std::string& field, const std::string& message) {
    Record r;
    r["record"] = "error";
    r["kind"] = kind;
    r["field"] = field;
    r["message"] = message;
    return r;
}

/// Runs one scenario. Verdicts of any kind exit 0; config, IO and divergence errors
/// come back as a nonzero code plus an error record.
inline RunOutcome run_scenario(const ScenarioConfig& cfg) {
    RunOutcome res;
    try {
        if (std::find(commands().begin(), commands().end(), cfg.command) == commands().end())
            throw ConfigError("command", "unknown command \"" + cfg.command + "\"");
        try {
            cfg.params.validate();
        } catch (const InvalidArgument& e) {
            throw ConfigError("params." + e.field(), e.what());
        }
        if (cfg.tail_tol && !(*cfg.tail_tol > 0.0 && *cfg.tail_tol < 1.0)) throw ConfigError("tail_tol", "must be in (0, 1)");
        if (cfg.cells && *cfg.cells < 4) throw ConfigError("cells", "must be at least 4");
        if (cfg.radii.empty()) throw ConfigError("radii", "must not be empty");
        for (double R : cfg.radii)
            if (!(R > 0.0) || !std::isfinite(R)) throw ConfigError("radii", "entries must be positive and finite");
        if (!std::is_sorted(cfg.radii.begin(), cfg.radii.end())) throw ConfigError("radii", "must be increasing");

        std::vector<Record> records{config_record(cfg)};
        std::vector<Record> body;
        if (cfg.command == "lattice") body = detail::run_lattice(cfg);
        else if (cfg.command == "carleson") body = detail::run_carleson(cfg);
        else if (cfg.command == "compop") body = detail::run_compop(cfg);
        else if (cfg.command == "verify-norms") body = detail::run_verify_norms(cfg);
        else body = detail::run_suite_command(cfg);

        if (cfg.format == ReportFormat::csv) {
            res.report = "# config=" + records.front().dump() + "\n" + emit_report(body, ReportFormat::csv);
        } else {
            for (auto& r : body) records.push_back(std::move(r));
            res.report = emit_report(records, ReportFormat::json_lines);
        }
        if (!cfg.out_path.empty()) write_file(cfg.out_path, res.report);
    } catch (const ConfigError& e) {
        res = {kConfigError, "", error_record("config", e.field(), e.what())};
    } catch (const InvalidArgument& e) {
        res = {kConfigError, "", error_record("config", e.field(), e.what())};
    } catch (const IoError& e) {
        res = {kIoError, "", error_record("io", e.path(), e.what())};
    } catch (const NonIntegrable& e) {
        res = {kDivergence, "", error_record("divergence", "function", e.what())};
    } catch (const Overflow& e) {
        res = {kDivergence, "", error_record("divergence", "function", e.what())};
    }
    return res;
}

} // namespace fock::cli
