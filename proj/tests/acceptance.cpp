#include <chrono>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "fock/carleson.hpp"
#include "fock/compop.hpp"
#include "fock/report.hpp"
#include "fock/suite.hpp"

using namespace fock;

namespace {

constexpr double kPi = std::numbers::pi;

double rel(double got, double want) { return std::abs(got - want) / std::abs(want); }

struct Check {
    bool ok = true;
    std::ostringstream notes;
    void expect(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            notes << " [" << what << "]";
        }
    }
};

ScalarField gaussian_field(int n, double c, const Point& w) {
    return ScalarField(n, [c, w](const Point& z) { return std::exp(-c * distance2(z, w)); }, {0.0, c, std::nullopt, w});
}

Point first_axis(int n, double x) {
    Point p = Point::origin(n);
    p[0] = x;
    return p;
}

Measure lattice_atoms() {
    std::vector<Atom> atoms;
    for (const auto& c : make_lattice(6.0, 1.0, 1).centers) atoms.push_back({c, 1.0});
    return Measure::atomic(1, atoms);
}

const CriterionEntry* find(const CarlesonVerdict& v, const std::string& name) {
    for (const auto& e : v.criteria)
        if (e.name == name) return &e;
    return nullptr;
}

void c1(Check& ck) {
    double worst1 = 0.0, worst2 = 0.0, slowest = 0.0;
    for (int n : {1, 2})
        for (double c : {0.5, 1.0, 2.0})
            for (double w : {0.0, 2.0}) {
                const auto t0 = std::chrono::steady_clock::now();
                const ScalarField f = gaussian_field(n, c, first_axis(n, w));
                const double v = integrate_gaussian(f, make_scheme(f)).value;
                slowest = std::max(slowest, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
                (n == 1 ? worst1 : worst2) = std::max(n == 1 ? worst1 : worst2, rel(v, std::pow(kPi / c, n)));
            }
    ck.expect(worst1 <= 1e-6, "n=1 error");
    ck.expect(worst2 <= 1e-4, "n=2 error");
    ck.expect(slowest < 5.0, "per-integral time");
    ck.notes << " rel_err n1=" << worst1 << " n2=" << worst2 << " slowest=" << slowest << "s";
}

void c2(Check& ck) {
    double worst = 0.0;
    for (double p : {1.0, 2.0, 4.0}) {
        for (int m : {0, 1, 2}) worst = std::max(worst, std::abs(fock_sobolev_norm(EntireFunction::constant(1, 1.0), Params{1, 1.0, m, p, p}) - 1.0));
        for (double r : {0.0, 1.0, 2.0}) {
            const Point w{std::polar(r, 0.7)};
            const Params P{1, 1.0, 0, p, p};
            worst = std::max(worst, std::abs(fock_sobolev_norm(EntireFunction::normalized_kernel(w), P) - 1.0));
            worst = std::max(worst, rel(fock_sobolev_norm(EntireFunction::kernel(w), P), std::exp(r * r / 2.0)));
        }
    }
    ck.expect(worst <= 1e-5, "norm identity");
    ck.notes << " worst_dev=" << worst;
}

void c3(Check& ck) {
    for (int n : {1, 2})
        for (double r : {0.5, 1.0}) {
            const Lattice lat = make_lattice(6.0, r, n);
            const LatticeReport rep = verify_lattice(lat, 100000, 20240601);
            Rng rng(20240601 + n);
            std::vector<Point> probes;
            for (int i = 0; i < 20000; ++i) probes.push_back(rng.in_ball(Point::origin(n), 6.0));
            const std::size_t mult = covering_multiplicity(lat, 2.0 * r, probes);
            const std::string tag = "n=" + std::to_string(n) + " r=" + std::to_string(r).substr(0, 3);
            ck.expect(rep.min_pair_distance >= r, tag + " separation");
            ck.expect(rep.uncovered_probe_count == 0, tag + " covering");
            ck.expect(static_cast<double>(mult) <= std::pow(5.0, 2 * n), tag + " multiplicity");
            ck.notes << " " << tag << ":centers=" << lat.centers.size() << ",N_max=" << mult;
        }
}

void c4(Check& ck) {
    const std::vector<std::pair<std::string, Measure>> suite{{"lattice_atoms", lattice_atoms()},
                                                             {"gaussian", Measure::gaussian(1, 1.0, 8.0)},
                                                             {"lebesgue", Measure::lebesgue(1, 8.0)},
                                                             {"polygrowth", Measure::polygrowth(1, 2.0, 8.0)}};
    double worst = 0.0;
    for (const auto& [name, mu] : suite)
        for (double s : {0.0, 2.0})
            for (double p : {1.0, 2.0, kInf}) {
                const CriterionValues c = criterion_values(mu, s, 1.0, 2.0, 1.0, p);
                const double band = max_pairwise_ratio(std::vector<double>{c.berezin, c.averaging, c.sequence});
                worst = std::max(worst, band);
                ck.expect(band <= 100.0, name + " s=" + std::to_string(int(s)) + " p=" + std::to_string(p));
                std::printf("  c4 %-13s s=%g p=%-3g band=%.4g\n", name.c_str(), s, p, band);
            }
    ck.notes << " worst_band=" << worst;
}

void c5(Check& ck) {
    const Params P22{1, 1.0, 0, 2.0, 2.0}, P42{1, 1.0, 0, 4.0, 2.0};
    const Measure leb = Measure::lebesgue(1, 10.0);
    ck.expect(classify_carleson(leb, P22, 2.0, 1.0).is_carleson, "lebesgue (2,2)");
    ck.expect(!classify_carleson(leb, P42, 2.0, 1.0).is_carleson, "lebesgue not (4,2)");
    CarlesonOptions o;
    o.lower_bound = false;
    for (const Params& P : {P22, P42})
        ck.expect(classify_carleson(Measure::gaussian(1, 1.0, 8.0), P, 2.0, 1.0, o).is_vanishing, "gaussian vanishing p=" + std::to_string(P.p));
    const Measure d = Measure::dirac(Point::origin(1));
    for (double p : {2.0, 4.0, kInf}) {
        const CarlesonVerdict v = classify_carleson(d, Params{1, 1.0, 0, p, 2.0}, 2.0, 1.0, o);
        ck.expect(v.is_carleson, "dirac p=" + std::to_string(p));
        if (std::isinf(p)) {
            const CriterionEntry* e = find(v, "total_weighted_mass");
            ck.expect(e && e->value == 1.0, "dirac total mass");
        }
    }
}

struct SuiteRuns {
    std::vector<SuiteResult> m0, m1;
};

void c6(Check& ck, SuiteRuns& runs) {
    const SymbolPair half(EntireFunction::constant(1, 1.0), AffineMap::scalar(0.5, 0.0));
    const Params P0{1, 1.0, 0, 2.0, 2.0};
    for (double w : {0.0, 2.0}) {
        const double want = kPi * std::exp(-0.75 * w * w);
        const double got = berezin_compop(half, P0, Point{cplx{w, 0.0}}).value;
        ck.expect(rel(got, want) <= 1e-4, "half transform w=" + std::to_string(w));
    }
    for (int m : {0, 1}) {
        auto& res = m == 0 ? runs.m0 : runs.m1;
        res = run_suite(Params{1, 1.0, m, 2.0, 2.0});
        double band = 0.0;
        for (const auto& r : res) {
            const std::string tag = r.name + " m=" + std::to_string(m);
            ck.expect(r.verdict.bounded == r.expect_bounded && r.verdict.compact == r.expect_compact, tag + " verdict");
            if (r.norm_band) {
                band = std::max(band, *r.norm_band);
                ck.expect(*r.norm_band <= 20.0, tag + " band");
            }
            if (r.name == "identity") ck.expect(std::abs(r.direct.value - 1.0) <= 1e-9, tag + " direct norm");
            if (r.name == "double") ck.expect(r.direct.exceeded_cap || r.direct.value > 1e3, tag + " probe ratio");
            if (r.name == "shift")
                ck.expect(r.verdict.symbol_check && !r.verdict.symbol_check->admissible_bounded && !r.verdict.symbol_check->witnesses.empty(),
                          tag + " witness");
            if (r.name == "square") ck.expect(r.verdict.outside_corollary_scope && !r.verdict.bounded, tag + " flag");
            if (r.name == "zero_weight") ck.expect(r.verdict.norm_estimate == 0.0, tag + " norm 0");
            std::printf("  c6 m=%d %-19s bounded=%d compact=%d estimate=%.4g direct=%.4g band=%s\n", m, r.name.c_str(), r.verdict.bounded,
                        r.verdict.compact, r.verdict.norm_estimate, r.direct.value,
                        r.norm_band ? std::to_string(*r.norm_band).c_str() : "-");
        }
        ck.notes << " m" << m << "_band=" << band;
    }
}

void c7(Check& ck, const SuiteRuns& runs) {
    for (const auto* res : {&runs.m0, &runs.m1})
        for (const auto& r : *res)
            ck.expect(r.pullback_is_carleson && *r.pullback_is_carleson == r.verdict.bounded, r.name);
}

void c8(Check& ck) {
    const Params P{1, 1.0, 0, 2.0, 2.0};
    const std::vector<double> radii{2, 3, 4, 5, 6};
    const auto one = EntireFunction::constant(1, 1.0);
    const double half = essential_norm_estimate(SymbolPair(one, AffineMap::scalar(0.5, 0.0)), P, radii);
    const double id = essential_norm_estimate(SymbolPair(one, AffineMap::identity(1)), P, radii);
    const double zero = essential_norm_estimate(SymbolPair(EntireFunction::constant(1, 0.0), AffineMap::identity(1)), P, radii);
    ck.expect(half <= 1e-3, "half");
    ck.expect(rel(id, std::sqrt(kPi)) <= 0.02, "identity");
    ck.expect(zero == 0.0, "zero weight");
    ck.notes << " half=" << half << " identity=" << id << " zero=" << zero;
}

std::string suite_report(const std::vector<SuiteResult>& res) {
    std::vector<Record> recs;
    for (const auto& r : res) recs.push_back(suite_record(r));
    return emit_report(recs, ReportFormat::json_lines);
}

void c9(Check& ck, const SuiteRuns& runs) {
    const Params P{1, 1.0, 0, 2.0, 2.0};
    const std::string first = suite_report(runs.m0);
    const int saved = thread_count();
    set_thread_count(1);
    const std::string one = suite_report(run_suite(P));
    set_thread_count(4);
    const std::string four = suite_report(run_suite(P));
    set_thread_count(saved);
    ck.expect(first == one, "rerun differs");
    ck.expect(one == four, "threads 1 vs 4 differ");
    ck.notes << " bytes=" << first.size();
}

} // namespace

int main() {
    SuiteRuns runs;
    struct Criterion {
        int id;
        double budget_s;
        std::function<void(Check&)> run;
    };
    const std::vector<Criterion> criteria{
        {1, 5.0 * 12, c1},
        {2, 60.0, c2},
        {3, 30.0, c3},
        {4, 300.0, c4},
        {5, 120.0, c5},
        {6, 600.0, [&](Check& ck) { c6(ck, runs); }},
        {7, 300.0, [&](Check& ck) { c7(ck, runs); }},
        {8, 120.0, c8},
        {9, 600.0, [&](Check& ck) { c9(ck, runs); }},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        Check ck;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            c.run(ck);
        } catch (const std::exception& e) {
            ck.expect(false, std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        ck.expect(secs < c.budget_s, "over time budget");
        if (!ck.ok) ++failures;
        std::printf("criterion %d: %s (%.1fs)%s\n", c.id, ck.ok ? "PASS" : "FAIL", secs, ck.notes.str().c_str());
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
