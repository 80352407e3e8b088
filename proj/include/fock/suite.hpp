#pragma once

// The built-in eight-scenario composition suite (n = 1) and its expected verdicts.

#include <optional>
#include <string>
#include <vector>

#include "fock/carleson.hpp"
#include "fock/compop.hpp"

namespace fock {

struct SuiteScenario {
    std::string name;
    SymbolPair symbol;
    bool expect_bounded = false;
    bool expect_compact = false;
};

inline std::vector<SuiteScenario> composition_suite() {
    const auto one = EntireFunction::constant(1, 1.0);
    const auto zero = EntireFunction::constant(1, 0.0);
    const cplx rot = std::polar(1.0, std::numbers::pi / 3.0);
    return {
        {"identity", SymbolPair(one, AffineMap::identity(1)), true, false},
        {"half", SymbolPair(one, AffineMap::scalar(0.5, 0.0)), true, true},
        {"rotation", SymbolPair(one, AffineMap::scalar(rot, 0.0)), true, false},
        {"double", SymbolPair(one, AffineMap::scalar(2.0, 0.0)), false, false},
        {"shift", SymbolPair(one, AffineMap::scalar(1.0, 1.0)), false, false},
        {"square", SymbolPair(one, PolynomialMap{{Polynomial::monomial(1, {2})}}), false, false},
        {"zero_weight", SymbolPair(zero, AffineMap::identity(1)), true, true},
        {"kernel_weight_half", SymbolPair(EntireFunction::kernel(Point{1.0}), AffineMap::scalar(0.5, 0.0)), true, true},
    };
}

struct SuiteOptions {
    std::vector<double> radii{2, 3, 4, 5, 6};
    CompopOptions compop;
    NormOptions norms;
    /// Pull-back cube radius and cell step for the Carleson cross-check; pullback off when radius <= 0.
    double pullback_radius = 3.0;
    double pullback_step = 0.125;
    double t = 0.0; ///< 0 selects t = q
    double r = 1.0;
};

struct SuiteResult {
    std::string name;
    bool expect_bounded = false;
    bool expect_compact = false;
    CompOpVerdict verdict;
    DirectNormResult direct;
    /// Max of direct/estimate and estimate/direct when both are finite and positive.
    std::optional<double> norm_band;
    std::optional<bool> pullback_is_carleson;
};

inline SuiteResult run_suite_scenario(const SuiteScenario& sc, const Params& params, const SuiteOptions& opt = {}) {
    SuiteResult res;
    res.name = sc.name;
    res.expect_bounded = sc.expect_bounded;
    res.expect_compact = sc.expect_compact;
    res.verdict = classify_compop(sc.symbol, params, opt.radii, opt.compop);
    res.direct = direct_operator_norm(sc.symbol, params, opt.compop, opt.norms);
    const double est = res.verdict.norm_estimate, dir = res.direct.value;
    if (std::isfinite(est) && std::isfinite(dir) && est > 0.0 && dir > 0.0) res.norm_band = std::max(est / dir, dir / est);
    if (opt.pullback_radius > 0.0 && !params.q_infinite()) {
        CarlesonOptions copt;
        copt.lower_bound = false;
        const double t = opt.t > 0.0 ? opt.t : params.q;
        const auto fam = pullback_family(sc.symbol, params, opt.pullback_radius, opt.pullback_step);
        res.pullback_is_carleson = classify_carleson(fam, params, t, opt.r, copt).is_carleson;
    }
    return res;
}

inline std::vector<SuiteResult> run_suite(const Params& params, const SuiteOptions& opt = {}) {
    if (params.n != 1) throw InvalidArgument("n", "the composition suite is defined for n = 1");
    std::vector<SuiteResult> out;
    for (const auto& sc : composition_suite()) out.push_back(run_suite_scenario(sc, params, opt));
    return out;
}

} // namespace fock
