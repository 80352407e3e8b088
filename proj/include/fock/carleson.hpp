#pragma once

// (p,q) Fock-Carleson classification: embedding ratios, the criteria for the
// three exponent regimes, vanishing profiles and comparability bands.

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fock/error.hpp"
#include "fock/funcspace.hpp"
#include "fock/geometry.hpp"
#include "fock/measures.hpp"
#include "fock/quadrature.hpp"

namespace fock {

/// A measure together with how it changes when its truncation is enlarged by a factor.
/// Used for the finite/infinite decision: criteria are recomputed at factor 1.5.
struct MeasureFamily {
    std::function<Measure(double)> build;
    /// False when enlarging the truncation cannot change the measure (finite atom lists).
    bool grows = true;

    static MeasureFamily of(const Measure& mu) {
        if (mu.is_atomic()) return {[mu](double) { return mu; }, false};
        return {[mu](double f) { return mu.with_truncation_factor(f); }, true};
    }
};

enum class CarlesonRegime { p_le_q, q_lt_p, p_infinite };

inline const char* regime_name(CarlesonRegime r) {
    switch (r) {
    case CarlesonRegime::p_le_q: return "p<=q";
    case CarlesonRegime::q_lt_p: return "q<p";
    case CarlesonRegime::p_infinite: return "p=inf";
    }
    return "?";
}

inline CarlesonRegime regime_of(double p, double q) {
    if (std::isinf(q)) throw InvalidArgument("q", "Carleson classification needs a finite q");
    if (std::isinf(p)) return CarlesonRegime::p_infinite;
    return p <= q ? CarlesonRegime::p_le_q : CarlesonRegime::q_lt_p;
}

/// Norm exponent of the criterion fields in a regime: inf, p/(p-q) or 1.
inline double criterion_exponent(double p, double q) {
    switch (regime_of(p, q)) {
    case CarlesonRegime::p_le_q: return kInf;
    case CarlesonRegime::q_lt_p: return p / (p - q);
    case CarlesonRegime::p_infinite: return 1.0;
    }
    return kInf;
}

struct CriterionEntry {
    std::string name;
    double value = 0.0;
    bool divergent = false;
};

struct CriterionOptions {
    double tail_tol = 1e-12;
    /// Outer grid step for field norms; 0 selects 0.25 (n = 1) or 0.5 (n >= 2).
    double step = 0.0;
    /// Lattice for the averaging sequence; built from the support when absent.
    std::optional<Lattice> lattice;
};

namespace detail {

inline double field_step(int n, double step) { return step > 0.0 ? step : density_step(n); }

/// L^p norm (p >= 1) or sup (p = inf) of fn over the ball {|z| <= radius}.
inline double field_norm(const ScalarField::Fn& fn, int n, double p, double radius, double step) {
    radius = std::max(radius, step);
    if (std::isinf(p)) return grid_sup(fn, Point::origin(n), radius, step).value;
    const int cells = 2 * static_cast<int>(std::ceil(radius / step));
    const double half = cells * step / 2.0;
    auto powered = [&](const Point& z) {
        if (z.norm2() > (radius + step) * (radius + step)) return 0.0;
        const double v = fn(z);
        return v == 0.0 ? 0.0 : std::pow(v, p);
    };
    const double total = midpoint_sum(powered, Point::origin(n), half, cells);
    return std::pow(std::max(total, 0.0), 1.0 / p);
}

inline Lattice support_lattice(const Measure& mu, double r) {
    const double dom = std::max(2.0 * r, mu.support_radius() + 2.0 * r);
    return make_lattice(dom, r, mu.dim());
}

} // namespace detail

/// The three criterion quantities of one measure for exponent p_exp, all with weight s:
/// norms of the Berezin field mu~_(t,s), of the averaging field mu_(s,r,D), and of the
/// averaging sequence on a lattice; p_exp = 1 adds the weighted total mass.
struct CriterionValues {
    double berezin = 0.0;
    double averaging = 0.0;
    double sequence = 0.0;
    double total_mass = 0.0;
};

inline CriterionValues criterion_values(const Measure& mu, double s, double r, double t, double alpha, double p_exp,
                                        const CriterionOptions& opt = {}) {
    const int n = mu.dim();
    const double step = detail::field_step(n, opt.step);
    const double support = mu.support_radius();
    CriterionValues out;
    const double reach = berezin_reach(t, alpha, n, opt.tail_tol);
    out.berezin = detail::field_norm([&](const Point& w) { return berezin_value(mu, t, s, alpha, w, opt.tail_tol); }, n, p_exp,
                                     support + reach, step);
    out.averaging = detail::field_norm([&](const Point& z) { return averaging_value(mu, s, r, z); }, n, p_exp, support + r, step);
    const Lattice lat = opt.lattice ? *opt.lattice : detail::support_lattice(mu, r);
    out.sequence = sequence_lp(averaging_sequence(mu, s, r, lat), p_exp);
    if (p_exp == 1.0) out.total_mass = total_weighted_mass(mu, s);
    return out;
}

/// Criterion values with the truncation-growth test applied per entry: each value is
/// recomputed with the family enlarged by 1.5 (and 2.25 when needed) and judged by
/// growth_diverges; divergent entries become +inf.
inline std::vector<CriterionEntry> checked_criteria(const MeasureFamily& fam, double s, double r, double t, double alpha,
                                                    double p_exp, const CriterionOptions& opt = {}) {
    const std::string suffix = std::isinf(p_exp) ? "sup" : (p_exp == 1.0 ? "L1" : "Lp");
    std::vector<CriterionEntry> out{{"berezin_" + suffix, 0, false},
                                    {"averaging_" + suffix, 0, false},
                                    {"sequence_" + std::string(std::isinf(p_exp) ? "sup" : (p_exp == 1.0 ? "l1" : "lp")), 0, false}};
    if (p_exp == 1.0) out.push_back({"total_weighted_mass", 0, false});

    // measure at factor f; nullopt when the family overflows there
    std::map<double, std::optional<Measure>> measures;
    auto measure_at = [&](double f) -> const std::optional<Measure>& {
        auto it = measures.find(f);
        if (it != measures.end()) return it->second;
        std::optional<Measure> mu;
        try {
            mu = fam.build(f);
        } catch (const Overflow&) {
            mu.reset();
        }
        return measures.emplace(f, std::move(mu)).first->second;
    };
    std::map<double, Lattice> lattices;
    auto lattice_at = [&](double f) -> const Lattice& {
        auto it = lattices.find(f);
        if (it != lattices.end()) return it->second;
        Lattice lat = opt.lattice ? (f == 1.0 ? *opt.lattice : make_lattice(opt.lattice->domain_radius * f, opt.lattice->separation, opt.lattice->dim))
                                  : detail::support_lattice(*measure_at(f), r);
        return lattices.emplace(f, std::move(lat)).first->second;
    };
    std::map<double, std::optional<std::vector<double>>> cache;
    auto values_at = [&](double f) -> const std::optional<std::vector<double>>& {
        auto it = cache.find(f);
        if (it != cache.end()) return it->second;
        std::optional<std::vector<double>> vals;
        if (const auto& mu = measure_at(f)) {
            try {
                CriterionOptions o = opt;
                o.lattice = lattice_at(f);
                const CriterionValues c = criterion_values(*mu, s, r, t, alpha, p_exp, o);
                vals = std::vector<double>{c.berezin, c.averaging, c.sequence, c.total_mass};
            } catch (const Overflow&) {
                vals.reset();
            }
        }
        return cache.emplace(f, std::move(vals)).first->second;
    };
    // Lattices built for different truncations are not nested, so sequence values are
    // compared on the lattice of the larger factor.
    auto sequence_on = [&](double f, double lattice_f) {
        const auto& mu = measure_at(f);
        if (!mu) return kInf;
        try {
            return sequence_lp(averaging_sequence(*mu, s, r, lattice_at(lattice_f)), p_exp);
        } catch (const Overflow&) {
            return kInf;
        }
    };

    const auto& base = values_at(1.0);
    if (!base) {
        for (auto& e : out) e = {e.name, kInf, true};
        return out;
    }
    for (std::size_t i = 0; i < out.size(); ++i) out[i].value = (*base)[i];
    for (std::size_t i = 0; i < out.size(); ++i) {
        bool div = !std::isfinite((*base)[i]);
        if (!div && fam.grows) {
            const auto& mid = values_at(kGrowthFactor);
            constexpr double kFar = kGrowthFactor * kGrowthFactor;
            if (!mid) {
                div = true;
            } else if (i == 2) {
                const bool fires = growth_diverges(sequence_on(1.0, kGrowthFactor), (*mid)[i], [] { return kInf; });
                div = fires && (!measure_at(kFar) || growth_diverges(sequence_on(1.0, kFar), sequence_on(kGrowthFactor, kFar), [&] {
                          const auto& far = values_at(kFar);
                          return far ? (*far)[i] : kInf;
                      }));
            } else {
                div = growth_diverges((*base)[i], (*mid)[i], [&] {
                    const auto& far = values_at(kFar);
                    return far ? (*far)[i] : kInf;
                });
            }
        }
        if (div) out[i] = {out[i].name, kInf, true};
    }
    return out;
}

/// Numerator of the embedding ratio, (int |f|^q e^(-alpha q |z|^2 / 2) dmu)^(1/q).
inline double embedding_numerator(const Measure& mu, const EntireFunction& f, const Params& params) {
    const double q = params.q;
    auto log_integrand = [&](const Point& z) {
        const ScaledValue v = f.eval_scaled(z, params.alpha, params.m);
        const double mag = std::abs(v.mantissa);
        if (mag == 0.0) return -kInf;
        return q * (std::log(mag) + v.log_scale) - params.alpha * q * z.norm2() / 2.0;
    };
    double total = 0.0;
    if (mu.is_atomic()) {
        std::vector<double> terms;
        terms.reserve(mu.atoms().size());
        for (const auto& a : mu.atoms()) terms.push_back(a.weight * std::exp(std::min(log_integrand(a.location), kLogOverflowCap)));
        total = pairwise_sum(terms);
    } else {
        const Density& d = mu.density();
        const int n = mu.dim();
        const double h = detail::density_step(n);
        const int cells = 2 * static_cast<int>(std::ceil(d.truncation / h));
        total = detail::midpoint_sum(
            [&](const Point& z) {
                const double g = d(z);
                if (g == 0.0) return 0.0;
                return g * std::exp(std::min(log_integrand(z), kLogOverflowCap));
            },
            Point::origin(n), cells * h / 2.0, cells);
    }
    return std::pow(total, 1.0 / q);
}

/// (int |f|^q e^(-alpha q |z|^2/2) dmu)^(1/q) / ||f||_(p,m)
inline double embedding_ratio(const Measure& mu, const EntireFunction& f, const Params& params, const NormOptions& opt = {}) {
    params.validate();
    if (params.q_infinite()) throw InvalidArgument("q", "embedding ratio needs a finite q");
    const double norm = fock_sobolev_norm(f, params, opt);
    if (!(norm > 0.0)) throw InvalidArgument("f", "test function has zero norm");
    return embedding_numerator(mu, f, params) / norm;
}

struct TestFamilySpec {
    double kernel_radius = 4.0;
    /// Grid step of the kernel centers; 0 selects 0.5 (n = 1) or 2 (n >= 2).
    double kernel_step = 0.0;
    int max_monomial_degree = 6;
    int random_combos = 20;
    int combo_terms = 3;
    std::uint64_t seed = 0x7e57fa11ull;
};

/// Kernel centers of the test family: the grid of the given step inside {|w| <= radius}.
inline std::vector<Point> kernel_grid(int n, double radius, double step) {
    std::vector<Point> out;
    const int per = static_cast<int>(std::floor(radius / step + 1e-9));
    const int side = 2 * per + 1;
    std::size_t total = 1;
    for (int k = 0; k < 2 * n; ++k) total *= static_cast<std::size_t>(side);
    for (std::size_t idx = 0; idx < total; ++idx) {
        Point w(n);
        std::size_t rest = idx;
        for (int k = 2 * n - 1; k >= 0; --k) {
            w.set_real_coord(k, (static_cast<int>(rest % side) - per) * step);
            rest /= side;
        }
        if (w.norm() <= radius + 1e-12) out.push_back(w);
    }
    return out;
}

struct LowerBoundResult {
    double value = 0.0;
    bool divergent = false;
    std::size_t family_size = 0;
};

/// Max embedding ratio over k_w, xi_(w,m), monomials and seeded kernel combinations.
/// Each numerator gets the truncation-growth test through the measure family.
inline LowerBoundResult carleson_lower_bound(const MeasureFamily& fam, const Params& params, const TestFamilySpec& spec = {},
                                             const NormOptions& opt = {}) {
    params.validate();
    const int n = params.n;
    std::optional<Measure> base, big, far;
    try {
        base = fam.build(1.0);
        if (fam.grows) big = fam.build(kGrowthFactor);
    } catch (const Overflow&) {
        return {kInf, true, 0};
    }
    bool far_overflow = false;
    auto far_measure = [&]() -> const Measure* {
        if (!far && !far_overflow) {
            try {
                far = fam.build(kGrowthFactor * kGrowthFactor);
            } catch (const Overflow&) {
                far_overflow = true;
            }
        }
        return far ? &*far : nullptr;
    };
    if (base->is_atomic() && base->atoms().empty() && !fam.grows) return {0.0, false, 0};

    std::vector<EntireFunction> family;
    const double step = spec.kernel_step > 0.0 ? spec.kernel_step : (n == 1 ? 0.5 : 2.0);
    for (const auto& w : kernel_grid(n, spec.kernel_radius, step)) {
        family.push_back(EntireFunction::normalized_kernel(w));
        if (params.m > 0) family.push_back(EntireFunction::xi(w));
    }
    for (const auto& beta : multi_indices_up_to(n, spec.max_monomial_degree)) family.push_back(EntireFunction::monomial(n, beta));
    if (spec.random_combos > 0) {
        const Lattice lat = make_lattice(spec.kernel_radius, 1.0, n);
        Rng rng(spec.seed);
        for (int c = 0; c < spec.random_combos; ++c) {
            KernelCombo combo{n, {}};
            for (int k = 0; k < spec.combo_terms; ++k) {
                const auto& w = lat.centers[rng.next() % lat.centers.size()];
                combo.terms.push_back({w, cplx(rng.normal(), rng.normal()), true, false});
            }
            family.emplace_back(combo);
        }
    }

    // ||k_w|| and ||xi_w|| depend on |w| only; norms are cached per (kind, |w|).
    std::map<std::pair<int, long long>, double> radial_cache;
    auto norm_of = [&](const EntireFunction& f) {
        const auto& rep = f.rep();
        if (const auto* k = std::get_if<KernelCombo>(&rep); k && k->terms.size() == 1 && k->terms[0].coeff == cplx(1.0)) {
            const auto& t = k->terms[0];
            const long long key = std::llround(t.center.norm() * 1e9);
            const int kind = (t.normalized ? 1 : 0) + (t.sobolev_scaled ? 2 : 0);
            auto it = radial_cache.find({kind, key});
            if (it != radial_cache.end()) return it->second;
            Point axis(n);
            axis[0] = t.center.norm();
            KernelCombo rotated{n, {{axis, 1.0, t.normalized, t.sobolev_scaled}}};
            const double v = fock_sobolev_norm(EntireFunction(rotated), params, opt);
            radial_cache[{kind, key}] = v;
            return v;
        }
        return fock_sobolev_norm(f, params, opt);
    };

    LowerBoundResult res;
    res.family_size = family.size();
    for (const auto& f : family) {
        const double norm = norm_of(f);
        if (!(norm > 0.0)) continue;
        const double num = embedding_numerator(*base, f, params);
        if (big) {
            const double num_big = embedding_numerator(*big, f, params);
            const bool div = growth_diverges(num, num_big, [&] {
                const Measure* m3 = far_measure();
                return m3 ? embedding_numerator(*m3, f, params) : kInf;
            });
            if (div) return {kInf, true, family.size()};
        }
        if (!std::isfinite(num)) return {kInf, true, family.size()};
        res.value = std::max(res.value, num / norm);
    }
    return res;
}

struct VanishingOptions {
    /// Radial samples per shell of width r, and the angular spacing for n = 1.
    int radial_samples = 5;
    double arc_step = 0.25;
    /// Directions per radius for n >= 2.
    int directions = 256;
    std::uint64_t seed = 0x5e11ull;
};

/// Points of the shell {R <= |z| <= R + width}: polar grid for n = 1, seeded directions otherwise.
inline std::vector<Point> shell_points(int n, double R, double width, const VanishingOptions& opt = {}) {
    std::vector<Point> out;
    std::vector<Point> dirs;
    if (n > 1) {
        Rng rng(opt.seed);
        for (int k = 0; k < opt.directions; ++k) {
            Point d = rng.in_ball(Point::origin(n), 1.0);
            const double len = d.norm();
            if (len == 0.0) continue;
            d *= 1.0 / len;
            dirs.push_back(d);
        }
    }
    for (int i = 0; i < opt.radial_samples; ++i) {
        const double rho = R + width * i / std::max(1, opt.radial_samples - 1);
        if (n == 1) {
            const int angles = std::max(16, static_cast<int>(std::ceil(2.0 * std::numbers::pi * rho / opt.arc_step)));
            for (int a = 0; a < angles; ++a) out.push_back(Point{std::polar(rho, 2.0 * std::numbers::pi * a / angles)});
        } else {
            for (const auto& d : dirs) out.push_back(cplx(rho) * d);
        }
    }
    return out;
}

/// For each R, the max of mu_(s,r,D) over the shell {R <= |z| <= R + r}.
inline std::vector<double> vanishing_profile(const Measure& mu, double s, double r, std::span<const double> radii,
                                             const VanishingOptions& opt = {}) {
    for (std::size_t i = 0; i < radii.size(); ++i) {
        if (radii[i] < r) throw InvalidArgument("radii", "radii must be at least r");
        if (i > 0 && !(radii[i] > radii[i - 1])) throw InvalidArgument("radii", "radii must be increasing");
    }
    std::vector<double> out;
    for (double R : radii) {
        const auto pts = shell_points(mu.dim(), R, r, opt);
        const auto vals = deterministic_map(pts.size(), [&](std::size_t i) { return averaging_value(mu, s, r, pts[i]); });
        out.push_back(vals.empty() ? 0.0 : *std::max_element(vals.begin(), vals.end()));
    }
    return out;
}

inline constexpr double kVanishingThreshold = 1e-3;

/// Profile decays: all zero, or last entry below 1e-3 of the profile max.
inline bool profile_vanishes(std::span<const double> profile) {
    if (profile.empty()) return false;
    const double peak = *std::max_element(profile.begin(), profile.end());
    if (peak == 0.0) return true;
    return profile.back() < kVanishingThreshold * peak;
}

/// Max pairwise ratio of a set of nonnegative values; 1 when all are zero, inf when any is
/// infinite or when zero and nonzero values mix.
inline double max_pairwise_ratio(std::span<const double> values) {
    if (values.empty()) return 1.0;
    const double hi = *std::max_element(values.begin(), values.end());
    const double lo = *std::min_element(values.begin(), values.end());
    if (!std::isfinite(hi)) return kInf;
    if (hi == 0.0) return 1.0;
    if (lo == 0.0) return kInf;
    return hi / lo;
}

struct CarlesonVerdict {
    CarlesonRegime regime = CarlesonRegime::p_le_q;
    double s = 0.0, t = 0.0, r = 1.0;
    double criterion_exponent = kInf;
    std::vector<CriterionEntry> criteria;
    double embedding_lower_bound = 0.0;
    bool lower_bound_divergent = false;
    bool is_carleson = false;
    bool is_vanishing = false;
    /// Max pairwise ratio among the criterion values.
    double criteria_band = 1.0;
    /// Max pairwise ratio among the criterion values and embedding_lower_bound^q.
    double comparability_band = 1.0;
    std::vector<double> radii;
    std::vector<double> profile;
};

struct CarlesonOptions {
    CriterionOptions criteria;
    TestFamilySpec family;
    NormOptions norms;
    bool lower_bound = true;
    std::vector<double> radii{2, 3, 4, 5, 6};
    VanishingOptions vanishing;
};

inline CarlesonVerdict classify_carleson(const MeasureFamily& fam, const Params& params, double t, double r,
                                         const CarlesonOptions& opt = {}) {
    params.validate();
    if (!(t > 0.0)) throw InvalidArgument("t", "must be positive");
    if (!(r > 0.0)) throw InvalidArgument("r", "must be positive");
    CarlesonVerdict v;
    v.regime = regime_of(params.p, params.q);
    v.s = params.m * params.q;
    v.t = t;
    v.r = r;
    v.criterion_exponent = criterion_exponent(params.p, params.q);
    v.criteria = checked_criteria(fam, v.s, r, t, params.alpha, v.criterion_exponent, opt.criteria);
    v.is_carleson = std::none_of(v.criteria.begin(), v.criteria.end(), [](const auto& e) { return e.divergent; });

    std::vector<double> vals;
    for (const auto& e : v.criteria) vals.push_back(e.value);
    v.criteria_band = max_pairwise_ratio(vals);

    if (opt.lower_bound) {
        const LowerBoundResult lb = carleson_lower_bound(fam, params, opt.family, opt.norms);
        v.embedding_lower_bound = lb.value;
        v.lower_bound_divergent = lb.divergent;
        vals.push_back(std::pow(lb.value, params.q));
    }
    v.comparability_band = v.is_carleson ? max_pairwise_ratio(vals) : kInf;

    v.radii = opt.radii;
    for (std::size_t i = 0; i < v.radii.size(); ++i) {
        if (v.radii[i] < r) throw InvalidArgument("radii", "radii must be at least r");
        if (i > 0 && !(v.radii[i] > v.radii[i - 1])) throw InvalidArgument("radii", "radii must be increasing");
    }
    try {
        const Measure mu = fam.build(1.0);
        v.profile = vanishing_profile(mu, v.s, r, v.radii, opt.vanishing);
        v.is_vanishing = v.is_carleson && profile_vanishes(v.profile);
    } catch (const Overflow&) {
        v.is_vanishing = false;
    }
    return v;
}

inline CarlesonVerdict classify_carleson(const Measure& mu, const Params& params, double t, double r, const CarlesonOptions& opt = {}) {
    return classify_carleson(MeasureFamily::of(mu), params, t, r, opt);
}

} // namespace fock
