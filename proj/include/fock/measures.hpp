#pragma once

// Positive measures on C^n: atomic lists and radial catalog densities, with ball
// masses, averaging functions/sequences, (t,s)-Berezin transforms and weighted mass.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>

#include "fock/error.hpp"
#include "fock/geometry.hpp"
#include "fock/parallel.hpp"
#include "fock/point.hpp"
#include "fock/quadrature.hpp"

namespace fock {

struct Atom {
    Point location;
    double weight = 0.0;
};

enum class DensityKind { lebesgue, gaussian, polygrowth, ring };

inline const char* density_name(DensityKind k) {
    switch (k) {
    case DensityKind::lebesgue: return "lebesgue";
    case DensityKind::gaussian: return "gaussian";
    case DensityKind::polygrowth: return "polygrowth";
    case DensityKind::ring: return "ring";
    }
    return "?";
}

/// Radial catalog density g(|z|) on {|z| <= truncation}, multiplied by scale:
///   lebesgue 1, gaussian e^(-c|z|^2), polygrowth (1+|z|)^a, ring e^(-(|z|-R0)^2/width^2).
struct Density {
    DensityKind kind = DensityKind::lebesgue;
    double c = 1.0;
    double a = 0.0;
    double center_radius = 0.0;
    double width = 1.0;
    double scale = 1.0;
    double truncation = 8.0;

    double radial(double rho) const {
        if (rho > truncation) return 0.0;
        switch (kind) {
        case DensityKind::lebesgue: return scale;
        case DensityKind::gaussian: return scale * std::exp(-c * rho * rho);
        case DensityKind::polygrowth: return scale * std::pow(1.0 + rho, a);
        case DensityKind::ring: {
            const double u = (rho - center_radius) / width;
            return scale * std::exp(-u * u);
        }
        }
        return 0.0;
    }
    double operator()(const Point& z) const { return radial(z.norm()); }

    /// Polynomial growth exponent of the (untruncated) density.
    double growth() const noexcept { return kind == DensityKind::polygrowth ? std::max(a, 0.0) : 0.0; }
};

class Measure {
public:
    static Measure atomic(int dim, std::vector<Atom> atoms) {
        Measure m(dim);
        std::vector<Atom> kept;
        kept.reserve(atoms.size());
        for (auto& a : atoms) {
            if (a.location.dim() != dim) throw InvalidArgument("atoms", "atom dimension mismatch");
            if (!a.location.finite()) throw InvalidArgument("atoms", "atom locations must be finite");
            if (!(a.weight >= 0.0) || !std::isfinite(a.weight)) throw InvalidArgument("atoms", "weights must be finite and positive");
            if (a.weight > 0.0) kept.push_back(a);
        }
        m.rep_ = std::move(kept);
        m.build_index();
        return m;
    }
    static Measure empty(int dim) { return atomic(dim, {}); }
    static Measure dirac(const Point& at, double weight = 1.0) { return atomic(at.dim(), {{at, weight}}); }

    static Measure density(int dim, Density d) {
        if (!(d.truncation > 0.0) || !std::isfinite(d.truncation)) throw InvalidArgument("truncation", "must be positive");
        if (!(d.scale >= 0.0) || !std::isfinite(d.scale)) throw InvalidArgument("scale", "must be nonnegative");
        if (d.kind == DensityKind::gaussian && !(d.c > 0.0)) throw InvalidArgument("c", "gaussian decay must be positive");
        if (d.kind == DensityKind::ring && !(d.width > 0.0)) throw InvalidArgument("width", "ring width must be positive");
        if (!std::isfinite(d.a) || !std::isfinite(d.c) || !std::isfinite(d.center_radius))
            throw InvalidArgument("params", "density parameters must be finite");
        Measure m(dim);
        m.rep_ = d;
        return m;
    }
    static Measure lebesgue(int dim, double truncation) { return density(dim, {DensityKind::lebesgue, 1, 0, 0, 1, 1, truncation}); }
    static Measure gaussian(int dim, double c, double truncation) {
        return density(dim, {DensityKind::gaussian, c, 0, 0, 1, 1, truncation});
    }
    static Measure polygrowth(int dim, double a, double truncation) {
        return density(dim, {DensityKind::polygrowth, 1, a, 0, 1, 1, truncation});
    }
    static Measure ring(int dim, double center_radius, double width, double truncation) {
        return density(dim, {DensityKind::ring, 1, 0, center_radius, width, 1, truncation});
    }

    int dim() const noexcept { return dim_; }
    bool is_atomic() const noexcept { return std::holds_alternative<std::vector<Atom>>(rep_); }
    const std::vector<Atom>& atoms() const { return std::get<std::vector<Atom>>(rep_); }
    const Density& density() const { return std::get<Density>(rep_); }

    /// Radius of a ball around the origin containing the support.
    double support_radius() const {
        if (!is_atomic()) return density().truncation;
        double r = 0.0;
        for (const auto& a : atoms()) r = std::max(r, a.location.norm());
        return r;
    }

    Measure scaled(double lambda) const {
        if (!(lambda >= 0.0)) throw InvalidArgument("lambda", "must be nonnegative");
        if (is_atomic()) {
            std::vector<Atom> out = atoms();
            for (auto& a : out) a.weight *= lambda;
            return atomic(dim_, std::move(out));
        }
        Density d = density();
        d.scale *= lambda;
        return Measure::density(dim_, d);
    }

    /// Same measure with the density truncation multiplied by factor (atoms unchanged).
    Measure with_truncation_factor(double factor) const {
        if (is_atomic()) return *this;
        Density d = density();
        d.truncation *= factor;
        return Measure::density(dim_, d);
    }

    /// Calls visit(atom) for atoms that may lie within radius of p.
    template <class Visit>
    void atoms_near(const Point& p, double radius, Visit&& visit) const {
        const auto& list = atoms();
        if (!index_) {
            for (const auto& a : list) visit(a);
            return;
        }
        index_->for_candidates(p, radius, [&](int id) { visit(list[id]); });
    }

private:
    explicit Measure(int dim) : dim_(dim) {
        if (dim < 1 || dim > kMaxDim) throw InvalidArgument("n", "dimension must be in [1, 4]");
    }

    void build_index() {
        const auto& list = atoms();
        if (list.size() < 64) return;
        double extent = 0.0;
        for (const auto& a : list)
            for (int k = 0; k < a.location.real_dim(); ++k) extent = std::max(extent, std::abs(a.location.real_coord(k)));
        // about 4 atoms per bucket on average, capped so the dense grid stays small
        const int d = 2 * dim_;
        const double target_buckets = std::min(static_cast<double>(list.size()) / 4.0, 4.0e6);
        const double per_axis = std::max(1.0, std::floor(std::pow(target_buckets, 1.0 / d)));
        const double cell = std::max(2.0 * (extent + 1e-9) / per_axis, 1e-6);
        auto idx = std::make_shared<PointIndex>(dim_, extent + 1e-9, cell);
        for (std::size_t i = 0; i < list.size(); ++i) idx->insert(list[i].location, static_cast<int>(i));
        index_ = std::move(idx);
    }

    int dim_;
    std::variant<std::vector<Atom>, Density> rep_;
    std::shared_ptr<const PointIndex> index_;
};

namespace detail {

/// Composite Gauss-Legendre nodes on [0, R] with panels of width <= 1.
struct RadialRule {
    std::vector<double> nodes, weights;
};

inline RadialRule radial_rule(double R, double panel = 1.0) {
    using GL = boost::math::quadrature::gauss<double, 8>;
    RadialRule rule;
    if (!(R > 0.0)) return rule;
    const int panels = std::max(1, static_cast<int>(std::ceil(R / panel - 1e-12)));
    const double w = R / panels;
    const auto& x = GL::abscissa();
    const auto& wt = GL::weights();
    for (int k = 0; k < panels; ++k) {
        const double mid = (k + 0.5) * w;
        for (std::size_t i = 0; i < x.size(); ++i) {
            for (int sgn : {-1, 1}) {
                if (x[i] == 0.0 && sgn < 0) continue;
                rule.nodes.push_back(mid + sgn * x[i] * w / 2.0);
                rule.weights.push_back(wt[i] * w / 2.0);
            }
        }
    }
    return rule;
}

/// Integral of fn over the ball D(center, R) in polar (n = 1) or Hopf (n = 2)
/// coordinates; higher dimensions fall back to a midpoint cube rule with membership.
inline double ball_integral(const std::function<double(const Point&)>& fn, const Point& center, double R) {
    const int n = center.dim();
    if (!(R > 0.0)) return 0.0;
    const RadialRule rad = radial_rule(R);
    const double two_pi = 2.0 * std::numbers::pi;
    if (n == 1) {
        const int angles = 64;
        double total = 0.0;
        for (std::size_t i = 0; i < rad.nodes.size(); ++i) {
            const double s = rad.nodes[i];
            double ring = 0.0;
            for (int k = 0; k < angles; ++k) {
                const double th = two_pi * k / angles;
                Point z = center;
                z[0] += cplx(s * std::cos(th), s * std::sin(th));
                ring += fn(z);
            }
            total += rad.weights[i] * s * ring * (two_pi / angles);
        }
        return total;
    }
    if (n == 2) {
        using GL = boost::math::quadrature::gauss<double, 8>;
        std::vector<double> eta, eta_w;
        for (std::size_t i = 0; i < GL::abscissa().size(); ++i) {
            for (int sgn : {-1, 1}) {
                if (GL::abscissa()[i] == 0.0 && sgn < 0) continue;
                eta.push_back(std::numbers::pi / 4.0 * (1.0 + sgn * GL::abscissa()[i]));
                eta_w.push_back(GL::weights()[i] * std::numbers::pi / 4.0);
            }
        }
        const int angles = 16;
        const double dxi = two_pi / angles;
        double total = 0.0;
        for (std::size_t i = 0; i < rad.nodes.size(); ++i) {
            const double s = rad.nodes[i];
            double shell = 0.0;
            for (std::size_t e = 0; e < eta.size(); ++e) {
                const double ce = std::cos(eta[e]), se = std::sin(eta[e]);
                double torus = 0.0;
                for (int a = 0; a < angles; ++a)
                    for (int b = 0; b < angles; ++b) {
                        Point z = center;
                        z[0] += std::polar(s * ce, dxi * a);
                        z[1] += std::polar(s * se, dxi * b);
                        torus += fn(z);
                    }
                shell += eta_w[e] * ce * se * torus * dxi * dxi;
            }
            total += rad.weights[i] * s * s * s * shell;
        }
        return total;
    }
    const int cells = 24;
    auto masked = [&](const Point& z) { return distance2(z, center) < R * R ? fn(z) : 0.0; };
    return midpoint_sum(masked, center, R, cells);
}

/// Surface area of the unit sphere in R^(2n).
inline double unit_sphere_area(int n) { return 2.0 * std::pow(std::numbers::pi, n) / std::tgamma(static_cast<double>(n)); }

/// Midpoint step used for Gaussian-weighted integrals against densities.
inline double density_step(int n) { return n == 1 ? 0.25 : 0.5; }

/// Largest squared-exponent beyond which an atom's Gaussian factor is dropped (e^-40).
inline constexpr double kGaussianCutoff = 40.0;

} // namespace detail

/// mu(D(z, r)).
inline double ball_mass(const Measure& mu, const Point& z, double r) {
    if (!(r > 0.0)) throw InvalidArgument("r", "radius must be positive");
    if (z.dim() != mu.dim()) throw InvalidArgument("z", "dimension mismatch");
    if (mu.is_atomic()) {
        double s = 0.0;
        mu.atoms_near(z, r, [&](const Atom& a) {
            if (in_ball(z, r, a.location)) s += a.weight;
        });
        return s;
    }
    const Density& d = mu.density();
    if (z.norm() - r >= d.truncation) return 0.0;
    return detail::ball_integral([&d](const Point& x) { return d(x); }, z, r);
}

/// Weighted mass of a measure: int (1 + |z|)^-s dmu(z).
inline double total_weighted_mass(const Measure& mu, double s) {
    if (s < 0.0) throw InvalidArgument("s", "must be nonnegative");
    if (mu.is_atomic()) {
        double total = 0.0;
        for (const auto& a : mu.atoms()) total += a.weight * std::pow(1.0 + a.location.norm(), -s);
        return total;
    }
    const Density& d = mu.density();
    const int n = mu.dim();
    // Nodes placed so a ring density's peak is well resolved.
    const detail::RadialRule rule = detail::radial_rule(d.truncation, d.kind == DensityKind::ring ? std::min(1.0, d.width) : 1.0);
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double rho = rule.nodes[i];
        acc += rule.weights[i] * std::pow(rho, 2 * n - 1) * d.radial(rho) * std::pow(1.0 + rho, -s);
    }
    return detail::unit_sphere_area(n) * acc;
}

/// True when the untruncated weighted mass would be infinite (polygrowth with a >= s + 2n, or lebesgue with s <= 2n).
inline bool weighted_mass_diverges_untruncated(const Measure& mu, double s) {
    if (mu.is_atomic()) return false;
    const Density& d = mu.density();
    const int n = mu.dim();
    if (d.kind == DensityKind::lebesgue) return s <= 2.0 * n;
    if (d.kind == DensityKind::polygrowth) return d.a >= s - 2.0 * n;
    return false;
}

/// mu_(s,r,D)(z) = mu(D(z,r)) / (1 + |z|)^s
inline double averaging_value(const Measure& mu, double s, double r, const Point& z) {
    const double m = ball_mass(mu, z, r);
    return m == 0.0 ? 0.0 : m * std::pow(1.0 + z.norm(), -s);
}

inline ScalarField averaging_function(const Measure& mu, double s, double r) {
    if (s < 0.0) throw InvalidArgument("s", "must be nonnegative");
    if (!(r > 0.0)) throw InvalidArgument("r", "radius must be positive");
    ScalarField::Envelope env;
    env.growth = mu.is_atomic() ? 0.0 : std::max(0.0, mu.density().growth() - s);
    env.support_radius = mu.support_radius() + r;
    return ScalarField(mu.dim(), [mu, s, r](const Point& z) { return averaging_value(mu, s, r, z); }, env);
}

inline std::vector<double> averaging_sequence(const Measure& mu, double s, double r, const Lattice& lat) {
    if (lat.dim != mu.dim()) throw InvalidArgument("lat", "lattice and measure dimensions differ");
    return deterministic_map(lat.centers.size(), [&](std::size_t i) { return averaging_value(mu, s, r, lat.centers[i]); });
}

/// Width of the Gaussian window e^(-t alpha |x|^2 / 2) beyond which its mass is negligible.
inline double berezin_reach(double t, double alpha, int n, double tail_tol = 1e-12) {
    return truncation_radius(t * alpha / 2.0, 0.0, tail_tol, n);
}

/// mu~_(t,s)(w) = int (1 + |z|)^-s e^(-t alpha |z - w|^2 / 2) dmu(z)
inline double berezin_value(const Measure& mu, double t, double s, double alpha, const Point& w, double tail_tol = 1e-12) {
    if (!(t > 0.0)) throw InvalidArgument("t", "must be positive");
    const double a = t * alpha / 2.0;
    if (mu.is_atomic()) {
        const double reach = std::sqrt(detail::kGaussianCutoff / a);
        double total = 0.0;
        mu.atoms_near(w, reach, [&](const Atom& at) {
            const double e = a * distance2(at.location, w);
            if (e > detail::kGaussianCutoff) return;
            total += at.weight * std::pow(1.0 + at.location.norm(), -s) * std::exp(-e);
        });
        return total;
    }
    const Density& d = mu.density();
    const int n = mu.dim();
    const double reach = truncation_radius(a, 0.0, tail_tol, n);
    if (w.norm() - reach >= d.truncation) return 0.0;
    const double h = detail::density_step(n);
    const int cells = 2 * static_cast<int>(std::ceil(reach / h));
    auto fn = [&](const Point& z) {
        const double g = d(z);
        if (g == 0.0) return 0.0;
        return g * std::pow(1.0 + z.norm(), -s) * std::exp(-a * distance2(z, w));
    };
    return detail::midpoint_sum(fn, w, cells * h / 2.0, cells);
}

inline ScalarField berezin(const Measure& mu, double t, double s, double alpha, double tail_tol = 1e-12) {
    if (!(t > 0.0)) throw InvalidArgument("t", "must be positive");
    if (s < 0.0) throw InvalidArgument("s", "must be nonnegative");
    ScalarField::Envelope env;
    env.support_radius = mu.support_radius() + berezin_reach(t, alpha, mu.dim(), tail_tol);
    return ScalarField(mu.dim(), [mu, t, s, alpha, tail_tol](const Point& w) { return berezin_value(mu, t, s, alpha, w, tail_tol); },
                       env);
}

/// l^p norm (p >= 1) or max (p = infinity).
inline double sequence_lp(std::span<const double> seq, double p) {
    if (!(p >= 1.0)) throw InvalidArgument("p_exp", "exponent must be >= 1");
    if (std::isinf(p)) {
        double m = 0.0;
        for (double v : seq) m = std::max(m, v);
        return m;
    }
    std::vector<double> powered(seq.size());
    for (std::size_t i = 0; i < seq.size(); ++i) powered[i] = std::pow(seq[i], p);
    return std::pow(pairwise_sum(powered), 1.0 / p);
}

} // namespace fock
