#pragma once

// Gaussian-weighted integration over C^n = R^(2n): tensor midpoint rule on a cube,
// truncation radii from incomplete-Gamma tail bounds, and L^p / sup norms of fields.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <utility>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "fock/error.hpp"
#include "fock/parallel.hpp"
#include "fock/point.hpp"

namespace fock {

/// Nonnegative function on C^n with a declared envelope
///     f(z) <= K (1 + |z - center|)^growth * exp(-decay |z - center|^2),
/// or, when support_radius is set, f vanishes (or is negligible) outside the ball
/// of that radius around center.
class ScalarField {
public:
    using Fn = std::function<double(const Point&)>;

    struct Envelope {
        double growth = 0.0;
        double decay = 0.0;
        std::optional<double> support_radius;
        std::optional<Point> center;
    };

    ScalarField(int dim, Fn fn, Envelope env) : dim_(dim), fn_(std::move(fn)), env_(std::move(env)) {
        if (!env_.center) env_.center = Point::origin(dim);
        if (env_.growth < 0.0 || env_.decay < 0.0) throw InvalidArgument("field", "envelope must be nonnegative");
        fit_envelope_constant();
    }

    static ScalarField zero(int dim) {
        return ScalarField(dim, [](const Point&) { return 0.0; }, Envelope{0.0, 0.0, 0.0, std::nullopt});
    }
    static ScalarField constant(int dim, double c, std::optional<double> support = std::nullopt) {
        return ScalarField(dim, [c](const Point&) { return c; }, Envelope{0.0, 0.0, support, std::nullopt});
    }

    double operator()(const Point& z) const { return fn_(z); }

    int dim() const noexcept { return dim_; }
    const Envelope& envelope() const noexcept { return env_; }
    const Point& center() const noexcept { return *env_.center; }
    /// Fitted constant K of the envelope (max sampled ratio).
    double envelope_constant() const noexcept { return k_; }
    bool integrable() const noexcept { return env_.support_radius.has_value() || env_.decay > 0.0; }

    /// lambda * f (lambda >= 0), same envelope shape.
    ScalarField scaled(double lambda) const {
        if (lambda < 0.0) throw InvalidArgument("lambda", "must be nonnegative");
        auto fn = fn_;
        return ScalarField(dim_, [fn, lambda](const Point& z) { return lambda * fn(z); }, env_);
    }

    /// f^p with the envelope raised accordingly.
    ScalarField powered(double p) const {
        auto fn = fn_;
        Envelope env = env_;
        env.growth *= p;
        env.decay *= p;
        if (p == 1.0) return *this;
        return ScalarField(dim_, [fn, p](const Point& z) { return std::pow(fn(z), p); }, env);
    }

private:
    void fit_envelope_constant() {
        Rng rng(0xe17e10feull);
        const double radius = env_.support_radius ? *env_.support_radius : 6.0;
        k_ = 0.0;
        for (int i = 0; i < 48; ++i) {
            const Point z = rng.in_ball(*env_.center, radius);
            const double v = fn_(z);
            if (!(v >= 0.0) || !std::isfinite(v)) throw InvalidArgument("field", "evaluator must return finite nonnegative values");
            const double rho = std::sqrt(distance2(z, *env_.center));
            const double shape = std::pow(1.0 + rho, env_.growth) * std::exp(-env_.decay * rho * rho);
            if (shape > 0.0) k_ = std::max(k_, v / shape);
        }
    }

    int dim_;
    Fn fn_;
    Envelope env_;
    double k_ = 0.0;
};

/// Midpoint tensor rule on the cube center + [-half_width, half_width]^(2n) with
/// `cells` cells per axis.
struct QuadratureScheme {
    Point center;
    double half_width = 6.0;
    int cells = 256;
    double tail_tol = 1e-12;

    double step() const noexcept { return 2.0 * half_width / cells; }
};

inline int default_cells(int n) {
    switch (n) {
    case 1: return 256;
    case 2: return 96;
    case 3: return 32;
    default: return 16;
    }
}

/// Smallest R on the 0.25 grid for which the tail bound of
///     int_{|z| > R} (1 + |z|)^d exp(-c |z|^2) dV(z)      (real dimension 2n)
/// is below eps. Uses (1+rho)^d <= 2^(d-1) (1 + rho^d) for d >= 1 and the
/// upper incomplete Gamma function for the radial moments.
inline double truncation_radius(double c, double d, double eps, int n) {
    if (!(c > 0.0)) throw InvalidArgument("c", "decay must be positive");
    if (!(eps > 0.0 && eps < 1.0)) throw InvalidArgument("eps_tail", "must lie in (0, 1)");
    if (d < 0.0) throw InvalidArgument("d", "growth must be nonnegative");
    const double sphere = 2.0 * std::pow(std::numbers::pi, n) / std::tgamma(static_cast<double>(n));
    auto moment = [&](double k, double R) { // int_R^inf rho^k e^{-c rho^2} d rho
        const double a = (k + 1.0) / 2.0;
        return boost::math::tgamma(a, c * R * R) / (2.0 * std::pow(c, a));
    };
    auto tail = [&](double R) {
        const double base = moment(2.0 * n - 1.0, R);
        if (d == 0.0) return sphere * base;
        const double factor = d >= 1.0 ? std::pow(2.0, d - 1.0) : 1.0;
        return sphere * factor * (base + moment(d + 2.0 * n - 1.0, R));
    };
    for (double R = 0.25;; R += 0.25) {
        if (tail(R) < eps) return R;
        if (R > 1e4) throw NonIntegrable("truncation radius search did not converge");
    }
}

struct SchemeOptions {
    double tail_tol = 1e-12;
    int cells = 0; ///< 0 selects default_cells(n)
};

/// Scheme fitted to a field's envelope: the cube is centred on the field's declared
/// center and spans the support radius or the truncation radius of the envelope.
inline QuadratureScheme make_scheme(const ScalarField& f, const SchemeOptions& opt = {}) {
    QuadratureScheme s;
    s.center = f.center();
    s.tail_tol = opt.tail_tol;
    s.cells = opt.cells > 0 ? opt.cells : default_cells(f.dim());
    s.cells = std::max(4, (s.cells + 3) / 4 * 4);
    const auto& env = f.envelope();
    if (env.support_radius) {
        s.half_width = std::max(*env.support_radius, 1e-9);
    } else {
        if (!(env.decay > 0.0)) throw NonIntegrable("field has no Gaussian decay and no compact support");
        s.half_width = truncation_radius(env.decay, env.growth, opt.tail_tol, f.dim());
    }
    return s;
}

namespace detail {

/// h^(2n) * sum of f over cell midpoints of center + [-half_width, half_width]^(2n).
inline double midpoint_sum(const ScalarField::Fn& f, const Point& center, double half_width, int cells) {
    const int n = center.dim();
    const int d = 2 * n;
    const double h = 2.0 * half_width / cells;
    std::size_t total = 1;
    for (int k = 0; k < d; ++k) total *= static_cast<std::size_t>(cells);
    const double s = deterministic_sum(total, [&](std::size_t idx) {
        Point z = center;
        for (int k = d - 1; k >= 0; --k) {
            const auto digit = static_cast<double>(idx % cells);
            idx /= cells;
            z.set_real_coord(k, center.real_coord(k) - half_width + (digit + 0.5) * h);
        }
        return f(z);
    });
    return s * std::pow(h, d);
}

} // namespace detail

struct Integral {
    double value = 0.0;
    double error_estimate = 0.0;
};

/// Midpoint rule at step h; the error estimate is the change against the rule at step 2h.
inline Integral integrate_gaussian(const ScalarField& f, const QuadratureScheme& s) {
    if (!f.integrable()) throw NonIntegrable("field has no Gaussian decay and is not compactly supported");
    const ScalarField::Fn fn = [&f](const Point& z) { return f(z); };
    const double fine = detail::midpoint_sum(fn, s.center, s.half_width, s.cells);
    const double coarse = detail::midpoint_sum(fn, s.center, s.half_width, s.cells / 2);
    return {fine, std::abs(fine - coarse)};
}

struct CheckedIntegral {
    double value = 0.0;
    double error_estimate = 0.0;
    /// True when enlarging the cube by 1.5x grows the (coarse) value by more than 5%.
    bool divergent = false;
};

inline constexpr double kGrowthFactor = 1.5;
inline constexpr double kGrowthTolerance = 0.05;
/// Increments of a converging sequence must shrink at least by this factor per enlargement.
inline constexpr double kIncrementContraction = 0.9;

/// Finite/infinite decision for a quantity computed on domains of radius R, 1.5R and
/// (only when the first step grows by more than 5%) 2.25R. Growth that decelerates
/// (v3 - v2 <= 0.9 (v2 - v1)) is read as slow convergence to a finite limit.
template <class Third>
bool growth_diverges(double v1, double v2, Third&& third) {
    if (!std::isfinite(v1) || !std::isfinite(v2)) return true;
    if (!(v2 > (1.0 + kGrowthTolerance) * v1 + 1e-300)) return false;
    const double v3 = third();
    if (!std::isfinite(v3)) return true;
    return v3 - v2 > kIncrementContraction * (v2 - v1);
}

/// integrate_gaussian plus the truncation-growth divergence test. The growth test reuses
/// the coarse step 2h on the enlarged cube.
inline CheckedIntegral integrate_checked(const ScalarField::Fn& fn, const QuadratureScheme& s) {
    const double fine = detail::midpoint_sum(fn, s.center, s.half_width, s.cells);
    const double coarse = detail::midpoint_sum(fn, s.center, s.half_width, s.cells / 2);
    const int big_cells = s.cells * 3 / 4;
    const double big = detail::midpoint_sum(fn, s.center, kGrowthFactor * s.half_width, big_cells);
    CheckedIntegral out{fine, std::abs(fine - coarse), false};
    if (!std::isfinite(big) || !std::isfinite(fine) || big > (1.0 + kGrowthTolerance) * coarse + 1e-300) {
        out.divergent = true;
        out.value = std::numeric_limits<double>::infinity();
    }
    return out;
}

/// (int f^p dV)^(1/p) over the scheme's cube, p >= 1.
inline double lp_field_norm(const ScalarField& f, double p, const QuadratureScheme& s) {
    if (!(p >= 1.0)) throw InvalidArgument("p_exp", "exponent must be >= 1");
    const ScalarField fp = f.powered(p);
    if (!fp.integrable()) throw NonIntegrable("powered envelope is not integrable");
    const double v = integrate_gaussian(fp, s).value;
    return std::pow(std::max(v, 0.0), 1.0 / p);
}

struct SupResult {
    double value = 0.0;
    Point argmax;
};

namespace detail {

/// Grid maximum of fn over {|z - center| <= search_radius} with one step/8 refinement
/// around the best grid point.
inline SupResult grid_sup(const ScalarField::Fn& fn, const Point& c, double search_radius, double step) {
    const int d = c.real_dim();
    auto grid_max = [&](const Point& around, double half, double h, double limit) {
        const int per_axis = static_cast<int>(std::floor(half / h + 1e-9));
        const int side = 2 * per_axis + 1;
        std::size_t total = 1;
        for (int k = 0; k < d; ++k) total *= static_cast<std::size_t>(side);
        auto point_at = [&](std::size_t idx) {
            Point z = around;
            for (int k = d - 1; k >= 0; --k) {
                const int digit = static_cast<int>(idx % side) - per_axis;
                idx /= side;
                z.set_real_coord(k, around.real_coord(k) + digit * h);
            }
            return z;
        };
        std::vector<double> vals = deterministic_map(total, [&](std::size_t idx) {
            const Point z = point_at(idx);
            if (distance2(z, c) > limit * limit * (1.0 + 1e-12)) return -1.0;
            return fn(z);
        });
        std::size_t best = 0;
        for (std::size_t i = 1; i < total; ++i)
            if (vals[i] > vals[best] || (std::isnan(vals[best]) && !std::isnan(vals[i]))) best = i;
        for (double v : vals)
            if (std::isinf(v)) return SupResult{std::numeric_limits<double>::infinity(), point_at(best)};
        return SupResult{std::max(vals[best], 0.0), point_at(best)};
    };
    SupResult coarse = grid_max(c, search_radius, step, search_radius);
    if (std::isinf(coarse.value)) return coarse;
    SupResult fine = grid_max(coarse.argmax, step, step / 8.0, search_radius);
    return fine.value >= coarse.value ? fine : coarse;
}

} // namespace detail

/// Max of f over the grid of the given step on {|z - center| <= search_radius}, followed by
/// one refinement pass at step/8 on the cells around the best grid point.
inline SupResult sup_field_norm(const ScalarField& f, double search_radius, double step,
                                std::optional<Point> center = std::nullopt) {
    if (!(step > 0.0) || step > search_radius) throw InvalidArgument("step", "must lie in (0, search_radius]");
    const Point c = center ? *center : Point::origin(f.dim());
    return detail::grid_sup([&f](const Point& z) { return f(z); }, c, search_radius, step);
}

} // namespace fock
