#pragma once

// Entire functions (polynomials and kernel combinations) and Fock-Sobolev norms.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <string>
#include <variant>
#include <vector>

#include "fock/error.hpp"
#include "fock/point.hpp"
#include "fock/quadrature.hpp"

namespace fock {

inline constexpr double kInf = std::numeric_limits<double>::infinity();
/// Natural-log cap on kernel exponents before a single exponential is taken.
inline constexpr double kLogOverflowCap = 709.0;

/// Ambient configuration: dimension, weight alpha, Sobolev order m, exponents p and q.
/// p and q may be +infinity (q = infinity only makes sense for composition targets).
struct Params {
    int n = 1;
    double alpha = 1.0;
    int m = 0;
    double p = 2.0;
    double q = 2.0;

    void validate() const {
        if (n < 1 || n > kMaxDim) throw InvalidArgument("n", "dimension must be in [1, 4]");
        if (!(alpha > 0.0) || !std::isfinite(alpha)) throw InvalidArgument("alpha", "must be a positive finite number");
        if (m < 0) throw InvalidArgument("m", "must be a nonnegative integer");
        if (!(p > 0.0)) throw InvalidArgument("p", "must be positive or infinity");
        if (!(q > 0.0)) throw InvalidArgument("q", "must be positive or infinity");
    }
    bool p_infinite() const noexcept { return std::isinf(p); }
    bool q_infinite() const noexcept { return std::isinf(q); }
};

using MultiIndex = std::array<int, kMaxDim>;

inline int total_degree(const MultiIndex& b) noexcept {
    int s = 0;
    for (int v : b) s += v;
    return s;
}

/// All multi-indices in n variables with total degree <= max_degree, in lexicographic order.
inline std::vector<MultiIndex> multi_indices_up_to(int n, int max_degree) {
    std::vector<MultiIndex> out;
    MultiIndex b{};
    std::function<void(int, int)> rec = [&](int j, int left) {
        if (j == n) {
            out.push_back(b);
            return;
        }
        for (int k = 0; k <= left; ++k) {
            b[j] = k;
            rec(j + 1, left - k);
        }
        b[j] = 0;
    };
    rec(0, max_degree);
    return out;
}

struct Polynomial {
    int dim = 1;
    std::map<MultiIndex, cplx> coeffs;

    static Polynomial constant(int dim, cplx c) {
        Polynomial p{dim, {}};
        if (c != cplx{}) p.coeffs[MultiIndex{}] = c;
        return p;
    }
    static Polynomial monomial(int dim, const MultiIndex& beta, cplx c = 1.0) {
        Polynomial p{dim, {}};
        if (c != cplx{}) p.coeffs[beta] = c;
        return p;
    }

    int degree() const noexcept {
        int d = 0;
        for (const auto& [b, c] : coeffs) d = std::max(d, total_degree(b));
        return d;
    }

    cplx operator()(const Point& z) const {
        cplx s = 0.0;
        for (const auto& [b, c] : coeffs) {
            cplx term = c;
            for (int j = 0; j < dim; ++j)
                for (int k = 0; k < b[j]; ++k) term *= z[j];
            s += term;
        }
        return s;
    }

    /// Exact partial derivative with respect to z_j.
    Polynomial derivative(int j) const {
        Polynomial out{dim, {}};
        for (const auto& [b, c] : coeffs) {
            if (b[j] == 0) continue;
            MultiIndex nb = b;
            nb[j] -= 1;
            out.coeffs[nb] += c * static_cast<double>(b[j]);
        }
        std::erase_if(out.coeffs, [](const auto& kv) { return kv.second == cplx{}; });
        return out;
    }

    Polynomial derivative(const MultiIndex& beta) const {
        Polynomial out = *this;
        for (int j = 0; j < dim; ++j)
            for (int k = 0; k < beta[j]; ++k) out = out.derivative(j);
        return out;
    }

    friend bool operator==(const Polynomial&, const Polynomial&) = default;
};

/// One term c * K_w, c * k_w, or with sobolev_scaled an extra factor (1+|w|)^-m
/// (normalized + sobolev_scaled gives the test function xi_(w,m)).
struct KernelTerm {
    Point center;
    cplx coeff = 1.0;
    bool normalized = true;
    bool sobolev_scaled = false;
};

struct KernelCombo {
    int dim = 1;
    std::vector<KernelTerm> terms;
};

/// f(z) represented as mantissa * exp(log_scale); keeps kernel sums finite where
/// exp of the exponent alone would overflow.
struct ScaledValue {
    cplx mantissa = 0.0;
    double log_scale = 0.0;

    double abs_log() const { return std::log(std::abs(mantissa)) + log_scale; }
};

class EntireFunction {
public:
    using Rep = std::variant<Polynomial, KernelCombo>;

    EntireFunction(Polynomial p) : rep_(std::move(p)) {}
    EntireFunction(KernelCombo k) : rep_(std::move(k)) {}

    static EntireFunction constant(int dim, cplx c) { return Polynomial::constant(dim, c); }
    static EntireFunction monomial(int dim, const MultiIndex& beta) { return Polynomial::monomial(dim, beta); }
    /// K_w(z) = exp(alpha <z, w>)
    static EntireFunction kernel(const Point& w, cplx coeff = 1.0) { return KernelCombo{w.dim(), {{w, coeff, false, false}}}; }
    /// k_w(z) = exp(alpha <z, w> - alpha |w|^2 / 2)
    static EntireFunction normalized_kernel(const Point& w, cplx coeff = 1.0) {
        return KernelCombo{w.dim(), {{w, coeff, true, false}}};
    }
    /// xi_(w,m) = (1 + |w|)^-m k_w
    static EntireFunction xi(const Point& w) { return KernelCombo{w.dim(), {{w, 1.0, true, true}}}; }

    const Rep& rep() const noexcept { return rep_; }
    bool is_polynomial() const noexcept { return std::holds_alternative<Polynomial>(rep_); }
    const Polynomial& polynomial() const {
        if (!is_polynomial()) throw InvalidArgument("f", "expected a polynomial");
        return std::get<Polynomial>(rep_);
    }
    int dim() const {
        return std::visit([](const auto& r) { return r.dim; }, rep_);
    }

    /// Polynomial degree (0 for kernel combinations).
    int degree() const { return is_polynomial() ? polynomial().degree() : 0; }

    bool is_zero() const {
        if (is_polynomial()) return polynomial().coeffs.empty();
        const auto& k = std::get<KernelCombo>(rep_);
        return std::all_of(k.terms.begin(), k.terms.end(), [](const auto& t) { return t.coeff == cplx{}; });
    }

    ScaledValue eval_scaled(const Point& z, double alpha, int m) const {
        if (is_polynomial()) return {polynomial()(z), 0.0};
        const auto& combo = std::get<KernelCombo>(rep_);
        if (combo.terms.empty()) return {0.0, 0.0};
        std::vector<cplx> expo;
        expo.reserve(combo.terms.size());
        double top = -kInf;
        for (const auto& t : combo.terms) {
            cplx e = alpha * inner(z, t.center);
            if (t.normalized) e -= alpha * t.center.norm2() / 2.0;
            if (t.sobolev_scaled) e -= static_cast<double>(m) * std::log1p(t.center.norm());
            expo.push_back(e);
            if (t.coeff != cplx{}) top = std::max(top, e.real());
        }
        if (!std::isfinite(top)) return {0.0, 0.0};
        cplx s = 0.0;
        for (std::size_t i = 0; i < expo.size(); ++i) s += combo.terms[i].coeff * std::exp(expo[i] - top);
        return {s, top};
    }

    /// Quadrature window: a center near the integrand's peak plus extra radius covering
    /// the spread of kernel centers.
    std::pair<Point, double> window(int n) const {
        if (is_polynomial()) return {Point::origin(n), 0.0};
        const auto& combo = std::get<KernelCombo>(rep_);
        Point c = Point::origin(n);
        if (combo.terms.empty()) return {c, 0.0};
        for (const auto& t : combo.terms) c += t.center;
        c *= 1.0 / static_cast<double>(combo.terms.size());
        double spread = 0.0;
        for (const auto& t : combo.terms) spread = std::max(spread, distance(c, t.center));
        return {c, spread};
    }

private:
    Rep rep_;
};

/// Exact evaluation; throws Overflow when the real exponent exceeds the log cap.
inline cplx eval(const EntireFunction& f, const Point& z, const Params& params) {
    if (z.dim() != f.dim()) throw InvalidArgument("z", "dimension mismatch");
    const ScaledValue v = f.eval_scaled(z, params.alpha, params.m);
    if (v.log_scale > kLogOverflowCap) throw Overflow("kernel exponent exceeds the natural-log cap 709");
    if (v.log_scale == 0.0) return v.mantissa;
    return v.mantissa * std::exp(v.log_scale);
}

/// Normalizing constant C_(p,m,n) = (alpha p / 2)^(mp/2 + n) Gamma(n) / (pi^n Gamma(mp/2 + n)).
inline double sobolev_constant(double alpha, double p, int m, int n) {
    const double a = m * p / 2.0 + n;
    return std::exp(a * std::log(alpha * p / 2.0) + std::lgamma(static_cast<double>(n)) - n * std::log(std::numbers::pi) -
                    std::lgamma(a));
}

enum class SobolevWeight {
    modulus,          ///< |z|^m
    one_plus_modulus, ///< (1 + |z|)^m
};

struct NormOptions {
    double tail_tol = 1e-12;
    int cells = 0;
    SobolevWeight weight = SobolevWeight::modulus;
};

/// Evaluator in scaled form, as used for compositions u * (f o psi).
using ScaledFn = std::function<ScaledValue(const Point&)>;

/// Where and how to integrate |g|^p |z|^(mp) exp(-alpha p |z|^2 / 2).
struct NormWindow {
    Point center;
    double extra_radius = 0.0;
    double degree = 0.0; ///< polynomial growth of |g| around the center
};

struct NormResult {
    double value = 0.0;
    double error_estimate = 0.0;
    bool divergent = false;
};

namespace detail {

inline double weight_log(const Point& z, int m, SobolevWeight w) {
    if (m == 0) return 0.0;
    const double r = z.norm();
    return m * (w == SobolevWeight::modulus ? std::log(r) : std::log1p(r));
}

inline double sup_step(int n) { return n == 1 ? 1.0 / 16.0 : 0.25; }

} // namespace detail

/// Integral form of the Fock-Sobolev norm of a scaled evaluator:
///   p < inf:  (C_(p,m,n) int |z|^(mp) |g|^p e^(-alpha p |z|^2/2) dV)^(1/p)
///   p = inf:  sup |z|^m |g(z)| e^(-alpha |z|^2/2)
/// with the truncation-growth divergence test.
inline NormResult weighted_norm(const ScaledFn& g, double alpha, double p, int m, int n, const NormWindow& win,
                                const NormOptions& opt = {}) {
    if (!(p > 0.0)) throw InvalidArgument("p", "must be positive");
    if (std::isinf(p)) {
        const double radius = truncation_radius(alpha / 2.0, m + win.degree, opt.tail_tol, n) + win.extra_radius;
        auto maximand = [&](const Point& z) {
            const ScaledValue v = g(z);
            const double mag = std::abs(v.mantissa);
            if (mag == 0.0) return 0.0;
            const double lg = std::log(mag) + v.log_scale + detail::weight_log(z, m, opt.weight) - alpha * z.norm2() / 2.0;
            return std::exp(std::min(lg, kLogOverflowCap));
        };
        ScalarField field(n, maximand, {0.0, 0.0, radius * kGrowthFactor, win.center});
        const double step = detail::sup_step(n);
        const double inner = sup_field_norm(field, radius, step, win.center).value;
        const double outer = sup_field_norm(field, radius * kGrowthFactor, step, win.center).value;
        NormResult out{inner, std::abs(outer - inner), false};
        if (!std::isfinite(outer) || outer > (1.0 + kGrowthTolerance) * inner) {
            out.divergent = true;
            out.value = kInf;
        }
        return out;
    }
    const double growth = p * (m + win.degree);
    QuadratureScheme s;
    s.center = win.center;
    s.tail_tol = opt.tail_tol;
    s.half_width = truncation_radius(alpha * p / 2.0, growth, opt.tail_tol, n) + win.extra_radius;
    s.cells = opt.cells > 0 ? (opt.cells + 3) / 4 * 4 : default_cells(n);
    auto integrand = [&](const Point& z) {
        const ScaledValue v = g(z);
        const double mag = std::abs(v.mantissa);
        if (mag == 0.0) return 0.0;
        if (m > 0 && opt.weight == SobolevWeight::modulus && z.norm2() == 0.0) return 0.0;
        const double lg = p * (std::log(mag) + v.log_scale + detail::weight_log(z, m, opt.weight)) - alpha * p * z.norm2() / 2.0;
        return std::exp(std::min(lg, kLogOverflowCap));
    };
    const CheckedIntegral I = integrate_checked(integrand, s);
    const double c = sobolev_constant(alpha, p, m, n);
    if (I.divergent) return {kInf, kInf, true};
    const double value = std::pow(c * I.value, 1.0 / p);
    // d(x^(1/p)) ~ x^(1/p - 1)/p dx
    const double err = I.value > 0.0 ? value * (I.error_estimate / I.value) / p : 0.0;
    return {value, err, false};
}

inline NormWindow window_of(const EntireFunction& f, int n) {
    auto [c, extra] = f.window(n);
    return {c, extra, static_cast<double>(f.degree())};
}

/// ||f||_(p,m) in the integral form (p = infinity via the sup form).
inline double fock_sobolev_norm(const EntireFunction& f, const Params& params, const NormOptions& opt = {}) {
    params.validate();
    if (f.dim() != params.n) throw InvalidArgument("f", "dimension mismatch");
    const ScaledFn g = [&f, &params](const Point& z) { return f.eval_scaled(z, params.alpha, params.m); };
    const NormResult r = weighted_norm(g, params.alpha, params.p, params.m, params.n, window_of(f, params.n), opt);
    if (r.divergent) throw NonIntegrable("Fock-Sobolev norm integrand grows with the truncation radius");
    return r.value;
}

/// Derivative form: sum over |beta| <= m of the m = 0 Fock norms of d^beta f.
inline double derivative_norm(const EntireFunction& f, const Params& params, const NormOptions& opt = {}) {
    params.validate();
    if (!f.is_polynomial()) throw InvalidArgument("f", "derivative norm is defined for polynomials only");
    const Polynomial& poly = f.polynomial();
    Params base = params;
    base.m = 0;
    double total = 0.0;
    for (const auto& beta : multi_indices_up_to(params.n, params.m)) {
        const Polynomial d = poly.derivative(beta);
        if (d.coeffs.empty()) continue;
        total += fock_sobolev_norm(EntireFunction(d), base, opt);
    }
    return total;
}

/// R_j: drops every homogeneous component of total degree below j.
inline EntireFunction tail_projection(const EntireFunction& f, int j) {
    if (j < 0) throw InvalidArgument("j", "must be nonnegative");
    Polynomial out = f.polynomial();
    std::erase_if(out.coeffs, [j](const auto& kv) { return total_degree(kv.first) < j; });
    return out;
}

/// max over samples of |f(z)| (1 + |z|)^m e^(-alpha |z|^2 / 2) / norm.
inline double pointwise_bound_ratio(const EntireFunction& f, const Params& params, std::span<const Point> samples, double norm) {
    if (!(norm > 0.0) || !std::isfinite(norm)) throw InvalidArgument("norm", "must be positive and finite");
    double best = 0.0;
    for (const auto& z : samples) {
        const ScaledValue v = f.eval_scaled(z, params.alpha, params.m);
        const double mag = std::abs(v.mantissa);
        if (mag == 0.0) continue;
        const double lg = std::log(mag) + v.log_scale + params.m * std::log1p(z.norm()) - params.alpha * z.norm2() / 2.0;
        best = std::max(best, std::exp(lg) / norm);
    }
    return best;
}

} // namespace fock
