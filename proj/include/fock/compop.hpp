#pragma once

// Weighted composition operators u C_psi between Fock-Sobolev spaces: the Berezin-type
// transforms, pull-back measures, boundedness/compactness verdicts, direct norm probes,
// essential norm estimates and the affine symbol check.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "fock/carleson.hpp"
#include "fock/error.hpp"
#include "fock/funcspace.hpp"
#include "fock/measures.hpp"
#include "fock/point.hpp"
#include "fock/quadrature.hpp"

namespace fock {

/// psi(z) = A z + B.
class AffineMap {
public:
    AffineMap(Eigen::MatrixXcd A, Eigen::VectorXcd B) : A_(std::move(A)), B_(std::move(B)) {
        const auto n = A_.rows();
        if (n < 1 || n > kMaxDim || A_.cols() != n) throw InvalidArgument("A", "must be a square n x n matrix with n in [1, 4]");
        if (B_.size() != n) throw InvalidArgument("B", "length must match A");
        if (!A_.allFinite() || !B_.allFinite()) throw InvalidArgument("A", "entries must be finite");
        for (int i = 0; i < n; ++i) {
            b_[i] = B_(i);
            for (int j = 0; j < n; ++j) a_[i][j] = A_(i, j);
        }
        op_norm_ = Eigen::JacobiSVD<Eigen::MatrixXcd>(A_).singularValues()(0);
    }
    static AffineMap scalar(cplx a, cplx b) {
        Eigen::MatrixXcd A(1, 1);
        A(0, 0) = a;
        Eigen::VectorXcd B(1);
        B(0) = b;
        return {A, B};
    }
    static AffineMap identity(int n) { return {Eigen::MatrixXcd::Identity(n, n), Eigen::VectorXcd::Zero(n)}; }

    int dim() const noexcept { return static_cast<int>(A_.rows()); }
    const Eigen::MatrixXcd& A() const noexcept { return A_; }
    const Eigen::VectorXcd& B() const noexcept { return B_; }
    double op_norm() const noexcept { return op_norm_; }

    Point operator()(const Point& z) const noexcept {
        const int n = dim();
        Point out(n);
        for (int i = 0; i < n; ++i) {
            cplx s = b_[i];
            for (int j = 0; j < n; ++j) s += a_[i][j] * z[j];
            out[i] = s;
        }
        return out;
    }
    /// A^* w
    Point adjoint_apply(const Point& w) const noexcept {
        const int n = dim();
        Point out(n);
        for (int j = 0; j < n; ++j) {
            cplx s = 0.0;
            for (int i = 0; i < n; ++i) s += std::conj(a_[i][j]) * w[i];
            out[j] = s;
        }
        return out;
    }

private:
    Eigen::MatrixXcd A_;
    Eigen::VectorXcd B_;
    std::array<std::array<cplx, kMaxDim>, kMaxDim> a_{};
    std::array<cplx, kMaxDim> b_{};
    double op_norm_ = 0.0;
};

/// psi with one polynomial per coordinate.
struct PolynomialMap {
    std::vector<Polynomial> coords;

    int dim() const { return static_cast<int>(coords.size()); }
    int degree() const {
        int d = 0;
        for (const auto& c : coords) d = std::max(d, c.degree());
        return d;
    }
    Point operator()(const Point& z) const {
        Point out(dim());
        for (int i = 0; i < dim(); ++i) out[i] = coords[i](z);
        return out;
    }
};

struct SymbolPair {
    EntireFunction u;
    std::variant<AffineMap, PolynomialMap> psi;

    SymbolPair(EntireFunction u_, std::variant<AffineMap, PolynomialMap> psi_) : u(std::move(u_)), psi(std::move(psi_)) {
        const int d = std::visit([](const auto& p) { return p.dim(); }, psi);
        if (u.dim() != d) throw InvalidArgument("symbol", "u and psi dimensions differ");
        if (const auto* pm = std::get_if<PolynomialMap>(&psi)) {
            for (const auto& c : pm->coords)
                if (c.dim != d) throw InvalidArgument("psi", "coordinate polynomials must share the dimension");
        }
    }

    int dim() const { return u.dim(); }
    bool affine() const { return std::holds_alternative<AffineMap>(psi); }
    /// Symbols the affine-form Corollary does not cover: polynomial psi of degree > 1.
    bool outside_corollary_scope() const {
        if (affine()) return false;
        return std::get<PolynomialMap>(psi).degree() > 1;
    }
    Point map(const Point& z) const {
        return std::visit([&z](const auto& p) { return p(z); }, psi);
    }
};

struct CompopOptions {
    double tail_tol = 1e-12;
    /// Cells per axis for the per-point transform quadrature; 0 selects 128 (n=1), 48 (n=2), 16.
    int cells = 0;
    /// Radial spacing of the transform sample grid and angles per ring (n = 1).
    double ring_step = 0.5;
    int angles = 16;
    /// Sample directions per ring for n >= 2.
    int directions = 32;
    std::uint64_t seed = 0xc0a1e5ceull;
    /// Midpoint step of the w-grid for the L^p / L^1 criteria.
    double lp_step = 0.5;
    /// For q = infinity: little-o target (shell in |z|) instead of F^inf (shell in |psi(z)|).
    bool little_o_target = false;
    /// Probe family of the direct norm: centers on rings up to kernel_radius.
    double kernel_radius = 4.0;
    int probe_angles = 8;
    double cap = 1e3;
};

namespace detail {

inline int compop_cells(int n, int cells) {
    if (cells > 0) return std::max(4, (cells + 3) / 4 * 4);
    return n == 1 ? 128 : (n == 2 ? 48 : 16);
}

/// Ring grid: radii 0, step, ..., R with `angles` points per ring (n = 1) or seeded
/// directions (n >= 2).
inline std::vector<Point> ring_grid(int n, double R, double step, int angles, int directions, std::uint64_t seed) {
    std::vector<Point> dirs;
    if (n == 1) {
        for (int a = 0; a < angles; ++a) dirs.push_back(Point{std::polar(1.0, 2.0 * std::numbers::pi * a / angles)});
    } else {
        Rng rng(seed);
        while (static_cast<int>(dirs.size()) < directions) {
            Point d = rng.in_ball(Point::origin(n), 1.0);
            const double len = d.norm();
            if (len == 0.0) continue;
            d *= 1.0 / len;
            dirs.push_back(d);
        }
    }
    std::vector<Point> out{Point::origin(n)};
    const int rings = static_cast<int>(std::floor(R / step + 1e-9));
    for (int k = 1; k <= rings; ++k)
        for (const auto& d : dirs) out.push_back(cplx(k * step) * d);
    return out;
}

/// Peak center and spread of the transform integrand in z for a given w.
inline std::pair<Point, double> transform_window(const SymbolPair& sym, const Point& w) {
    const int n = sym.dim();
    auto [uc, spread] = sym.u.window(n);
    if (const auto* a = std::get_if<AffineMap>(&sym.psi)) return {a->adjoint_apply(w) + uc, spread};
    return {uc, spread};
}

inline double log_abs(const ScaledValue& v) {
    const double mag = std::abs(v.mantissa);
    return mag == 0.0 ? -kInf : std::log(mag) + v.log_scale;
}

} // namespace detail

struct TransformValue {
    double value = 0.0;
    double error_estimate = 0.0;
    bool divergent = false;
};

/// B_(m,psi)(|u|^q)(w) = int |k_w(psi)|^q (1+|psi|)^(-mq) |u|^q |z|^(mq) e^(-alpha q |z|^2/2) dV
inline TransformValue berezin_compop(const SymbolPair& sym, const Params& params, const Point& w, const CompopOptions& opt = {}) {
    params.validate();
    if (params.q_infinite()) throw InvalidArgument("q", "the integral transform needs a finite q");
    const int n = params.n;
    if (sym.dim() != n || w.dim() != n) throw InvalidArgument("symbol", "dimension mismatch");
    if (sym.u.is_zero()) return {};
    const double q = params.q, alpha = params.alpha;
    const int m = params.m;
    const double wn2 = w.norm2();
    auto integrand = [&](const Point& z) {
        const double lu = detail::log_abs(sym.u.eval_scaled(z, alpha, m));
        if (!std::isfinite(lu)) return 0.0;
        const Point pz = sym.map(z);
        double e = q * (alpha * inner(pz, w).real() - alpha * wn2 / 2.0) + q * lu - alpha * q * z.norm2() / 2.0;
        if (m > 0) {
            const double zn = z.norm();
            if (zn == 0.0) return 0.0;
            e += m * q * (std::log(zn) - std::log1p(pz.norm()));
        }
        return std::exp(std::min(e, kLogOverflowCap));
    };
    auto [center, spread] = detail::transform_window(sym, w);
    QuadratureScheme s;
    s.center = center;
    s.tail_tol = opt.tail_tol;
    s.half_width = truncation_radius(alpha * q / 2.0, q * (sym.u.degree() + m), opt.tail_tol, n) + spread;
    s.cells = detail::compop_cells(n, opt.cells);
    const CheckedIntegral I = integrate_checked(integrand, s);
    if (I.divergent) return {kInf, kInf, true};
    return {I.value, I.error_estimate, false};
}

/// B^inf_(m,psi)(|u|)(z) = |z|^m |u(z)| (1+|psi(z)|)^(-m) e^((alpha/2)(|psi(z)|^2 - |z|^2))
inline double sup_transform(const SymbolPair& sym, const Params& params, const Point& z) {
    if (sym.dim() != z.dim()) throw InvalidArgument("z", "dimension mismatch");
    const double lu = detail::log_abs(sym.u.eval_scaled(z, params.alpha, params.m));
    if (!std::isfinite(lu)) return 0.0;
    const Point pz = sym.map(z);
    double e = lu + params.alpha / 2.0 * (pz.norm2() - z.norm2());
    if (params.m > 0) {
        const double zn = z.norm();
        if (zn == 0.0) return 0.0;
        e += params.m * (std::log(zn) - std::log1p(pz.norm()));
    }
    if (e > kLogOverflowCap) throw Overflow("sup transform exponent exceeds the natural-log cap 709");
    return std::exp(e);
}

/// Atomic approximation of the pull-back measure lambda_(m,q): one atom per cell center z_i of
/// the cube [-R, R]^(2n), placed at psi(z_i) with weight
///   |u(z_i)|^q |z_i|^(mq) e^(-q alpha |z_i|^2/2) e^(q alpha |psi(z_i)|^2/2) h^(2n).
inline Measure pullback_measure(const SymbolPair& sym, const Params& params, double grid_radius, double grid_step) {
    params.validate();
    if (!(grid_step > 0.0)) throw InvalidArgument("grid_step", "must be positive");
    if (!(grid_radius > 0.0)) throw InvalidArgument("grid_radius", "must be positive");
    if (params.q_infinite()) throw InvalidArgument("q", "pull-back measures need a finite q");
    const int n = params.n;
    const int d = 2 * n;
    const int cells = std::max(1, static_cast<int>(std::llround(2.0 * grid_radius / grid_step)));
    const double h = 2.0 * grid_radius / cells;
    const double log_vol = d * std::log(h);
    const double q = params.q, alpha = params.alpha;
    std::vector<Atom> atoms;
    if (sym.u.is_zero()) return Measure::empty(n);
    std::size_t total = 1;
    for (int k = 0; k < d; ++k) total *= static_cast<std::size_t>(cells);
    atoms.reserve(total);
    for (std::size_t idx = 0; idx < total; ++idx) {
        Point z(n);
        std::size_t rest = idx;
        for (int k = d - 1; k >= 0; --k) {
            z.set_real_coord(k, -grid_radius + (static_cast<double>(rest % cells) + 0.5) * h);
            rest /= cells;
        }
        const double lu = detail::log_abs(sym.u.eval_scaled(z, alpha, params.m));
        if (!std::isfinite(lu)) continue;
        const Point pz = sym.map(z);
        double lw = q * lu - q * alpha * z.norm2() / 2.0 + q * alpha * pz.norm2() / 2.0 + log_vol;
        if (params.m > 0) lw += params.m * q * std::log(z.norm());
        if (lw > kLogOverflowCap) throw Overflow("pull-back atom weight exceeds the natural-log cap 709");
        const double wt = std::exp(lw);
        if (wt > 0.0) atoms.push_back({pz, wt});
    }
    return Measure::atomic(n, std::move(atoms));
}

/// Pull-back measures on cubes of radius grid_radius * factor, for the truncation-growth test.
inline MeasureFamily pullback_family(const SymbolPair& sym, const Params& params, double grid_radius, double grid_step) {
    return {[sym, params, grid_radius, grid_step](double f) { return pullback_measure(sym, params, grid_radius * f, grid_step); },
            true};
}

struct LinearSymbolReport {
    double op_norm = 0.0;
    bool admissible_bounded = false;
    bool admissible_compact = false;
    /// Unit vectors w with |Aw| = |w| and <Aw, B> != 0.
    std::vector<Eigen::VectorXcd> witnesses;
};

inline LinearSymbolReport linear_symbol_check(const Eigen::MatrixXcd& A, const Eigen::VectorXcd& B, double tol = 1e-8) {
    if (A.rows() != A.cols() || A.rows() < 1) throw InvalidArgument("A", "must be square");
    if (B.size() != A.rows()) throw InvalidArgument("B", "length must match A");
    if (!(tol > 0.0)) throw InvalidArgument("tol", "must be positive");
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A, Eigen::ComputeFullV);
    LinearSymbolReport rep;
    const auto& sv = svd.singularValues();
    rep.op_norm = sv(0);
    const double bnorm = B.norm();
    bool orth = true;
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        if (std::abs(sv(i) - 1.0) > tol) continue;
        const Eigen::VectorXcd v = svd.matrixV().col(i);
        // <Aw, B> = sum (Aw)_j conj(B_j)
        const cplx ip = B.dot(A * v);
        if (std::abs(ip) > tol * bnorm) {
            orth = false;
            rep.witnesses.push_back(v);
        }
    }
    rep.admissible_bounded = rep.op_norm <= 1.0 + tol && orth;
    rep.admissible_compact = rep.op_norm < 1.0 - tol;
    return rep;
}

inline LinearSymbolReport linear_symbol_check(const AffineMap& psi, double tol = 1e-8) { return linear_symbol_check(psi.A(), psi.B(), tol); }

enum class CompopRegime { p_le_q, q_lt_p, p_infinite, q_infinite };

inline const char* regime_name(CompopRegime r) {
    switch (r) {
    case CompopRegime::p_le_q: return "p<=q";
    case CompopRegime::q_lt_p: return "q<p";
    case CompopRegime::p_infinite: return "p=inf";
    case CompopRegime::q_infinite: return "q=inf";
    }
    return "?";
}

inline CompopRegime compop_regime(double p, double q) {
    if (std::isinf(q)) return CompopRegime::q_infinite;
    if (std::isinf(p)) return CompopRegime::p_infinite;
    return p <= q ? CompopRegime::p_le_q : CompopRegime::q_lt_p;
}

struct CompOpVerdict {
    CompopRegime regime = CompopRegime::p_le_q;
    bool bounded = false;
    bool compact = false;
    double norm_estimate = 0.0;
    /// Present only for 1 < p <= q < inf and when bounded.
    std::optional<double> essential_norm_estimate;
    bool outside_corollary_scope = false;
    std::vector<std::pair<std::string, double>> transform_summary;
    std::optional<LinearSymbolReport> symbol_check;
};

namespace detail {

struct Samples {
    std::vector<Point> points;
    std::vector<double> values;
};

inline Samples sample_transform(const SymbolPair& sym, const Params& params, double R, const CompopOptions& opt) {
    Samples s;
    s.points = ring_grid(params.n, R, opt.ring_step, opt.angles, opt.directions, opt.seed);
    s.values.resize(s.points.size());
    const bool sup_form = params.q_infinite();
    for (std::size_t i = 0; i < s.points.size(); ++i) {
        if (sup_form) {
            try {
                s.values[i] = sup_transform(sym, params, s.points[i]);
            } catch (const Overflow&) {
                s.values[i] = kInf;
            }
        } else {
            s.values[i] = berezin_compop(sym, params, s.points[i], opt).value;
        }
    }
    return s;
}

inline double max_of(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, x);
    return m;
}

/// L^p norm of B over the w-cube of radius R (midpoint step opt.lp_step, ball mask).
inline double transform_lp(const SymbolPair& sym, const Params& params, double p_exp, double R, const CompopOptions& opt) {
    const int n = params.n;
    const int cells = 2 * static_cast<int>(std::ceil(R / opt.lp_step));
    const double half = cells * opt.lp_step / 2.0;
    const double total = midpoint_sum(
        [&](const Point& w) {
            if (w.norm() > R) return 0.0;
            const double b = berezin_compop(sym, params, w, opt).value;
            return b == 0.0 ? 0.0 : std::pow(b, p_exp);
        },
        Point::origin(n), half, cells);
    return std::pow(total, 1.0 / p_exp);
}

} // namespace detail

/// Max of the transform over the outermost shell |w| in [R_last - 1, R_last], to the 1/q
/// (q = inf: max of B^inf over z with |psi(z)| in that shell).
inline double essential_norm_estimate(const SymbolPair& sym, const Params& params, std::span<const double> radii,
                                      const CompopOptions& opt = {}) {
    params.validate();
    if (params.p_infinite() || !(params.p > 1.0)) throw InvalidArgument("p", "essential norm estimate needs 1 < p < infinity");
    if (params.p > params.q) throw InvalidArgument("p", "essential norm estimate needs p <= q");
    if (radii.empty()) throw InvalidArgument("radii", "need at least one radius");
    const double R = radii.back();
    if (sym.u.is_zero()) return 0.0;
    if (params.q_infinite()) {
        const auto s = detail::sample_transform(sym, params, kGrowthFactor * R, opt);
        double m = 0.0;
        for (std::size_t i = 0; i < s.points.size(); ++i) {
            const double pn = sym.map(s.points[i]).norm();
            if (pn >= R - 1.0 && pn <= R) m = std::max(m, s.values[i]);
        }
        return m;
    }
    const auto s = detail::sample_transform(sym, params, R, opt);
    double m = 0.0;
    for (std::size_t i = 0; i < s.points.size(); ++i)
        if (s.points[i].norm() >= R - 1.0 - 1e-12) m = std::max(m, s.values[i]);
    return std::pow(m, 1.0 / params.q);
}

inline CompOpVerdict classify_compop(const SymbolPair& sym, const Params& params, std::span<const double> radii,
                                     const CompopOptions& opt = {}) {
    params.validate();
    if (sym.dim() != params.n) throw InvalidArgument("symbol", "dimension mismatch");
    if (radii.empty()) throw InvalidArgument("radii", "need at least one radius");
    for (std::size_t i = 1; i < radii.size(); ++i)
        if (!(radii[i] > radii[i - 1])) throw InvalidArgument("radii", "radii must be increasing");
    if (!(radii.front() >= 1.0)) throw InvalidArgument("radii", "radii must be at least 1");
    CompOpVerdict v;
    v.regime = compop_regime(params.p, params.q);
    v.outside_corollary_scope = sym.outside_corollary_scope();
    if (const auto* a = std::get_if<AffineMap>(&sym.psi)) v.symbol_check = linear_symbol_check(*a);

    const double R = radii.back();
    const double big_R = kGrowthFactor * R;
    auto& sum = v.transform_summary;

    if (v.regime == CompopRegime::p_le_q || v.regime == CompopRegime::q_infinite) {
        const auto small = detail::sample_transform(sym, params, R, opt);
        const auto big = detail::sample_transform(sym, params, big_R, opt);
        const double peak = detail::max_of(small.values);
        const double peak_big = detail::max_of(big.values);
        double peak_far = std::numeric_limits<double>::quiet_NaN();
        v.bounded = !growth_diverges(peak, peak_big, [&] {
            peak_far = detail::max_of(detail::sample_transform(sym, params, kGrowthFactor * big_R, opt).values);
            return peak_far;
        });
        double shell = 0.0;
        bool shell_empty = true;
        if (v.regime == CompopRegime::q_infinite && !opt.little_o_target) {
            for (std::size_t i = 0; i < big.points.size(); ++i) {
                const double pn = sym.map(big.points[i]).norm();
                if (pn >= R - 1.0 && pn <= R) {
                    shell = std::max(shell, big.values[i]);
                    shell_empty = false;
                }
            }
        } else {
            for (std::size_t i = 0; i < small.points.size(); ++i)
                if (small.points[i].norm() >= R - 1.0 - 1e-12) {
                    shell = std::max(shell, small.values[i]);
                    shell_empty = false;
                }
        }
        const double ref = v.regime == CompopRegime::q_infinite ? std::max(peak, shell) : peak;
        v.compact = v.bounded && (shell_empty || ref == 0.0 || shell < kVanishingThreshold * ref);
        const double root = v.regime == CompopRegime::q_infinite ? 1.0 : 1.0 / params.q;
        v.norm_estimate = v.bounded ? std::pow(peak, root) : kInf;
        sum = {{"peak", peak}, {"peak_grown_domain", peak_big}, {"shell_max", shell}, {"sample_radius", R}};
        if (!std::isnan(peak_far)) sum.emplace_back("peak_far_domain", peak_far);
        if (v.bounded && v.regime == CompopRegime::p_le_q && params.p > 1.0) v.essential_norm_estimate = std::pow(shell, root);
        if (v.bounded && v.regime == CompopRegime::q_infinite && params.p > 1.0 && !params.p_infinite())
            v.essential_norm_estimate = shell;
        return v;
    }

    const double p_exp = v.regime == CompopRegime::q_lt_p ? params.p / (params.p - params.q) : 1.0;
    const double small = detail::transform_lp(sym, params, p_exp, R, opt);
    const double big = detail::transform_lp(sym, params, p_exp, big_R, opt);
    double far = std::numeric_limits<double>::quiet_NaN();
    v.bounded = !growth_diverges(small, big, [&] {
        far = detail::transform_lp(sym, params, p_exp, kGrowthFactor * big_R, opt);
        return far;
    });
    v.compact = v.bounded;
    v.norm_estimate = v.bounded ? std::pow(small, 1.0 / params.q) : kInf;
    sum = {{"lp_exponent", p_exp}, {"lp_norm", small}, {"lp_norm_grown_domain", big}, {"sample_radius", R}};
    if (!std::isnan(far)) sum.emplace_back("lp_norm_far_domain", far);
    return v;
}

struct DirectNormResult {
    double value = 0.0;
    bool exceeded_cap = false;
    std::size_t probes = 0;
};

/// max over k_w and xi_(w,m) of ||u (f o psi)||_(q,m) / ||f||_(p,m); stops once a ratio passes the cap.
inline DirectNormResult direct_operator_norm(const SymbolPair& sym, const Params& params, const CompopOptions& opt = {},
                                             const NormOptions& norm_opt = {}) {
    params.validate();
    const int n = params.n;
    DirectNormResult res;
    if (sym.u.is_zero()) return res;
    const auto centers = detail::ring_grid(n, opt.kernel_radius, opt.ring_step, opt.probe_angles, opt.directions, opt.seed);
    std::vector<EntireFunction> family;
    for (const auto& w : centers) {
        family.push_back(EntireFunction::normalized_kernel(w));
        if (params.m > 0) family.push_back(EntireFunction::xi(w));
    }
    const auto* affine = std::get_if<AffineMap>(&sym.psi);
    auto [uc, uspread] = sym.u.window(n);
    const double udeg = sym.u.degree();
    for (const auto& f : family) {
        ++res.probes;
        const NormWindow fw = window_of(f, n);
        const ScaledFn fg = [&f, &params](const Point& z) { return f.eval_scaled(z, params.alpha, params.m); };
        const NormResult den = weighted_norm(fg, params.alpha, params.p, params.m, n, fw, norm_opt);
        if (den.divergent || !(den.value > 0.0)) continue;
        const ScaledFn g = [&](const Point& z) {
            const ScaledValue a = sym.u.eval_scaled(z, params.alpha, params.m);
            const ScaledValue b = f.eval_scaled(sym.map(z), params.alpha, params.m);
            return ScaledValue{a.mantissa * b.mantissa, a.log_scale + b.log_scale};
        };
        NormWindow gw;
        if (affine) {
            gw.center = affine->adjoint_apply(fw.center) + uc;
            gw.extra_radius = uspread + affine->op_norm() * fw.extra_radius;
        } else {
            gw.center = uc;
            gw.extra_radius = uspread;
        }
        gw.degree = udeg;
        const NormResult num = weighted_norm(g, params.alpha, params.q, params.m, n, gw, norm_opt);
        if (num.divergent) {
            res.value = kInf;
            res.exceeded_cap = true;
            return res;
        }
        res.value = std::max(res.value, num.value / den.value);
        if (res.value > opt.cap) {
            res.exceeded_cap = true;
            return res;
        }
    }
    return res;
}

} // namespace fock
