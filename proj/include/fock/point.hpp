#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <numbers>
#include <span>

#include "fock/error.hpp"

namespace fock {

using cplx = std::complex<double>;

inline constexpr int kMaxDim = 4;

/// A point of C^n, stored inline (n <= kMaxDim) so it is cheap to copy in quadrature loops.
class Point {
public:
    Point() = default;
    explicit Point(int dim) : dim_(dim) {
        if (dim < 1 || dim > kMaxDim) throw InvalidArgument("n", "dimension must be in [1, 4]");
    }
    Point(std::initializer_list<cplx> coords) : Point(static_cast<int>(coords.size())) {
        int j = 0;
        for (const auto& c : coords) coords_[j++] = c;
    }

    static Point origin(int dim) { return Point(dim); }

    /// Builds a point from 2n interleaved real coordinates (re_1, im_1, re_2, ...).
    static Point from_reals(std::span<const double> reals) {
        Point z(static_cast<int>(reals.size() / 2));
        for (int j = 0; j < z.dim_; ++j) z.coords_[j] = {reals[2 * j], reals[2 * j + 1]};
        return z;
    }

    int dim() const noexcept { return dim_; }
    int real_dim() const noexcept { return 2 * dim_; }

    cplx& operator[](int j) noexcept { return coords_[j]; }
    const cplx& operator[](int j) const noexcept { return coords_[j]; }

    /// k-th real coordinate, k in [0, 2n).
    double real_coord(int k) const noexcept { return k % 2 == 0 ? coords_[k / 2].real() : coords_[k / 2].imag(); }
    void set_real_coord(int k, double v) noexcept {
        if (k % 2 == 0) coords_[k / 2].real(v);
        else coords_[k / 2].imag(v);
    }

    double norm2() const noexcept {
        double s = 0.0;
        for (int j = 0; j < dim_; ++j) s += std::norm(coords_[j]);
        return s;
    }
    double norm() const noexcept { return std::sqrt(norm2()); }

    bool finite() const noexcept {
        for (int j = 0; j < dim_; ++j)
            if (!std::isfinite(coords_[j].real()) || !std::isfinite(coords_[j].imag())) return false;
        return true;
    }

    Point& operator+=(const Point& o) noexcept {
        for (int j = 0; j < dim_; ++j) coords_[j] += o.coords_[j];
        return *this;
    }
    Point& operator-=(const Point& o) noexcept {
        for (int j = 0; j < dim_; ++j) coords_[j] -= o.coords_[j];
        return *this;
    }
    Point& operator*=(cplx s) noexcept {
        for (int j = 0; j < dim_; ++j) coords_[j] *= s;
        return *this;
    }

    friend Point operator+(Point a, const Point& b) noexcept { return a += b; }
    friend Point operator-(Point a, const Point& b) noexcept { return a -= b; }
    friend Point operator*(cplx s, Point a) noexcept { return a *= s; }
    friend bool operator==(const Point& a, const Point& b) noexcept {
        if (a.dim_ != b.dim_) return false;
        for (int j = 0; j < a.dim_; ++j)
            if (a.coords_[j] != b.coords_[j]) return false;
        return true;
    }

private:
    std::array<cplx, kMaxDim> coords_{};
    int dim_ = 1;
};

/// <z, w> = sum z_j conj(w_j)
inline cplx inner(const Point& z, const Point& w) noexcept {
    cplx s = 0.0;
    for (int j = 0; j < z.dim(); ++j) s += z[j] * std::conj(w[j]);
    return s;
}

inline double distance2(const Point& a, const Point& b) noexcept {
    double s = 0.0;
    for (int j = 0; j < a.dim(); ++j) s += std::norm(a[j] - b[j]);
    return s;
}
inline double distance(const Point& a, const Point& b) noexcept { return std::sqrt(distance2(a, b)); }

/// SplitMix-seeded xoshiro-style generator with a fixed, platform independent output
/// mapping (std distributions are implementation-defined).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() noexcept {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }
    /// Uniform in [0, 1).
    double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }
    double normal() noexcept {
        const double u1 = 1.0 - uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    /// Uniform sample from the closed ball {|z - center| <= radius} in C^n.
    Point in_ball(const Point& center, double radius) {
        const int d = center.real_dim();
        Point z(center.dim());
        double s = 0.0;
        for (int k = 0; k < d; ++k) {
            const double g = normal();
            z.set_real_coord(k, g);
            s += g * g;
        }
        const double scale = radius * std::pow(uniform(), 1.0 / d) / std::sqrt(s);
        z *= scale;
        return z + center;
    }

private:
    std::uint64_t state_;
};

} // namespace fock
