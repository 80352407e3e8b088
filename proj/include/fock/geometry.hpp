#pragma once

// Balls, lattices and covering checks in C^n.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "fock/error.hpp"
#include "fock/point.hpp"

namespace fock {

/// Open ball D(z, r) = {w : |z - w| < r}.
inline bool in_ball(const Point& center, double r, const Point& w) noexcept { return distance2(center, w) < r * r; }

/// Dense bucket grid over the cube [-extent, extent]^(2n) for radius queries.
/// Points outside the cube are clamped into the boundary buckets.
class PointIndex {
public:
    PointIndex(int dim, double extent, double cell) : dim_(dim), cell_(cell), extent_(extent) {
        per_axis_ = std::max(1, static_cast<int>(std::ceil(2.0 * extent / cell)));
        std::size_t total = 1;
        for (int k = 0; k < 2 * dim; ++k) total *= static_cast<std::size_t>(per_axis_);
        buckets_.resize(total);
    }

    void insert(const Point& p, int id) { buckets_[bucket_of(p)].push_back(id); }

    /// Calls visit(id) for every id whose bucket could hold a point within `radius` of p.
    template <class Visit>
    void for_candidates(const Point& p, double radius, Visit&& visit) const {
        const int d = 2 * dim_;
        const int reach = static_cast<int>(std::ceil(radius / cell_));
        std::array<int, 2 * kMaxDim> lo{}, hi{}, cur{};
        for (int k = 0; k < d; ++k) {
            const int c = axis_bucket(p.real_coord(k));
            lo[k] = std::max(0, c - reach);
            hi[k] = std::min(per_axis_ - 1, c + reach);
            cur[k] = lo[k];
        }
        while (true) {
            std::size_t flat = 0;
            for (int k = 0; k < d; ++k) flat = flat * per_axis_ + static_cast<std::size_t>(cur[k]);
            for (int id : buckets_[flat]) visit(id);
            int k = d - 1;
            while (k >= 0 && cur[k] == hi[k]) {
                cur[k] = lo[k];
                --k;
            }
            if (k < 0) break;
            ++cur[k];
        }
    }

private:
    int axis_bucket(double x) const noexcept {
        const int b = static_cast<int>(std::floor((x + extent_) / cell_));
        return std::clamp(b, 0, per_axis_ - 1);
    }
    std::size_t bucket_of(const Point& p) const noexcept {
        std::size_t flat = 0;
        for (int k = 0; k < 2 * dim_; ++k) flat = flat * per_axis_ + static_cast<std::size_t>(axis_bucket(p.real_coord(k)));
        return flat;
    }

    int dim_;
    double cell_;
    double extent_;
    int per_axis_ = 1;
    std::vector<std::vector<int>> buckets_;
};

/// r/2-lattice on the truncated domain {|z| <= domain_radius}: centers pairwise at
/// distance >= separation, and D(z_k, separation) covers {|z| <= domain_radius - separation}.
struct Lattice {
    std::vector<Point> centers;
    double separation = 1.0;
    double domain_radius = 1.0;
    int dim = 1;

    PointIndex index() const {
        PointIndex idx(dim, domain_radius + separation, separation);
        for (std::size_t i = 0; i < centers.size(); ++i) idx.insert(centers[i], static_cast<int>(i));
        return idx;
    }
};

struct LatticeOptions {
    /// Candidate grid step is separation / grid_divisor.
    int grid_divisor = 4;
    /// Seeded uniform probes used to fill residual holes between grid candidates.
    std::size_t repair_probes = 200000;
    std::uint64_t repair_seed = 0x1a77ce5eedull;
};

/// Greedy maximal r-separated subset of the grid (step r/4) inside {|z| <= domain_radius}.
/// The origin is taken first, then the grid is scanned lexicographically (first real
/// coordinate most significant). A seeded probe sweep then adds any point of the covering
/// ball left uncovered; such a point is itself r-separated, so separation is preserved.
inline Lattice make_lattice(double domain_radius, double r, int n, const LatticeOptions& opt = {}) {
    if (!(r > 0.0) || !std::isfinite(r)) throw InvalidArgument("r", "separation must be positive");
    if (!(domain_radius >= 2.0 * r)) throw InvalidArgument("domain_radius", "must be at least 2r");
    if (n < 1 || n > kMaxDim) throw InvalidArgument("n", "dimension must be in [1, 4]");

    const int d = 2 * n;
    // Slightly inflated so grid pairs g steps apart stay >= r after rounding.
    const double h = r / opt.grid_divisor * (1.0 + 1e-12);
    const int half = static_cast<int>(std::floor(domain_radius / h));
    const int side = 2 * half + 1;
    std::size_t total = 1;
    for (int k = 0; k < d; ++k) total *= static_cast<std::size_t>(side);

    // Offsets o with |o| h < r, i.e. |o|^2 < divisor^2 (exact in integers).
    const int g = opt.grid_divisor;
    std::vector<std::array<int, 2 * kMaxDim>> offsets;
    {
        std::array<int, 2 * kMaxDim> o{};
        for (int k = 0; k < d; ++k) o[k] = -g;
        while (true) {
            int s = 0;
            for (int k = 0; k < d; ++k) s += o[k] * o[k];
            if (s < g * g) offsets.push_back(o);
            int k = d - 1;
            while (k >= 0 && o[k] == g) {
                o[k] = -g;
                --k;
            }
            if (k < 0) break;
            ++o[k];
        }
    }

    std::vector<bool> blocked(total, false);
    const double limit2 = (domain_radius / h) * (domain_radius / h);

    auto to_point = [&](const std::array<int, 2 * kMaxDim>& k) {
        Point p(n);
        for (int a = 0; a < d; ++a) p.set_real_coord(a, k[a] * h);
        return p;
    };
    auto flat_of = [&](const std::array<int, 2 * kMaxDim>& k) {
        std::size_t f = 0;
        for (int a = 0; a < d; ++a) f = f * side + static_cast<std::size_t>(k[a] + half);
        return f;
    };

    Lattice lat;
    lat.separation = r;
    lat.domain_radius = domain_radius;
    lat.dim = n;

    auto select = [&](const std::array<int, 2 * kMaxDim>& k) {
        lat.centers.push_back(to_point(k));
        for (const auto& o : offsets) {
            std::array<int, 2 * kMaxDim> q{};
            bool inside = true;
            for (int a = 0; a < d; ++a) {
                q[a] = k[a] + o[a];
                if (q[a] < -half || q[a] > half) {
                    inside = false;
                    break;
                }
            }
            if (inside) blocked[flat_of(q)] = true;
        }
    };

    select(std::array<int, 2 * kMaxDim>{});

    std::array<int, 2 * kMaxDim> k{};
    for (int a = 0; a < d; ++a) k[a] = -half;
    while (true) {
        long long s = 0;
        for (int a = 0; a < d; ++a) s += static_cast<long long>(k[a]) * k[a];
        if (static_cast<double>(s) <= limit2 && !blocked[flat_of(k)]) select(k);
        int a = d - 1;
        while (a >= 0 && k[a] == half) {
            k[a] = -half;
            --a;
        }
        if (a < 0) break;
        ++k[a];
    }

    // Hole repair on the covering ball.
    PointIndex idx = lat.index();
    Rng rng(opt.repair_seed);
    const double cover_radius = domain_radius - r;
    for (std::size_t i = 0; i < opt.repair_probes; ++i) {
        const Point x = rng.in_ball(Point::origin(n), cover_radius);
        bool covered = false;
        idx.for_candidates(x, r, [&](int id) {
            if (!covered && distance2(x, lat.centers[id]) < r * r * (1.0 + 1e-12)) covered = true;
        });
        if (!covered) {
            idx.insert(x, static_cast<int>(lat.centers.size()));
            lat.centers.push_back(x);
        }
    }
    return lat;
}

/// Max over probes of #{k : |probe - z_k| < rho}.
inline std::size_t covering_multiplicity(const Lattice& lat, double rho, std::span<const Point> probes) {
    if (probes.empty() || lat.centers.empty()) return 0;
    const PointIndex idx = lat.index();
    std::size_t best = 0;
    for (const auto& x : probes) {
        std::size_t count = 0;
        idx.for_candidates(x, rho, [&](int id) {
            if (distance2(x, lat.centers[id]) < rho * rho) ++count;
        });
        best = std::max(best, count);
    }
    return best;
}

struct LatticeReport {
    double min_pair_distance = std::numeric_limits<double>::infinity();
    std::size_t uncovered_probe_count = 0;
};

/// Exact minimum pairwise center distance and a seeded covering probe count on
/// {|z| <= domain_radius - separation}.
inline LatticeReport verify_lattice(const Lattice& lat, std::size_t probe_count, std::uint64_t seed) {
    if (probe_count < 1) throw InvalidArgument("probe_count", "must be at least 1");
    LatticeReport rep;
    const double r = lat.separation;
    const PointIndex idx = lat.index();
    // Any pair closer than 2r is found through the index; in a covering every center has
    // a neighbor within 2r, so the global minimum is among them unless the set is tiny.
    for (std::size_t i = 0; i < lat.centers.size(); ++i) {
        idx.for_candidates(lat.centers[i], 2.0 * r, [&](int id) {
            if (static_cast<std::size_t>(id) > i)
                rep.min_pair_distance = std::min(rep.min_pair_distance, distance(lat.centers[i], lat.centers[id]));
        });
    }
    if (!std::isfinite(rep.min_pair_distance) && lat.centers.size() <= 4096) {
        for (std::size_t i = 0; i < lat.centers.size(); ++i)
            for (std::size_t j = i + 1; j < lat.centers.size(); ++j)
                rep.min_pair_distance = std::min(rep.min_pair_distance, distance(lat.centers[i], lat.centers[j]));
    }

    Rng rng(seed);
    const double cover_radius = std::max(0.0, lat.domain_radius - r);
    for (std::size_t i = 0; i < probe_count; ++i) {
        const Point x = rng.in_ball(Point::origin(lat.dim), cover_radius);
        bool covered = false;
        idx.for_candidates(x, r, [&](int id) {
            if (!covered && distance2(x, lat.centers[id]) < r * r * (1.0 + 1e-12)) covered = true;
        });
        if (!covered) ++rep.uncovered_probe_count;
    }
    return rep;
}

} // namespace fock
