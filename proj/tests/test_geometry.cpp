#include <gtest/gtest.h>

#include "fock/geometry.hpp"

using namespace fock;

namespace {

double brute_min_distance(const Lattice& lat) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < lat.centers.size(); ++i)
        for (std::size_t j = i + 1; j < lat.centers.size(); ++j) best = std::min(best, distance(lat.centers[i], lat.centers[j]));
    return best;
}

// Oracle: linear scan over all centers.
bool brute_covered(const Lattice& lat, const Point& z) {
    for (const auto& c : lat.centers)
        if (distance2(c, z) < lat.separation * lat.separation) return true;
    return false;
}

} // namespace

TEST(Lattice, OriginIsFirstCenter) {
    const Lattice lat = make_lattice(4.0, 1.0, 1);
    ASSERT_FALSE(lat.centers.empty());
    EXPECT_EQ(lat.centers.front().norm(), 0.0);
}

TEST(Lattice, SeparationAndBruteForceCovering) {
    const Lattice lat = make_lattice(4.0, 1.0, 1);
    EXPECT_GE(brute_min_distance(lat), 1.0);
    Rng rng(42);
    std::size_t uncovered = 0;
    for (int i = 0; i < 100000; ++i)
        if (!brute_covered(lat, rng.in_ball(Point::origin(1), 3.0))) ++uncovered;
    EXPECT_EQ(uncovered, 0u);
}

TEST(Lattice, CountWithinVolumeBounds) {
    const Lattice lat = make_lattice(2.0, 1.0, 1);
    EXPECT_GE(lat.centers.size(), 4u);
    EXPECT_LE(lat.centers.size(), 21u);
}

TEST(Lattice, CentersDeduplicatedAndInsideDomain) {
    const Lattice lat = make_lattice(3.0, 0.7, 1);
    for (const auto& c : lat.centers) EXPECT_LE(c.norm(), 3.0 + 1e-12);
    EXPECT_GT(brute_min_distance(lat), 0.0);
}

TEST(Lattice, Deterministic) {
    const Lattice a = make_lattice(3.0, 0.5, 1);
    const Lattice b = make_lattice(3.0, 0.5, 1);
    ASSERT_EQ(a.centers.size(), b.centers.size());
    for (std::size_t i = 0; i < a.centers.size(); ++i) EXPECT_EQ(distance(a.centers[i], b.centers[i]), 0.0);
}

TEST(Lattice, RejectsBadArguments) {
    EXPECT_THROW(make_lattice(4.0, 0.0, 1), InvalidArgument);
    EXPECT_THROW(make_lattice(1.0, 1.0, 1), InvalidArgument);
    EXPECT_THROW(make_lattice(4.0, 1.0, 0), InvalidArgument);
    EXPECT_THROW(make_lattice(4.0, 1.0, 5), InvalidArgument);
}

TEST(Multiplicity, VolumeBoundAtTwiceSeparation) {
    const Lattice lat = make_lattice(6.0, 1.0, 1);
    Rng rng(7);
    std::vector<Point> probes;
    for (int i = 0; i < 100000; ++i) probes.push_back(rng.in_ball(Point::origin(1), 6.0));
    EXPECT_LE(covering_multiplicity(lat, 2.0, probes), 25u);
}

TEST(Multiplicity, SingleCenter) {
    const Lattice lat{{Point{cplx{0.3, -0.2}}}, 1.0, 2.0, 1};
    const std::vector<Point> probes{lat.centers[0]};
    EXPECT_EQ(covering_multiplicity(lat, 1.0, probes), 1u);
}

TEST(Multiplicity, HalfSeparationSeesOnlyItself) {
    const Lattice lat = make_lattice(4.0, 1.0, 1);
    EXPECT_EQ(covering_multiplicity(lat, 0.5, lat.centers), 1u);
}

TEST(Verify, GeneratedLatticeHasNoHoles) {
    const Lattice lat = make_lattice(4.0, 1.0, 1);
    const LatticeReport rep = verify_lattice(lat, 100000, 42);
    EXPECT_EQ(rep.uncovered_probe_count, 0u);
    EXPECT_DOUBLE_EQ(rep.min_pair_distance, brute_min_distance(lat));
}

TEST(Verify, RemovedInteriorCenterLeavesHole) {
    Lattice lat = make_lattice(4.0, 1.0, 1);
    lat.centers.erase(lat.centers.begin()); // the origin
    EXPECT_GT(verify_lattice(lat, 100000, 42).uncovered_probe_count, 0u);
}

TEST(Verify, SingleCenterCoversShrunkenBall) {
    const Lattice lat{{Point::origin(1)}, 1.0, 2.0, 1};
    EXPECT_EQ(verify_lattice(lat, 1000, 3).uncovered_probe_count, 0u);
    const Lattice off{{Point{cplx{0.5, 0.0}}}, 1.0, 2.0, 1};
    EXPECT_GT(verify_lattice(off, 1000, 3).uncovered_probe_count, 0u);
}

TEST(Verify, RejectsZeroProbes) {
    const Lattice lat{{Point::origin(1)}, 1.0, 2.0, 1};
    EXPECT_THROW(verify_lattice(lat, 0, 1), InvalidArgument);
}

TEST(InBall, StrictBoundary) {
    const Point c = Point::origin(1);
    EXPECT_FALSE(in_ball(c, 1.0, Point{cplx{1.0, 0.0}}));
    EXPECT_TRUE(in_ball(c, 1.0, Point{cplx{0.999, 0.0}}));
}

// Property: random (R, r, n) keep separation, covering and the multiplicity bound.
TEST(LatticeProperty, RandomConfigurations) {
    Rng gen(2024);
    for (int trial = 0; trial < 8; ++trial) {
        const int n = trial < 6 ? 1 : 2;
        const double r = n == 1 ? gen.uniform(0.4, 1.5) : gen.uniform(1.0, 1.5);
        const double R = n == 1 ? gen.uniform(2.0 * r, 5.0) : 2.0 * r + gen.uniform(0.0, 0.5);
        const Lattice lat = make_lattice(R, r, n);
        SCOPED_TRACE("trial " + std::to_string(trial));
        EXPECT_GE(brute_min_distance(lat), r);
        EXPECT_EQ(verify_lattice(lat, 20000, 100 + trial).uncovered_probe_count, 0u);
        Rng prng(trial);
        std::vector<Point> probes;
        for (int i = 0; i < 5000; ++i) probes.push_back(prng.in_ball(Point::origin(n), R));
        EXPECT_LE(covering_multiplicity(lat, 2.0 * r, probes), static_cast<std::size_t>(std::pow(5.0, 2 * n)));
    }
}

TEST(PointIndex, AgreesWithLinearScan) {
    const Lattice lat = make_lattice(5.0, 0.8, 1);
    const PointIndex idx = lat.index();
    Rng rng(11);
    for (int i = 0; i < 2000; ++i) {
        const Point z = rng.in_ball(Point::origin(1), 5.0);
        std::size_t expect = 0;
        for (const auto& c : lat.centers) expect += distance2(c, z) < 1.5 * 1.5;
        std::size_t got = 0;
        idx.for_candidates(z, 1.5, [&](int k) { got += distance2(lat.centers[k], z) < 1.5 * 1.5; });
        EXPECT_EQ(got, expect);
    }
}
