#include <gtest/gtest.h>

#include <numbers>

#include "fock/carleson.hpp"
#include "fock/measures.hpp"

using namespace fock;

namespace {

constexpr double kPi = std::numbers::pi;

double rel(double got, double want) { return std::abs(got - want) / std::abs(want); }

Point at(double re, double im = 0.0) { return Point{cplx{re, im}}; }

Measure random_atoms(Rng& g, int count, double radius) {
    std::vector<Atom> atoms;
    for (int i = 0; i < count; ++i) atoms.push_back({g.in_ball(Point::origin(1), radius), g.uniform(0.1, 2.0)});
    return Measure::atomic(1, atoms);
}

Measure lattice_atoms(double R, double r) {
    std::vector<Atom> atoms;
    for (const auto& c : make_lattice(R, r, 1).centers) atoms.push_back({c, 1.0});
    return Measure::atomic(1, atoms);
}

std::vector<std::pair<std::string, Measure>> suite() {
    return {{"lattice_atoms", lattice_atoms(6.0, 1.0)},
            {"gaussian", Measure::gaussian(1, 1.0, 8.0)},
            {"lebesgue", Measure::lebesgue(1, 8.0)},
            {"polygrowth", Measure::polygrowth(1, 2.0, 8.0)}};
}

} // namespace

TEST(Catalog, Validation) {
    EXPECT_THROW(Measure::atomic(1, {{at(0.0), -1.0}}), InvalidArgument);
    EXPECT_THROW(Measure::atomic(1, {{at(std::nan("")), 1.0}}), InvalidArgument);
    EXPECT_THROW(Measure::gaussian(1, 0.0, 8.0), InvalidArgument);
    EXPECT_THROW(Measure::lebesgue(1, 0.0), InvalidArgument);
    EXPECT_THROW(Measure::ring(1, 2.0, 0.0, 8.0), InvalidArgument);
    EXPECT_TRUE(Measure::atomic(1, {{at(1.0), 0.0}}).atoms().empty());
}

TEST(BallMass, DiracExamples) {
    const Measure d = Measure::dirac(Point::origin(1));
    EXPECT_EQ(ball_mass(d, Point::origin(1), 1.0), 1.0);
    EXPECT_EQ(ball_mass(d, at(2.0), 1.0), 0.0);
    EXPECT_EQ(ball_mass(d, at(1.0), 1.0), 0.0); // open ball
}

TEST(BallMass, LebesgueDiskArea) {
    const Measure leb = Measure::lebesgue(1, 10.0);
    for (const Point& z : {Point::origin(1), at(3.0, -2.0), at(-7.5, 1.0)}) EXPECT_LT(rel(ball_mass(leb, z, 1.0), kPi), 1e-4);
    EXPECT_LT(rel(ball_mass(leb, at(1.0), 2.5), kPi * 6.25), 1e-4);
}

TEST(BallMass, LebesgueBallVolumeInTwoDimensions) {
    const Measure leb = Measure::lebesgue(2, 10.0);
    EXPECT_LT(rel(ball_mass(leb, Point{cplx{1.0, 0.0}, cplx{0.0, 1.0}}, 1.0), kPi * kPi / 2.0), 1e-4);
}

TEST(BallMass, GaussianOracle) {
    // Oracle: mass of e^{-|z|^2} on the unit disk about 0 is pi (1 - e^{-1}).
    EXPECT_LT(rel(ball_mass(Measure::gaussian(1, 1.0, 8.0), Point::origin(1), 1.0), kPi * (1.0 - std::exp(-1.0))), 1e-8);
}

TEST(BallMass, MonotoneInRadius) {
    Rng g(8);
    const Measure mu = random_atoms(g, 200, 4.0);
    for (const auto& [name, nu] : suite()) {
        for (int i = 0; i < 20; ++i) {
            const Point z = g.in_ball(Point::origin(1), 5.0);
            double prev = 0.0;
            for (double r : {0.25, 0.5, 1.0, 1.5, 2.0}) {
                const double a = ball_mass(nu, z, r), b = ball_mass(mu, z, r);
                EXPECT_GE(a, prev * (1.0 - 1e-12)) << name;
                prev = a;
                EXPECT_LE(ball_mass(mu, z, r / 2.0), b);
            }
        }
    }
}

TEST(Averaging, DiracIndicator) {
    const Measure d = Measure::dirac(Point::origin(1));
    EXPECT_EQ(averaging_value(d, 0.0, 1.0, at(0.5, 0.5)), 1.0);
    EXPECT_EQ(averaging_value(d, 0.0, 1.0, at(0.0, 0.999)), 1.0);
    EXPECT_EQ(averaging_value(d, 0.0, 1.0, at(1.0)), 0.0);
    EXPECT_EQ(averaging_value(d, 0.0, 1.0, at(-1.5)), 0.0);
}

TEST(Averaging, LebesgueClosedForms) {
    const Measure leb = Measure::lebesgue(1, 10.0);
    for (const Point& z : {Point::origin(1), at(2.0, 1.0), at(-4.0, -3.0)}) {
        EXPECT_LT(rel(averaging_value(leb, 2.0, 1.0, z), kPi / std::pow(1.0 + z.norm(), 2)), 1e-4);
        EXPECT_LT(rel(averaging_value(leb, 0.0, 1.0, z), kPi), 1e-4);
        EXPECT_LT(rel(averaging_value(leb, 0.0, 2.0, z), 4.0 * kPi), 1e-4);
    }
}

TEST(AveragingSequence, Examples) {
    const Lattice lat = make_lattice(4.0, 1.0, 1);
    const auto seq = averaging_sequence(Measure::dirac(Point::origin(1)), 0.0, 1.0, lat);
    ASSERT_EQ(lat.centers.front().norm(), 0.0);
    EXPECT_EQ(seq.front(), 1.0);
    for (std::size_t k = 0; k < seq.size(); ++k)
        if (lat.centers[k].norm() >= 1.0) { EXPECT_EQ(seq[k], 0.0); }

    const auto leb = averaging_sequence(Measure::lebesgue(1, 10.0), 0.0, 1.0, lat);
    for (double v : leb) EXPECT_LT(rel(v, kPi), 1e-4);

    for (double v : averaging_sequence(Measure::empty(1), 0.0, 1.0, lat)) EXPECT_EQ(v, 0.0);
}

TEST(Berezin, SingleAtomFormula) {
    const Point w0 = at(1.5, -0.5);
    const Measure d = Measure::dirac(w0);
    for (const Point& w : {Point::origin(1), at(1.0, 1.0), at(3.0)}) {
        const double want = std::pow(1.0 + w0.norm(), -2.0) * std::exp(-2.0 * distance2(w0, w) / 2.0);
        EXPECT_LT(rel(berezin_value(d, 2.0, 2.0, 1.0, w), want), 1e-14);
    }
}

TEST(Berezin, LebesgueClosedForm) {
    const Measure leb = Measure::lebesgue(1, 12.0);
    for (const Point& w : {Point::origin(1), at(2.0, 2.0)}) {
        EXPECT_LT(rel(berezin_value(leb, 2.0, 0.0, 1.0, w), kPi), 1e-6);
        EXPECT_LT(rel(berezin_value(leb, 1.0, 0.0, 1.0, w), 2.0 * kPi), 1e-6);
    }
}

TEST(SequenceLp, Examples) {
    const std::vector<double> a{3.0, 4.0}, b{1.0, 1.0, 1.0}, c(7, kPi);
    EXPECT_DOUBLE_EQ(sequence_lp(a, 2.0), 5.0);
    EXPECT_DOUBLE_EQ(sequence_lp(b, kInf), 1.0);
    EXPECT_NEAR(sequence_lp(c, 1.0), 7.0 * kPi, 1e-12);
    EXPECT_THROW(sequence_lp(a, 0.5), InvalidArgument);
}

TEST(TotalWeightedMass, Examples) {
    const Point w0 = at(0.6, 0.8);
    EXPECT_DOUBLE_EQ(total_weighted_mass(Measure::dirac(w0), 2.0), 0.25);
    EXPECT_LT(rel(total_weighted_mass(Measure::gaussian(1, 1.0, 8.0), 0.0), kPi), 1e-6);
    EXPECT_LT(rel(total_weighted_mass(Measure::lebesgue(1, 5.0), 0.0), 25.0 * kPi), 1e-4);
}

// Property: additivity and homogeneity for atomic measures.
TEST(Linearity, AtomicMeasures) {
    Rng g(2718);
    for (int trial = 0; trial < 5; ++trial) {
        const Measure a = random_atoms(g, 30 + 20 * trial, 4.0);
        const Measure b = random_atoms(g, 50, 3.0);
        std::vector<Atom> both = a.atoms();
        both.insert(both.end(), b.atoms().begin(), b.atoms().end());
        const Measure sum = Measure::atomic(1, both);
        const double lambda = g.uniform(0.1, 10.0);
        const Measure scaled = a.scaled(lambda);
        for (int i = 0; i < 20; ++i) {
            const Point z = g.in_ball(Point::origin(1), 5.0);
            EXPECT_LT(std::abs(ball_mass(sum, z, 1.0) - ball_mass(a, z, 1.0) - ball_mass(b, z, 1.0)), 1e-12 * (1.0 + ball_mass(sum, z, 1.0)));
            const double bs = berezin_value(sum, 2.0, 1.0, 1.0, z), ba = berezin_value(a, 2.0, 1.0, 1.0, z), bb = berezin_value(b, 2.0, 1.0, 1.0, z);
            EXPECT_LE(std::abs(bs - ba - bb), 1e-12 * bs);
            EXPECT_LE(std::abs(berezin_value(scaled, 2.0, 1.0, 1.0, z) - lambda * ba), 1e-12 * lambda * ba);
        }
        EXPECT_LT(rel(total_weighted_mass(sum, 2.0), total_weighted_mass(a, 2.0) + total_weighted_mass(b, 2.0)), 1e-12);
        EXPECT_LT(rel(total_weighted_mass(scaled, 2.0), lambda * total_weighted_mass(a, 2.0)), 1e-12);
    }
}

// The spatial index must not change atomic results.
TEST(AtomIndex, AgreesWithLinearScan) {
    Rng g(55);
    const Measure big = random_atoms(g, 500, 6.0);
    for (int i = 0; i < 50; ++i) {
        const Point z = g.in_ball(Point::origin(1), 6.0);
        double ball = 0.0, ber = 0.0;
        for (const auto& a : big.atoms()) {
            if (distance2(a.location, z) < 1.0) ball += a.weight;
            ber += a.weight * std::pow(1.0 + a.location.norm(), -2.0) * std::exp(-distance2(a.location, z));
        }
        EXPECT_NEAR(ball_mass(big, z, 1.0), ball, 1e-12);
        EXPECT_NEAR(berezin_value(big, 2.0, 2.0, 1.0, z), ber, 1e-15 + 1e-13 * ber);
    }
}

// Pointwise averaging <= e^{t alpha r^2/2} (1+r)^s x Berezin, on the suite at 200 points.
TEST(Domination, AveragingBelowBerezin) {
    const double t = 2.0, alpha = 1.0, r = 1.0;
    Rng g(1234);
    std::vector<Point> pts;
    for (int i = 0; i < 200; ++i) pts.push_back(g.in_ball(Point::origin(1), 7.0));
    for (double s : {0.0, 2.0}) {
        const double C = std::exp(t * alpha * r * r / 2.0) * std::pow(1.0 + r, s);
        for (const auto& [name, mu] : suite())
            for (const auto& z : pts) {
                const double avg = averaging_value(mu, s, r, z);
                EXPECT_LE(avg, C * berezin_value(mu, t, s, alpha, z) * (1.0 + 1e-9)) << name << " s=" << s;
            }
    }
}

// Norms of the averaging function at r = 1 and r = 2 differ by a bounded factor.
TEST(RIndependence, AveragingNorms) {
    for (double s : {0.0, 2.0})
        for (const auto& [name, mu] : suite())
            for (double p : {1.0, 2.0, kInf}) {
                const double R = mu.support_radius() + 2.0;
                const double a = detail::field_norm([&](const Point& z) { return averaging_value(mu, s, 1.0, z); }, 1, p, R, 0.25);
                const double b = detail::field_norm([&](const Point& z) { return averaging_value(mu, s, 2.0, z); }, 1, p, R, 0.25);
                ASSERT_GT(a, 0.0);
                EXPECT_LE(std::max(a / b, b / a), 50.0) << name << " s=" << s << " p=" << p;
            }
}
