#include <gtest/gtest.h>

#include <numbers>

#include "fock/parallel.hpp"
#include "fock/quadrature.hpp"

using namespace fock;

namespace {

constexpr double kPi = std::numbers::pi;

ScalarField gaussian(int n, double c, const Point& w) {
    return ScalarField(n, [c, w](const Point& z) { return std::exp(-c * distance2(z, w)); }, {0.0, c, std::nullopt, w});
}

double rel(double got, double want) { return std::abs(got - want) / std::abs(want); }

} // namespace

TEST(TruncationRadius, UnitGaussianNearSix) {
    const double R = truncation_radius(1.0, 0.0, 1e-12, 1);
    EXPECT_NEAR(R, 6.0, 0.5);
    // Oracle: closed-form tail pi e^{-R^2} is below the tolerance at R.
    EXPECT_LT(kPi * std::exp(-R * R), 1e-12);
}

TEST(TruncationRadius, MonotoneInDecayAndGrowth) {
    EXPECT_GT(truncation_radius(0.5, 0.0, 1e-12, 1), truncation_radius(1.0, 0.0, 1e-12, 1));
    EXPECT_GT(truncation_radius(1.0, 4.0, 1e-12, 1), truncation_radius(1.0, 0.0, 1e-12, 1));
    EXPECT_GE(truncation_radius(1.0, 0.0, 1e-14, 1), truncation_radius(1.0, 0.0, 1e-12, 1));
}

TEST(TruncationRadius, RejectsBadArguments) {
    EXPECT_THROW(truncation_radius(0.0, 0.0, 1e-12, 1), InvalidArgument);
    EXPECT_THROW(truncation_radius(1.0, -1.0, 1e-12, 1), InvalidArgument);
    EXPECT_THROW(truncation_radius(1.0, 0.0, 0.0, 1), InvalidArgument);
}

TEST(Integrate, HalfGaussianIsTwoPi) {
    const ScalarField f = gaussian(1, 0.5, Point::origin(1));
    EXPECT_LT(rel(integrate_gaussian(f, make_scheme(f)).value, 2.0 * kPi), 1e-6);
}

TEST(Integrate, ZeroField) {
    const ScalarField f = ScalarField::zero(1);
    const Integral I = integrate_gaussian(f, make_scheme(f));
    EXPECT_EQ(I.value, 0.0);
    EXPECT_EQ(I.error_estimate, 0.0);
}

TEST(Integrate, ShiftedGaussianRecentred) {
    const ScalarField f = gaussian(1, 0.5, Point{cplx{2.0, 0.0}});
    EXPECT_LT(rel(integrate_gaussian(f, make_scheme(f)).value, 2.0 * kPi), 1e-6);
}

TEST(Integrate, TwoDimensionalClosedForm) {
    for (double c : {0.5, 1.0, 2.0}) {
        const ScalarField f = gaussian(2, c, Point{cplx{1.0, 0.5}, cplx{-0.5, 1.0}});
        EXPECT_LT(rel(integrate_gaussian(f, make_scheme(f)).value, std::pow(kPi / c, 2)), 1e-4) << c;
    }
}

TEST(Integrate, TranslationInvariance) {
    const double base = integrate_gaussian(gaussian(1, 1.0, Point::origin(1)), make_scheme(gaussian(1, 1.0, Point::origin(1)))).value;
    for (double w : {1.0, 2.0}) {
        const ScalarField f = gaussian(1, 1.0, Point{cplx{0.0, w}});
        EXPECT_LT(rel(integrate_gaussian(f, make_scheme(f)).value, base), 1e-6);
    }
}

TEST(Integrate, NonIntegrableFieldRejected) {
    const ScalarField f = ScalarField::constant(1, 1.0);
    EXPECT_THROW(integrate_gaussian(f, QuadratureScheme{}), NonIntegrable);
    EXPECT_THROW(make_scheme(f), NonIntegrable);
}

// Coarse schemes so the discretisation error sits above roundoff.
TEST(Integrate, RefinementWithinErrorEstimate) {
    for (double c : {0.5, 1.0, 2.0}) {
        const ScalarField f = gaussian(1, c, Point::origin(1));
        for (int cells : {8, 12, 16}) {
            QuadratureScheme s = make_scheme(f, {1e-12, cells});
            const Integral coarse = integrate_gaussian(f, s);
            s.cells *= 2;
            const Integral fine = integrate_gaussian(f, s);
            EXPECT_LE(std::abs(fine.value - coarse.value), 4.0 * coarse.error_estimate + 1e-14) << c << " " << cells;
        }
    }
}

TEST(Integrate, ThreadCountDoesNotChangeBits) {
    const ScalarField f = gaussian(2, 1.0, Point{cplx{0.3, 0.1}, cplx{0.0, -0.4}});
    set_thread_count(1);
    const double a = integrate_gaussian(f, make_scheme(f)).value;
    set_thread_count(4);
    const double b = integrate_gaussian(f, make_scheme(f)).value;
    set_thread_count(1);
    EXPECT_EQ(a, b);
}

TEST(LpNorm, GaussianClosedForms) {
    const ScalarField f = gaussian(1, 1.0, Point::origin(1));
    const QuadratureScheme s = make_scheme(f);
    EXPECT_LT(rel(lp_field_norm(f, 1.0, s), kPi), 1e-6);
    EXPECT_LT(rel(lp_field_norm(f, 2.0, s), std::sqrt(kPi / 2.0)), 1e-6);
    EXPECT_EQ(lp_field_norm(ScalarField::zero(1), 2.0, s), 0.0);
}

TEST(LpNorm, RejectsQuasiNorms) {
    const ScalarField f = gaussian(1, 1.0, Point::origin(1));
    EXPECT_THROW(lp_field_norm(f, 0.5, make_scheme(f)), InvalidArgument);
}

// Property: positive homogeneity under random scale factors.
TEST(LpNorm, Homogeneity) {
    Rng gen(99);
    const ScalarField f = gaussian(1, 1.0, Point{cplx{0.5, -0.5}});
    const QuadratureScheme s = make_scheme(f);
    for (int i = 0; i < 10; ++i) {
        const double lambda = gen.uniform(0.01, 100.0);
        const double p = gen.uniform(1.0, 4.0);
        EXPECT_LT(rel(lp_field_norm(f.scaled(lambda), p, s), lambda * lp_field_norm(f, p, s)), 1e-12);
    }
}

TEST(Sup, GaussianPeak) {
    const SupResult r = sup_field_norm(gaussian(1, 1.0, Point::origin(1)), 4.0, 0.25);
    EXPECT_DOUBLE_EQ(r.value, 1.0);
    EXPECT_LT(r.argmax.norm(), 1e-9);
}

TEST(Sup, ShiftedPeak) {
    const Point w0{std::polar(1.5, 0.7)};
    const SupResult r = sup_field_norm(gaussian(1, 1.0, w0), 4.0, 0.25);
    EXPECT_NEAR(r.value, 1.0, 1e-3);
    EXPECT_LT(distance(r.argmax, w0), 1e-2);
}

TEST(Sup, Constant) { EXPECT_DOUBLE_EQ(sup_field_norm(ScalarField::constant(1, 2.5), 3.0, 0.5).value, 2.5); }

TEST(ScalarFieldEnvelope, RejectsNegativeValues) {
    EXPECT_THROW(ScalarField(1, [](const Point&) { return -1.0; }, {}), InvalidArgument);
}

TEST(Growth, ThreeStageDecision) {
    // bounded: no growth, or converging increments
    EXPECT_FALSE(growth_diverges(1.0, 1.01, [] { return 1.02; }));
    EXPECT_FALSE(growth_diverges(0.75, 1.0 - 1.0 / 6.0, [] { return 1.0 - 1.0 / 9.0; }));
    // quadratic growth R^2 at R = 4, 6, 9
    EXPECT_TRUE(growth_diverges(16.0, 36.0, [] { return 81.0; }));
    EXPECT_TRUE(growth_diverges(1.0, std::numeric_limits<double>::infinity(), [] { return 0.0; }));
}

TEST(CheckedIntegral, FlagsConstantAsDivergent) {
    QuadratureScheme s;
    s.center = Point::origin(1);
    s.half_width = 4.0;
    s.cells = 32;
    EXPECT_TRUE(integrate_checked([](const Point&) { return 1.0; }, s).divergent);
    EXPECT_FALSE(integrate_checked([](const Point& z) { return std::exp(-z.norm2()); }, s).divergent);
}

TEST(Parallel, DeterministicSumMatchesAcrossThreads) {
    std::vector<double> v;
    Rng gen(5);
    for (int i = 0; i < 100000; ++i) v.push_back(gen.uniform(-1.0, 1.0) * std::pow(10.0, gen.uniform(-8.0, 8.0)));
    set_thread_count(1);
    const double a = deterministic_sum(v.size(), [&](std::size_t i) { return v[i]; });
    set_thread_count(3);
    const double b = deterministic_sum(v.size(), [&](std::size_t i) { return v[i]; });
    set_thread_count(1);
    EXPECT_EQ(a, b);
}
