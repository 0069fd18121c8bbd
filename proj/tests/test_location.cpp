#include "gmix/acceptance.hpp"
#include "gmix/harness.hpp"
#include "gmix/location.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace gmix;

namespace oracle {
// u_0 for exp(-x^2/2), lowpass at sigma = 0.5, h = 1: (h/sigma) int eta((y)/sigma) (chi_sigma * f)(y) dy
constexpr double lattice_u0 = 0.37104729737508568;
}  // namespace oracle

TEST(Plan, StepAndWindow) {
    const LocationPlan p = make_location_plan(0.125, 1.0, 2.0, 10.0);
    EXPECT_NEAR(p.h, 2.0 * pi * std::sqrt(2.0) / std::sqrt(std::log(8.0)), 1e-12);
    EXPECT_EQ(make_location_plan(0.125, 1.0, 2.0).h, 1.0);
    EXPECT_NEAR(p.core_radius(), 8.0, 1e-12);
    EXPECT_NEAR(p.threshold(), 0.125, 1e-15);
    EXPECT_EQ(p.k_lo, -p.k_hi);
    EXPECT_GE(p.h * p.sigma * static_cast<double>(p.k_hi), p.mu_threshold() + p.guard());
    EXPECT_THROW(make_location_plan(0.0, 1.0, 2.0), std::invalid_argument);
    EXPECT_THROW(make_location_plan(2.0, 1.0, 2.0), std::invalid_argument);
    EXPECT_THROW(make_location_plan(0.5, -1.0, 2.0), std::invalid_argument);
}

TEST(Coefficients, GaussianOracle) {
    const auto& k = default_kernel();
    const auto u = gaussian_bump().lattice_coefficients(lowpass(k, 0.5), 1.0, 0.5, Lattice{0.0, 0.5, 1});
    EXPECT_NEAR(u[0], oracle::lattice_u0, 1e-9);
}

TEST(Coefficients, SpatialAndSpectralRoutesAgree) {
    // a wide Gaussian sits on the plateau, so smoothing is the identity
    const auto& k = default_kernel();
    const TestFunction g = gaussian_bump(1.0, 0.3, 6.0);
    const double h = 1.0, sigma = 0.25;
    const LatticeCoeffs a = coefficients([&](double x) { return g(x); }, h, sigma, k, -40, 40);
    const auto b = g.lattice_coefficients(lowpass(k, sigma), h, sigma, a.lattice());
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a.u[i], b[i], 1e-8) << "k=" << a.k(i);
}

TEST(Coefficients, ShiftEquivariance) {
    const auto& k = default_kernel();
    const double h = 1.0, sigma = 0.25, step = h * sigma;
    const TestFunction f = tent(), g = tent(1.0, 3.0 * step);
    const Lattice at{-2.0, step, 17};
    const auto u = f.lattice_coefficients(lowpass(k, sigma), h, sigma, at);
    const auto v = g.lattice_coefficients(lowpass(k, sigma), h, sigma, Lattice{-2.0 + 3.0 * step, step, 17});
    for (std::size_t i = 0; i < u.size(); ++i) EXPECT_NEAR(u[i], v[i], 1e-12);
}

TEST(Coefficients, BoundaryCheckThrows) {
    const auto& k = default_kernel();
    const auto f = [](double x) { return std::exp(-x * x / 50.0); };
    EXPECT_THROW(coefficients(f, 1.0, 0.25, k, -4, 4, 1e-3), WindowError);
    EXPECT_NO_THROW(coefficients(f, 1.0, 0.25, k, -400, 400, 1e-3));
}

TEST(Reconstruct, EmptyAndSingle) {
    EXPECT_TRUE(reconstruct(LatticeCoeffs{}).empty());
    LatticeCoeffs c{1.0, 0.5, -1, {0.0, 2.0, 0.0}};
    const FiniteGaussMixture m = reconstruct(c);
    ASSERT_EQ(m.size(), 1u);
    EXPECT_DOUBLE_EQ(m.atoms[0].weight, 2.0);
    EXPECT_DOUBLE_EQ(m.atoms[0].location, 0.0);
    EXPECT_DOUBLE_EQ(m.atoms[0].scale, 0.5);
}

TEST(Approx, ZeroFunctionGivesEmptyMixture) {
    const ApproxReport r = location_approx(TestFunction{}, make_location_plan(0.125, 1.0, 2.0), default_kernel());
    EXPECT_EQ(r.lambda_size, 0u);
    EXPECT_TRUE(r.mixture.empty());
    EXPECT_EQ(r.coeff_l1, 0.0);
    EXPECT_EQ(r.sup_error_global, 0.0);
}

TEST(Approx, TinyFunctionHasEmptyLambda) {
    const LocationPlan p = make_location_plan(0.125, 1.0, 2.0);
    const ApproxReport r = location_approx(tent(1e-4), p, default_kernel());
    EXPECT_EQ(r.lambda_size, 0u);
    EXPECT_NEAR(r.sup_error_core, 1e-4, 1e-12);
}

TEST(Approx, RetainedMassDominatesThresholdTimesCount) {
    for (double s : {0.25, 0.125, 0.0625}) {
        const LocationPlan p = make_location_plan(s, 1.0, 2.0);
        const LatticeCoeffs c = location_coefficients(saturating_f0(1.0, 2.0), p, default_kernel());
        const Truncation t = truncate_location(c, p);
        ASSERT_FALSE(t.lambda.empty());
        EXPECT_GE(t.retained_l1, p.threshold() * static_cast<double>(t.lambda.size()));
        for (long kk : t.lambda) EXPECT_LE(std::abs(p.h * p.sigma * static_cast<double>(kk)), p.mu_threshold() + 1e-12);
    }
}

TEST(Approx, TruncationGapIsSmallOnTheCore) {
    LocationOptions o;
    o.measure_truncation_gap = true;
    const LocationPlan p = make_location_plan(0.0625, 1.0, 2.0);
    const ApproxReport r = location_approx(tent(), p, default_kernel(), o);
    EXPECT_GE(r.truncation_gap_core, 0.0);
    EXPECT_LT(r.truncation_gap_core, 4.0 * p.threshold() * default_kernel().eta_l1());
}

TEST(PoissonSummation, ErrorGrowsWithStepAndFollowsTheAliasingExponent) {
    const PoissonLaw law = poisson_summation_law({1.0, 1.25, 1.5, 2.0});
    for (std::size_t i = 1; i < law.errors.size(); ++i) EXPECT_GT(law.errors[i], law.errors[i - 1]);
    EXPECT_NEAR(law.fit.slope, law.alias_exponent, 0.1 * std::abs(law.alias_exponent));
}

TEST(Sweep, CountLawAtBetaOneP2) {
    ExperimentConfig c;
    c.betas = {1.0};
    c.ps = {2.0};
    c.levels = {3, 4, 5, 6, 7, 8};
    const SweepReport r = run_sweep(c);
    for (const auto& row : r.rows) EXPECT_TRUE(row.ok) << row.failure;
    ASSERT_EQ(r.fits.size(), 1u);
    EXPECT_NEAR(r.fits[0].count_slope, -2.0, 0.2);
    EXPECT_NEAR(r.fits[0].frontier_slope, r.fits[0].predicted_frontier, 0.25);
}

TEST(Sweep, CoreErrorSlopeForRoughFunction) {
    ExperimentConfig c;
    c.betas = {0.8};
    c.ps = {2.0};
    c.levels = {3, 4, 5, 6, 7, 8};
    const SweepReport r = run_sweep(c);
    ASSERT_EQ(r.fits.size(), 1u);
    EXPECT_NEAR(r.fits[0].error_slope, 0.8, 0.2);
}
