#include "gmix/acceptance.hpp"
#include "gmix/harness.hpp"
#include "gmix/hybrid.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace gmix;

TEST(Plan, ScalesStepAndWindows) {
    const HybridPlan p = make_hybrid_plan(6, 1.0, 2.0);
    EXPECT_DOUBLE_EQ(p.sigma(0), 1.0);
    EXPECT_DOUBLE_EQ(p.sigma(6), 1.0 / 64.0);
    EXPECT_NEAR(p.h, 2.0 * pi / std::sqrt(6.0 * std::log(2.0)), 1e-12);
    EXPECT_DOUBLE_EQ(p.zeta(6), 1.0);
    for (int j = 0; j < p.J; ++j) EXPECT_GT(p.zeta(j), p.zeta(j + 1));
    EXPECT_DOUBLE_EQ(make_hybrid_plan(6, 1.0, 2.0, 0.5).h, 0.5);
    EXPECT_THROW(make_hybrid_plan(0, 1.0, 1.0), std::invalid_argument);
    EXPECT_THROW(make_hybrid_plan(3, 0.0, 1.0), std::invalid_argument);
}

TEST(Cascade, BandLimitedInputLeavesNoResidual) {
    // periodic on the grid, spectrum inside |xi| <= 1/2 where chi_hat(2 xi) = 1
    const double w = 2.0 * pi / 64.0;
    const auto f = [w](double x) { return std::cos(3.0 * w * x) + 0.5 * std::cos(5.0 * w * x); };
    const CascadeResult c = residual_cascade(f, 3, default_kernel(), PeriodicGrid{32.0, std::size_t{1} << 12});
    for (double s : c.sup_residual) EXPECT_LT(s, 1e-9);
}

TEST(Cascade, TelescopingMatchesDirectForm) {
    const TestFunction w = weierstrass(0.6, 0.0, 8);
    const CascadeResult c = residual_cascade([&](double x) { return w(x); }, 5, default_kernel(), PeriodicGrid{32.0, std::size_t{1} << 14});
    ASSERT_EQ(c.deviation.size(), 6u);
    for (double d : c.deviation) EXPECT_LE(d, 1e-7);
    for (std::size_t j = 1; j < c.sup_residual.size(); ++j) EXPECT_LT(c.sup_residual[j], c.sup_residual[j - 1]);
}

TEST(Cascade, RejectsBadGrids) {
    const auto f = [](double) { return 0.0; };
    EXPECT_THROW(residual_cascade(f, 0, default_kernel()), std::invalid_argument);
    EXPECT_THROW(residual_cascade(f, 2, default_kernel(), PeriodicGrid{32.0, 1000}), std::invalid_argument);
    EXPECT_THROW(residual_cascade(f, 8, default_kernel(), PeriodicGrid{32.0, 64}), QuadratureError);
}

TEST(Coefficients, ZeroInputGivesZeroCoefficients) {
    const HybridPlan p = make_hybrid_plan(4, 1.0, 2.0);
    const MultiScaleCoeffs c = hybrid_coefficients(TestFunction{}, p, default_kernel());
    ASSERT_EQ(c.levels.size(), 5u);
    EXPECT_EQ(c.l1(), 0.0);
    const HybridReport r = hybrid_approx(TestFunction{}, p, default_kernel());
    EXPECT_TRUE(r.mixture.empty());
    EXPECT_EQ(r.sup_error_global, 0.0);
}

TEST(Coefficients, LevelZeroEqualsLocationCoefficientsAtUnitScale) {
    const auto& k = default_kernel();
    const HybridPlan hp = make_hybrid_plan(4, 1.0, 2.0);
    const TestFunction f = tent();
    const MultiScaleCoeffs c = hybrid_coefficients(f, hp, k);
    const LocationPlan lp = make_location_plan(1.0, 1.0, 2.0, hp.h);
    const LatticeCoeffs l = location_coefficients(f, lp, k);
    ASSERT_DOUBLE_EQ(l.h, c.levels[0].h);
    std::size_t matched = 0;
    for (std::size_t i = 0; i < l.size(); ++i) {
        const long kk = l.k(i) - c.levels[0].k_lo;
        if (kk < 0 || static_cast<std::size_t>(kk) >= c.levels[0].size()) continue;
        EXPECT_NEAR(l.u[i], c.levels[0].u[static_cast<std::size_t>(kk)], 1e-12);
        ++matched;
    }
    EXPECT_EQ(matched, l.size());
    EXPECT_GE(matched, 3u);
}

TEST(Coefficients, MassBound) {
    const auto& k = default_kernel();
    for (int J : {3, 5}) {
        const HybridPlan p = make_hybrid_plan(J, 1.0, 2.0);
        for (const TestFunction& f : {gaussian_bump(), tent(), weierstrass(0.6, 0.0, 10)}) {
            const double bound = 4.0 * f.piece_l1() / p.sigma(J);
            EXPECT_LE(hybrid_coefficients(f, p, k).l1(), bound) << f.name << " J=" << J;
        }
    }
}

TEST(Truncation, SmallCoefficientsGiveEmptyLambda) {
    const HybridPlan p = make_hybrid_plan(4, 1.0, 2.0);
    const HybridReport r = hybrid_approx(tent(1e-4), p, default_kernel());
    EXPECT_EQ(r.lambda_size, 0u);
}

TEST(Truncation, AtomsCarryTheirLevelScale) {
    const HybridPlan p = make_hybrid_plan(5, 1.0, 2.0);
    const MultiScaleCoeffs c = hybrid_coefficients(annulus_probe_f0(p, 8), p, default_kernel());
    const HybridTruncation t = truncate_hybrid(c, p);
    ASSERT_EQ(t.lambda.size(), t.mixture.size());
    for (std::size_t i = 0; i < t.lambda.size(); ++i) {
        const int j = t.lambda[i].first;
        EXPECT_DOUBLE_EQ(t.mixture.atoms[i].scale, p.sigma(j));
        EXPECT_GT(std::abs(t.mixture.atoms[i].weight), p.threshold());
        EXPECT_LE(std::abs(t.mixture.atoms[i].location), p.mu_threshold(j) + 1e-12);
    }
}

TEST(Approx, UntruncatedReconstructionTracksTheScale) {
    // h capped at 1 so that aliasing sits far below sigma_J
    HybridOptions o;
    o.measure_untruncated = true;
    double prev = 1.0;
    for (int J : {3, 5}) {
        const HybridPlan p = make_hybrid_plan(J, 1.0, 2.0, 1.0);
        const HybridReport r = hybrid_approx(tent(), p, default_kernel(), o);
        EXPECT_LE(r.untruncated_error, 2.0 * p.sigma(J));
        EXPECT_LT(r.untruncated_error, prev);
        prev = r.untruncated_error;
    }
}

TEST(Approx, AnnulusLawAndCenterBeatsTail) {
    const int J = 8;
    const HybridPlan p = make_hybrid_plan(J, 1.0, 2.0);
    const HybridReport r = hybrid_approx(annulus_probe_f0(p), p, default_kernel());
    ASSERT_EQ(r.annuli.size(), static_cast<std::size_t>(J + 1));
    double lo = 1e300, hi = 0.0;
    for (const auto& a : r.annuli) {
        lo = std::min(lo, a.normalized);
        hi = std::max(hi, a.normalized);
    }
    EXPECT_LT(hi / lo, 50.0 * std::pow(J, 1.5));
    EXPECT_LT(r.annuli.back().sup_error, r.annuli.front().sup_error);
    EXPECT_DOUBLE_EQ(r.annuli.back().outer, 1.0);
}

TEST(Approx, DesignErrorWithinAnnulusBound) {
    ExperimentConfig c;
    c.scheme = Scheme::hybrid;
    c.mc_draws = 4000;
    for (const char* d : {"pareto_2", "gaussian"}) {
        c.design = d;
        const SweepRow r = run_hybrid_cell(c, 1.0, 2.0, 4, 0);
        ASSERT_TRUE(r.ok);
        EXPECT_GE(r.design_error, 0.0);
        EXPECT_LE(r.design_error, r.design_bound) << d;
    }
}

TEST(Sweep, CountLawInsideTheSaturatedRegime) {
    ExperimentConfig c;
    c.scheme = Scheme::hybrid;
    c.betas = {1.0};
    c.ps = {1.0};
    c.levels = {2, 3, 4, 5, 6, 7};
    c.mc_draws = 200;
    const SweepReport r = run_sweep(c);
    for (const auto& row : r.rows) EXPECT_TRUE(row.ok) << row.failure;
    EXPECT_NEAR(r.fits[0].count_slope, -2.0, 0.3);
}

TEST(Sweep, CountLawAboveTheMomentThreshold) {
    ExperimentConfig c;
    c.scheme = Scheme::hybrid;
    c.betas = {0.5};
    c.ps = {4.0};
    c.levels = {2, 3, 4, 5, 6, 7};
    c.mc_draws = 200;
    const SweepReport r = run_sweep(c);
    for (const auto& row : r.rows) EXPECT_TRUE(row.ok) << row.failure;
    EXPECT_NEAR(r.fits[0].count_slope, -1.0, 0.3);
}
