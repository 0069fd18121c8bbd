#include "gmix/kernels.hpp"
#include "gmix/validators.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace gmix;

// Frozen values come from tests/oracles/oracles.py (mpmath quadrature).
namespace oracle {
constexpr double eta_at_0 = 0.29525231469648804;
constexpr double chi_at_0 = 0.47746482927568601;
constexpr double chi_hat_125 = 0.99999875918262396;
}  // namespace oracle

TEST(Cutoff, PlateauAndSupport) {
    const auto& k = default_kernel();
    EXPECT_EQ(k.chi_hat(0.0), 1.0);
    EXPECT_EQ(k.chi_hat(1.0), 1.0);
    EXPECT_EQ(k.chi_hat(-1.0), 1.0);
    EXPECT_EQ(k.chi_hat(2.0), 0.0);
    EXPECT_EQ(k.chi_hat(2.5), 0.0);
}

TEST(Cutoff, TransitionValues) {
    const auto& k = default_kernel();
    const double v = k.chi_hat(1.5);
    EXPECT_GT(v, 0.0);
    EXPECT_LT(v, 1.0);
    EXPECT_NEAR(v, 0.5, 1e-12);
    EXPECT_NEAR(k.chi_hat(1.25), oracle::chi_hat_125, 1e-10);
}

TEST(Cutoff, GridCheckPasses) {
    const CutoffCheck c = check_cutoff(*default_kernel().cutoff);
    EXPECT_TRUE(c.plateau_exact);
    EXPECT_TRUE(c.support_exact);
    EXPECT_TRUE(c.bounded);
    EXPECT_TRUE(c.even);
}

TEST(Cutoff, RejectsBadWidth) {
    EXPECT_THROW(build_cutoff(0.0), std::invalid_argument);
    EXPECT_THROW(build_cutoff(0.6), std::invalid_argument);
    EXPECT_THROW(build_cutoff(0.5, -1.0), std::invalid_argument);
}

TEST(Cutoff, MonotoneOnTransition) {
    const auto& k = default_kernel();
    double prev = 1.0;
    for (double xi = 1.0; xi <= 2.0; xi += 1.0 / 1024.0) {
        const double v = k.chi_hat(xi);
        EXPECT_LE(v, prev + 1e-15);
        prev = v;
    }
}

TEST(DualKernel, EtaHatAtOrigin) {
    EXPECT_NEAR(default_kernel().eta_hat(0.0), 1.0 / std::sqrt(2.0 * pi), 1e-15);
}

TEST(DualKernel, ValuesAtOriginMatchOracle) {
    const auto& k = default_kernel();
    EXPECT_NEAR(k.eta(0.0), oracle::eta_at_0, 1e-10);
    EXPECT_NEAR(k.chi(0.0), oracle::chi_at_0, 1e-10);
}

TEST(DualKernel, UnitMassAndVanishingMoments) {
    const auto& k = default_kernel();
    EXPECT_NEAR(k.chi_moment(0), 1.0, 1e-8);
    for (int q = 1; q <= 4; ++q) EXPECT_LE(std::abs(k.chi_moment(q)), 1e-7) << "q = " << q;
    EXPECT_LE(k.quadrature_tol, 1e-9);
}

TEST(DualKernel, EvenTables) {
    const auto& k = default_kernel();
    for (double x : {0.3, 1.7, 5.0, 40.0}) {
        EXPECT_DOUBLE_EQ(k.chi(x), k.chi(-x));
        EXPECT_DOUBLE_EQ(k.eta(x), k.eta(-x));
    }
}

TEST(DualKernel, ZeroBeyondTable) {
    const auto& k = default_kernel();
    EXPECT_EQ(k.chi(k.range() + 1.0), 0.0);
    EXPECT_EQ(k.eta(-k.range() - 1.0), 0.0);
}

TEST(DualKernel, ToleranceNotMetThrows) {
    KernelConfig c;
    c.nodes = 4097;
    c.spectral_nodes = 16;
    c.tol = 1e-14;
    EXPECT_THROW(build_kernel(c), QuadratureError);
}

TEST(RowSum, BoundedByTableConstant) {
    const auto& k = default_kernel();
    const double s = eta_row_sum(k, 0.0, 1.0, 1.0, 200);
    EXPECT_TRUE(std::isfinite(s));
    EXPECT_LE(1.0 * s, row_sum_constant(k));
}

TEST(RowSum, PeriodicInShift) {
    const auto& k = default_kernel();
    const double h = 0.75, sigma = 0.5;
    for (double x : {0.0, 0.13, -0.4})
        EXPECT_NEAR(eta_row_sum(k, x, h, sigma, 300), eta_row_sum(k, x + h * sigma, h, sigma, 300), 1e-12);
}

// Direct summation: the scaled row sum h * sum_k |eta(x/sigma - h k)| approaches
// ||eta||_1 as h shrinks, so the h = 1/2 to h = 1 ratio stays near one.
TEST(RowSum, RatioAcrossSpacings) {
    const auto& k = default_kernel();
    const double a = 0.5 * eta_row_sum(k, 0.0, 0.5, 1.0, 600);
    const double b = 1.0 * eta_row_sum(k, 0.0, 1.0, 1.0, 300);
    EXPECT_GT(a / b, 0.5);
    EXPECT_LT(a / b, 2.0);
    EXPECT_NEAR(a, k.eta_l1(), 0.05 * k.eta_l1());
}

TEST(Validator, DefaultsPass) {
    const auto& k = default_kernel();
    const ValidatorResult r = validate_kernels(*k.cutoff, k);
    EXPECT_TRUE(r.pass());
}

TEST(Validator, CorruptedPlateauIsCaught) {
    const auto& k = default_kernel();
    SpectralCutoff bad = *k.cutoff;
    const std::size_t mid = bad.values.size() / 2;
    bad.values[mid + 10] += 1e-3;
    bad.values[mid - 10] += 1e-3;
    const ValidatorResult r = validate_kernels(bad, k);
    EXPECT_FALSE(r.pass());
    bool named = false;
    for (const auto& c : r.checks)
        if (c.name == "plateau_exact") named = !c.pass;
    EXPECT_TRUE(named);
}

TEST(Property, CutoffBoundedAndEvenAtRandomPoints) {
    const auto& k = default_kernel();
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int i = 0; i < 2000; ++i) {
        const double xi = u(rng);
        const double v = k.chi_hat(xi);
        EXPECT_GE(v, 0.0);
        EXPECT_LE(v, 1.0);
        EXPECT_EQ(v, k.chi_hat(-xi));
    }
}
