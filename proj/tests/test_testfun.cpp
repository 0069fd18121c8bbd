#include "gmix/harness.hpp"
#include "gmix/testfun.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace gmix;

namespace oracle {
// chi_{0.5} * exp(-x^2/2) at 0, by direct quadrature against the cutoff
constexpr double smoothed_gaussian_at_0 = 0.86569016999577547;
}  // namespace oracle

TEST(Pieces, TentShapeAndMass) {
    const TestFunction t = tent();
    EXPECT_DOUBLE_EQ(t(0.0), 1.0);
    EXPECT_DOUBLE_EQ(t(0.5), 0.5);
    EXPECT_DOUBLE_EQ(t(1.5), 0.0);
    EXPECT_NEAR(t.piece_l1(), 1.0, 1e-12);
}

TEST(Pieces, GaussianMassAndTail) {
    const TestFunction g = gaussian_bump();
    EXPECT_NEAR(g.piece_l1(), std::sqrt(2.0 * pi), 1e-10);
    for (double r : {1.0, 3.0, 6.0}) EXPECT_GE(g.tail_bound(r) + 1e-15, g(r));
}

TEST(Pieces, HeavyTailMatchesClosedForm) {
    for (double a : {1.1, 2.0}) {
        const TestFunction h = heavy_tail(1.0, a);
        for (double x : {0.0, 0.5, 2.0, 10.0}) {
            const double want = std::pow(1.0 + x * x, -0.5 * a);
            EXPECT_NEAR(h(x), want, 2e-5) << "a=" << a << " x=" << x;
        }
    }
}

TEST(Pieces, HeavyTailFarFieldNeedsSmallTmin) {
    // the missing mass below t_min is about t_min^{a/2}, visible once (1+x^2)^{-a/2} is that small
    const double want = std::pow(1.0 + 1e4, -0.55);
    EXPECT_GT(std::abs(heavy_tail(1.0, 1.1)(100.0) / want - 1.0), 1e-4);
    EXPECT_NEAR(heavy_tail(1.0, 1.1, 1e-16)(100.0) / want, 1.0, 1e-4);
}

TEST(Pieces, WeierstrassTruncationRule) {
    // K is the first index with 2^{-K beta} <= 1e-6
    EXPECT_EQ(weierstrass(1.0).pieces.size(), 21u);
    EXPECT_EQ(weierstrass(0.5).pieces.size(), 41u);
    EXPECT_EQ(weierstrass(0.6, 0.0, 12).pieces.size(), 13u);
    EXPECT_THROW(weierstrass(0.0), std::invalid_argument);
}

TEST(Holder, WeierstrassQuotientStableAtItsOrder) {
    const TestFunction w = weierstrass(0.6);
    const double q6a = holder_quotient(w, 0.6, -2.0, 2.0, 8, 1.0 / 128.0);
    const double q6b = holder_quotient(w, 0.6, -2.0, 2.0, 12, 1.0 / 128.0);
    const double q8a = holder_quotient(w, 0.8, -2.0, 2.0, 8, 1.0 / 128.0);
    const double q8b = holder_quotient(w, 0.8, -2.0, 2.0, 12, 1.0 / 128.0);
    EXPECT_LT(q6b / q6a, 1.3);
    EXPECT_GT(q8b / q8a, 1.5);
}

TEST(Holder, CertifiedNormsAreFinite) {
    for (const auto& t : builtin_test_functions()) {
        EXPECT_GT(t.sup_norm, 0.0) << t.name;
        EXPECT_TRUE(std::isfinite(t.holder_norm)) << t.name;
        EXPECT_GE(t.holder_norm, t.sup_norm) << t.name;
    }
}

TEST(Filter, SmoothedGaussianOracle) {
    const auto& k = default_kernel();
    const auto v = gaussian_bump().filtered(lowpass(k, 0.5), Lattice{0.0, 1.0, 1});
    EXPECT_NEAR(v[0], oracle::smoothed_gaussian_at_0, 1e-9);
}

TEST(Filter, WideGaussianPassesUnchanged) {
    // spectrum inside the plateau, so the lowpass is the identity
    const auto& k = default_kernel();
    const TestFunction g = gaussian_bump(1.0, 0.0, 8.0);
    const auto v = g.filtered(lowpass(k, 0.25), Lattice{-4.0, 0.5, 17});
    for (std::size_t i = 0; i < v.size(); ++i) EXPECT_NEAR(v[i], g(-4.0 + 0.5 * static_cast<double>(i)), 1e-9);
}

TEST(Filter, SmoothingErrorShrinksWithSigma) {
    const auto& k = default_kernel();
    const TestFunction t = tent();
    const double e1 = smoothing_sup_error(t, 0.25, k), e2 = smoothing_sup_error(t, 0.0625, k);
    EXPECT_LT(e2, e1);
    EXPECT_NEAR(std::log2(e1 / e2) / 2.0, 1.0, 0.15);
}

TEST(Compose, SumAndRestriction) {
    TestFunction f = tent();
    f += gaussian_bump(1.0, 10.0);
    EXPECT_NEAR(f(0.0), 1.0 + std::exp(-50.0), 1e-15);
    const TestFunction r = f.restricted(5.0, 20.0);
    ASSERT_EQ(r.pieces.size(), 1u);
    EXPECT_NEAR(r(10.0), 1.0, 1e-15);
}

TEST(Property, PieceEvaluationIsTranslationEquivariant) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    const TestFunction a = weierstrass(0.8, 0.0, 8), b = weierstrass(0.8, 2.5, 8);
    for (int i = 0; i < 200; ++i) {
        const double x = u(rng);
        EXPECT_NEAR(a(x), b(x + 2.5), 1e-12);
    }
}
