#include "gmix/mixture.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace gmix;

namespace oracle {
constexpr double two_point_l2 = 0.82700648158628186;  // sqrt((1 + e^-1) / 2)
}

TEST(Mixture, SingleAtoms) {
    FiniteGaussMixture m;
    m.add(1.0, 0.0, 1.0);
    EXPECT_DOUBLE_EQ(eval_mixture(m, 0.0), 1.0);
    FiniteGaussMixture n;
    n.add(2.0, 3.0, 1.0);
    EXPECT_DOUBLE_EQ(eval_mixture(n, 3.0), 2.0);
}

TEST(Mixture, AntisymmetricPairCancels) {
    FiniteGaussMixture m;
    m.add(1.0, -1.0, 1.0);
    m.add(-1.0, 1.0, 1.0);
    EXPECT_DOUBLE_EQ(eval_mixture(m, 0.0), 0.0);
}

TEST(Mixture, RejectsBadAtoms) {
    FiniteGaussMixture m;
    EXPECT_THROW(m.add(1.0, 0.0, 0.0), std::invalid_argument);
    EXPECT_THROW(m.add(NAN, 0.0, 1.0), std::invalid_argument);
}

TEST(Mixture, IndexMatchesDirectEvaluation) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1.0, 1.0), mu(-20.0, 20.0), s(0.01, 3.0);
    FiniteGaussMixture m;
    for (int i = 0; i < 300; ++i) m.add(u(rng), mu(rng), s(rng));
    const MixtureIndex idx(m);
    for (double x = -25.0; x <= 25.0; x += 0.173) EXPECT_NEAR(idx(x), eval_mixture(m, x), 1e-12);
}

TEST(Mixture, TotalVariation) {
    FiniteGaussMixture m;
    m.add(1.5, 0.0, 1.0);
    m.add(-0.5, 2.0, 1.0);
    EXPECT_DOUBLE_EQ(m.total_variation(), 2.0);
}

TEST(EmpiricalL2, Basics) {
    const std::vector<double> xs = {-1.0, 0.0, 2.5};
    const auto f = [](double x) { return x * x; };
    EXPECT_EQ(empirical_l2(f, f, xs), 0.0);
    EXPECT_NEAR(empirical_l2([](double) { return -3.0; }, [](double) { return 0.0; }, xs), 3.0, 1e-15);
    EXPECT_NEAR(empirical_l2([](double x) { return phi(x); }, [](double) { return 0.0; }, std::vector<double>{0.0, 1.0}),
                oracle::two_point_l2, 1e-15);
    EXPECT_THROW(empirical_l2(f, f, std::vector<double>{}), std::invalid_argument);
}

TEST(Perturbation, IdenticalBumps) {
    EXPECT_EQ(gaussian_perturbation_bound(1.0, 1.0, 2.0, 2.0), 0.0);
    EXPECT_EQ(gaussian_sup_difference(1.0, 1.0, 2.0, 2.0), 0.0);
}

TEST(Perturbation, ShiftAndScale) {
    EXPECT_NEAR(gaussian_perturbation_bound(0.0, 0.1, 1.0, 1.0), 0.1, 1e-15);
    EXPECT_LE(gaussian_sup_difference(0.0, 0.1, 1.0, 1.0), 0.1);
    EXPECT_NEAR(gaussian_perturbation_bound(0.0, 0.0, 1.0, 1.5), 4.0 * 0.5 / 1.5, 1e-15);
    EXPECT_LE(gaussian_sup_difference(0.0, 0.0, 1.0, 1.5), 4.0 * 0.5 / 1.5);
}

TEST(Perturbation, RejectsFarScales) {
    EXPECT_THROW(gaussian_perturbation_bound(0.0, 0.0, 1.0, 3.0), std::invalid_argument);
    EXPECT_THROW(gaussian_perturbation_bound(0.0, 0.0, -1.0, 1.0), std::invalid_argument);
}

TEST(Property, PerturbationBoundDominatesMeasuredSup) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> mu(-2.0, 2.0), s(0.2, 3.0), r(0.5, 2.0);
    for (int i = 0; i < 200; ++i) {
        const double s1 = s(rng), s2 = s1 * r(rng), m1 = mu(rng), m2 = mu(rng);
        EXPECT_LE(gaussian_sup_difference(m1, m2, s1, s2), gaussian_perturbation_bound(m1, m2, s1, s2) + 1e-12);
    }
}

TEST(EvalGridTest, RejectsUnsorted) {
    EXPECT_THROW(EvalGrid({0.0, 0.0}), std::invalid_argument);
    EXPECT_THROW(EvalGrid({0.0, 1.0}, {1.0}), std::invalid_argument);
    EXPECT_EQ(EvalGrid::uniform(0.0, 1.0, 0.25).size(), 5u);
}
