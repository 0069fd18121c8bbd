#include "gmix/harness.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace gmix;

namespace oracle {
constexpr double sqrt_2_over_pi = 0.79788456080286536;  // E|Z|
}

TEST(Stats, OlsRecoversALine) {
    const LineFit f = ols({0, 1, 2, 3, 4}, {9, 1, 3, 5, 7}, 1);
    EXPECT_NEAR(f.slope, 2.0, 1e-14);
    EXPECT_NEAR(f.intercept, -1.0, 1e-14);
    EXPECT_NEAR(f.r2, 1.0, 1e-14);
    EXPECT_EQ(f.used, 4u);
    EXPECT_THROW(ols({1, 2}, {1}), std::invalid_argument);
    EXPECT_THROW(ols({1, 1, 1}, {1, 2, 3}), std::invalid_argument);
}

TEST(Stats, SpearmanWithTies) {
    EXPECT_NEAR(spearman({1, 2, 3, 4}, {10, 20, 30, 40}), 1.0, 1e-15);
    EXPECT_NEAR(spearman({1, 2, 3, 4}, {4, 3, 2, 1}), -1.0, 1e-15);
    EXPECT_EQ(average_ranks({5, 1, 5}), (std::vector<double>{2.5, 1.0, 2.5}));
    EXPECT_EQ(spearman({1, 1, 1}, {1, 2, 3}), 0.0);
}

TEST(Stats, LeastSquaresThreeColumns) {
    std::vector<std::vector<double>> rows;
    std::vector<double> y;
    for (int J = 2; J <= 9; ++J) {
        rows.push_back({std::ldexp(1.0, J), double(J * J), 1.0});
        y.push_back(0.5 * std::ldexp(1.0, J) - 2.0 * J * J + 3.0);
    }
    const auto c = least_squares(rows, y);
    EXPECT_NEAR(c[0], 0.5, 1e-9);
    EXPECT_NEAR(c[1], -2.0, 1e-9);
    EXPECT_NEAR(c[2], 3.0, 1e-9);
    EXPECT_THROW(least_squares({{1.0, 1.0}, {2.0, 2.0}}, {1.0, 2.0}), std::runtime_error);
}

TEST(Designs, MomentsOfTheBuiltins) {
    Rng rng = make_stream(77);
    for (double p : {1.0, 2.0}) EXPECT_NEAR(empirical_abs_moment(design_by_name("uniform"), p, 200000, rng), 1.0 / (p + 1.0), 0.01);
    EXPECT_NEAR(empirical_abs_moment(design_by_name("gaussian"), 1.0, 400000, rng), oracle::sqrt_2_over_pi, 0.01 * oracle::sqrt_2_over_pi);
    EXPECT_THROW(design_by_name("cauchy"), std::invalid_argument);
}

TEST(Designs, ParetoMomentsFiniteBelowTheIndexOnly) {
    // E|X|^p with survival (1+x)^{-2}: finite for p < 2, growing with the sample for p > 2
    const DesignDistribution d = pareto_design(2.0);
    // median over replicates, since single sample moments are heavy-tailed themselves
    const auto moment = [&](double p, std::size_t n) {
        std::vector<double> m;
        for (std::uint64_t r = 0; r < 9; ++r) {
            Rng rng = make_stream(5, r);
            m.push_back(empirical_abs_moment(d, p, n, rng));
        }
        std::nth_element(m.begin(), m.begin() + 4, m.end());
        return m[4];
    };
    EXPECT_NEAR(moment(1.0, 200000), 1.0, 0.05);  // E|X| = 1/(nu-1)
    EXPECT_NEAR(moment(1.0, 200000), moment(1.0, 2000), 0.15);
    EXPECT_GT(moment(3.0, 200000), 3.0 * moment(3.0, 2000));
    EXPECT_NEAR(d.mass_abs(0.0, std::numeric_limits<double>::infinity()), 1.0, 1e-15);
    EXPECT_NEAR(d.mass_abs(0.0, 1.0), 0.75, 1e-15);
}

TEST(Functions, RegistryAndSaturatingRecipe) {
    EXPECT_EQ(builtin_test_functions().size(), 5u);
    EXPECT_EQ(test_function_by_name("tent").name, "tent");
    EXPECT_THROW(test_function_by_name("missing"), std::invalid_argument);
    const TestFunction f = saturating_f0(0.6, 4.0);
    EXPECT_DOUBLE_EQ(f.beta, 0.6);
    // the tail decays like |x|^{-2.1}
    EXPECT_NEAR(std::log(f(400.0) / f(200.0)) / std::log(2.0), -2.1, 0.02);
}

TEST(Sweep, RowsSortedAndDeterministic) {
    ExperimentConfig c;
    c.betas = {1.0, 0.6};
    c.ps = {2.0};
    c.levels = {4, 3};
    c.threads = 2;
    const SweepReport a = run_sweep(c), b = run_sweep(c);
    ASSERT_EQ(a.rows.size(), 4u);
    EXPECT_EQ(a.rows[0].level, 3);
    EXPECT_EQ(a.rows[1].level, 4);
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        EXPECT_EQ(a.rows[i].lambda, b.rows[i].lambda);
        EXPECT_EQ(a.rows[i].core_error, b.rows[i].core_error);
    }
    c.levels.clear();
    EXPECT_THROW(run_sweep(c), std::invalid_argument);
}

TEST(Sweep, HybridMonteCarloDependsOnlyOnSeed) {
    ExperimentConfig c;
    c.scheme = Scheme::hybrid;
    c.levels = {3, 4};
    c.mc_draws = 500;
    c.threads = 2;
    const SweepReport a = run_sweep(c);
    c.threads = 1;
    const SweepReport b = run_sweep(c);
    for (std::size_t i = 0; i < a.rows.size(); ++i) EXPECT_EQ(a.rows[i].design_error, b.rows[i].design_error);
    c.seed = 2;
    EXPECT_NE(run_sweep(c).rows[0].design_error, b.rows[0].design_error);
}

TEST(Frontier, PredictedExponents) {
    EXPECT_DOUBLE_EQ(predicted_frontier(Scheme::location, 1.0, 2.0), 2.0);
    EXPECT_DOUBLE_EQ(predicted_frontier(Scheme::hybrid, 1.0, 1.0), 2.0);
    EXPECT_DOUBLE_EQ(predicted_frontier(Scheme::hybrid, 0.5, 4.0), 2.0);
    EXPECT_DOUBLE_EQ(predicted_location_count_slope(1.0, 4.0), -1.5);
    EXPECT_TRUE(std::isnan(count_at_error({}, 0.1)));
}

TEST(Property, HybridNeedsFewerComponentsOnAHeavyTail) {
    // one heavy-tailed f0 for both schemes, both steps capped at 1
    const FrontierDominance d = frontier_dominance(1.0, 1.0, {5, 6, 7}, {4, 5, 6, 7});
    ASSERT_GE(d.points.size(), 2u);
    for (const auto& p : d.points) EXPECT_LE(p.hybrid_count, p.location_count) << "error " << p.error;
    EXPECT_TRUE(d.holds());
}
