#include "gmix/acceptance.hpp"
#include "gmix/rates.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

using namespace gmix;

TEST(Exponent, TableExamples) {
    EXPECT_NEAR(rate_exponent({RateKind::location, 1.0, 4.0}).q, 4.0 / 7.0, 1e-15);
    EXPECT_NEAR(rate_exponent({RateKind::hybrid, 1.0, 3.0}).q, 2.0 / 3.0, 1e-15);
    EXPECT_NEAR(rate_exponent({RateKind::location_scale, 2.0, 1.0}).q, 0.5, 1e-15);
}

TEST(Exponent, RejectsBadArguments) {
    EXPECT_THROW(rate_exponent({RateKind::location, 0.0, 2.0}), std::invalid_argument);
    EXPECT_THROW(rate_exponent({RateKind::location, 1.0, -1.0}), std::invalid_argument);
    EXPECT_THROW(parse_rate_kind("scale"), std::invalid_argument);
    EXPECT_EQ(parse_rate_kind("location-scale"), RateKind::location_scale);
}

TEST(Exponent, ThresholdsUseTheRightHandRegime) {
    // beta = 2: thresholds 4/3, 2, 4
    EXPECT_EQ(rate_exponent({RateKind::location, 2.0, 2.0}).column, 2);
    EXPECT_EQ(rate_exponent({RateKind::location, 2.0, 4.0}).column, 3);
    EXPECT_EQ(rate_exponent({RateKind::location_scale, 2.0, 4.0 / 3.0}).column, 1);
}

TEST(Exponent, HybridContinuousAtTwoBeta) {
    for (double b : {0.5, 1.0, 2.5}) {
        const double below = rate_exponent({RateKind::hybrid, b, 2.0 * b * (1.0 - 1e-9)}).q;
        const double at = rate_exponent({RateKind::hybrid, b, 2.0 * b}).q;
        EXPECT_NEAR(below, at, 1e-8);
        EXPECT_NEAR(at, 2.0 * b / (2.0 * b + 1.0), 1e-15);
    }
}

TEST(Exponent, LimitsAtInfiniteMoments) {
    const double inf = std::numeric_limits<double>::infinity();
    for (double b : {0.5, 1.0, 3.0}) {
        EXPECT_NEAR(rate_exponent({RateKind::location, b, inf}).q, 2.0 * b / (2.0 * b + 1.0), 1e-15);
        EXPECT_NEAR(rate_exponent({RateKind::location_scale, b, inf}).q, b / (b + 1.0), 1e-15);
        EXPECT_NEAR(rate_exponent({RateKind::hybrid, b, inf}).q, 2.0 * b / (2.0 * b + 1.0), 1e-15);
    }
}

TEST(Table, SymbolicCellsReproduced) {
    const auto ref = reference_table();
    EXPECT_EQ(symbolic_table(), ref);
    EXPECT_EQ(calculated_symbolic_table(), ref);
    EXPECT_EQ(ref[2][1], "p/(p+1)");
    EXPECT_EQ(ref[0][2], "2β/(2β+1+2β/p)");
    const std::string md = render_symbolic_table();
    EXPECT_NE(md.find("| Hybrid |"), std::string::npos);
}

TEST(Table, NumericRendering) {
    const std::string csv = render_table({1.0}, {4.0}, TableFormat::csv, true);
    EXPECT_EQ(csv.rfind("kind,beta,p,q,log_power,regime,formula\n", 0), 0u);
    EXPECT_NE(csv.find("location,1,4,4/7,"), std::string::npos);
    const std::string md = render_table({1.0}, {3.0}, TableFormat::markdown, true);
    EXPECT_NE(md.find("2/3 [2β/(2β+1)]"), std::string::npos);
    EXPECT_THROW(render_table({}, {1.0}), std::invalid_argument);
}

TEST(Fraction, ContinuedFractions) {
    EXPECT_EQ(as_fraction(4.0 / 7.0), std::make_pair(4L, 7L));
    EXPECT_EQ(as_fraction(0.5), std::make_pair(1L, 2L));
    EXPECT_EQ(as_fraction(3.0), std::make_pair(3L, 1L));
    EXPECT_FALSE(as_fraction(std::sqrt(2.0), 1000).has_value());
    EXPECT_FALSE(as_fraction(std::numeric_limits<double>::quiet_NaN()).has_value());
    EXPECT_EQ(format_q(2.0 / 3.0, true), "2/3");
    EXPECT_EQ(format_q(2.0 / 3.0, false), "0.666667");
}

TEST(Property, DominanceOnTheLattice) {
    const DominanceReport d = check_dominance(rate_lattice_betas(), rate_lattice_ps());
    EXPECT_EQ(d.points, 400u);
    EXPECT_EQ(d.violations, 0u);
}

TEST(Property, ExponentsInUnitIntervalAndMonotoneInP) {
    for (RateKind k : {RateKind::location, RateKind::location_scale, RateKind::hybrid})
        for (double b : rate_lattice_betas()) {
            double prev = 0.0;
            for (double p = 0.05; p <= 20.0; p *= 1.07) {
                const RateResult r = rate_exponent({k, b, p});
                EXPECT_GT(r.q, 0.0);
                EXPECT_LT(r.q, 1.0);
                EXPECT_GE(r.q, prev - 1e-14) << to_string(k) << " b=" << b << " p=" << p;
                EXPECT_TRUE(std::isfinite(r.log_power));
                EXPECT_GE(r.log_power, 0.0);
                prev = r.q;
            }
        }
}
