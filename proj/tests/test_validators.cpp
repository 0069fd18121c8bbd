#include "gmix/validators.hpp"

#include <gtest/gtest.h>

using namespace gmix;

TEST(Bundle, AllValidatorsPass) {
    const ValidationBundle b = run_validators(validator_names(), 11);
    ASSERT_EQ(b.results.size(), validator_names().size());
    for (const auto& r : b.results) {
        EXPECT_TRUE(r.pass()) << r.name;
        EXPECT_FALSE(r.checks.empty()) << r.name;
    }
    EXPECT_TRUE(b.pass());
    EXPECT_EQ(b.first_failure(), "");
}

TEST(Bundle, DeterministicForOneSeed) {
    const std::string a = to_json(run_validators({"sga", "dp", "sieve"}, 3), 3).dump();
    const std::string b = to_json(run_validators({"sga", "dp", "sieve"}, 3), 3).dump();
    EXPECT_EQ(a, b);
}

TEST(Bundle, UnknownNameThrows) { EXPECT_THROW(run_validators({"nope"}, 1), std::invalid_argument); }

TEST(FaultInjection, CorruptedCutoffIsNamed) {
    SpectralCutoff bad = *default_kernel().cutoff;
    const std::size_t mid = bad.values.size() / 2;
    bad.values[mid] += 1e-3;
    ValidationBundle b;
    b.results.push_back(validate_kernels(bad, default_kernel()));
    EXPECT_FALSE(b.pass());
    EXPECT_EQ(b.first_failure(), "kernels.plateau_exact");
    const Json j = to_json(b, 1);
    EXPECT_EQ(j["first_failure"], "kernels.plateau_exact");
    EXPECT_FALSE(j["pass"].get<bool>());
}

TEST(FaultInjection, FailedCheckCarriesValueAndLimit) {
    ValidatorResult r{"demo", {}};
    r.at_most("small", 2.0, 1.0);
    r.at_least("large", 2.0, 1.0);
    EXPECT_FALSE(r.pass());
    const Json j = to_json(r);
    EXPECT_EQ(j["checks"][0]["value"], 2.0);
    EXPECT_EQ(j["checks"][0]["limit"], 1.0);
    EXPECT_TRUE(j["checks"][1]["pass"].get<bool>());
}

TEST(Sieve, BruteForceFirstFailureMatches) {
    SieveSpec s;
    EXPECT_EQ(sieve_first_failure_bruteforce({}, s), "");
    EXPECT_EQ(sieve_first_failure_bruteforce({{s.n + 1.0, 1.0, 0.0}}, s), sieve_membership({{s.n + 1.0, 1.0, 0.0}}, s).failed_clause);
}
