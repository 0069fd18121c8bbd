#ifndef GMIX_VALIDATORS_HPP
#define GMIX_VALIDATORS_HPP

#include "gmix/io.hpp"
#include "gmix/kernels.hpp"
#include "gmix/random_measures.hpp"
#include "gmix/rates.hpp"
#include "gmix/sieve.hpp"

#include <boost/math/distributions/beta.hpp>
#include <boost/math/distributions/gamma.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <set>
#include <string>
#include <vector>

namespace gmix {

inline const std::vector<std::string>& validator_names() {
    static const std::vector<std::string> v = {"kernels", "sga", "ig", "dp", "sieve", "rates"};
    return v;
}

struct Check {
    std::string name;
    bool pass = true;
    double value = 0.0;
    double limit = 0.0;
};

struct ValidatorResult {
    std::string name;
    std::vector<Check> checks;
    bool pass() const {
        return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
    }
    void at_most(const std::string& n, double v, double lim) { checks.push_back({n, v <= lim, v, lim}); }
    void at_least(const std::string& n, double v, double lim) { checks.push_back({n, v >= lim, v, lim}); }
    void holds(const std::string& n, bool ok) { checks.push_back({n, ok, ok ? 1.0 : 0.0, 1.0}); }
};

// ---- kernels ----

inline ValidatorResult validate_kernels(const SpectralCutoff& cut, const DualKernelTable& k) {
    ValidatorResult r{"kernels", {}};
    const CutoffCheck c = check_cutoff(cut);
    r.holds("plateau_exact", c.plateau_exact);
    r.holds("support_exact", c.support_exact);
    r.holds("bounded", c.bounded);
    r.holds("even", c.even);
    r.at_most("chi_mass_minus_one", std::abs(k.chi_moment(0) - 1.0), 1e-8);
    double mom = 0.0;
    for (int q = 1; q <= 4; ++q) mom = std::max(mom, std::abs(k.chi_moment(q)));
    r.at_most("chi_moments_1_4", mom, 1e-7);
    r.at_most("inversion_error", k.quadrature_tol, 1e-9);
    return r;
}

// ---- symmetric Gamma ----

inline ValidatorResult validate_sga(std::uint64_t seed) {
    ValidatorResult r{"sga", {}};
    Rng rng = make_stream(seed, 101);
    const std::size_t n = 200000;
    double s = 0.0, s2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = sample_sga(1.0, rng);
        s += x;
        s2 += x * x;
    }
    const double mean = s / static_cast<double>(n), var = s2 / static_cast<double>(n) - mean * mean;
    r.at_most("sga1_mean_abs", std::abs(mean), 0.01);
    r.at_most("sga1_variance_rel_error", std::abs(var / 2.0 - 1.0), 0.02);

    const SiteSampler site = [](SignedAtom& a, Rng& g) {
        a.sigma = 1.0;
        a.mu = uniform01(g);
    };
    const double floor = 1e-4;
    std::vector<double> tv;
    double count = 0.0;
    Rng pr = make_stream(seed, 102);
    for (std::size_t i = 0; i < 100000; ++i) {
        const auto m = sample_sga_process(1.0, site, floor, pr);
        tv.push_back(m.total_variation());
        count += static_cast<double>(m.atoms.size());
    }
    const boost::math::gamma_distribution<double> g(2.0, 1.0);
    r.at_most("process_tv_ks_gamma2", ks_distance(tv, [&](double x) { return boost::math::cdf(g, x); }), 0.01);
    const double expected = 2.0 * expint_e1(floor);
    r.at_most("jump_count_rel_error", std::abs(count / 1e5 / expected - 1.0), 0.02);
    return r;
}

// ---- inverse Gaussian ----

inline ValidatorResult validate_ig() {
    ValidatorResult r{"ig", {}};
    for (auto [a, b] : std::vector<std::pair<double, double>>{{1.0, 1.0}, {2.0, 0.5}}) {
        const TailReport t = inverse_gaussian_tail_report(InverseGaussian(a, b));
        const std::string tag = "ig(" + fmt_double(a) + "," + fmt_double(b) + ")_";
        r.at_most(tag + "density_integral_error", std::abs(t.density_integral - 1.0), 1e-8);
        r.at_most(tag + "upper_tail_violations", static_cast<double>(t.upper.violations), 0.0);
        r.at_most(tag + "lower_tail_violations", static_cast<double>(t.lower.violations), 0.0);
        r.at_most(tag + "small_ball_violations", static_cast<double>(t.small_ball.violations), 0.0);
        r.at_least(tag + "fitted_small_ball_constant", t.fitted_c_b3_1, 1e-300);
    }
    return r;
}

// ---- Dirichlet process ----

inline ValidatorResult validate_dp(std::uint64_t seed) {
    ValidatorResult r{"dp", {}};
    const InverseGaussian ig(1.0, 1.0);
    Rng rng = make_stream(seed, 201);
    std::vector<double> p;
    for (std::size_t i = 0; i < 100000; ++i) p.push_back(sample_dp(1.0, ig, rng).mass(0.0, 1.0));
    const double g = ig.cdf(1.0);
    const boost::math::beta_distribution<double> B(g, 1.0 - g);
    r.at_most("cell_beta_ks", ks_distance(p, [&](double x) { return boost::math::cdf(B, x); }), 0.01);
    const double mean = std::accumulate(p.begin(), p.end(), 0.0) / static_cast<double>(p.size());
    r.at_most("cell_mean_rel_error", std::abs(mean / g - 1.0), 0.01);
    double prev = 0.0;
    bool decreasing = true;
    for (int J = 4; J <= 12; ++J) {
        const double lb = dp_omega_lower_bound(J, 1.0, 1.0, ig).log_bound;
        if (J > 4 && !(lb < prev)) decreasing = false;
        prev = lb;
    }
    r.holds("omega_bound_decreasing_in_J", decreasing);
    r.holds("omega_bound_decreasing_in_r",
            dp_omega_lower_bound(6, 2.0, 1.0, ig).log_bound < dp_omega_lower_bound(6, 1.0, 1.0, ig).log_bound);
    return r;
}

// ---- sieve ----

// Clause-by-clause recomputation kept separate from sieve_membership.
inline std::string sieve_first_failure_bruteforce(const std::vector<SignedAtom>& atoms, const SieveSpec& s) {
    const double w = 1.0 / s.n, lo = std::pow(s.n, -1.0 / s.b2), hi = std::pow(s.n, 1.0 / s.b1);
    if (s.kind == SieveKind::location && !atoms.empty()) {
        std::set<double> scales;
        for (const auto& a : atoms) scales.insert(a.sigma);
        if (scales.size() > 1) return "shared_scale";
        if (*scales.begin() <= lo || *scales.begin() > hi) return "sigma_range";
    }
    const auto sum_if = [&](auto pred) {
        return std::accumulate(atoms.begin(), atoms.end(), 0.0,
                               [&](double acc, const SignedAtom& a) { return pred(a) ? acc + std::abs(a.mass) : acc; });
    };
    if (sum_if([](const SignedAtom&) { return true; }) > s.n) return "total_mass";
    if (sum_if([&](const SignedAtom& a) { return std::abs(a.mass) <= w; }) > s.epsilon) return "small_mass";
    const auto big = std::count_if(atoms.begin(), atoms.end(), [&](const SignedAtom& a) {
        return std::abs(a.mass) > w && (s.kind == SieveKind::location || (a.sigma > lo && a.sigma <= hi));
    });
    if (static_cast<double>(big) > s.H * s.n * s.epsilon * s.epsilon / std::log(s.n)) return "big_count";
    if (s.kind == SieveKind::location_scale) {
        if (sum_if([&](const SignedAtom& a) { return a.sigma <= lo; }) > s.epsilon) return "small_scale_mass";
        if (sum_if([&](const SignedAtom& a) { return a.sigma > hi; }) > s.epsilon) return "large_scale_mass";
    }
    return "";
}

inline ValidatorResult validate_sieve(std::uint64_t seed) {
    ValidatorResult r{"sieve", {}};
    SieveSpec s;
    s.n = 50.0;
    s.epsilon = 0.2;
    Rng rng = make_stream(seed, 301);
    std::vector<double> xs;
    for (int i = 0; i < 50; ++i) xs.push_back(std::normal_distribution<double>(0.0, 1.0)(rng));
    const NetCardinality nc = net_log_cardinality(s, xs);
    r.holds("constant_C_b1_b2_1", nc.C == 9.5 / 64.0);
    const CoveringReport cov = net_covering_check(s, xs, 200, rng);
    r.at_most("covering_failures", static_cast<double>(cov.failures), 0.0);
    r.at_most("covering_max_distance", cov.max_distance, 8.0 * s.epsilon);
    // prior draws against the brute-force clause order
    std::size_t disagree = 0;
    const ParetoLocationBase loc;
    for (auto kind : {PriorKind::location, PriorKind::location_scale, PriorKind::hybrid}) {
        SieveSpec q;
        q.n = 20.0;
        q.epsilon = 0.5;
        q.kind = kind == PriorKind::location ? SieveKind::location : SieveKind::location_scale;
        PriorSpec p;
        p.kind = kind;
        p.jump_floor = 1e-3;
        for (int i = 0; i < 1000; ++i) {
            const auto d = sample_prior(p, loc, rng);
            if (sieve_membership(d.measure.atoms, q).failed_clause != sieve_first_failure_bruteforce(d.measure.atoms, q)) ++disagree;
        }
    }
    r.at_most("membership_disagreements", static_cast<double>(disagree), 0.0);
    return r;
}

// ---- rates ----

// Table 1, row by row, in the calculator's notation.
inline std::array<std::array<std::string, 4>, 3> reference_table() {
    return {{{"2β/(3β+1)", "2β/(3β+1)", "2β/(2β+1+2β/p)", "2β/(2β+1+2β/p)"},
             {"2β/(3β+2)", "2β/(2β+1+2β/p)", "2β/(2β+1+2β/p)", "β/(β+1)"},
             {"2β/(3β+1)", "p/(p+1)", "p/(p+1)", "2β/(2β+1)"}}};
}

inline std::vector<double> rate_lattice_betas() {
    std::vector<double> v;
    for (int i = 1; i <= 20; ++i) v.push_back(0.2 * i);
    return v;
}

inline std::vector<double> rate_lattice_ps() {
    std::vector<double> v;
    for (int i = 1; i <= 20; ++i) v.push_back(0.5 * i);
    return v;
}

inline ValidatorResult validate_rates() {
    ValidatorResult r{"rates", {}};
    const auto ref = reference_table();
    std::size_t sym = 0, calc = 0;
    const auto s = symbolic_table(), c = calculated_symbolic_table();
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 4; ++j) {
            sym += s[i][j] == ref[i][j];
            calc += c[i][j] == ref[i][j];
        }
    r.at_least("symbolic_cells_matching", static_cast<double>(sym), 12.0);
    r.at_least("calculated_cells_matching", static_cast<double>(calc), 12.0);
    const DominanceReport d = check_dominance(rate_lattice_betas(), rate_lattice_ps());
    r.at_most("dominance_violations", static_cast<double>(d.violations), 0.0);
    bool monotone = true, bounded = true;
    for (auto kind : {RateKind::location, RateKind::location_scale, RateKind::hybrid})
        for (double b : rate_lattice_betas()) {
            double prev = 0.0;
            for (double p : rate_lattice_ps()) {
                const RateResult x = rate_exponent({kind, b, p});
                if (x.q < prev - 1e-15) monotone = false;
                if (!(x.q > 0.0 && x.q < 1.0) || !(x.log_power >= 0.0) || !std::isfinite(x.log_power)) bounded = false;
                prev = x.q;
            }
        }
    r.holds("q_nondecreasing_in_p", monotone);
    r.holds("q_in_unit_interval_log_power_nonnegative", bounded);
    return r;
}

inline Json to_json(const ValidatorResult& v) {
    Json j;
    j["name"] = v.name;
    j["pass"] = v.pass();
    Json checks = Json::array();
    for (const auto& c : v.checks) {
        Json x;
        x["name"] = c.name;
        x["pass"] = c.pass;
        x["value"] = c.value;
        x["limit"] = c.limit;
        checks.push_back(x);
    }
    j["checks"] = checks;
    return j;
}

struct ValidationBundle {
    std::vector<ValidatorResult> results;
    bool pass() const {
        return std::all_of(results.begin(), results.end(), [](const ValidatorResult& r) { return r.pass(); });
    }
    std::string first_failure() const {
        for (const auto& r : results)
            for (const auto& c : r.checks)
                if (!c.pass) return r.name + "." + c.name;
        return "";
    }
};

inline ValidationBundle run_validators(const std::vector<std::string>& which, std::uint64_t seed) {
    ValidationBundle b;
    for (const auto& w : which) {
        if (w == "kernels") {
            const auto& k = default_kernel();
            b.results.push_back(validate_kernels(*k.cutoff, k));
        } else if (w == "sga") b.results.push_back(validate_sga(seed));
        else if (w == "ig") b.results.push_back(validate_ig());
        else if (w == "dp") b.results.push_back(validate_dp(seed));
        else if (w == "sieve") b.results.push_back(validate_sieve(seed));
        else if (w == "rates") b.results.push_back(validate_rates());
        else throw std::invalid_argument("unknown validator: " + w);
    }
    return b;
}

inline Json to_json(const ValidationBundle& b, std::uint64_t seed) {
    Json j;
    j["schema_version"] = schema_version;
    j["seed"] = seed;
    j["pass"] = b.pass();
    j["first_failure"] = b.first_failure();
    Json arr = Json::array();
    for (const auto& r : b.results) arr.push_back(to_json(r));
    j["validators"] = arr;
    return j;
}

}  // namespace gmix

#endif
