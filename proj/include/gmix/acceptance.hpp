#ifndef GMIX_ACCEPTANCE_HPP
#define GMIX_ACCEPTANCE_HPP

#include "gmix/harness.hpp"
#include "gmix/hybrid.hpp"
#include "gmix/io.hpp"
#include "gmix/location.hpp"
#include "gmix/random_measures.hpp"
#include "gmix/rates.hpp"
#include "gmix/sieve.hpp"
#include "gmix/validators.hpp"

#include <boost/math/distributions/beta.hpp>
#include <boost/math/distributions/gamma.hpp>

#include <chrono>
#include <cmath>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

namespace gmix {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string measured;
    std::string target;
    double seconds = 0.0;
    double time_limit = 0.0;  // 0 when the criterion sets none
};

inline std::string one_line(const CriterionResult& r) {
    std::ostringstream o;
    o << (r.pass ? "PASS" : "FAIL") << " criterion " << r.id << " [" << r.name << "] measured: " << r.measured
      << " | target: " << r.target << " | " << fmt_double(std::round(r.seconds * 100.0) / 100.0) << " s";
    if (r.time_limit > 0.0) o << " (limit " << fmt_double(r.time_limit) << " s)";
    return o.str();
}

namespace detail {

class Stopwatch {
public:
    double seconds() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count(); }

private:
    std::chrono::steady_clock::time_point t0_ = std::chrono::steady_clock::now();
};

inline std::string num(double v, int prec = 4) {
    std::ostringstream o;
    o.precision(prec);
    o << v;
    return o.str();
}

inline std::string join(const std::vector<std::string>& v, const char* sep = ", ") {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? sep : "") + v[i];
    return s;
}

}  // namespace detail

// 1: cutoff exactness on the spectral grid, unit mass, vanishing moments
inline CriterionResult criterion_kernel_exactness() {
    detail::Stopwatch sw;
    CriterionResult r{1, "kernel exactness", false, "", "", 0.0, 5.0};
    const auto k = build_kernel();
    const CutoffCheck c = check_cutoff(*k.cutoff);
    const double mass = std::abs(k.chi_moment(0) - 1.0);
    double mom = 0.0;
    for (int q = 1; q <= 4; ++q) mom = std::max(mom, std::abs(k.chi_moment(q)));
    r.seconds = sw.seconds();
    r.measured = std::string("plateau ") + (c.plateau_exact ? "exact" : "broken") + ", support " +
                 (c.support_exact ? "exact" : "broken") + ", |int chi - 1| = " + detail::num(mass, 3) +
                 ", max |moment 1..4| = " + detail::num(mom, 3);
    r.target = "chi_hat = 1 on [-1,1], 0 outside [-2,2]; |int chi - 1| <= 1e-8; moments <= 1e-7; < 5 s";
    r.pass = c.plateau_exact && c.support_exact && mass <= 1e-8 && mom <= 1e-7 && r.seconds < r.time_limit;
    return r;
}

struct PoissonLaw {
    std::vector<double> hs;
    std::vector<double> errors;
    LineFit fit;
    double alias_exponent = 0.0;  // -2 pi^2 (1 - sigma^2 / w^2) for a Gaussian of width w
};

// sup |K_{h,sigma} f - f| for a Gaussian whose spectrum sits on the plateau of chi_hat(2 sigma .)
inline PoissonLaw poisson_summation_law(const std::vector<double>& hs, double width = 20.0, double sigma = 1.0) {
    const auto& k = default_kernel();
    const TestFunction f = gaussian_bump(1.0, 0.0, width);
    PoissonLaw law;
    law.hs = hs;
    std::vector<double> x, y;
    for (double h : hs) {
        const FiniteGaussMixture m = lattice_operator(f, h, sigma, k, 12.0 * width + 40.0 * sigma);
        const MixtureIndex fm(m);
        double e = 0.0;
        for (double t = -3.0 * width; t <= 3.0 * width; t += sigma / 16.0) e = std::max(e, std::abs(fm(t) - f(t)));
        law.errors.push_back(e);
        x.push_back(1.0 / (h * h));
        y.push_back(std::log(e));
    }
    law.fit = ols(x, y);
    law.alias_exponent = -2.0 * pi * pi * (1.0 - sigma * sigma / (width * width));
    return law;
}

// 2: log sup |K_{h,sigma} f_sigma - f_sigma| against 1/h^2
inline CriterionResult criterion_poisson_summation() {
    detail::Stopwatch sw;
    CriterionResult r{2, "Poisson-summation law", false, "", "", 0.0, 60.0};
    const PoissonLaw law = poisson_summation_law({1.0, 1.25, 1.5, 2.0});
    r.seconds = sw.seconds();
    const double target = -4.0 * pi * pi;
    std::vector<std::string> errs;
    for (double e : law.errors) errs.push_back(detail::num(e, 3));
    r.measured = "slope " + detail::num(law.fit.slope) + " (errors " + detail::join(errs) + "; aliasing exponent of the lattice sum " +
                 detail::num(law.alias_exponent) + ")";
    r.target = "slope -4 pi^2 = " + detail::num(target) + " +- 10%; < 60 s";
    r.pass = std::abs(law.fit.slope - target) <= 0.1 * std::abs(target) && r.seconds < r.time_limit;
    return r;
}

struct SmoothingLaw {
    std::string name;
    double beta = 0.0;
    std::vector<double> sigmas, errors;
    LineFit fit;
};

inline std::vector<SmoothingLaw> smoothing_laws() {
    const auto& k = default_kernel();
    std::vector<std::pair<TestFunction, double>> fs;
    for (double b : {0.4, 0.6, 0.8}) fs.emplace_back(weierstrass(b), b);
    fs.emplace_back(tent(), 1.0);
    std::vector<SmoothingLaw> out;
    for (const auto& [f, b] : fs) {
        SmoothingLaw s;
        s.name = f.name + (b < 1.0 ? "_" + detail::num(b, 2) : "");
        s.beta = b;
        std::vector<double> ls, le;
        for (int e = 3; e <= 9; ++e) {
            const double sg = std::ldexp(1.0, -e);
            s.sigmas.push_back(sg);
            s.errors.push_back(smoothing_sup_error(f, sg, k));
            ls.push_back(std::log(sg));
            le.push_back(std::log(s.errors.back()));
        }
        s.fit = ols(ls, le, 2);
        out.push_back(s);
    }
    return out;
}

// 3: slope of log sup |chi_sigma * f - f| against log sigma
inline CriterionResult criterion_smoothing_rate() {
    detail::Stopwatch sw;
    CriterionResult r{3, "smoothing rate", true, "", "", 0.0, 120.0};
    std::vector<std::string> m;
    for (const auto& s : smoothing_laws()) {
        m.push_back(s.name + " slope " + detail::num(s.fit.slope));
        if (std::abs(s.fit.slope - s.beta) > 0.15) r.pass = false;
    }
    r.seconds = sw.seconds();
    r.measured = detail::join(m);
    r.target = "slope beta +- 0.15 over sigma = 2^-3..2^-9 (two coarsest dropped); < 120 s";
    r.pass = r.pass && r.seconds < r.time_limit;
    return r;
}

inline std::vector<SweepReport> location_law_sweeps() {
    std::vector<SweepReport> out;
    for (auto [b, p] : std::vector<std::pair<double, double>>{{1.0, 1.0}, {1.0, 4.0}, {0.6, 2.0}}) {
        ExperimentConfig c;
        c.scheme = Scheme::location;
        c.betas = {b};
        c.ps = {p};
        c.levels = {3, 4, 5, 6, 7, 8, 9};
        out.push_back(run_sweep(c));
    }
    return out;
}

// 4: |Lambda| against sigma
inline CriterionResult criterion_location_count(const std::vector<SweepReport>* pre = nullptr) {
    detail::Stopwatch sw;
    CriterionResult r{4, "location count law", true, "", "", 0.0, 300.0};
    const std::vector<SweepReport> sweeps = pre ? *pre : location_law_sweeps();
    std::vector<std::string> m;
    for (const auto& s : sweeps)
        for (const auto& f : s.fits) {
            m.push_back("(" + detail::num(f.beta, 2) + "," + detail::num(f.p, 2) + ") slope " + detail::num(f.count_slope) + " vs " +
                        detail::num(f.predicted_count_slope));
            if (!(std::abs(f.count_slope - f.predicted_count_slope) <= 0.25)) r.pass = false;
        }
    r.seconds = pre ? 0.0 : sw.seconds();
    r.measured = detail::join(m);
    r.target = "slope within 0.25 of -min(beta+1, 2 beta/p + 1); < 300 s";
    r.pass = r.pass && r.seconds < r.time_limit;
    return r;
}

// 5: core-region error against sigma
inline CriterionResult criterion_location_core_error(const std::vector<SweepReport>* pre = nullptr) {
    detail::Stopwatch sw;
    CriterionResult r{5, "location core error", true, "", "", 0.0, 300.0};
    const std::vector<SweepReport> sweeps = pre ? *pre : location_law_sweeps();
    std::vector<std::string> m;
    for (const auto& s : sweeps)
        for (const auto& f : s.fits) {
            m.push_back("(" + detail::num(f.beta, 2) + "," + detail::num(f.p, 2) + ") slope " + detail::num(f.error_slope));
            if (!(std::abs(f.error_slope - f.beta) <= 0.2)) r.pass = false;
        }
    r.seconds = pre ? 0.0 : sw.seconds();
    r.measured = detail::join(m);
    r.target = "slope in [beta-0.2, beta+0.2]; < 300 s";
    r.pass = r.pass && r.seconds < r.time_limit;
    return r;
}

inline CascadeResult telescoping_cascade() {
    const TestFunction w = weierstrass(0.6, 0.0, 12);
    return residual_cascade([&](double x) { return w(x); }, 8, default_kernel(), PeriodicGrid{32.0, std::size_t{1} << 18});
}

// 6: recursive residuals against the direct form, and their decay
inline CriterionResult criterion_hybrid_telescoping() {
    detail::Stopwatch sw;
    CriterionResult r{6, "hybrid telescoping", false, "", "", 0.0, 0.0};
    const CascadeResult c = telescoping_cascade();
    double dev = 0.0;
    std::vector<double> js, l2;
    for (std::size_t j = 0; j < c.deviation.size(); ++j) {
        dev = std::max(dev, c.deviation[j]);
        js.push_back(static_cast<double>(j));
        l2.push_back(std::log2(c.sup_residual[j]));
    }
    const LineFit f = ols(js, l2, 2);
    r.seconds = sw.seconds();
    r.measured = "max deviation " + detail::num(dev, 3) + ", decay slope " + detail::num(f.slope) + " (W_0.6)";
    r.target = "deviation <= 1e-7 for j <= 8; slope -0.6 +- 0.2 in log2";
    r.pass = dev <= 1e-7 && std::abs(f.slope + 0.6) <= 0.2;
    return r;
}

struct AdaptivityResult {
    HybridReport report;
    double span = 0.0;
    double rho = 0.0;
};

inline AdaptivityResult hybrid_adaptivity(int J = 8) {
    const HybridPlan plan = make_hybrid_plan(J, 1.0, 1.0);
    AdaptivityResult a;
    a.report = hybrid_approx(annulus_probe_f0(plan), plan, default_kernel());
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    std::vector<double> js, es;
    for (const auto& an : a.report.annuli) {
        lo = std::min(lo, an.normalized);
        hi = std::max(hi, an.normalized);
        js.push_back(an.j);
        es.push_back(an.sup_error);
    }
    a.span = hi / lo;
    a.rho = spearman(js, es);
    return a;
}

// 7: per-annulus errors
inline CriterionResult criterion_hybrid_adaptivity() {
    detail::Stopwatch sw;
    CriterionResult r{7, "hybrid spatial adaptivity", false, "", "", 0.0, 0.0};
    const int J = 8;
    const AdaptivityResult a = hybrid_adaptivity(J);
    const double band = 50.0 * std::pow(J, 1.5);
    std::vector<std::string> e;
    for (const auto& an : a.report.annuli) e.push_back(detail::num(an.sup_error, 3));
    r.seconds = sw.seconds();
    r.measured = "normalized span " + detail::num(a.span) + ", Spearman " + detail::num(a.rho, 3) + ", errors I_0..I_J " + detail::join(e, " ");
    r.target = "span < 50 J^{3/2} = " + detail::num(band) + ", Spearman(j, error) <= -0.7";
    r.pass = a.span < band && a.rho <= -0.7;
    return r;
}

// 8: total variation law and jump counts of the symmetric Gamma process
inline CriterionResult criterion_sga_process() {
    detail::Stopwatch sw;
    CriterionResult r{8, "SGa process laws", true, "", "", 0.0, 120.0};
    const SiteSampler site = [](SignedAtom& a, Rng& g) {
        a.sigma = 1.0;
        a.mu = uniform01(g);
    };
    const double floor = 1e-4;
    std::vector<std::string> m;
    for (double ab : {0.5, 1.0, 2.0}) {
        Rng rng = make_stream(2024, static_cast<std::uint64_t>(ab * 10.0));
        std::vector<double> tv;
        double cnt = 0.0;
        for (int i = 0; i < 100000; ++i) {
            const auto s = sample_sga_process(ab, site, floor, rng);
            tv.push_back(s.total_variation());
            cnt += static_cast<double>(s.atoms.size());
        }
        const boost::math::gamma_distribution<double> g(2.0 * ab, 1.0);
        const double ks = ks_distance(tv, [&](double x) { return boost::math::cdf(g, x); });
        const double rel = std::abs(cnt / 1e5 / (2.0 * ab * expint_e1(floor)) - 1.0);
        m.push_back("alpha " + detail::num(ab, 2) + ": KS " + detail::num(ks, 3) + ", count rel. error " + detail::num(rel, 3));
        if (ks > 0.01 || rel > 0.02) r.pass = false;
    }
    r.seconds = sw.seconds();
    r.measured = detail::join(m);
    r.target = "KS <= 0.01 against Gamma(2 alpha), count mean within 2%; < 120 s";
    r.pass = r.pass && r.seconds < r.time_limit;
    return r;
}

// 9: SGa(0.5) small-ball probability
inline CriterionResult criterion_sga_small_ball() {
    detail::Stopwatch sw;
    CriterionResult r{9, "SGa small ball", false, "", "", 0.0, 0.0};
    Rng rng = make_stream(2025);
    const std::size_t n = 1000000;
    std::size_t hit = 0;
    for (std::size_t i = 0; i < n; ++i)
        if (std::abs(sample_sga(0.5, rng) - 1.0) <= 0.25) ++hit;
    const auto [lo, hi] = wilson_interval(hit, n, 2.5758293035489);
    const double bound = sga_small_ball_bound(0.5, 1.0, 0.25);
    r.seconds = sw.seconds();
    r.measured = "p = " + detail::num(static_cast<double>(hit) / static_cast<double>(n)) + ", 99% lower limit " + detail::num(lo);
    r.target = "lower limit > delta e^{-2}/(3 e Gamma(0.5)) = " + detail::num(bound);
    r.pass = lo > bound;
    (void)hi;
    return r;
}

// 10: inverse-Gaussian tail sweeps
inline CriterionResult criterion_ig_tails() {
    detail::Stopwatch sw;
    CriterionResult r{10, "inverse-Gaussian tails", true, "", "", 0.0, 0.0};
    std::vector<std::string> m;
    for (auto [a, b] : std::vector<std::pair<double, double>>{{1.0, 1.0}, {2.0, 0.5}}) {
        const TailReport t = inverse_gaussian_tail_report(InverseGaussian(a, b));
        m.push_back("(" + detail::num(a) + "," + detail::num(b) + "): violations upper " + std::to_string(t.upper.violations) + ", lower " +
                    std::to_string(t.lower.violations) + ", small-ball " + std::to_string(t.small_ball.violations) + " over " +
                    std::to_string(t.upper.points + t.lower.points + t.small_ball.points) + " points");
        if (!t.pass()) r.pass = false;
    }
    r.seconds = sw.seconds();
    r.measured = detail::join(m, "; ");
    r.target = "no violations over x in [1,50] with a1 = b/(2a^2), a2 = b/4, a3 = b/2";
    return r;
}

// 11: Dirichlet-process scale prior
inline CriterionResult criterion_dp_conditions() {
    detail::Stopwatch sw;
    CriterionResult r{11, "Dirichlet-process conditions", false, "", "", 0.0, 0.0};
    const InverseGaussian ig(1.0, 1.0);
    Rng rng = make_stream(2026);
    std::vector<double> p;
    for (int i = 0; i < 100000; ++i) p.push_back(sample_dp(1.0, ig, rng).mass(0.0, 1.0));
    const double g = ig.cdf(1.0);
    const boost::math::beta_distribution<double> B(g, 1.0 - g);
    const double ks = ks_distance(p, [&](double x) { return boost::math::cdf(B, x); });
    std::vector<double> xs;
    for (int x = 1; x <= 10; ++x) xs.push_back(x);
    const auto ev = dp_tail_events(1.0, ig, xs, 100000, rng);
    std::size_t bad = 0;
    for (const auto& e : ev)
        if (!e.pass()) ++bad;
    std::vector<std::vector<double>> rows;
    std::vector<double> y;
    for (int J = 4; J <= 12; ++J) {
        rows.push_back({std::ldexp(1.0, J), static_cast<double>(J * J), 1.0});
        y.push_back(-dp_omega_lower_bound(J, 1.0, 1.0, ig).log_bound);
    }
    const auto coef = least_squares(rows, y);
    r.seconds = sw.seconds();
    r.measured = "Beta KS " + detail::num(ks, 3) + ", tail-event violations " + std::to_string(bad) + "/" + std::to_string(2 * ev.size()) +
                 ", -log bound = " + detail::num(coef[0]) + " 2^J + " + detail::num(coef[1]) + " J^2 + " + detail::num(coef[2]);
    r.target = "KS <= 0.01; event frequencies <= Markov bounds for x in 1..10; 2^J coefficient > 0";
    r.pass = ks <= 0.01 && bad == 0 && coef[0] > 0.0;
    return r;
}

// 12: net covering at n = 50, eps = 0.2
inline CriterionResult criterion_net_covering() {
    detail::Stopwatch sw;
    CriterionResult r{12, "net covering", false, "", "", 0.0, 0.0};
    SieveSpec s;
    s.n = 50.0;
    s.epsilon = 0.2;
    Rng rng = make_stream(2027);
    std::vector<double> xs;
    for (int i = 0; i < 50; ++i) xs.push_back(std::normal_distribution<double>(0.0, 1.0)(rng));
    const CoveringReport cov = net_covering_check(s, xs, 1000, rng);
    const NetCardinality nc = net_log_cardinality(s, xs);
    r.seconds = sw.seconds();
    r.measured = std::to_string(cov.failures) + " failures in " + std::to_string(cov.trials) + ", max d_n " + detail::num(cov.max_distance, 3) +
                 ", C = " + fmt_double(nc.C) + ", log N raw " + detail::num(nc.raw.log_card_exact) + ", at eps/18 " +
                 detail::num(nc.at_eps_18.log_card_exact) + ", big atoms allowed " + detail::num(std::floor(s.max_big_atoms()), 2);
    r.target = "zero members beyond 8 eps = 1.6; C = 9.5/64 = 0.1484375";
    r.pass = cov.failures == 0 && cov.non_members == 0 && nc.C == 9.5 / 64.0;
    return r;
}

// 13: Table 1 and the dominance ordering
inline CriterionResult criterion_rate_table() {
    detail::Stopwatch sw;
    CriterionResult r{13, "rate table", false, "", "", 0.0, 1.0};
    const auto ref = reference_table();
    const auto sym = symbolic_table();
    const auto calc = calculated_symbolic_table();
    std::size_t match = 0;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 4; ++j) match += (sym[i][j] == ref[i][j] && calc[i][j] == ref[i][j]);
    const DominanceReport d = check_dominance(rate_lattice_betas(), rate_lattice_ps());
    r.seconds = sw.seconds();
    r.measured = std::to_string(match) + "/12 cells match, " + std::to_string(d.violations) + " dominance violations on " +
                 std::to_string(d.points) + " lattice points";
    r.target = "every Table 1 cell reproduced; hybrid q >= location q >= location-scale q on a 20x20 lattice; < 1 s";
    r.pass = match == 12 && d.violations == 0 && d.points == 400 && r.seconds < r.time_limit;
    return r;
}

// 14: the validate bundle twice with one seed
inline CriterionResult criterion_determinism(std::uint64_t seed = 7) {
    detail::Stopwatch sw;
    CriterionResult r{14, "determinism", false, "", "", 0.0, 0.0};
    const std::string a = to_json(run_validators(validator_names(), seed), seed).dump(2);
    const std::string b = to_json(run_validators(validator_names(), seed), seed).dump(2);
    r.seconds = sw.seconds();
    r.measured = a == b ? "identical JSON (" + std::to_string(a.size()) + " bytes, hash " + hex64(fnv1a(a)) + ")" : "JSON differs";
    r.target = "byte-identical validate output for the same seed";
    r.pass = a == b;
    return r;
}

inline CriterionResult run_criterion(int id) {
    switch (id) {
        case 1: return criterion_kernel_exactness();
        case 2: return criterion_poisson_summation();
        case 3: return criterion_smoothing_rate();
        case 4: return criterion_location_count();
        case 5: return criterion_location_core_error();
        case 6: return criterion_hybrid_telescoping();
        case 7: return criterion_hybrid_adaptivity();
        case 8: return criterion_sga_process();
        case 9: return criterion_sga_small_ball();
        case 10: return criterion_ig_tails();
        case 11: return criterion_dp_conditions();
        case 12: return criterion_net_covering();
        case 13: return criterion_rate_table();
        case 14: return criterion_determinism();
        default: throw std::invalid_argument("no criterion " + std::to_string(id));
    }
}

inline constexpr int criterion_count = 14;

}  // namespace gmix

#endif
