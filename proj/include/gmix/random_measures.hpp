#ifndef GMIX_RANDOM_MEASURES_HPP
#define GMIX_RANDOM_MEASURES_HPP

#include "gmix/kernels.hpp"
#include "gmix/mixture.hpp"
#include "gmix/quadrature.hpp"

#include <boost/math/distributions/beta.hpp>
#include <boost/math/distributions/gamma.hpp>
#include <boost/math/distributions/inverse_gaussian.hpp>
#include <boost/math/special_functions/expint.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace gmix {

using Rng = std::mt19937_64;

// Independent stream `stream` of master seed `seed`.
inline Rng make_stream(std::uint64_t seed, std::uint64_t stream = 0) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32), 0x9e3779b9u};
    return Rng(seq);
}

inline double uniform01(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

inline double sample_gamma(double shape, Rng& rng) {
    if (shape <= 0.0) return 0.0;
    return std::gamma_distribution<double>(shape, 1.0)(rng);
}

inline double sample_beta(double a, double b, Rng& rng) {
    const double x = sample_gamma(a, rng), y = sample_gamma(b, rng);
    return x + y > 0.0 ? x / (x + y) : (uniform01(rng) < a / (a + b) ? 1.0 : 0.0);
}

// SGa(alpha): difference of two independent Gamma(alpha, 1) variables.
inline double sample_sga(double alpha, Rng& rng) {
    if (!(alpha > 0.0)) throw std::invalid_argument("sample_sga: alpha must be positive");
    return sample_gamma(alpha, rng) - sample_gamma(alpha, rng);
}

inline double expint_e1(double x) { return boost::math::expint(1, x); }

// Smallest-first tail of the Levy measure of |M|: 2 alpha_bar E1(u).
// Solves E1(u) = target for u >= floor by Newton in log u with a bisection guard.
inline double inverse_e1(double target, double floor) {
    double lo = std::log(floor), hi = std::log(std::max(floor * 2.0, 60.0));
    double t = std::log(std::max(floor, 1e-300));
    if (!(target > 0.0)) return std::exp(hi);
    for (int it = 0; it < 200; ++it) {
        const double u = std::exp(t);
        const double g = expint_e1(u) - target;
        if (g > 0.0) lo = t;
        else hi = t;
        const double dg = -std::exp(-u);  // d E1 / d log u
        double next = t - g / dg;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - t) <= 1e-12 * std::max(1.0, std::abs(t)) || hi - lo < 1e-13) return std::exp(next);
        t = next;
    }
    return std::exp(t);
}

struct SignedAtom {
    double mass = 0.0;
    double sigma = 1.0;
    double mu = 0.0;
};

struct SignedAtomMeasure {
    std::vector<SignedAtom> atoms;
    double truncation = 1e-6;
    double discarded_bound = 0.0;  // 2 alpha_bar * floor under the discard policy

    double total_variation() const {
        double s = 0.0;
        for (const auto& a : atoms) s += std::abs(a.mass);
        return s;
    }
    double mass_of(const std::function<bool(const SignedAtom&)>& cell) const {
        double s = 0.0;
        for (const auto& a : atoms)
            if (cell(a)) s += a.mass;
        return s;
    }
    FiniteGaussMixture to_mixture() const {
        FiniteGaussMixture m;
        for (const auto& a : atoms) m.add(a.mass, a.mu, a.sigma);
        return m;
    }
};

enum class SmallJumps { discard, lump };

// Site sampler fills sigma and mu of an atom.
using SiteSampler = std::function<void(SignedAtom&, Rng&)>;

// Jumps of size >= floor are simulated exactly: Poisson(2 alpha_bar E1(floor))
// count, magnitudes by inverse-Levy sampling, symmetric signs, iid sites.
inline SignedAtomMeasure sample_sga_process(double alpha_bar, const SiteSampler& site, double floor, Rng& rng,
                                            SmallJumps policy = SmallJumps::discard) {
    if (!(floor > 0.0) || floor >= 1.0) throw std::invalid_argument("jump floor must lie in (0, 1)");
    if (alpha_bar < 0.0) throw std::invalid_argument("alpha_bar must be non-negative");
    SignedAtomMeasure m;
    m.truncation = floor;
    if (alpha_bar == 0.0) return m;
    const double e1f = expint_e1(floor);
    const auto count = std::poisson_distribution<long>(2.0 * alpha_bar * e1f)(rng);
    m.atoms.reserve(static_cast<std::size_t>(count) + 1);
    for (long i = 0; i < count; ++i) {
        SignedAtom a;
        const double u = inverse_e1(uniform01(rng) * e1f, floor);
        a.mass = uniform01(rng) < 0.5 ? -u : u;
        site(a, rng);
        m.atoms.push_back(a);
    }
    if (policy == SmallJumps::discard) {
        m.discarded_bound = 2.0 * alpha_bar * floor;
    } else {
        // each side's small-jump total matched to a Gamma in mean and variance
        const double mean = alpha_bar * (1.0 - std::exp(-floor));
        const double var = alpha_bar * (1.0 - std::exp(-floor) * (1.0 + floor));
        const double shape = mean * mean / var, scale = var / mean;
        SignedAtom a;
        a.mass = scale * (sample_gamma(shape, rng) - sample_gamma(shape, rng));
        site(a, rng);
        m.atoms.push_back(a);
    }
    return m;
}

// ---- inverse-Gaussian scale prior (a = mean, b = shape) ----

struct InverseGaussian {
    double a = 1.0;
    double b = 1.0;

    InverseGaussian(double mean, double shape) : a(mean), b(shape) {
        if (!(a > 0.0) || !(b > 0.0)) throw std::invalid_argument("inverse-Gaussian parameters must be positive");
    }

    boost::math::inverse_gaussian_distribution<double> dist() const { return {a, b}; }

    double density(double x) const {
        if (x <= 0.0) return 0.0;
        return std::sqrt(b / (2.0 * pi * x * x * x)) * std::exp(-b * (x - a) * (x - a) / (2.0 * a * a * x));
    }
    double log_density(double x) const {
        return 0.5 * std::log(b / (2.0 * pi * x * x * x)) - b * (x - a) * (x - a) / (2.0 * a * a * x);
    }
    double cdf(double x) const { return x <= 0.0 ? 0.0 : boost::math::cdf(dist(), x); }
    double sf(double x) const { return x <= 0.0 ? 1.0 : boost::math::cdf(boost::math::complement(dist(), x)); }
    double mass(double lo, double hi) const {
        if (hi <= lo) return 0.0;
        if (lo >= a) return sf(lo) - sf(hi);
        return cdf(hi) - cdf(lo);
    }

    // log G(lo <= sigma <= hi); narrow or underflowing cells use Gauss-Legendre
    // on the log density
    double log_mass(double lo, double hi) const {
        if (!(hi > lo) || lo <= 0.0) throw std::invalid_argument("log_mass needs 0 < lo < hi");
        if (hi - lo > 0.5 * lo) {
            const double direct = mass(lo, hi);
            if (direct > 1e-250) return std::log(direct);
        }
        const QuadRule q = gauss_panels(lo, hi, (hi - lo) / 8.0);
        double mx = -std::numeric_limits<double>::infinity();
        std::vector<double> l(q.size());
        for (std::size_t i = 0; i < q.size(); ++i) {
            l[i] = log_density(q.x[i]) + std::log(q.w[i]);
            mx = std::max(mx, l[i]);
        }
        double s = 0.0;
        for (double v : l) s += std::exp(v - mx);
        return mx + std::log(s);
    }

    // Michael, Schucany and Haas transformation sampler
    double sample(Rng& rng) const {
        const double nu = std::normal_distribution<double>(0.0, 1.0)(rng);
        const double y = nu * nu;
        const double x = a + a * a * y / (2.0 * b) - (a / (2.0 * b)) * std::sqrt(4.0 * a * b * y + a * a * y * y);
        return uniform01(rng) <= a / (a + x) ? x : a * a / x;
    }

    // tail constants of the scale-prior conditions
    double a1() const { return b / (2.0 * a * a); }
    double a2() const { return b / 4.0; }
    double a3() const { return b / 2.0; }
    // G(sigma > x) <= c15 exp(-a1 x), from t^{-3/2} <= 1 and exp(b/a - b/(2t)) <= exp(b/a)
    double c15() const { return std::sqrt(b / (2.0 * pi)) * std::exp(b / a) * (2.0 * a * a / b); }
    // the same chain with the factor exp(b/a - b/2) as printed
    double c15_printed() const { return std::sqrt(b / (2.0 * pi)) * std::exp(b / a - b / 2.0) * (2.0 * a * a / b); }
    // G(sigma <= 1/x) <= c16 exp(-a2 x); valid while b <= 6
    double c16() const { return 216.0 * std::pow(b * std::sqrt(std::exp(1.0)), -3.0) * std::sqrt(b / (2.0 * pi)) * std::exp(b / a); }
    // G(1/x <= sigma <= (1+t)/x) >= c17 x^{1/2} t exp(-a3 x) for x >= 1, t in (0,1)
    double c17() const { return std::sqrt(b / (2.0 * pi)) * std::exp(b / a - b / (a * a)) * std::pow(2.0, -1.5); }
};

struct TailCheck {
    std::string name;
    double constant = 0.0;
    double worst_ratio = 0.0;  // max of lhs/rhs for upper bounds, min for lower bounds
    std::size_t points = 0;
    std::size_t violations = 0;
    bool pass() const { return violations == 0; }
};

struct TailReport {
    double a = 1.0, b = 1.0;
    double x_lo = 1.0, x_hi = 50.0;
    TailCheck upper;            // G(sigma > x) <= C exp(-a1 x)
    TailCheck upper_printed;    // same with the constant as printed
    TailCheck lower;            // G(sigma <= 1/x) <= C exp(-a2 x)
    TailCheck small_ball;       // explicit bound with x^{1/2}
    TailCheck small_ball_fit;   // b3 = b4 = 1 with c fitted over the sweep
    double density_integral = 0.0;
    double fitted_c_b3_1 = 0.0;
    bool pass() const { return upper.pass() && lower.pass() && small_ball.pass() && small_ball_fit.pass(); }
};

inline TailReport inverse_gaussian_tail_report(const InverseGaussian& g, double x_lo = 1.0, double x_hi = 50.0,
                                               double x_step = 0.25, std::vector<double> ts = {0.01, 0.1, 0.5, 0.99}) {
    TailReport r;
    r.a = g.a;
    r.b = g.b;
    r.x_lo = x_lo;
    r.x_hi = x_hi;
    r.upper = {"upper_tail", g.c15()};
    r.upper_printed = {"upper_tail_printed_constant", g.c15_printed()};
    r.lower = {"lower_tail", g.c16()};
    r.small_ball = {"small_ball_explicit", g.c17(), std::numeric_limits<double>::infinity()};
    r.small_ball_fit = {"small_ball_b3_1", 0.0, std::numeric_limits<double>::infinity()};
    // log-space comparisons: the tails underflow before x = 50 for b = 1
    const auto upd_upper = [](TailCheck& c, double log_lhs, double log_rhs) {
        ++c.points;
        const double r0 = std::exp(std::min(log_lhs - log_rhs, 700.0));
        c.worst_ratio = std::max(c.worst_ratio, r0);
        if (log_lhs > log_rhs + 1e-12) ++c.violations;
    };
    double fit = std::numeric_limits<double>::infinity();
    std::vector<std::pair<double, double>> sb;  // (log lhs, log of x t exp(-a3 x))
    for (double x = x_lo; x <= x_hi + 1e-12; x += x_step) {
        upd_upper(r.upper, std::log(g.sf(x)) > -700.0 ? std::log(g.sf(x)) : g.log_mass(x, x + 200.0 * g.a * g.a / g.b + 50.0),
                  std::log(g.c15()) - g.a1() * x);
        upd_upper(r.upper_printed, std::log(g.sf(x)) > -700.0 ? std::log(g.sf(x)) : g.log_mass(x, x + 200.0 * g.a * g.a / g.b + 50.0),
                  std::log(g.c15_printed()) - g.a1() * x);
        const double lm = g.cdf(1.0 / x) > 1e-300 ? std::log(g.cdf(1.0 / x)) : g.log_mass(1e-6 / x, 1.0 / x);
        upd_upper(r.lower, lm, std::log(g.c16()) - g.a2() * x);
        for (double t : ts) {
            const double l = g.log_mass(1.0 / x, (1.0 + t) / x);
            const double rhs = std::log(g.c17()) + 0.5 * std::log(x) + std::log(t) - g.a3() * x;
            ++r.small_ball.points;
            r.small_ball.worst_ratio = std::min(r.small_ball.worst_ratio, std::exp(std::min(l - rhs, 700.0)));
            if (l < rhs - 1e-12) ++r.small_ball.violations;
            const double base = std::log(x) + std::log(t) - g.a3() * x;
            fit = std::min(fit, l - base);
            sb.emplace_back(l, base);
        }
    }
    r.fitted_c_b3_1 = std::exp(fit);
    r.small_ball_fit.constant = r.fitted_c_b3_1;
    for (const auto& [l, base] : sb) {
        ++r.small_ball_fit.points;
        const double rhs = fit + base;
        r.small_ball_fit.worst_ratio = std::min(r.small_ball_fit.worst_ratio, std::exp(std::min(l - rhs, 700.0)));
        if (l < rhs - 1e-9) ++r.small_ball_fit.violations;
    }
    const QuadRule q = gauss_panels(1e-9, 60.0 * g.a + 200.0 * g.a * g.a / g.b, 0.01);
    r.density_integral = integrate(q, [&](double x) { return g.density(x); }) + g.sf(60.0 * g.a + 200.0 * g.a * g.a / g.b);
    return r;
}

// ---- Dirichlet-process scale prior ----

struct DiscreteMeasure {
    std::vector<double> sites;
    std::vector<double> weights;
    double residual = 0.0;  // stick mass left after truncation

    double mass(double lo, double hi) const {
        double s = 0.0;
        for (std::size_t i = 0; i < sites.size(); ++i)
            if (sites[i] > lo && sites[i] <= hi) s += weights[i];
        return s;
    }
    double sample(Rng& rng) const {
        const double u = uniform01(rng) * (1.0 - residual);
        double c = 0.0;
        for (std::size_t i = 0; i < sites.size(); ++i) {
            c += weights[i];
            if (u <= c) return sites[i];
        }
        return sites.back();
    }
};

// Stick-breaking until the remaining stick mass is at most `residual_tol`.
inline DiscreteMeasure sample_dp(double alpha, const InverseGaussian& base, Rng& rng, double residual_tol = 1e-10,
                                 std::size_t max_sticks = 100000) {
    if (!(alpha > 0.0)) throw std::invalid_argument("sample_dp: alpha must be positive");
    DiscreteMeasure m;
    double rest = 1.0;
    while (rest > residual_tol) {
        if (m.sites.size() >= max_sticks) throw std::runtime_error("sample_dp: stick budget exhausted");
        const double v = sample_beta(1.0, alpha, rng);
        m.weights.push_back(rest * v);
        m.sites.push_back(base.sample(rng));
        rest *= 1.0 - v;
    }
    m.residual = rest;
    return m;
}

struct OmegaBound {
    double log_bound = 0.0;
    int J = 0;
    double r = 1.0;
    int M = 1;
    std::vector<double> log_cells;  // log G(V_{j,r}), j = 0..J+M
};

// log of Gamma(alpha) alpha^{J+M+1} 2^{-J(J+M)} prod_j G(V_{j,r}) with
// V_{j,r} = [2^{-j}, 2^{-j}(1 + 2^{-J r})] and the complement split into M cells.
inline OmegaBound dp_omega_lower_bound(int J, double r, double alpha, const InverseGaussian& base) {
    if (J < 2) throw std::invalid_argument("dp_omega_lower_bound needs J >= 2");
    if (r < 1.0) throw std::invalid_argument("dp_omega_lower_bound needs r >= 1");
    OmegaBound o;
    o.J = J;
    o.r = r;
    const double shrink = std::exp2(-static_cast<double>(J) * r);
    double log_in = -std::numeric_limits<double>::infinity();
    for (int j = 0; j <= J; ++j) {
        const double lo = std::ldexp(1.0, -j), hi = lo * (1.0 + shrink);
        const double l = base.log_mass(lo, hi);
        if (!std::isfinite(l)) throw std::domain_error("base measure gives zero mass to V_{" + std::to_string(j) + ",r}");
        o.log_cells.push_back(l);
        log_in = std::max(log_in, l) + std::log1p(std::exp(-std::abs(log_in - l)));
    }
    const double gc = -std::expm1(log_in);
    if (!(gc > 0.0)) throw std::domain_error("complement cell has zero base mass");
    o.M = alpha * gc <= 1.0 ? 1 : static_cast<int>(std::ceil(alpha * gc));
    for (int k = 0; k < o.M; ++k) o.log_cells.push_back(std::log(gc / o.M));
    const double JM = static_cast<double>(J + o.M);
    o.log_bound = std::lgamma(alpha) + (JM + 1.0) * std::log(alpha) - static_cast<double>(J) * JM * std::log(2.0);
    for (double l : o.log_cells) o.log_bound += l;
    return o;
}

struct DpTailEvent {
    double x = 0.0;
    double freq_upper = 0.0;   // P_sigma(sigma > x) >= exp(-a1 x / 2)
    double bound_upper = 0.0;  // G(x, inf) exp(a1 x / 2)
    double freq_lower = 0.0;   // P_sigma(sigma < 1/x) >= exp(-a2 x / 2)
    double bound_lower = 0.0;  // G(0, 1/x) exp(a2 x / 2)
    bool pass() const { return freq_upper <= bound_upper && freq_lower <= bound_lower; }
};

// Frequencies of the DP scale-tail events over `trials` realizations, one realization per trial shared by all x.
inline std::vector<DpTailEvent> dp_tail_events(double alpha, const InverseGaussian& base, const std::vector<double>& xs,
                                               std::size_t trials, Rng& rng) {
    std::vector<DpTailEvent> ev(xs.size());
    std::vector<std::size_t> up(xs.size(), 0), lo(xs.size(), 0);
    for (std::size_t t = 0; t < trials; ++t) {
        const DiscreteMeasure p = sample_dp(alpha, base, rng);
        for (std::size_t i = 0; i < xs.size(); ++i) {
            const double x = xs[i];
            if (p.mass(x, std::numeric_limits<double>::infinity()) >= std::exp(-base.a1() * x / 2.0)) ++up[i];
            double below = 0.0;
            for (std::size_t k = 0; k < p.sites.size(); ++k)
                if (p.sites[k] < 1.0 / x) below += p.weights[k];
            if (below >= std::exp(-base.a2() * x / 2.0)) ++lo[i];
        }
    }
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double x = xs[i];
        ev[i].x = x;
        ev[i].freq_upper = static_cast<double>(up[i]) / static_cast<double>(trials);
        ev[i].freq_lower = static_cast<double>(lo[i]) / static_cast<double>(trials);
        ev[i].bound_upper = std::min(1.0, base.sf(x) * std::exp(base.a1() * x / 2.0));
        ev[i].bound_lower = std::min(1.0, base.cdf(1.0 / x) * std::exp(base.a2() * x / 2.0));
    }
    return ev;
}

// ---- location base measures ----

// density (1+|mu|)^{-3}, so G(|mu - x| <= t) >~ t (1+|x|)^{-2}
struct ParetoLocationBase {
    double density(double mu) const { return std::pow(1.0 + std::abs(mu), -3.0); }
    double cdf(double mu) const { return mu < 0.0 ? 0.5 * std::pow(1.0 - mu, -2.0) : 1.0 - 0.5 * std::pow(1.0 + mu, -2.0); }
    double mass(double lo, double hi) const { return cdf(hi) - cdf(lo); }
    double sample(Rng& rng) const {
        const double u = 1.0 - uniform01(rng);
        const double m = std::pow(u, -0.5) - 1.0;
        return uniform01(rng) < 0.5 ? -m : m;
    }
    static constexpr double b5 = 1.0;
    static constexpr double b6 = 2.0;
};

// Smooth compactly supported noise on [-1, 1] or a standard Gaussian.
struct NoiseDensity {
    enum class Kind { bump, gaussian };
    Kind kind = Kind::bump;

    double density(double z) const {
        if (kind == Kind::gaussian) return phi(z) / sqrt_2pi;
        return bump().density(z);
    }
    double mass(double t) const {  // mass of [-t, t]
        if (kind == Kind::gaussian) return std::erf(t / std::sqrt(2.0));
        return bump()(t) - bump()(-t);
    }
    double sample(Rng& rng) const {
        if (kind == Kind::gaussian) return std::normal_distribution<double>(0.0, 1.0)(rng);
        const double u = uniform01(rng);
        double lo = -1.0, hi = 1.0;
        for (int i = 0; i < 60; ++i) {
            const double mid = 0.5 * (lo + hi);
            if (bump()(mid) < u) lo = mid;
            else hi = mid;
        }
        return 0.5 * (lo + hi);
    }

private:
    static const BumpCdf& bump() {
        static const BumpCdf b(1.0);
        return b;
    }
};

// density z -> n^{-1} sum_i g(z - x_i)
struct CovariateBase {
    NoiseDensity g;
    std::vector<double> xs;

    CovariateBase(NoiseDensity noise, std::vector<double> covariates) : g(noise), xs(std::move(covariates)) {
        if (xs.empty()) throw std::invalid_argument("covariate base needs at least one covariate");
    }
    double density(double z) const {
        double s = 0.0;
        for (double x : xs) s += g.density(z - x);
        return s / static_cast<double>(xs.size());
    }
    double sample(Rng& rng) const {
        const auto i = std::uniform_int_distribution<std::size_t>(0, xs.size() - 1)(rng);
        return xs[i] + g.sample(rng);
    }
    // G_x(|mu - x_i| <= t) >= n^{-1} g([-t, t]) at every covariate x_i
    double small_ball_bound(double t) const { return g.mass(t) / static_cast<double>(xs.size()); }
    double mass(double lo, double hi, std::size_t nodes_per_unit = 64) const {
        const QuadRule q = gauss_panels(lo, hi, 1.0 / static_cast<double>(nodes_per_unit));
        return integrate(q, [&](double z) { return density(z); });
    }
};

// ---- mixture priors ----

enum class PriorKind { location, location_scale, hybrid };

struct PriorSpec {
    PriorKind kind = PriorKind::location;
    double ig_mean = 1.0;
    double ig_shape = 1.0;
    double dp_alpha = 1.0;
    double alpha_bar = 1.0;
    double jump_floor = 1e-3;
    SmallJumps small_jumps = SmallJumps::discard;
};

struct PriorDraw {
    SignedAtomMeasure measure;
    DiscreteMeasure scale_measure;  // hybrid only
    double shared_sigma = 0.0;      // location only
    FiniteGaussMixture mixture() const { return measure.to_mixture(); }
};

template <class LocationBase>
PriorDraw sample_prior(const PriorSpec& spec, const LocationBase& loc, Rng& rng) {
    const InverseGaussian ig(spec.ig_mean, spec.ig_shape);
    PriorDraw d;
    SiteSampler site;
    switch (spec.kind) {
        case PriorKind::location:
            d.shared_sigma = ig.sample(rng);
            site = [&loc, s = d.shared_sigma](SignedAtom& a, Rng& r) {
                a.sigma = s;
                a.mu = loc.sample(r);
            };
            break;
        case PriorKind::location_scale:
            site = [&loc, ig](SignedAtom& a, Rng& r) {
                a.sigma = ig.sample(r);
                a.mu = loc.sample(r);
            };
            break;
        case PriorKind::hybrid:
            d.scale_measure = sample_dp(spec.dp_alpha, ig, rng);
            site = [&loc, &sm = d.scale_measure](SignedAtom& a, Rng& r) {
                a.sigma = sm.sample(r);
                a.mu = loc.sample(r);
            };
            break;
    }
    d.measure = sample_sga_process(spec.alpha_bar, site, spec.jump_floor, rng, spec.small_jumps);
    return d;
}

// ---- statistics ----

// Kolmogorov-Smirnov distance of a sample to a continuous CDF
template <class Cdf>
double ks_distance(std::vector<double> xs, const Cdf& cdf) {
    if (xs.empty()) throw std::invalid_argument("ks_distance: empty sample");
    std::sort(xs.begin(), xs.end());
    const double n = static_cast<double>(xs.size());
    double d = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double f = cdf(xs[i]);
        d = std::max({d, f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f});
    }
    return d;
}

// Wilson score interval for a binomial proportion
inline std::pair<double, double> wilson_interval(std::size_t hits, std::size_t trials, double z) {
    const double n = static_cast<double>(trials), p = static_cast<double>(hits) / n;
    const double den = 1.0 + z * z / n, c = p + z * z / (2.0 * n);
    const double w = z * std::sqrt(p * (1.0 - p) / n + z * z / (4.0 * n * n));
    return {(c - w) / den, (c + w) / den};
}

// lower bound delta e^{-2|x|} / (3 e Gamma(alpha)) on P(|X - x| <= delta), X ~ SGa(alpha), alpha <= 1
inline double sga_small_ball_bound(double alpha, double x, double delta) {
    return delta * std::exp(-2.0 * std::abs(x)) / (3.0 * std::exp(1.0) * std::tgamma(alpha));
}

}  // namespace gmix

#endif
