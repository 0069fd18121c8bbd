#ifndef GMIX_SIEVE_HPP
#define GMIX_SIEVE_HPP

#include "gmix/kernels.hpp"
#include "gmix/quadrature.hpp"
#include "gmix/random_measures.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace gmix {

enum class SieveKind { location, location_scale };

struct SieveSpec {
    double n = 50.0;
    double H = 1.0;
    double epsilon = 0.2;
    double b1 = 1.0;
    double b2 = 1.0;
    SieveKind kind = SieveKind::location;

    void validate() const {
        if (!(n >= 2.0)) throw std::invalid_argument("sieve needs n >= 2");
        if (!(H > 0.0) || H > 1.0) throw std::invalid_argument("sieve needs H in (0, 1]");
        if (!(epsilon > 1.0 / std::sqrt(n)) || epsilon > 1.0) throw std::invalid_argument("sieve needs n^{-1/2} < epsilon <= 1");
        if (!(b1 > 0.0) || !(b2 > 0.0)) throw std::invalid_argument("sieve needs b1, b2 > 0");
    }
    double sigma_lo() const { return std::pow(n, -1.0 / b2); }  // exclusive
    double sigma_hi() const { return std::pow(n, 1.0 / b1); }   // inclusive
    double small_weight() const { return 1.0 / n; }
    double max_big_atoms() const { return H * n * epsilon * epsilon / std::log(n); }
};

struct Verdict {
    bool member = true;
    std::string failed_clause;  // empty for members
    double value = 0.0;         // offending quantity
    double limit = 0.0;
};

// Clauses are checked in a fixed order and the first failure is reported.
inline Verdict sieve_membership(const std::vector<SignedAtom>& atoms, const SieveSpec& s) {
    for (const auto& a : atoms)
        if (!std::isfinite(a.mass) || !std::isfinite(a.mu) || !std::isfinite(a.sigma) || !(a.sigma > 0.0))
            throw std::invalid_argument("sieve_membership: atom data must be finite with positive scale");
    const double lo = s.sigma_lo(), hi = s.sigma_hi(), w = s.small_weight();
    if (s.kind == SieveKind::location && !atoms.empty()) {
        const double sg = atoms.front().sigma;
        for (const auto& a : atoms)
            if (a.sigma != sg) return {false, "shared_scale", a.sigma, sg};
        if (!(sg > lo && sg <= hi)) return {false, "sigma_range", sg, sg <= lo ? lo : hi};
    }
    double total = 0.0, small = 0.0, low_scale = 0.0, high_scale = 0.0, big = 0.0;
    for (const auto& a : atoms) {
        const double u = std::abs(a.mass);
        total += u;
        if (u <= w) small += u;
        const bool in_range = a.sigma > lo && a.sigma <= hi;
        if (u > w && (s.kind == SieveKind::location || in_range)) big += 1.0;
        if (a.sigma <= lo) low_scale += u;
        if (a.sigma > hi) high_scale += u;
    }
    if (total > s.n) return {false, "total_mass", total, s.n};
    if (small > s.epsilon) return {false, "small_mass", small, s.epsilon};
    if (big > s.max_big_atoms()) return {false, "big_count", big, s.max_big_atoms()};
    if (s.kind == SieveKind::location_scale) {
        if (low_scale > s.epsilon) return {false, "small_scale_mass", low_scale, s.epsilon};
        if (high_scale > s.epsilon) return {false, "large_scale_mass", high_scale, s.epsilon};
    }
    return {};
}

// ---- explicit net ----

struct NetSpec {
    double weight_step = 0.0;    // n^{-3/2} H^{-1}
    double location_step = 0.0;  // n^{-3/2-1/b2}
    double scale_step = 0.0;     // n^{-3/2-1/b2}
    double window = 0.0;         // S_n radius n^{1/b1} sqrt(6 log n)
};

inline NetSpec make_net(const SieveSpec& s) {
    const double e = std::pow(s.n, -1.5 - 1.0 / s.b2);
    return {std::pow(s.n, -1.5) / s.H, e, e, std::pow(s.n, 1.0 / s.b1) * std::sqrt(6.0 * std::log(s.n))};
}

struct NetCount {
    double radius = 0.0;         // covering radius 8 * sieve epsilon
    double sieve_epsilon = 0.0;
    double max_atoms = 0.0;      // floor(H n eps^2 / log n)
    double log_card_bound = 0.0; // |I| log(n n^{3/2} n^{4+1/b1+1/b2}) + log(n^{1/b1} n^{3/2+1/b2})
    double log_card_exact = 0.0; // same with the lattice sizes counted on the covariates
};

struct NetCardinality {
    double C = 0.0;             // (11/2 + 2/b1 + 2/b2) / 64
    double headline = 0.0;      // C H n eps^2
    double log_R_n = 0.0;       // log |R_n| on the given covariates
    NetCount raw;               // the net of F_n(H, eps), radius 8 eps
    NetCount at_eps;            // radius eps
    NetCount at_eps_18;         // radius eps / 18
};

namespace detail {

inline double union_length(std::vector<double> xs, double r) {
    std::sort(xs.begin(), xs.end());
    double len = 0.0, lo = xs.front() - r, hi = xs.front() + r;
    for (double x : xs) {
        if (x - r > hi) {
            len += hi - lo;
            lo = x - r;
        }
        hi = x + r;
    }
    return len + hi - lo;
}

}  // namespace detail

inline NetCardinality net_log_cardinality(const SieveSpec& s, const std::vector<double>& covariates) {
    s.validate();
    if (covariates.empty()) throw std::invalid_argument("net_log_cardinality needs covariates");
    NetCardinality c;
    c.C = (5.5 + 2.0 / s.b1 + 2.0 / s.b2) / 64.0;
    c.headline = c.C * s.H * s.n * s.epsilon * s.epsilon;
    const NetSpec net = make_net(s);
    const double ln = std::log(s.n);
    // lattice points of step h inside the union of windows, plus one per window end
    const double R = detail::union_length(covariates, net.window) / net.location_step + static_cast<double>(covariates.size());
    c.log_R_n = std::log(R);
    const double n_u = 2.0 * s.n / net.weight_step + 1.0;
    const double n_sigma = std::floor(s.sigma_hi() / net.scale_step) - std::ceil(s.sigma_lo() / net.scale_step) + 1.0;
    const auto count = [&](double radius) {
        NetCount k;
        k.radius = radius;
        k.sieve_epsilon = radius / 8.0;
        k.max_atoms = std::floor(s.H * s.n * k.sieve_epsilon * k.sieve_epsilon / ln);
        k.log_card_bound = k.max_atoms * (1.0 + 1.5 + 4.0 + 1.0 / s.b1 + 1.0 / s.b2) * ln + (1.0 / s.b1 + 1.5 + 1.0 / s.b2) * ln;
        k.log_card_exact = k.max_atoms * std::log(n_u * R) + std::log(n_sigma);
        return k;
    };
    c.raw = count(8.0 * s.epsilon);
    c.at_eps = count(s.epsilon);
    c.at_eps_18 = count(s.epsilon / 18.0);
    return c;
}

struct RoundingBudget {
    double far_atoms = 0.0;       // big atoms outside S_n
    double small_weights = 0.0;   // atoms with |u| <= 1/n, or scale out of range
    double snap = 0.0;            // location and scale snapping
    double quantization = 0.0;    // weight lattice
    double distance = 0.0;        // d_n(f, m)
    std::size_t kept = 0;
};

inline double snap_to(double x, double step) { return std::round(x / step) * step; }

// Rounds a sieve member onto the net: keep big atoms inside S_n, snap weights,
// locations and the scale to their lattices; every term is measured at the covariates.
inline RoundingBudget round_to_net(const std::vector<SignedAtom>& atoms, const SieveSpec& s,
                                   const std::vector<double>& xs, std::vector<SignedAtom>* rounded = nullptr) {
    const NetSpec net = make_net(s);
    const double w = s.small_weight();
    const auto in_window = [&](double mu) {
        for (double x : xs)
            if (std::abs(mu - x) <= net.window) return true;
        return false;
    };
    const auto snap_sigma = [&](double sg) {
        double v = snap_to(sg, net.scale_step);
        // keep the rounded scale inside the closed range [n^{-1/b2}, n^{1/b1}]
        while (v < s.sigma_lo()) v += net.scale_step;
        while (v > s.sigma_hi()) v -= net.scale_step;
        return v;
    };
    std::vector<double> far(xs.size(), 0.0), small(xs.size(), 0.0), snap(xs.size(), 0.0), quant(xs.size(), 0.0),
        diff(xs.size(), 0.0);
    RoundingBudget b;
    std::vector<SignedAtom> out;
    for (const auto& a : atoms) {
        const double u = std::abs(a.mass);
        const bool in_range = a.sigma > s.sigma_lo() && a.sigma <= s.sigma_hi();
        const bool keep_scale = s.kind == SieveKind::location || in_range;
        if (u <= w || !keep_scale) {
            for (std::size_t j = 0; j < xs.size(); ++j) {
                const double v = a.mass * phi((xs[j] - a.mu) / a.sigma);
                small[j] += std::abs(v);
                diff[j] += v;
            }
            continue;
        }
        if (!in_window(a.mu)) {
            for (std::size_t j = 0; j < xs.size(); ++j) {
                const double v = a.mass * phi((xs[j] - a.mu) / a.sigma);
                far[j] += std::abs(v);
                diff[j] += v;
            }
            continue;
        }
        SignedAtom r{snap_to(a.mass, net.weight_step), snap_sigma(a.sigma), snap_to(a.mu, net.location_step)};
        // a snapped location that leaves S_n moves one step back towards the atom
        if (!in_window(r.mu)) r.mu = r.mu > a.mu ? r.mu - net.location_step : r.mu + net.location_step;
        for (std::size_t j = 0; j < xs.size(); ++j) {
            const double p0 = phi((xs[j] - a.mu) / a.sigma), p1 = phi((xs[j] - r.mu) / r.sigma);
            snap[j] += u * std::abs(p0 - p1);
            quant[j] += std::abs(a.mass - r.mass) * p1;
            diff[j] += a.mass * p0 - r.mass * p1;
        }
        out.push_back(r);
        ++b.kept;
    }
    double ss = 0.0;
    for (std::size_t j = 0; j < xs.size(); ++j) {
        b.far_atoms = std::max(b.far_atoms, far[j]);
        b.small_weights = std::max(b.small_weights, small[j]);
        b.snap = std::max(b.snap, snap[j]);
        b.quantization = std::max(b.quantization, quant[j]);
        ss += diff[j] * diff[j];
    }
    b.distance = std::sqrt(ss / static_cast<double>(xs.size()));
    if (rounded) *rounded = std::move(out);
    return b;
}

// Random member of F_n(H, eps): big atoms up to the count limit with total mass
// at most n, small atoms with total at most eps, locations near or far from the
// covariates, scales log-uniform in the admissible range.
inline std::vector<SignedAtom> random_sieve_member(const SieveSpec& s, const std::vector<double>& xs, Rng& rng) {
    const NetSpec net = make_net(s);
    const double lo = std::log(s.sigma_lo()), hi = std::log(s.sigma_hi());
    const auto draw_sigma = [&] { return std::exp(lo + (hi - lo) * (1.0 - uniform01(rng))); };
    const double shared = draw_sigma();
    const auto site = [&](SignedAtom& a) {
        const double x = xs[std::uniform_int_distribution<std::size_t>(0, xs.size() - 1)(rng)];
        const double reach = uniform01(rng) < 0.7 ? net.window : 2.0 * net.window;
        a.mu = x + reach * (2.0 * uniform01(rng) - 1.0);
        a.sigma = s.kind == SieveKind::location ? shared : draw_sigma();
    };
    const auto sign = [&] { return uniform01(rng) < 0.5 ? -1.0 : 1.0; };
    std::vector<SignedAtom> atoms;
    const auto kmax = static_cast<long>(std::floor(s.max_big_atoms()));
    const long k = kmax > 0 ? std::uniform_int_distribution<long>(0, kmax)(rng) : 0;
    if (k > 0) {
        const double cap = s.n / static_cast<double>(k);
        for (long i = 0; i < k; ++i) {
            SignedAtom a;
            const double lu = std::log(s.small_weight()) + (std::log(cap) - std::log(s.small_weight())) * (1.0 - uniform01(rng));
            a.mass = sign() * std::max(std::exp(lu), s.small_weight() * (1.0 + 1e-9));
            site(a);
            atoms.push_back(a);
        }
    }
    const long m = std::uniform_int_distribution<long>(0, 20)(rng);
    std::vector<SignedAtom> small;
    double tot = 0.0;
    for (long i = 0; i < m; ++i) {
        SignedAtom a;
        a.mass = sign() * s.small_weight() * (1.0 - uniform01(rng));
        site(a);
        tot += std::abs(a.mass);
        small.push_back(a);
    }
    if (tot > s.epsilon)
        for (auto& a : small) a.mass *= s.epsilon * (1.0 - 1e-12) / tot;
    atoms.insert(atoms.end(), small.begin(), small.end());
    if (s.kind == SieveKind::location_scale && uniform01(rng) < 0.5) {
        // atoms with scales outside the range, within the eps budgets
        SignedAtom a;
        a.mass = sign() * 0.5 * s.epsilon;
        site(a);
        a.sigma = s.sigma_lo() * 0.5;
        atoms.push_back(a);
        a.sigma = s.sigma_hi() * 2.0;
        atoms.push_back(a);
    }
    return atoms;
}

struct CoveringReport {
    std::size_t trials = 0;
    std::size_t failures = 0;  // d_n > 8 eps
    std::size_t budget_failures = 0;  // some term above 2 eps
    std::size_t non_members = 0;      // generator produced a non-member (should stay 0)
    double max_distance = 0.0;
    RoundingBudget worst;
    double limit = 0.0;
};

inline CoveringReport net_covering_check(const SieveSpec& s, const std::vector<double>& xs, std::size_t trials, Rng& rng) {
    s.validate();
    CoveringReport r;
    r.trials = trials;
    r.limit = 8.0 * s.epsilon;
    for (std::size_t t = 0; t < trials; ++t) {
        const auto atoms = random_sieve_member(s, xs, rng);
        if (!sieve_membership(atoms, s).member) ++r.non_members;
        const RoundingBudget b = round_to_net(atoms, s, xs);
        if (b.distance > r.limit) ++r.failures;
        if (std::max({b.far_atoms, b.small_weights, b.snap, b.quantization}) > 2.0 * s.epsilon) ++r.budget_failures;
        if (b.distance >= r.max_distance) {
            r.max_distance = b.distance;
            r.worst = b;
        }
    }
    return r;
}

// ---- sieve complement under the priors ----

struct ClauseFrequency {
    std::string name;
    std::size_t hits = 0;
    double empirical = 0.0;
    double ci_hi = 0.0;          // 99% upper confidence limit
    double analytic_bound = 0.0;
    double simplified_bound = -1.0;  // asymptotic form where the proof states one, else -1
    bool below_resolution = false;
    bool consistent = true;       // empirical lower limit below the analytic bound
};

struct ComplementReport {
    SieveSpec spec;
    PriorKind prior = PriorKind::location;
    std::size_t trials = 0;
    std::vector<ClauseFrequency> clauses;
    ClauseFrequency total;
    double log_total_estimate = 0.0;  // log of the empirical complement frequency (or of 1/trials)
    double jump_floor = 0.0;
};

// int_0^{1/n} (e^{t x} - 1) x^{-1} e^{-x} dx
inline double small_jump_cumulant(double t, double n) {
    const QuadRule q = gauss_panels(0.0, 1.0 / n, 1.0 / (8.0 * n));
    return integrate(q, [&](double x) { return std::expm1(t * x) / x * std::exp(-x); });
}

inline double poisson_chernoff(double lambda, double x) {
    if (x <= lambda) return 1.0;
    return std::exp(-lambda + x * (1.0 + std::log(lambda) - std::log(x)));
}

// Analytic bounds of the sieve-complement clauses at (n, H, eps).
inline std::vector<ClauseFrequency> complement_bounds(const SieveSpec& s, const PriorSpec& p) {
    const InverseGaussian ig(p.ig_mean, p.ig_shape);
    const double n = s.n, eps = s.epsilon, ab = p.alpha_bar;
    const double lam = 2.0 * ab * expint_e1(1.0 / n), xn = s.max_big_atoms();
    std::vector<ClauseFrequency> c;
    const double g_lo = ig.cdf(s.sigma_lo()), g_hi = ig.sf(s.sigma_hi());
    if (s.kind == SieveKind::location) {
        c.push_back({"sigma_range", 0, 0, 0, g_lo + g_hi});
    }
    c.push_back({"total_mass", 0, 0, 0, std::pow(2.0, 2.0 * ab) * std::exp(-0.5 * n)});
    c.push_back({"small_mass", 0, 0, 0, std::exp(-n * eps * eps + 2.0 * ab * small_jump_cumulant(n * eps, n))});
    c.push_back({"big_count", 0, 0, 0, std::min(1.0, poisson_chernoff(lam, xn)), std::exp(-0.5 * xn * std::log(xn))});
    if (s.kind == SieveKind::location_scale) {
        // U ~ Gamma(2 alpha(A)); Chebyshev on U - EU > eps/2 once EU <= eps/2
        const auto cheb = [&](double mass_a) {
            const double m = 2.0 * ab * mass_a;
            return m <= eps / 2.0 ? std::min(1.0, 8.0 * ab * mass_a / (eps * eps)) : 1.0;
        };
        if (p.kind == PriorKind::hybrid) {
            const double a1 = ig.a1(), a2 = ig.a2();
            c.push_back({"small_scale_mass", 0, 0, 0, std::min(1.0, std::exp(-a2 * n) / (eps * eps) + std::exp(-a2 * n))});
            c.push_back({"large_scale_mass", 0, 0, 0, std::min(1.0, std::exp(-a1 * n) / (eps * eps) + std::exp(-a1 * n))});
        } else {
            c.push_back({"small_scale_mass", 0, 0, 0, cheb(g_lo)});
            c.push_back({"large_scale_mass", 0, 0, 0, cheb(g_hi)});
        }
    }
    return c;
}

// Monte Carlo of the complement with jumps simulated down to floor = 1e-3 / n.
inline ComplementReport mc_sieve_complement(const PriorSpec& prior, const SieveSpec& s, std::size_t trials, Rng& rng) {
    s.validate();
    if (trials < 10000) throw std::invalid_argument("mc_sieve_complement needs at least 1e4 trials");
    ComplementReport r;
    r.spec = s;
    r.prior = prior.kind;
    r.trials = trials;
    r.clauses = complement_bounds(s, prior);
    r.total.name = "any";
    PriorSpec p = prior;
    p.jump_floor = 1e-3 / s.n;
    r.jump_floor = p.jump_floor;
    const ParetoLocationBase loc;
    const auto hit = [&](const std::string& name) {
        for (auto& c : r.clauses)
            if (c.name == name) ++c.hits;
    };
    for (std::size_t t = 0; t < trials; ++t) {
        const PriorDraw d = sample_prior(p, loc, rng);
        const auto& atoms = d.measure.atoms;
        // every clause is evaluated, not only the first failure
        double total = 0.0, small = 0.0, lowm = 0.0, highm = 0.0, big = 0.0;
        for (const auto& a : atoms) {
            const double u = std::abs(a.mass);
            total += u;
            if (u <= s.small_weight()) small += u;
            const bool in_range = a.sigma > s.sigma_lo() && a.sigma <= s.sigma_hi();
            if (u > s.small_weight() && (s.kind == SieveKind::location || in_range)) big += 1.0;
            if (a.sigma <= s.sigma_lo()) lowm += u;
            if (a.sigma > s.sigma_hi()) highm += u;
        }
        bool any = false;
        const auto mark = [&](bool cond, const char* name) {
            if (cond) {
                hit(name);
                any = true;
            }
        };
        if (s.kind == SieveKind::location) mark(!(d.shared_sigma > s.sigma_lo() && d.shared_sigma <= s.sigma_hi()), "sigma_range");
        mark(total > s.n, "total_mass");
        mark(small > s.epsilon, "small_mass");
        mark(big > s.max_big_atoms(), "big_count");
        if (s.kind == SieveKind::location_scale) {
            mark(lowm > s.epsilon, "small_scale_mass");
            mark(highm > s.epsilon, "large_scale_mass");
        }
        if (any) ++r.total.hits;
    }
    const double z = 2.5758293035489;
    const auto finish = [&](ClauseFrequency& c) {
        c.empirical = static_cast<double>(c.hits) / static_cast<double>(trials);
        const auto [lo, hi] = wilson_interval(c.hits, trials, z);
        c.ci_hi = hi;
        c.below_resolution = c.hits < 10;
        c.consistent = lo <= c.analytic_bound;
    };
    double sum_bounds = 0.0;
    for (auto& c : r.clauses) {
        finish(c);
        sum_bounds += c.analytic_bound;
    }
    r.total.analytic_bound = std::min(1.0, sum_bounds);
    finish(r.total);
    r.log_total_estimate = std::log(std::max<double>(static_cast<double>(r.total.hits), 1.0) / static_cast<double>(trials));
    return r;
}

}  // namespace gmix

#endif
