#ifndef GMIX_HARNESS_HPP
#define GMIX_HARNESS_HPP

#include "gmix/hybrid.hpp"
#include "gmix/location.hpp"
#include "gmix/random_measures.hpp"
#include "gmix/testfun.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace gmix {

// ---- statistics ----

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
    std::size_t used = 0;
};

// Ordinary least squares of y on x after dropping the first `drop` points.
inline LineFit ols(const std::vector<double>& x, const std::vector<double>& y, std::size_t drop = 0) {
    if (x.size() != y.size()) throw std::invalid_argument("ols: size mismatch");
    if (x.size() < drop + 2) throw std::invalid_argument("ols: need at least two points after dropping");
    const std::size_t n = x.size() - drop;
    double mx = 0.0, my = 0.0;
    for (std::size_t i = drop; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = drop; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0) throw std::invalid_argument("ols: constant regressor");
    LineFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    f.r2 = syy > 0.0 ? sxy * sxy / (sxx * syy) : 1.0;
    f.used = n;
    return f;
}

inline std::vector<double> average_ranks(const std::vector<double>& v) {
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < idx.size();) {
        std::size_t j = i;
        while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
        const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) r[idx[k]] = avg;
        i = j + 1;
    }
    return r;
}

inline double spearman(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("spearman: need two equal-length samples");
    const auto rx = average_ranks(x), ry = average_ranks(y);
    const double m = 0.5 * static_cast<double>(rx.size() + 1);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < rx.size(); ++i) {
        sxy += (rx[i] - m) * (ry[i] - m);
        sxx += (rx[i] - m) * (rx[i] - m);
        syy += (ry[i] - m) * (ry[i] - m);
    }
    if (sxx == 0.0 || syy == 0.0) return 0.0;
    return sxy / std::sqrt(sxx * syy);
}

// Least squares with an arbitrary design matrix (normal equations, partial pivoting).
inline std::vector<double> least_squares(const std::vector<std::vector<double>>& rows, const std::vector<double>& y) {
    if (rows.empty() || rows.size() != y.size()) throw std::invalid_argument("least_squares: bad shapes");
    const std::size_t m = rows.front().size();
    std::vector<std::vector<double>> a(m, std::vector<double>(m + 1, 0.0));
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j < m; ++j) a[i][j] += rows[r][i] * rows[r][j];
            a[i][m] += rows[r][i] * y[r];
        }
    for (std::size_t c = 0; c < m; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < m; ++r)
            if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
        std::swap(a[c], a[piv]);
        if (a[c][c] == 0.0) throw std::runtime_error("least_squares: singular design");
        for (std::size_t r = 0; r < m; ++r) {
            if (r == c) continue;
            const double f = a[r][c] / a[c][c];
            for (std::size_t k = c; k <= m; ++k) a[r][k] -= f * a[c][k];
        }
    }
    std::vector<double> x(m);
    for (std::size_t i = 0; i < m; ++i) x[i] = a[i][m] / a[i][i];
    return x;
}

// ---- test functions ----

inline TestFunction certified(TestFunction t) {
    certify_norms(t);
    return t;
}

inline std::vector<TestFunction> builtin_test_functions() {
    std::vector<TestFunction> v;
    v.push_back(certified(gaussian_bump()));
    for (double b : {0.4, 0.6, 0.8}) {
        TestFunction w = weierstrass(b);
        w.name = "weierstrass_" + std::to_string(b).substr(0, 3);
        v.push_back(certified(std::move(w)));
    }
    v.push_back(certified(tent()));
    return v;
}

inline TestFunction test_function_by_name(const std::string& name) {
    for (auto& t : builtin_test_functions())
        if (t.name == name) return t;
    throw std::invalid_argument("unknown test function: " + name);
}

// A rough part of Hölder order beta plus a slowly decaying tail
// (1+x^2)^{-a/2} with a = max(1, p/2) + 0.1, which keeps the location
// coefficients above the threshold out to the edge of the core region.
inline TestFunction saturating_f0(double beta, double p) {
    TestFunction f = beta >= 1.0 ? tent() : weierstrass(beta);
    f += heavy_tail(0.5, std::max(1.0, std::isinf(p) ? 1.0 : p / 2.0) + 0.1);
    f.name = (beta >= 1.0 ? std::string("tent") : "weierstrass") + "+heavy_tail";
    f.beta = std::min(beta, 1.0);
    return f;
}

// W_beta at the origin plus one copy centred in every annulus of the plan.
inline TestFunction annulus_probe_f0(const HybridPlan& plan, int K = 13) {
    TestFunction f = weierstrass(std::min(plan.beta, 1.0), 0.0, K);
    for (int j = 0; j < plan.J; ++j) f += weierstrass(std::min(plan.beta, 1.0), 0.5 * (plan.zeta(j) + plan.zeta(j + 1)), K);
    f.name = "annulus_probe";
    return f;
}

// The probe plus a level-0 tail (1+x^2)^{-a/2} whose coefficients stay above
// sigma_J^beta out to zeta_0 when p <= 2 beta, so the count saturates.
inline TestFunction hybrid_saturating_f0(const HybridPlan& plan) {
    TestFunction f = annulus_probe_f0(plan);
    const double b = plan.beta, p = plan.p;
    const double a = p <= 2.0 * b ? 0.8 * b / std::min(2.0 * b / p, b + 1.0) : 1.1;
    const double reach = 4.0 * plan.zeta(0);
    f += heavy_tail(0.5, a, std::min(1e-9, 0.5 / (reach * reach)));
    f.name = "hybrid_saturating";
    return f;
}

// ---- design distributions ----

struct DesignDistribution {
    std::string name;
    double moment_index = std::numeric_limits<double>::infinity();
    std::function<double(Rng&)> sample;
    std::function<double(double)> cdf;

    double mass_abs(double inner, double outer) const {  // Q(inner < |X| <= outer)
        return (cdf(outer) - cdf(inner)) + (cdf(-inner) - cdf(-outer));
    }
};

// |X| has survival (1+x)^{-nu}, so E|X|^p < inf iff p < nu
inline DesignDistribution pareto_design(double nu) {
    DesignDistribution d;
    d.name = "pareto_" + std::to_string(static_cast<int>(nu));
    d.moment_index = nu;
    d.sample = [nu](Rng& r) {
        const double m = std::pow(1.0 - uniform01(r), -1.0 / nu) - 1.0;
        return uniform01(r) < 0.5 ? -m : m;
    };
    d.cdf = [nu](double x) { return x < 0.0 ? 0.5 * std::pow(1.0 - x, -nu) : 1.0 - 0.5 * std::pow(1.0 + x, -nu); };
    return d;
}

inline std::vector<DesignDistribution> builtin_designs() {
    std::vector<DesignDistribution> v;
    DesignDistribution g;
    g.name = "gaussian";
    g.sample = [](Rng& r) { return std::normal_distribution<double>(0.0, 1.0)(r); };
    g.cdf = [](double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); };
    v.push_back(g);
    for (double nu : {1.0, 2.0, 4.0}) v.push_back(pareto_design(nu));
    DesignDistribution u;
    u.name = "uniform";
    u.sample = [](Rng& r) { return 2.0 * uniform01(r) - 1.0; };
    u.cdf = [](double x) { return std::clamp(0.5 * (x + 1.0), 0.0, 1.0); };
    v.push_back(u);
    return v;
}

inline DesignDistribution design_by_name(const std::string& name) {
    for (auto& d : builtin_designs())
        if (d.name == name) return d;
    throw std::invalid_argument("unknown design: " + name);
}

inline double empirical_abs_moment(const DesignDistribution& d, double p, std::size_t draws, Rng& rng) {
    double s = 0.0;
    for (std::size_t i = 0; i < draws; ++i) s += std::pow(std::abs(d.sample(rng)), p);
    return s / static_cast<double>(draws);
}

// ---- sweeps ----

enum class Scheme { location, hybrid };

struct ExperimentConfig {
    Scheme scheme = Scheme::location;
    std::string test_function = "saturating";
    std::string design = "pareto_2";
    std::vector<double> betas = {1.0};
    std::vector<double> ps = {2.0};
    std::vector<int> levels = {3, 4, 5, 6, 7, 8, 9};  // sigma = 2^{-e} or J
    std::uint64_t seed = 1;
    double noise_s = 1.0;
    double h_max = 1.0;
    double hybrid_h_max = 0.0;  // 0 keeps h_J
    std::size_t mc_draws = 20000;
    unsigned threads = 1;
};

struct SweepRow {
    double beta = 0.0;
    double p = 0.0;
    int level = 0;
    double sigma = 0.0;  // sigma or sigma_J
    std::size_t lambda = 0;
    double core_error = 0.0;
    double global_error = 0.0;
    double design_error = -1.0;    // Monte Carlo of int |f_M - f0|^2 dQ0 (hybrid)
    double design_bound = -1.0;    // sum_j sup_{I_j} err^2 Q0(I_j) (hybrid)
    double seconds = 0.0;
    bool ok = true;
    std::string failure;
    std::vector<AnnulusError> annuli;
};

struct FrontierFit {
    double beta = 0.0;
    double p = 0.0;
    std::size_t cells = 0;
    double count_slope = std::numeric_limits<double>::quiet_NaN();     // log |Lambda| vs log sigma
    double error_slope = std::numeric_limits<double>::quiet_NaN();     // log core error vs log sigma
    double frontier_slope = std::numeric_limits<double>::quiet_NaN();  // log |Lambda| vs log(1/error)
    double predicted_count_slope = 0.0;
    double predicted_frontier = 0.0;
};

struct SweepReport {
    ExperimentConfig config;
    std::vector<SweepRow> rows;
    std::vector<FrontierFit> fits;
};

inline double predicted_location_count_slope(double beta, double p) { return -std::min(beta + 1.0, 2.0 * beta / p + 1.0); }

inline double predicted_frontier(Scheme s, double beta, double p) {
    if (s == Scheme::location) return std::min(beta + 1.0, 2.0 * beta / p + 1.0) / beta;
    if (p <= 2.0 * beta) return std::min(beta + 1.0, 2.0 * beta / p) / beta;
    return 1.0 / beta;
}

inline TestFunction sweep_f0(const ExperimentConfig& c, double beta, double p) {
    if (c.test_function == "saturating" || c.test_function == "saturating_tail") return saturating_f0(beta, p);
    return test_function_by_name(c.test_function);
}

inline SweepRow run_location_cell(const ExperimentConfig& c, double beta, double p, int e) {
    SweepRow r;
    r.beta = beta;
    r.p = p;
    r.level = e;
    r.sigma = std::ldexp(1.0, -e);
    const auto t0 = std::chrono::steady_clock::now();
    const TestFunction f0 = sweep_f0(c, beta, p);
    const LocationPlan plan = make_location_plan(r.sigma, beta, p, c.h_max);
    const ApproxReport a = location_approx(f0, plan, default_kernel());
    r.lambda = a.lambda_size;
    r.core_error = a.sup_error_core;
    r.global_error = a.sup_error_global;
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

inline SweepRow run_hybrid_cell(const ExperimentConfig& c, double beta, double p, int J, std::uint64_t stream) {
    SweepRow r;
    r.beta = beta;
    r.p = p;
    r.level = J;
    r.sigma = std::ldexp(1.0, -J);
    const auto t0 = std::chrono::steady_clock::now();
    const double hj = hybrid_h(J, beta);
    const HybridPlan plan = make_hybrid_plan(J, beta, p, c.hybrid_h_max > 0.0 ? std::min(hj, c.hybrid_h_max) : hj);
    const TestFunction f0 = c.test_function == "saturating" ? hybrid_saturating_f0(plan) : sweep_f0(c, beta, p);
    const HybridReport h = hybrid_approx(f0, plan, default_kernel());
    r.lambda = h.lambda_size;
    r.annuli = h.annuli;
    r.global_error = h.sup_error_global;
    r.core_error = h.annuli.back().sup_error;  // I_J, the central region
    // design-weighted squared error against the annulus bound
    const DesignDistribution q = design_by_name(c.design);
    Rng rng = make_stream(c.seed, stream);
    const MixtureIndex fm(h.mixture);
    double s = 0.0;
    for (std::size_t i = 0; i < c.mc_draws; ++i) {
        const double x = q.sample(rng);
        const double e = fm(x) - f0(x);
        s += e * e;
    }
    r.design_error = s / static_cast<double>(c.mc_draws);
    double b = 0.0;
    for (const auto& a : h.annuli) b += a.sup_error * a.sup_error * q.mass_abs(a.inner, a.outer);
    b += h.sup_error_global * h.sup_error_global * q.mass_abs(plan.zeta(0), std::numeric_limits<double>::infinity());
    r.design_bound = b;
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

// Runs `n` jobs on up to `threads` workers; job i writes only slot i.
inline void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& job) {
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));
    if (threads == 1) {
        for (std::size_t i = 0; i < n; ++i) job(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) job(i);
        });
    for (auto& th : pool) th.join();
}

inline std::vector<FrontierFit> fit_frontiers(const ExperimentConfig& c, const std::vector<SweepRow>& rows) {
    std::vector<FrontierFit> fits;
    for (double b : c.betas)
        for (double p : c.ps) {
            FrontierFit f;
            f.beta = b;
            f.p = p;
            f.predicted_count_slope = c.scheme == Scheme::location ? predicted_location_count_slope(b, p)
                                                                   : -predicted_frontier(Scheme::hybrid, b, p) * b;
            f.predicted_frontier = predicted_frontier(c.scheme, b, p);
            std::vector<double> ls, ln, le;
            for (const auto& r : rows)
                if (r.beta == b && r.p == p && r.ok && r.lambda > 0 && r.core_error > 0.0) {
                    ls.push_back(std::log(r.sigma));
                    ln.push_back(std::log(static_cast<double>(r.lambda)));
                    le.push_back(std::log(r.core_error));
                }
            f.cells = ls.size();
            // rows are ordered coarse to fine; the two coarsest cells are dropped
            if (ls.size() >= 4) {
                f.count_slope = ols(ls, ln, 2).slope;
                f.error_slope = ols(ls, le, 2).slope;
                std::vector<double> inv(le.size());
                for (std::size_t i = 0; i < le.size(); ++i) inv[i] = -le[i];
                f.frontier_slope = ols(inv, ln, 2).slope;
            }
            fits.push_back(f);
        }
    return fits;
}

inline SweepReport run_sweep(const ExperimentConfig& c) {
    if (c.betas.empty() || c.ps.empty() || c.levels.empty()) throw std::invalid_argument("run_sweep: grids must be nonempty");
    struct Cell {
        double b, p;
        int e;
    };
    std::vector<Cell> cells;
    for (double b : c.betas)
        for (double p : c.ps) {
            std::vector<int> lv = c.levels;
            std::sort(lv.begin(), lv.end());
            for (int e : lv) cells.push_back({b, p, e});
        }
    SweepReport rep;
    rep.config = c;
    rep.rows.resize(cells.size());
    parallel_for(cells.size(), c.threads, [&](std::size_t i) {
        const Cell& k = cells[i];
        try {
            rep.rows[i] = c.scheme == Scheme::location ? run_location_cell(c, k.b, k.p, k.e) : run_hybrid_cell(c, k.b, k.p, k.e, i);
        } catch (const std::exception& ex) {
            SweepRow r;
            r.beta = k.b;
            r.p = k.p;
            r.level = k.e;
            r.sigma = std::ldexp(1.0, -k.e);
            r.ok = false;
            r.failure = ex.what();
            rep.rows[i] = r;
        }
    });
    rep.fits = fit_frontiers(c, rep.rows);
    return rep;
}

// Component count needed to reach error e, interpolated log-log along a sweep.
inline double count_at_error(const std::vector<SweepRow>& rows, double e) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& r : rows)
        if (r.ok && r.lambda > 0 && r.core_error > 0.0) pts.emplace_back(std::log(r.core_error), std::log(static_cast<double>(r.lambda)));
    std::sort(pts.begin(), pts.end());
    const double le = std::log(e);
    for (std::size_t i = 0; i + 1 < pts.size(); ++i)
        if (le >= pts[i].first && le <= pts[i + 1].first) {
            const double t = (le - pts[i].first) / (pts[i + 1].first - pts[i].first);
            return std::exp(pts[i].second + t * (pts[i + 1].second - pts[i].second));
        }
    return std::numeric_limits<double>::quiet_NaN();
}

struct DominancePoint {
    double error = 0.0;
    double hybrid_count = 0.0;
    double location_count = 0.0;  // interpolated at the same core error
};

struct FrontierDominance {
    std::vector<DominancePoint> points;
    bool holds() const {
        return !points.empty() && std::all_of(points.begin(), points.end(), [](const DominancePoint& d) { return d.hybrid_count <= d.location_count; });
    }
};

// Both schemes on the heavy-tailed saturating f0 with h <= h_max; every hybrid
// cell whose core error lies inside the location sweep's range is matched.
inline FrontierDominance frontier_dominance(double beta, double p, const std::vector<int>& hybrid_levels,
                                            const std::vector<int>& location_levels, double h_max = 1.0) {
    ExperimentConfig h;
    h.scheme = Scheme::hybrid;
    h.test_function = "saturating_tail";
    h.betas = {beta};
    h.ps = {p};
    h.levels = hybrid_levels;
    h.mc_draws = 1000;
    h.h_max = h_max;
    h.hybrid_h_max = h_max;
    ExperimentConfig l = h;
    l.scheme = Scheme::location;
    l.levels = location_levels;
    const SweepReport rh = run_sweep(h), rl = run_sweep(l);
    FrontierDominance d;
    for (const auto& r : rh.rows) {
        if (!r.ok || r.lambda == 0) continue;
        const double n = count_at_error(rl.rows, r.core_error);
        if (std::isnan(n)) continue;
        d.points.push_back({r.core_error, static_cast<double>(r.lambda), n});
    }
    return d;
}

}  // namespace gmix

#endif
