#ifndef GMIX_LOCATION_HPP
#define GMIX_LOCATION_HPP

#include "gmix/kernels.hpp"
#include "gmix/mixture.hpp"
#include "gmix/testfun.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace gmix {

class WindowError : public std::runtime_error {
public:
    WindowError(const std::string& what, long level, long index)
        : std::runtime_error(what), level_(level), index_(index) {}
    long level() const { return level_; }
    long index() const { return index_; }

private:
    long level_, index_;
};

// Coefficients u_k on the lattice mu_k = h sigma k, k = k_lo .. k_lo + u.size() - 1.
struct LatticeCoeffs {
    double h = 1.0;
    double sigma = 1.0;
    long k_lo = 0;
    std::vector<double> u;

    double mu(std::size_t i) const { return h * sigma * static_cast<double>(k_lo + static_cast<long>(i)); }
    long k(std::size_t i) const { return k_lo + static_cast<long>(i); }
    std::size_t size() const { return u.size(); }
    double l1() const {
        double s = 0.0;
        for (double v : u) s += std::abs(v);
        return s;
    }
    double max_abs() const {
        double s = 0.0;
        for (double v : u) s = std::max(s, std::abs(v));
        return s;
    }
    Lattice lattice() const { return {mu(0), h * sigma, u.size()}; }
};

inline double h_sigma_formula(double sigma, double beta) {
    if (sigma >= 1.0) return std::numeric_limits<double>::infinity();
    return 2.0 * pi * std::sqrt(beta + 1.0) / std::sqrt(std::log(1.0 / sigma));
}

struct LocationPlan {
    double sigma = 0.125;
    double beta = 1.0;
    double p = 2.0;
    double h = 1.0;
    long k_lo = 0;
    long k_hi = 0;

    double log_inv_sigma() const { return std::log(1.0 / sigma); }
    double core_radius() const { return std::pow(sigma, -2.0 * beta / p); }
    double mu_threshold() const { return core_radius() + sigma * std::sqrt(2.0 * (beta + 1.0) * log_inv_sigma()); }
    double guard() const { return 6.0 * sigma * std::sqrt(2.0 * (beta + 1.0) * log_inv_sigma()); }
    double threshold() const { return std::pow(sigma, beta); }
};

// h = min(h_sigma, h_max); the lattice window spans the mu threshold plus guard.
inline LocationPlan make_location_plan(double sigma, double beta, double p, double h_max = 1.0) {
    if (!(sigma > 0.0) || sigma > 1.0) throw std::invalid_argument("sigma must lie in (0, 1]");
    if (!(beta > 0.0) || !(p > 0.0) || !(h_max > 0.0)) throw std::invalid_argument("beta, p, h_max must be positive");
    LocationPlan pl;
    pl.sigma = sigma;
    pl.beta = beta;
    pl.p = p;
    pl.h = std::min(h_sigma_formula(sigma, beta), h_max);
    const double w = pl.mu_threshold() + pl.guard();
    pl.k_hi = static_cast<long>(std::ceil(w / (pl.h * sigma)));
    pl.k_lo = -pl.k_hi;
    return pl;
}

// ---- generic routes by spatial quadrature against the tables ----

inline constexpr double kernel_reach = 200.0;

// chi_sigma * f with chi_sigma(y) = (2 sigma)^{-1} chi(y / (2 sigma)).
// `panel` is the quadrature panel width in kernel units; it must resolve f at scale 2 sigma.
inline std::function<double(double)> smooth(std::function<double(double)> f, double sigma, const DualKernelTable& k,
                                            double panel = 0.125) {
    if (!(sigma > 0.0) || sigma > 1.0) throw std::invalid_argument("smooth: sigma must lie in (0, 1]");
    auto q = std::make_shared<QuadRule>(gauss_panels(-kernel_reach, kernel_reach, panel));
    auto w = std::make_shared<std::vector<double>>(q->size());
    for (std::size_t i = 0; i < q->size(); ++i) (*w)[i] = q->w[i] * k.chi(q->x[i]);
    return [f = std::move(f), q, w, sigma](double x) {
        double s = 0.0;
        for (std::size_t i = 0; i < q->size(); ++i) s += (*w)[i] * f(x - 2.0 * sigma * q->x[i]);
        return s;
    };
}

// a_k = (h/sigma) int eta((y - h sigma k)/sigma) f(y) dy for k in [k_lo, k_hi].
inline LatticeCoeffs coefficients(const std::function<double(double)>& f, double h, double sigma,
                                  const DualKernelTable& k, long k_lo, long k_hi, double boundary_threshold = -1.0) {
    if (!(h > 0.0) || !(sigma > 0.0) || k_hi < k_lo) throw std::invalid_argument("coefficients: bad arguments");
    const QuadRule q = gauss_panels(-kernel_reach, kernel_reach, 0.125);
    std::vector<double> w(q.size());
    for (std::size_t i = 0; i < q.size(); ++i) w[i] = q.w[i] * k.eta(q.x[i]);
    LatticeCoeffs c{h, sigma, k_lo, std::vector<double>(static_cast<std::size_t>(k_hi - k_lo + 1))};
    for (std::size_t j = 0; j < c.size(); ++j) {
        const double mu = c.mu(j);
        double s = 0.0;
        for (std::size_t i = 0; i < q.size(); ++i) s += w[i] * f(mu + sigma * q.x[i]);
        c.u[j] = h * s;
    }
    if (boundary_threshold >= 0.0) {
        if (std::abs(c.u.front()) > boundary_threshold)
            throw WindowError("coefficient window too small", 0, c.k_lo);
        if (std::abs(c.u.back()) > boundary_threshold)
            throw WindowError("coefficient window too small", 0, c.k(c.size() - 1));
    }
    return c;
}

inline FiniteGaussMixture reconstruct(const LatticeCoeffs& c) {
    FiniteGaussMixture m;
    for (std::size_t i = 0; i < c.size(); ++i)
        if (c.u[i] != 0.0) m.add(c.u[i], c.mu(i), c.sigma);
    return m;
}

struct Truncation {
    std::vector<long> lambda;
    FiniteGaussMixture mixture;
    double retained_l1 = 0.0;
};

inline Truncation truncate_location(const LatticeCoeffs& c, const LocationPlan& plan) {
    Truncation t;
    const double thr = plan.threshold(), mu_max = plan.mu_threshold();
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (std::abs(c.u[i]) > thr && std::abs(c.mu(i)) <= mu_max) {
            t.lambda.push_back(c.k(i));
            t.mixture.add(c.u[i], c.mu(i), c.sigma);
            t.retained_l1 += std::abs(c.u[i]);
        }
    }
    return t;
}

// ---- spectral route on piece-based test functions ----

// Radius beyond which every coefficient of the filtered function is certified
// below `level`: |u(mu)| <= h (||eta||_1 sup_{|y|>=|mu|-R sigma} |f_s| + sup|f| eta_tail(R))
// and sup_{|y|>=r} |f_s| <= ||chi||_1 tail(r - 2 sigma R) + sup|f| chi_tail(R).
inline double certified_radius(const TestFunction& f, const DualKernelTable& k, double h, double sigma, double level,
                               double filter_gain = 1.0) {
    const double sup = f.tail_bound(0.0);
    double R = 20.0;
    while (R < kernel_reach && h * filter_gain * sup * (k.eta_tail_mass(R) + k.eta_l1() * k.chi_tail_mass(R)) > level / 10.0)
        R += 10.0;
    const double shift = 3.0 * sigma * R;
    const double c = h * filter_gain * k.eta_l1() * k.chi_l1();
    double r = f.core_reach() + shift;
    if (c * f.tail_bound(r - shift) < level / 2.0) return r;
    double step = std::max(1.0, r);
    while (c * f.tail_bound(r + step - shift) >= level / 2.0) {
        r += step;
        step *= 2.0;
        if (r > 1e9) throw std::runtime_error("certified_radius: tail never drops below the threshold");
    }
    // bisect down to unit resolution
    double lo = r, hi = r + step;
    while (hi - lo > 1.0) {
        const double mid = 0.5 * (lo + hi);
        if (c * f.tail_bound(mid - shift) < level / 2.0) hi = mid;
        else lo = mid;
    }
    return hi;
}

struct WindowInfo {
    double radius = 0.0;
    bool certified = false;  // true when the tail bound, not the mu threshold, ended the window
};

// Coefficients of the filtered piece function on the lattice h sigma k, over
// the smaller of [-(threshold + guard), +] and the certified radius.
inline LatticeCoeffs spectral_coefficients(const TestFunction& f, const Multiplier& m, double h, double sigma,
                                           const DualKernelTable& k, double mu_window, double level, long level_index,
                                           WindowInfo* info = nullptr, double filter_gain = 1.0,
                                           bool check_boundary = true) {
    const double rc = certified_radius(f, k, h, sigma, level, filter_gain);
    const bool cert = rc < mu_window;
    const double w = cert ? rc : mu_window;
    const long kk = static_cast<long>(std::ceil(w / (h * sigma)));
    LatticeCoeffs c{h, sigma, -kk, {}};
    c.u = f.lattice_coefficients(m, h, sigma, Lattice{-h * sigma * static_cast<double>(kk), h * sigma,
                                                       static_cast<std::size_t>(2 * kk + 1)});
    if (!cert && check_boundary) {
        if (std::abs(c.u.front()) > level) throw WindowError("coefficient window too small", level_index, c.k_lo);
        if (std::abs(c.u.back()) > level) throw WindowError("coefficient window too small", level_index, c.k(c.size() - 1));
    }
    if (info) *info = {w, cert};
    return c;
}

inline LatticeCoeffs location_coefficients(const TestFunction& f0, const LocationPlan& plan, const DualKernelTable& k,
                                           WindowInfo* info = nullptr) {
    // atoms beyond the mu threshold never enter Lambda, so the window edge needs no check
    const double w = plan.mu_threshold() + plan.guard();
    return spectral_coefficients(f0, lowpass(k, plan.sigma), plan.h, plan.sigma, k, w, plan.threshold() / 10.0, 0,
                                 info, 1.0, false);
}

// K_{h,sigma} f: the untruncated lattice mixture of f filtered at sigma, with
// atoms on |mu| <= radius.
inline FiniteGaussMixture lattice_operator(const TestFunction& f, double h, double sigma, const DualKernelTable& k,
                                           double radius) {
    const long kk = static_cast<long>(std::ceil(radius / (h * sigma)));
    LatticeCoeffs c{h, sigma, -kk, {}};
    c.u = f.lattice_coefficients(lowpass(k, sigma), h, sigma,
                                 Lattice{-h * sigma * static_cast<double>(kk), h * sigma, static_cast<std::size_t>(2 * kk + 1)});
    return reconstruct(c);
}

// sup over a lattice of step sigma/16 on [-half, half] of |f - chi_sigma * f|;
// the lattice contains the origin.
inline double smoothing_sup_error(const TestFunction& f, double sigma, const DualKernelTable& k, double half = 6.0) {
    const double dt = sigma / 16.0;
    const auto m = static_cast<std::size_t>(std::llround(half / dt));
    const Lattice at{-dt * static_cast<double>(m), dt, 2 * m + 1};
    const std::vector<double> s = f.filtered(lowpass(k, sigma), at);
    double e = 0.0;
    for (std::size_t i = 0; i < at.n; ++i) e = std::max(e, std::abs(f(at.at(i)) - s[i]));
    return e;
}

struct ApproxReport {
    FiniteGaussMixture mixture;
    std::size_t lambda_size = 0;
    double sup_error_core = 0.0;
    double sup_error_global = 0.0;
    double coeff_l1 = 0.0;
    double coeff_max = 0.0;
    double retained_l1 = 0.0;
    double window_radius = 0.0;
    bool window_certified = false;
    double grid_radius = 0.0;
    double grid_step = 0.0;
    std::size_t grid_points = 0;
    double beyond_grid_bound = 0.0;
    double truncation_gap_core = -1.0;
};

struct LocationOptions {
    bool measure_truncation_gap = false;
    double grid_step_frac = 0.125;
};

// smooth -> coefficients -> truncate -> reconstruct, with grid sups on
// |x| <= min(core radius, grid radius) and the tail bound beyond the grid.
inline ApproxReport location_approx(const TestFunction& f0, const LocationPlan& plan, const DualKernelTable& k,
                                    const LocationOptions& opt = {}) {
    ApproxReport r;
    WindowInfo wi;
    const LatticeCoeffs c = location_coefficients(f0, plan, k, &wi);
    r.window_radius = wi.radius;
    r.window_certified = wi.certified;
    r.coeff_l1 = c.l1();
    r.coeff_max = c.max_abs();
    Truncation t = truncate_location(c, plan);
    r.lambda_size = t.lambda.size();
    r.retained_l1 = t.retained_l1;
    r.mixture = std::move(t.mixture);

    const MixtureIndex fm(r.mixture);
    const Interval reach = fm.reach();
    double G = std::max({std::abs(reach.lo), std::abs(reach.hi), f0.core_reach()});
    G = std::ceil(G);
    r.grid_radius = G;
    r.grid_step = plan.sigma * opt.grid_step_frac;
    const double core = plan.core_radius();
    std::unique_ptr<MixtureIndex> full;
    if (opt.measure_truncation_gap) full = std::make_unique<MixtureIndex>(reconstruct(c));
    double gap = 0.0;
    const auto n = static_cast<std::size_t>(std::floor(2.0 * G / r.grid_step)) + 1;
    r.grid_points = n;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = -G + r.grid_step * static_cast<double>(i);
        const double fmx = fm(x);
        const double e = std::abs(fmx - f0(x));
        r.sup_error_global = std::max(r.sup_error_global, e);
        if (std::abs(x) <= core) {
            r.sup_error_core = std::max(r.sup_error_core, e);
            if (full) gap = std::max(gap, std::abs((*full)(x)-fmx));
        }
    }
    // beyond the grid there are no atoms, so the error is |f0|
    r.beyond_grid_bound = f0.tail_bound(G);
    r.sup_error_global = std::max(r.sup_error_global, r.beyond_grid_bound);
    if (core > G) r.sup_error_core = std::max(r.sup_error_core, r.beyond_grid_bound);
    if (full) r.truncation_gap_core = gap;
    return r;
}

}  // namespace gmix

#endif
