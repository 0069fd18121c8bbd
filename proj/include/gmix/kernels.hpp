#ifndef GMIX_KERNELS_HPP
#define GMIX_KERNELS_HPP

#include "gmix/quadrature.hpp"

#include <cmath>
#include <complex>
#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace gmix {

inline double phi(double x) { return std::exp(-0.5 * x * x); }
inline double phi_hat(double xi) { return sqrt_2pi * std::exp(-0.5 * xi * xi); }

// CDF of the normalized bump exp(-c/(1-t^2)) on [-1,1], tabulated with its
// exact derivative and read back by cubic Hermite interpolation.
class BumpCdf {
public:
    explicit BumpCdf(double sharpness, std::size_t cells = 8192)
        : c_(sharpness), n_(cells), h_(2.0 / static_cast<double>(cells)), val_(cells + 1), der_(cells + 1) {
        val_[0] = 0.0;
        for (std::size_t i = 0; i < n_; ++i) {
            const double a = -1.0 + h_ * static_cast<double>(i);
            const auto q = gauss_panels(a, a + h_, h_);
            val_[i + 1] = val_[i] + integrate(q, [&](double t) { return raw(t); });
        }
        z_ = val_[n_];
        for (std::size_t i = 0; i <= n_; ++i) {
            val_[i] /= z_;
            der_[i] = raw(-1.0 + h_ * static_cast<double>(i)) / z_;
        }
        val_[n_] = 1.0;
    }

    double sharpness() const { return c_; }

    double density(double s) const { return std::abs(s) >= 1.0 ? 0.0 : raw(s) / z_; }

    double operator()(double s) const {
        if (s <= -1.0) return 0.0;
        if (s >= 1.0) return 1.0;
        const double u = (s + 1.0) / h_;
        auto i = static_cast<std::size_t>(u);
        if (i >= n_) i = n_ - 1;
        const double t = u - static_cast<double>(i);
        const double t2 = t * t, t3 = t2 * t;
        return (2 * t3 - 3 * t2 + 1) * val_[i] + (t3 - 2 * t2 + t) * h_ * der_[i] +
               (-2 * t3 + 3 * t2) * val_[i + 1] + (t3 - t2) * h_ * der_[i + 1];
    }

private:
    // exp(c) rescaling keeps the peak at 1
    double raw(double t) const {
        const double d = 1.0 - t * t;
        return d <= 0.0 ? 0.0 : std::exp(c_ - c_ / d);
    }

    double c_;
    std::size_t n_;
    double h_;
    double z_ = 1.0;
    std::vector<double> val_, der_;
};

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

class SpectralCutoff {
public:
    double mollifier_width = 0.5;
    double sharpness = 32.0;
    double grid_spacing = 1.0 / 512.0;
    std::vector<double> xi_grid;
    std::vector<double> values;
    Interval plateau{-1.0, 1.0};
    Interval support{-2.0, 2.0};

    SpectralCutoff(double width, double sharp, double spacing)
        : mollifier_width(width), sharpness(sharp), grid_spacing(spacing),
          cdf_(std::make_shared<BumpCdf>(sharp)) {
        const auto m = static_cast<long>(std::llround(3.0 / spacing));
        for (long i = -m; i <= m; ++i) {
            const double xi = spacing * static_cast<double>(i);
            xi_grid.push_back(xi);
            values.push_back((*this)(xi));
        }
    }

    double operator()(double xi) const {
        const double a = std::abs(xi);
        if (a <= 1.5 - mollifier_width) return 1.0;
        if (a >= 1.5 + mollifier_width) return 0.0;
        return 1.0 - (*cdf_)((a - 1.5) / mollifier_width);
    }

    const BumpCdf& bump() const { return *cdf_; }

private:
    std::shared_ptr<const BumpCdf> cdf_;
};

inline SpectralCutoff build_cutoff(double mollifier_width, double sharpness = 32.0,
                                   double grid_spacing = 1.0 / 512.0) {
    if (!(mollifier_width > 0.0) || mollifier_width > 0.5)
        throw std::invalid_argument("mollifier_width must lie in (0, 1/2]");
    if (!(sharpness > 0.0)) throw std::invalid_argument("sharpness must be positive");
    return SpectralCutoff(mollifier_width, sharpness, grid_spacing);
}

struct CutoffCheck {
    bool plateau_exact = true;
    bool support_exact = true;
    bool bounded = true;
    bool even = true;
    double max_fourth_difference = 0.0;
    bool ok() const { return plateau_exact && support_exact && bounded && even; }
};

inline CutoffCheck check_cutoff(const SpectralCutoff& c) {
    CutoffCheck r;
    const std::size_t n = c.values.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double xi = c.xi_grid[i], v = c.values[i];
        if (std::abs(xi) <= 1.0 && v != 1.0) r.plateau_exact = false;
        if (std::abs(xi) >= 2.0 && v != 0.0) r.support_exact = false;
        if (v < 0.0 || v > 1.0) r.bounded = false;
        if (v != c.values[n - 1 - i]) r.even = false;
        if (i + 4 < n) {
            const double d4 = c.values[i] - 4 * c.values[i + 1] + 6 * c.values[i + 2] -
                              4 * c.values[i + 3] + c.values[i + 4];
            r.max_fourth_difference = std::max(r.max_fourth_difference, std::abs(d4));
        }
    }
    return r;
}

class QuadratureError : public std::runtime_error {
public:
    QuadratureError(const std::string& what, double achieved)
        : std::runtime_error(what), achieved_(achieved) {}
    double achieved() const { return achieved_; }

private:
    double achieved_;
};

// chi and eta tabulated on a symmetric uniform grid, with first derivatives
// for Hermite interpolation. Zero outside the tabulated range.
class DualKernelTable {
public:
    UniformGrid grid;
    std::vector<double> x_grid;
    std::vector<double> chi_values, chi_deriv;
    std::vector<double> eta_values, eta_deriv;
    double quadrature_tol = 0.0;
    double mollifier_width = 0.5;
    double sharpness = 32.0;
    std::size_t spectral_nodes = 0;
    std::shared_ptr<const SpectralCutoff> cutoff;

    double chi_hat(double xi) const { return (*cutoff)(xi); }
    double eta_hat(double xi) const { return std::abs(xi) >= 2.0 ? 0.0 : (*cutoff)(xi) / phi_hat(xi); }
    double plateau_edge() const { return 1.5 - mollifier_width; }
    double support_edge() const { return 1.5 + mollifier_width; }

    // int_{|x|>r} |chi| and |eta| from the node values
    double chi_tail_mass(double r) const { return tail_mass(chi_values, r); }
    double eta_tail_mass(double r) const { return tail_mass(eta_values, r); }
    double chi_l1() const { return tail_mass(chi_values, -1.0); }

    double chi(double x) const { return interp(chi_values, chi_deriv, x); }
    double eta(double x) const { return interp(eta_values, eta_deriv, x); }
    double range() const { return grid.half_range; }
    double step() const { return grid.step(); }

    // Trapezoid sums over the nodes; exact for band-limited integrands up to the
    // tabulated range because the node spacing is far below pi/2.
    double chi_moment(int q) const { return node_sum(chi_values, q); }
    double eta_moment(int q) const { return node_sum(eta_values, q); }

    // sup |x|^k |eta(x)| over the nodes
    double eta_norm(int k) const {
        double m = 0.0;
        for (std::size_t i = 0; i < x_grid.size(); ++i)
            m = std::max(m, std::pow(std::abs(x_grid[i]), k) * std::abs(eta_values[i]));
        return m;
    }
    double eta_l1() const {
        double s = 0.0;
        for (double v : eta_values) s += std::abs(v);
        return s * step();
    }
    double eta_outer_decay(int r) const {
        double m = 0.0;
        for (std::size_t i = 0; i < x_grid.size(); ++i)
            if (std::abs(x_grid[i]) >= 0.5 * range())
                m = std::max(m, std::pow(std::abs(x_grid[i]), r) * std::abs(eta_values[i]));
        return m;
    }

private:
    double tail_mass(const std::vector<double>& v, double r) const {
        double s = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i)
            if (std::abs(x_grid[i]) > r) s += std::abs(v[i]);
        return s * step();
    }
    double interp(const std::vector<double>& v, const std::vector<double>& d, double x) const {
        const double u = (x + grid.half_range) / grid.step();
        if (u < 0.0 || u > static_cast<double>(grid.n - 1)) return 0.0;
        auto i = static_cast<std::size_t>(u);
        if (i >= grid.n - 1) i = grid.n - 2;
        const double t = u - static_cast<double>(i), h = grid.step();
        const double t2 = t * t, t3 = t2 * t;
        return (2 * t3 - 3 * t2 + 1) * v[i] + (t3 - 2 * t2 + t) * h * d[i] + (-2 * t3 + 3 * t2) * v[i + 1] +
               (t3 - t2) * h * d[i + 1];
    }
    double node_sum(const std::vector<double>& v, int q) const {
        // symmetric pairing keeps odd moments at roundoff level
        const std::size_t n = v.size(), mid = n / 2;
        double s = q == 0 ? v[mid] : 0.0;
        for (std::size_t i = 1; i <= mid; ++i) {
            const double x = x_grid[mid + i];
            const double xp = std::pow(x, q);
            const double sign = (q % 2 == 0) ? 1.0 : -1.0;
            s += xp * v[mid + i] + sign * xp * v[mid - i];
        }
        return s * step();
    }
};

namespace detail {

// (1/pi) * delta * [g(0)/2 + sum_{m>=1} g(m delta) e^{i m delta x}] for x >= 0,
// returning real part and the x-derivative. The rotation is re-seeded every
// 64 steps to bound drift.
inline void trapezoid_inverse(const std::vector<double>& g, double delta, double x, double& val,
                              double& der) {
    const std::complex<double> rot(std::cos(delta * x), std::sin(delta * x));
    std::complex<double> z(1.0, 0.0);
    double re = 0.5 * g[0], im = 0.0;
    for (std::size_t m = 1; m < g.size(); ++m) {
        if (m % 64 == 0) {
            const double a = delta * static_cast<double>(m) * x;
            z = {std::cos(a), std::sin(a)};
        } else {
            z *= rot;
        }
        re += g[m] * z.real();
        im -= g[m] * static_cast<double>(m) * z.imag();
    }
    val = re * delta / pi;
    der = im * delta * delta / pi;
}

// Bump density samples on s in [0,1] (even), trapezoid spacing returned.
inline double bump_samples(const SpectralCutoff& c, std::size_t nodes, std::vector<double>& out) {
    const double d = 1.0 / static_cast<double>(nodes);
    out.resize(nodes + 1);
    for (std::size_t m = 0; m <= nodes; ++m) out[m] = c.bump().density(d * static_cast<double>(m));
    return d;
}

// chi(x) = sin(1.5x) rho~(x) / (pi x), rho~ the characteristic function of the
// width-w bump. The factored form avoids cancelling the plateau's slowly
// decaying sinc against the transition, which keeps far-tail values accurate.
inline void chi_factored(const std::vector<double>& rho, double ds, double w, double x, double& val,
                         double& der) {
    double r, dr;
    trapezoid_inverse(rho, ds * w, x, r, dr);
    // trapezoid_inverse gives (w/pi) * int_0^1 density(s) cos(x w s) ds
    r *= 2.0 * pi / w;
    dr *= 2.0 * pi / w;
    double s, ds_;
    if (std::abs(x) < 1e-4) {
        const double x2 = x * x;
        s = 1.5 / pi * (1.0 - 2.25 * x2 / 6.0);
        ds_ = 1.5 / pi * (-2.25 * x / 3.0);
    } else {
        s = std::sin(1.5 * x) / (pi * x);
        ds_ = (1.5 * std::cos(1.5 * x) * x - std::sin(1.5 * x)) / (pi * x * x);
    }
    val = s * r;
    der = ds_ * r + s * dr;
}

}  // namespace detail

// Inverse Fourier transform of chi_hat and eta_hat = chi_hat / phi_hat by the
// trapezoid rule on [-2,2]. Both integrands are smooth with compact support, so
// the rule converges spectrally; the achieved error is estimated by comparing
// against a half-resolution rule and against Hermite midpoint interpolation.
inline DualKernelTable invert_to_space(const SpectralCutoff& cutoff, const UniformGrid& grid, double tol,
                                       std::size_t spectral_nodes = 1024) {
    if (!grid.symmetric()) throw std::invalid_argument("x_grid must be symmetric with an odd node count");
    if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
    DualKernelTable t;
    t.grid = grid;
    t.mollifier_width = cutoff.mollifier_width;
    t.sharpness = cutoff.sharpness;
    t.spectral_nodes = spectral_nodes;
    t.cutoff = std::make_shared<const SpectralCutoff>(cutoff);
    const std::size_t n = grid.n, mid = n / 2;
    t.x_grid.resize(n);
    for (std::size_t i = 0; i < n; ++i) t.x_grid[i] = grid.at(i);
    t.x_grid[mid] = 0.0;

    auto sample = [&](std::size_t nodes, std::vector<double>& gc, std::vector<double>& ge) {
        const double d = 2.0 / static_cast<double>(nodes);
        gc.resize(nodes + 1);
        ge.resize(nodes + 1);
        for (std::size_t m = 0; m <= nodes; ++m) {
            const double xi = d * static_cast<double>(m);
            gc[m] = cutoff(xi);
            ge[m] = gc[m] / phi_hat(xi);
        }
        return d;
    };
    std::vector<double> gc, ge;
    const double delta = sample(spectral_nodes, gc, ge);
    t.chi_values.assign(n, 0.0);
    t.chi_deriv.assign(n, 0.0);
    t.eta_values.assign(n, 0.0);
    t.eta_deriv.assign(n, 0.0);
    std::vector<double> rho;
    const double drho = detail::bump_samples(cutoff, spectral_nodes, rho);
    for (std::size_t i = mid; i < n; ++i) {
        const double x = t.x_grid[i];
        detail::chi_factored(rho, drho, cutoff.mollifier_width, x, t.chi_values[i], t.chi_deriv[i]);
        detail::trapezoid_inverse(ge, delta, x, t.eta_values[i], t.eta_deriv[i]);
        const std::size_t j = n - 1 - i;
        t.chi_values[j] = t.chi_values[i];
        t.chi_deriv[j] = -t.chi_deriv[i];
        t.eta_values[j] = t.eta_values[i];
        t.eta_deriv[j] = -t.eta_deriv[i];
    }

    std::vector<double> hc, he;
    const double dh = sample(spectral_nodes / 2, hc, he);
    double err = 0.0;
    for (std::size_t i = mid; i < n; i += std::max<std::size_t>(1, (n - mid) / 64)) {
        double a, b, da, db;
        {
            std::vector<double> rh;
            const double dr = detail::bump_samples(cutoff, spectral_nodes / 2, rh);
            detail::chi_factored(rh, dr, cutoff.mollifier_width, t.x_grid[i], a, da);
        }
        detail::trapezoid_inverse(he, dh, t.x_grid[i], b, db);
        err = std::max({err, std::abs(a - t.chi_values[i]), std::abs(b - t.eta_values[i])});
        if (i + 1 < n) {
            const double xm = 0.5 * (t.x_grid[i] + t.x_grid[i + 1]);
            double c, e, dc, de;
            detail::chi_factored(rho, drho, cutoff.mollifier_width, xm, c, dc);
            detail::trapezoid_inverse(ge, delta, xm, e, de);
            err = std::max({err, std::abs(c - t.chi(xm)), std::abs(e - t.eta(xm))});
        }
    }
    // tail truncation: kernel mass beyond the table edge is bounded by the edge values
    err = std::max({err, std::abs(t.chi_values.back()), std::abs(t.eta_values.back())});
    t.quadrature_tol = err;
    if (err > tol) throw QuadratureError("kernel inversion missed tolerance", err);
    return t;
}

struct KernelConfig {
    double mollifier_width = 0.5;
    double sharpness = 32.0;
    double half_range = 256.0;
    std::size_t nodes = 32769;
    std::size_t spectral_nodes = 1024;
    double tol = 1e-9;
};

inline DualKernelTable build_kernel(const KernelConfig& cfg = {}) {
    const auto cut = build_cutoff(cfg.mollifier_width, cfg.sharpness);
    return invert_to_space(cut, UniformGrid{cfg.half_range, cfg.nodes}, cfg.tol, cfg.spectral_nodes);
}

// Shared default table; built once on first use.
inline const DualKernelTable& default_kernel() {
    static const DualKernelTable t = build_kernel();
    return t;
}

inline double eta_row_sum(const DualKernelTable& k, double x, double h, double sigma, long k_window) {
    if (!(h > 0.0) || !(sigma > 0.0) || k_window < 0) throw std::invalid_argument("eta_row_sum: bad arguments");
    const auto k0 = static_cast<long>(std::floor(x / (h * sigma)));
    double s = 0.0;
    for (long j = k0 - k_window; j <= k0 + k_window; ++j)
        s += std::abs(k.eta((x - h * sigma * static_cast<double>(j)) / sigma));
    return s;
}

// 3 ||eta||_{0,0} + 4 ||eta||_{2,0}
inline double row_sum_constant(const DualKernelTable& k) { return 3.0 * k.eta_norm(0) + 4.0 * k.eta_norm(2); }

}  // namespace gmix

#endif
