#ifndef GMIX_TESTFUN_HPP
#define GMIX_TESTFUN_HPP

#include "gmix/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gmix {

// Building block of a test function. Gaussian pieces are
//   amp * exp(-(x-c)^2 / (2 s^2)) * cos(freq (x-c)),
// tent pieces are amp * max(0, 1 - |x-c|/width).
struct Piece {
    enum class Kind { gaussian, tent };
    Kind kind = Kind::gaussian;
    double amp = 1.0;
    double center = 0.0;
    double width = 1.0;
    double freq = 0.0;

    static constexpr double kappa = 9.0;  // exp(-kappa^2/2) ~ 3e-18

    double operator()(double x) const {
        const double t = x - center;
        if (kind == Kind::tent) {
            const double a = 1.0 - std::abs(t) / width;
            return a > 0.0 ? amp * a : 0.0;
        }
        const double z = t / width;
        if (std::abs(z) > 40.0) return 0.0;
        const double e = amp * std::exp(-0.5 * z * z);
        return freq == 0.0 ? e : e * std::cos(freq * t);
    }

    // Fourier transform of the piece moved to the origin; real and even.
    double spectrum(double xi) const {
        if (kind == Kind::tent) {
            const double a = 0.5 * xi * width;
            const double s = std::abs(a) < 1e-8 ? 1.0 : std::sin(a) / a;
            return amp * width * s * s;
        }
        const double s2 = width * width;
        const double a = xi - freq, b = xi + freq;
        return amp * width * sqrt_2pi * 0.5 * (std::exp(-0.5 * s2 * a * a) + std::exp(-0.5 * s2 * b * b));
    }

    // non-negative frequencies carrying the spectrum
    Interval band() const {
        if (kind == Kind::tent) return {0.0, std::numeric_limits<double>::infinity()};
        return {std::max(0.0, freq - kappa / width), freq + kappa / width};
    }

    double reach() const { return kind == Kind::tent ? width : kappa * width; }

    // sup of |piece| over |x| >= r
    double tail_bound(double r) const {
        const double d = r - std::abs(center);
        if (kind == Kind::tent) return d >= width ? 0.0 : std::abs(amp) * std::min(1.0, std::max(0.0, 1.0 - d / width));
        if (d <= 0.0) return std::abs(amp);
        const double z = d / width;
        return std::abs(amp) * std::exp(-0.5 * z * z);
    }

    double l1() const {
        if (kind == Kind::tent) return std::abs(amp) * width;
        return std::abs(amp) * width * sqrt_2pi;  // upper bound when freq != 0
    }
};

// Frequency multiplier chi_hat(2 s_fine xi) - chi_hat(2 s_coarse xi); s_coarse = 0
// drops the second term. Level j of the hybrid cascade uses (sigma_j, sigma_{j-1}).
struct Multiplier {
    const DualKernelTable* kernel = nullptr;
    double s_fine = 1.0;
    double s_coarse = 0.0;

    double operator()(double xi) const {
        double v = kernel->chi_hat(2.0 * s_fine * xi);
        if (s_coarse > 0.0) v -= kernel->chi_hat(2.0 * s_coarse * xi);
        return v;
    }
    double zero_below() const { return s_coarse > 0.0 ? kernel->plateau_edge() / (2.0 * s_coarse) : 0.0; }
    double zero_above() const { return kernel->support_edge() / (2.0 * s_fine); }
    Interval ones() const {
        const double hi = kernel->plateau_edge() / (2.0 * s_fine);
        const double lo = s_coarse > 0.0 ? kernel->support_edge() / (2.0 * s_coarse) : 0.0;
        return {lo, hi};
    }
    // width of the sharpest feature of the multiplier in xi
    double feature() const {
        const double w = kernel->mollifier_width / std::sqrt(kernel->sharpness);
        return w / (2.0 * std::max(s_fine, s_coarse));
    }
};

// |chi| and |eta| stay below 1e-15 beyond this many kernel units
inline constexpr double filter_reach = 160.0;

inline Multiplier lowpass(const DualKernelTable& k, double sigma) { return {&k, sigma, 0.0}; }
inline Multiplier bandpass(const DualKernelTable& k, double sigma, double sigma_prev) { return {&k, sigma, sigma_prev}; }

namespace detail {

// out[k] += scale * (1/pi) * sum_i g_i cos(xi_i (t0 + k dt)), rotation updated
// per node and re-seeded every 256 steps.
inline void cosine_sum(const std::vector<double>& xi, const std::vector<double>& g, double t0, double dt,
                       std::vector<double>& out, double scale) {
    const std::size_t n = out.size();
    for (std::size_t i = 0; i < xi.size(); ++i) {
        const double c = scale * g[i] / pi;
        if (c == 0.0) continue;
        const std::complex<double> rot(std::cos(xi[i] * dt), std::sin(xi[i] * dt));
        std::complex<double> z;
        for (std::size_t k = 0; k < n; ++k) {
            if (k % 256 == 0) {
                const double a = xi[i] * (t0 + dt * static_cast<double>(k));
                z = {std::cos(a), std::sin(a)};
            }
            out[k] += c * z.real();
            z *= rot;
        }
    }
}

}  // namespace detail

// Output positions t0 + k dt, k < n.
struct Lattice {
    double t0 = 0.0;
    double dt = 1.0;
    std::size_t n = 0;
    double at(std::size_t k) const { return t0 + dt * static_cast<double>(k); }
    double max_abs() const { return std::max(std::abs(t0), std::abs(at(n ? n - 1 : 0))); }
};

// Adds (mult * piece) evaluated on the lattice; with deconv_sigma > 0 the
// spectrum is also divided by phi_hat(deconv_sigma xi) and scaled by h, which
// gives the lattice coefficients (h/sigma) int eta((y-mu)/sigma) f(y) dy of the
// filtered piece.
inline void apply_piece(const Piece& p, const Multiplier& m, double deconv_sigma, double h, const Lattice& at,
                        std::vector<double>& out) {
    const Interval b = p.band();
    const double lo = std::max(b.lo, m.zero_below()), hi = std::min(b.hi, m.zero_above());
    if (!(hi > lo) || at.n == 0) return;
    const Interval one = m.ones();
    const bool coef = deconv_sigma > 0.0;

    // lattice positions where the filtered piece can be nonzero
    const double spread = p.reach() + 2.0 * std::max(m.s_fine, m.s_coarse) * filter_reach +
                          (coef ? deconv_sigma * filter_reach : 0.0);
    const auto index_range = [&](double r) {
        const double ka = std::ceil((p.center - r - at.t0) / at.dt), kb = std::floor((p.center + r - at.t0) / at.dt);
        const double last = static_cast<double>(at.n) - 1.0;
        return std::pair<std::size_t, std::size_t>{static_cast<std::size_t>(std::clamp(ka, 0.0, last + 1.0)),
                                                   static_cast<std::size_t>(std::clamp(kb + 1.0, 0.0, last + 1.0))};
    };

    if (p.kind == Piece::Kind::gaussian && b.lo >= one.lo && b.hi <= one.hi) {
        if (!coef) {
            const auto [k0, k1] = index_range(40.0 * p.width);
            for (std::size_t k = k0; k < k1; ++k) out[k] += p(at.at(k));
            return;
        }
        // closed-form Gaussian deconvolution when the tilted spectrum stays on the plateau
        const double s2 = p.width * p.width, sg2 = deconv_sigma * deconv_sigma, v = s2 - sg2;
        if (one.lo == 0.0 && v > 0.0) {
            const double mid = s2 * p.freq / v, halfband = Piece::kappa / std::sqrt(v);
            const double c0 = s2 * p.freq * p.freq * sg2 / (2.0 * v);
            if (mid + halfband <= one.hi && c0 < 600.0) {
                const double pre = h * p.amp * p.width * std::exp(c0) / std::sqrt(2.0 * pi * v);
                const auto [k0, k1] = index_range(40.0 * std::sqrt(v));
                for (std::size_t k = k0; k < k1; ++k) {
                    const double t = at.at(k) - p.center;
                    const double e = -t * t / (2.0 * v);
                    if (e < -745.0) continue;
                    out[k] += pre * std::exp(e) * (p.freq == 0.0 ? 1.0 : std::cos(mid * t));
                }
                return;
            }
        }
    }

    const auto [k0, k1] = index_range(spread);
    if (k1 <= k0) return;
    const double tmax = std::max(std::abs(at.at(k0) - p.center), std::abs(at.at(k1 - 1) - p.center)) + 1.0;
    double panel = std::min({2.0 * pi / tmax, 4.0 * m.feature()});
    if (p.kind == Piece::Kind::gaussian) panel = std::min(panel, 0.5 / p.width);
    else panel = std::min(panel, pi / p.width);
    const QuadRule q = gauss_panels(lo, hi, panel);
    std::vector<double> g(q.size());
    for (std::size_t i = 0; i < q.size(); ++i) {
        double v = q.w[i] * m(q.x[i]) * p.spectrum(q.x[i]);
        if (coef) v *= h / phi_hat(deconv_sigma * q.x[i]);
        g[i] = v;
    }
    std::vector<double> part(k1 - k0, 0.0);
    detail::cosine_sum(q.x, g, at.at(k0) - p.center, at.dt, part, 1.0);
    for (std::size_t k = k0; k < k1; ++k) out[k] += part[k - k0];
}

class TestFunction {
public:
    std::string name;
    double beta = 1.0;
    std::vector<Piece> pieces;
    double l1_norm = 0.0;
    double sup_norm = 0.0;
    double holder_norm = 0.0;

    double operator()(double x) const {
        double s = 0.0;
        for (const auto& p : pieces) s += p(x);
        return s;
    }

    double tail_bound(double r) const {
        double s = 0.0;
        for (const auto& p : pieces) s += p.tail_bound(r);
        return s;
    }

    // radius containing every piece's essential support, ignoring pieces wider
    // than `wide` (long tails are handled through tail_bound instead)
    double core_reach(double wide = 50.0) const {
        double r = 0.0;
        for (const auto& p : pieces)
            if (p.kind == Piece::Kind::tent || p.width <= wide) r = std::max(r, std::abs(p.center) + p.reach());
        return r;
    }

    // pieces whose support meets [lo, hi]
    TestFunction restricted(double lo, double hi) const {
        TestFunction t;
        t.name = name;
        t.beta = beta;
        for (const auto& p : pieces)
            if (p.center + p.reach() >= lo && p.center - p.reach() <= hi) t.pieces.push_back(p);
        return t;
    }

    TestFunction& operator+=(const TestFunction& o) {
        pieces.insert(pieces.end(), o.pieces.begin(), o.pieces.end());
        return *this;
    }

    std::vector<double> filtered(const Multiplier& m, const Lattice& at) const {
        std::vector<double> out(at.n, 0.0);
        for (const auto& p : pieces) apply_piece(p, m, 0.0, 1.0, at, out);
        return out;
    }

    std::vector<double> lattice_coefficients(const Multiplier& m, double h, double sigma, const Lattice& at) const {
        std::vector<double> out(at.n, 0.0);
        for (const auto& p : pieces) apply_piece(p, m, sigma, h, at, out);
        return out;
    }

    double piece_l1() const {
        double s = 0.0;
        for (const auto& p : pieces) s += p.l1();
        return s;
    }
};

// e^{-x^2/2} sum_{k<=K} 2^{-k beta} cos(2^k x), K the first index with 2^{-K beta} <= 1e-6
inline TestFunction weierstrass(double beta, double center = 0.0, int K = -1, double amp = 1.0) {
    if (!(beta > 0.0)) throw std::invalid_argument("weierstrass: beta must be positive");
    if (K < 0) K = static_cast<int>(std::ceil(std::log2(1e6) / beta));
    TestFunction t;
    t.name = "weierstrass";
    t.beta = beta;
    for (int k = 0; k <= K; ++k)
        t.pieces.push_back({Piece::Kind::gaussian, amp * std::pow(2.0, -k * beta), center, 1.0, std::ldexp(1.0, k)});
    return t;
}

inline TestFunction tent(double amp = 1.0, double center = 0.0, double width = 1.0) {
    TestFunction t;
    t.name = "tent";
    t.beta = 1.0;
    t.pieces.push_back({Piece::Kind::tent, amp, center, width, 0.0});
    return t;
}

inline TestFunction gaussian_bump(double amp = 1.0, double center = 0.0, double width = 1.0) {
    TestFunction t;
    t.name = "gaussian";
    t.beta = std::numeric_limits<double>::infinity();
    t.pieces.push_back({Piece::Kind::gaussian, amp, center, width, 0.0});
    return t;
}

// amp * (1+x^2)^{-a/2} written as a Gaussian scale mixture,
//   (1+x^2)^{-a/2} = Gamma(a/2)^{-1} int t^{a/2-1} e^{-t} e^{-t x^2} dt,
// discretised by the trapezoid rule in log t over [t_min, 60].
inline TestFunction heavy_tail(double amp, double a, double t_min = 1e-9, double dtau = 0.25) {
    TestFunction t;
    t.name = "heavy_tail";
    t.beta = std::numeric_limits<double>::infinity();
    const double g = std::tgamma(0.5 * a);
    for (double tau = std::log(t_min); tau <= std::log(60.0); tau += dtau) {
        const double s = std::exp(tau);
        const double w = amp * dtau * std::pow(s, 0.5 * a) * std::exp(-s) / g;
        t.pieces.push_back({Piece::Kind::gaussian, w, 0.0, 1.0 / std::sqrt(2.0 * s), 0.0});
    }
    return t;
}

// sup over dyadic separations 2^{-m}, m = 0..levels, of |f(x+d)-f(x)| / d^alpha on [lo, hi]
template <class F>
double holder_quotient(const F& f, double alpha, double lo, double hi, int levels, double step) {
    double q = 0.0;
    for (int m = 0; m <= levels; ++m) {
        const double d = std::ldexp(1.0, -m);
        for (double x = lo; x + d <= hi; x += step) q = std::max(q, std::abs(f(x + d) - f(x)) / std::pow(d, alpha));
    }
    return q;
}

inline void certify_norms(TestFunction& t, double lo = -12.0, double hi = 12.0) {
    double sup = 0.0;
    for (double x = lo; x <= hi; x += 1.0 / 512.0) sup = std::max(sup, std::abs(t(x)));
    t.sup_norm = sup;
    t.l1_norm = t.piece_l1();
    const double b = std::min(t.beta, 1.0);
    t.holder_norm = sup + holder_quotient(t, b, -4.0, 4.0, 10, 1.0 / 256.0);
}

}  // namespace gmix

#endif
