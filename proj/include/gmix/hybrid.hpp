#ifndef GMIX_HYBRID_HPP
#define GMIX_HYBRID_HPP

#include "gmix/kernels.hpp"
#include "gmix/location.hpp"
#include "gmix/mixture.hpp"
#include "gmix/testfun.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <memory>
#include <stdexcept>
#include <utility>
#include <vector>

namespace gmix {

struct HybridPlan {
    int J = 8;
    double beta = 1.0;
    double p = 1.0;
    double h = 1.0;

    double sigma(int j) const { return std::ldexp(1.0, -j); }
    double zeta(int j) const { return std::exp2(static_cast<double>(J - j) * 2.0 * beta / p); }
    double radius_pad() const { return std::sqrt(2.0 * (beta + 1.0) * std::log(1.0 / sigma(J))); }
    double mu_threshold(int j) const { return zeta(j) + radius_pad(); }
    double guard(int j) const { return std::max(6.0 * sigma(j) * radius_pad(), 2.0 * h * sigma(j)); }
    double threshold() const { return std::pow(sigma(J), beta); }
};

inline double hybrid_h(int J, double beta) { return 2.0 * pi / (std::sqrt(beta * std::log(2.0)) * std::sqrt(static_cast<double>(J))); }

inline HybridPlan make_hybrid_plan(int J, double beta, double p, double h = 0.0) {
    if (J < 1) throw std::invalid_argument("hybrid plan needs J >= 1");
    if (!(beta > 0.0) || !(p > 0.0)) throw std::invalid_argument("beta and p must be positive");
    return {J, beta, p, h > 0.0 ? h : hybrid_h(J, beta)};
}

// level 0 filters with chi_{sigma_0}; level j >= 1 with chi_{sigma_j} - chi_{sigma_{j-1}}
inline Multiplier level_multiplier(const DualKernelTable& k, const HybridPlan& plan, int j) {
    return j == 0 ? lowpass(k, plan.sigma(0)) : bandpass(k, plan.sigma(j), plan.sigma(j - 1));
}

struct MultiScaleCoeffs {
    std::vector<LatticeCoeffs> levels;
    std::vector<WindowInfo> windows;

    double l1() const {
        double s = 0.0;
        for (const auto& c : levels) s += c.l1();
        return s;
    }
};

// Level windows cover the location window of the index set plus a guard band.
// With `full` every level runs out to its certified decay radius instead, and a
// boundary coefficient above sigma_J^beta / 10 is an error.
inline MultiScaleCoeffs hybrid_coefficients(const TestFunction& f0, const HybridPlan& plan, const DualKernelTable& k,
                                            bool full = false) {
    MultiScaleCoeffs m;
    const double level = plan.threshold() / 10.0;
    for (int j = 0; j <= plan.J; ++j) {
        const double s = plan.sigma(j);
        const double window = full ? std::numeric_limits<double>::infinity() : plan.mu_threshold(j) + plan.guard(j);
        WindowInfo wi;
        m.levels.push_back(spectral_coefficients(f0, level_multiplier(k, plan, j), plan.h, s, k, window, level, j, &wi,
                                                 j == 0 ? 1.0 : 2.0, full));
        m.windows.push_back(wi);
    }
    return m;
}

struct HybridTruncation {
    std::vector<std::pair<int, long>> lambda;
    std::vector<std::size_t> per_level;
    FiniteGaussMixture mixture;
};

inline HybridTruncation truncate_hybrid(const MultiScaleCoeffs& c, const HybridPlan& plan) {
    HybridTruncation t;
    const double thr = plan.threshold();
    t.per_level.assign(c.levels.size(), 0);
    for (std::size_t j = 0; j < c.levels.size(); ++j) {
        const auto& lv = c.levels[j];
        const double mu_max = plan.mu_threshold(static_cast<int>(j));
        for (std::size_t i = 0; i < lv.size(); ++i) {
            if (std::abs(lv.u[i]) > thr && std::abs(lv.mu(i)) <= mu_max) {
                t.lambda.emplace_back(static_cast<int>(j), lv.k(i));
                t.mixture.add(lv.u[i], lv.mu(i), lv.sigma);
                ++t.per_level[j];
            }
        }
    }
    return t;
}

inline FiniteGaussMixture reconstruct(const MultiScaleCoeffs& c) {
    FiniteGaussMixture m;
    for (const auto& lv : c.levels) m += reconstruct(lv);
    return m;
}

namespace detail {

inline std::vector<Interval> merge_intervals(std::vector<Interval> v) {
    std::sort(v.begin(), v.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    std::vector<Interval> out;
    for (const auto& iv : v) {
        if (!out.empty() && iv.lo <= out.back().hi) out.back().hi = std::max(out.back().hi, iv.hi);
        else out.push_back(iv);
    }
    return out;
}

// parts of [a, b] not covered by the sorted disjoint intervals
inline std::vector<Interval> uncovered(double a, double b, const std::vector<Interval>& cover) {
    std::vector<Interval> out;
    double cur = a;
    for (const auto& iv : cover) {
        if (iv.hi <= cur) continue;
        if (iv.lo >= b) break;
        if (iv.lo > cur) out.push_back({cur, iv.lo});
        cur = std::max(cur, iv.hi);
        if (cur >= b) break;
    }
    if (cur < b) out.push_back({cur, b});
    return out;
}

inline double piece_sup_at_distance(const Piece& p, double d) {
    if (p.kind == Piece::Kind::tent) return std::abs(p.amp) * std::max(0.0, 1.0 - d / p.width);
    const double z = d / p.width;
    return std::abs(p.amp) * std::exp(-0.5 * z * z);
}

}  // namespace detail

struct AnnulusError {
    int j = 0;
    double inner = 0.0;  // I_j = {inner < |x| <= outer}
    double outer = 0.0;
    double sup_error = 0.0;
    double normalized = 0.0;  // sup_error / sigma_j^beta
    double uncovered_bound = 0.0;
    std::size_t grid_points = 0;
    std::size_t atoms = 0;
};

struct HybridReport {
    FiniteGaussMixture mixture;
    std::vector<std::size_t> lambda_per_level;
    std::size_t lambda_size = 0;
    std::vector<AnnulusError> annuli;
    double sup_error_global = 0.0;
    double coeff_l1 = 0.0;
    double untruncated_error = -1.0;
    std::size_t grid_points = 0;
    double grid_step = 0.0;
};

struct HybridOptions {
    bool measure_untruncated = false;
    double grid_step_frac = 0.125;  // in units of sigma_J
    double atom_pad = 10.0;         // atoms are treated as zero beyond this many scales
};

// Errors are measured on a grid covering every atom (to atom_pad scales) and
// every non-wide piece of f0; elsewhere the mixture vanishes and |f0| is bounded
// piece by piece through the distance to the uncovered set.
inline HybridReport hybrid_approx(const TestFunction& f0, const HybridPlan& plan, const DualKernelTable& k,
                                  const HybridOptions& opt = {}) {
    HybridReport r;
    const MultiScaleCoeffs c = hybrid_coefficients(f0, plan, k);
    r.coeff_l1 = c.l1();
    HybridTruncation t = truncate_hybrid(c, plan);
    r.lambda_per_level = t.per_level;
    r.lambda_size = t.lambda.size();
    r.mixture = std::move(t.mixture);

    std::vector<Interval> cover;
    for (const auto& a : r.mixture.atoms)
        cover.push_back({a.location - opt.atom_pad * a.scale, a.location + opt.atom_pad * a.scale});
    for (const auto& p : f0.pieces)
        if (p.kind == Piece::Kind::tent || p.width <= 50.0) cover.push_back({p.center - p.reach(), p.center + p.reach()});
    cover = detail::merge_intervals(std::move(cover));

    const MixtureIndex fm(r.mixture);
    std::unique_ptr<MixtureIndex> f1;
    if (opt.measure_untruncated) {
        f1 = std::make_unique<MixtureIndex>(reconstruct(hybrid_coefficients(f0, plan, k, true)));
        r.untruncated_error = 0.0;
    }
    const int J = plan.J;
    r.annuli.resize(static_cast<std::size_t>(J) + 1);
    for (int j = 0; j <= J; ++j) {
        auto& a = r.annuli[static_cast<std::size_t>(j)];
        a.j = j;
        a.outer = plan.zeta(j);
        a.inner = j == J ? 0.0 : plan.zeta(j + 1);
        a.atoms = t.per_level[static_cast<std::size_t>(j)];
    }
    const auto annulus_of = [&](double x) -> int {
        const double ax = std::abs(x);
        if (ax > plan.zeta(0)) return -1;
        for (int j = J; j >= 0; --j)
            if (ax <= plan.zeta(j)) return j;
        return -1;
    };

    TestFunction narrow, wide;
    for (const auto& p : f0.pieces) {
        if (p.kind == Piece::Kind::gaussian && p.width > 50.0) wide.pieces.push_back(p);
        else narrow.pieces.push_back(p);
    }
    r.grid_step = plan.sigma(J) * opt.grid_step_frac;
    for (const auto& iv : cover) {
        TestFunction local = narrow.restricted(iv.lo - 1.0, iv.hi + 1.0);
        local += wide;
        const auto n = static_cast<std::size_t>(std::floor((iv.hi - iv.lo) / r.grid_step)) + 1;
        for (std::size_t i = 0; i < n; ++i) {
            const double x = iv.lo + r.grid_step * static_cast<double>(i);
            const double fx = local(x);
            const double mx = fm(x);
            const double e = std::abs(mx - fx);
            r.sup_error_global = std::max(r.sup_error_global, e);
            const int j = annulus_of(x);
            if (j >= 0) {
                auto& a = r.annuli[static_cast<std::size_t>(j)];
                a.sup_error = std::max(a.sup_error, e);
                ++a.grid_points;
            }
            if (f1) r.untruncated_error = std::max(r.untruncated_error, std::abs((*f1)(x)-fx));
        }
        r.grid_points += n;
    }

    // uncovered parts: the mixture is below sum|u| e^{-pad^2/2} there
    const double atom_leak = r.mixture.total_variation() * std::exp(-0.5 * opt.atom_pad * opt.atom_pad);
    const auto uncovered_bound = [&](double a, double b) {
        double s = 0.0;
        std::vector<Interval> gaps = detail::uncovered(a, b, cover);
        const auto neg = detail::uncovered(-b, -a, cover);
        gaps.insert(gaps.end(), neg.begin(), neg.end());
        if (gaps.empty()) return 0.0;
        for (const auto& p : f0.pieces) {
            double d = std::numeric_limits<double>::infinity();
            for (const auto& g : gaps) d = std::min(d, std::max({0.0, g.lo - p.center, p.center - g.hi}));
            s += detail::piece_sup_at_distance(p, d);
        }
        return s + atom_leak;
    };
    for (auto& a : r.annuli) {
        a.uncovered_bound = uncovered_bound(a.inner, a.outer);
        a.sup_error = std::max(a.sup_error, a.uncovered_bound);
        a.normalized = a.sup_error / std::pow(plan.sigma(a.j), plan.beta);
        r.sup_error_global = std::max(r.sup_error_global, a.sup_error);
    }
    const double far = cover.empty() ? plan.zeta(0) : std::max(plan.zeta(0), std::max(-cover.front().lo, cover.back().hi));
    r.sup_error_global = std::max(r.sup_error_global, f0.tail_bound(far) + atom_leak);
    return r;
}

// ---- residual cascade on a periodic grid ----

struct PeriodicGrid {
    double half_length = 32.0;
    std::size_t n = std::size_t{1} << 18;
    double step() const { return 2.0 * half_length / static_cast<double>(n); }
    double at(std::size_t i) const { return -half_length + step() * static_cast<double>(i); }
};

struct CascadeResult {
    PeriodicGrid grid;
    std::vector<std::vector<double>> residual;  // Delta_j, recursive
    std::vector<std::vector<double>> direct;    // f0 - chi_{sigma_j} * f0
    std::vector<double> deviation;              // max |Delta_j - direct_j|
    std::vector<double> sup_residual;
};

namespace detail {

struct FftwFree {
    void operator()(void* p) const { fftw_free(p); }
};

class CircularConvolver {
public:
    explicit CircularConvolver(std::size_t n)
        : n_(n), nc_(n / 2 + 1), re_(static_cast<double*>(fftw_malloc(sizeof(double) * n))),
          sp_(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * nc_))) {
        fwd_ = fftw_plan_dft_r2c_1d(static_cast<int>(n_), re_.get(), sp_.get(), FFTW_ESTIMATE);
        inv_ = fftw_plan_dft_c2r_1d(static_cast<int>(n_), sp_.get(), re_.get(), FFTW_ESTIMATE);
    }
    ~CircularConvolver() {
        fftw_destroy_plan(fwd_);
        fftw_destroy_plan(inv_);
    }
    CircularConvolver(const CircularConvolver&) = delete;
    CircularConvolver& operator=(const CircularConvolver&) = delete;

    std::vector<std::complex<double>> transform(const std::vector<double>& x) {
        std::copy(x.begin(), x.end(), re_.get());
        fftw_execute(fwd_);
        std::vector<std::complex<double>> out(nc_);
        for (std::size_t i = 0; i < nc_; ++i) out[i] = {sp_.get()[i][0], sp_.get()[i][1]};
        return out;
    }

    std::vector<double> convolve(const std::vector<double>& x, const std::vector<std::complex<double>>& kernel_hat) {
        std::copy(x.begin(), x.end(), re_.get());
        fftw_execute(fwd_);
        const double inv_n = 1.0 / static_cast<double>(n_);
        for (std::size_t i = 0; i < nc_; ++i) {
            const std::complex<double> v = std::complex<double>(sp_.get()[i][0], sp_.get()[i][1]) * kernel_hat[i] * inv_n;
            sp_.get()[i][0] = v.real();
            sp_.get()[i][1] = v.imag();
        }
        fftw_execute(inv_);
        return {re_.get(), re_.get() + n_};
    }

private:
    std::size_t n_, nc_;
    std::unique_ptr<double, FftwFree> re_;
    std::unique_ptr<fftw_complex, FftwFree> sp_;
    fftw_plan fwd_{}, inv_{};
};

// dx * chi_sigma sampled at circular offsets and periodised over the grid length
inline std::vector<double> periodized_kernel(const DualKernelTable& k, double sigma, const PeriodicGrid& g) {
    const double period = 2.0 * g.half_length, dx = g.step(), scale = 2.0 * sigma, reach = k.range() * scale;
    std::vector<double> out(g.n, 0.0);
    for (std::size_t i = 0; i < g.n; ++i) {
        const double y0 = (i <= g.n / 2 ? static_cast<double>(i) : static_cast<double>(i) - static_cast<double>(g.n)) * dx;
        double s = 0.0;
        for (double m = -std::ceil(reach / period); m <= std::ceil(reach / period); m += 1.0) {
            const double y = y0 + m * period;
            if (std::abs(y) < reach) s += k.chi(y / scale);
        }
        out[i] = s * dx / scale;
    }
    return out;
}

}  // namespace detail

// Delta_0 = f0 - chi_{sigma_0} * f0, Delta_j = Delta_{j-1} - chi_{sigma_j} * Delta_{j-1},
// compared against the direct form f0 - chi_{sigma_j} * f0 at every level.
inline CascadeResult residual_cascade(const std::function<double(double)>& f0, int J, const DualKernelTable& k,
                                      const PeriodicGrid& grid = {}) {
    if (J < 1) throw std::invalid_argument("residual_cascade needs J >= 1");
    if (grid.n < 16 || (grid.n & (grid.n - 1)) != 0) throw std::invalid_argument("grid size must be a power of two");
    CascadeResult r;
    r.grid = grid;
    std::vector<double> f(grid.n);
    for (std::size_t i = 0; i < grid.n; ++i) f[i] = f0(grid.at(i));
    detail::CircularConvolver conv(grid.n);
    std::vector<double> prev = f;
    for (int j = 0; j <= J; ++j) {
        const double s = std::ldexp(1.0, -j);
        if (2.0 / (2.0 * s) >= pi / grid.step())
            throw QuadratureError("cascade grid too coarse for level " + std::to_string(j), grid.step());
        const auto kh = conv.transform(detail::periodized_kernel(k, s, grid));
        const auto sm_prev = conv.convolve(prev, kh);
        const auto sm_f = conv.convolve(f, kh);
        std::vector<double> delta(grid.n), direct(grid.n);
        double dev = 0.0, sup = 0.0;
        for (std::size_t i = 0; i < grid.n; ++i) {
            delta[i] = (j == 0 ? f[i] - sm_f[i] : prev[i] - sm_prev[i]);
            direct[i] = f[i] - sm_f[i];
            dev = std::max(dev, std::abs(delta[i] - direct[i]));
            sup = std::max(sup, std::abs(delta[i]));
        }
        r.deviation.push_back(dev);
        r.sup_residual.push_back(sup);
        prev = delta;
        r.residual.push_back(std::move(delta));
        r.direct.push_back(std::move(direct));
    }
    return r;
}

}  // namespace gmix

#endif
