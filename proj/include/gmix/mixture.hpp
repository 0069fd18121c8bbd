#ifndef GMIX_MIXTURE_HPP
#define GMIX_MIXTURE_HPP

#include "gmix/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <vector>

namespace gmix {

struct GaussAtom {
    double weight = 0.0;
    double location = 0.0;
    double scale = 1.0;
};

// atoms beyond this many scales contribute below double underflow
inline constexpr double atom_cutoff = 38.0;

struct FiniteGaussMixture {
    std::vector<GaussAtom> atoms;

    void add(double u, double mu, double sigma) {
        if (!(sigma > 0.0)) throw std::invalid_argument("atom scale must be positive");
        if (!std::isfinite(u)) throw std::invalid_argument("atom weight must be finite");
        atoms.push_back({u, mu, sigma});
    }
    std::size_t size() const { return atoms.size(); }
    bool empty() const { return atoms.empty(); }

    double total_variation() const {
        double s = 0.0;
        for (const auto& a : atoms) s += std::abs(a.weight);
        return s;
    }

    FiniteGaussMixture& operator+=(const FiniteGaussMixture& o) {
        atoms.insert(atoms.end(), o.atoms.begin(), o.atoms.end());
        return *this;
    }
};

inline double eval_mixture(const FiniteGaussMixture& m, double x) {
    double s = 0.0;
    for (const auto& a : m.atoms) {
        const double z = (x - a.location) / a.scale;
        if (std::abs(z) <= atom_cutoff) s += a.weight * phi(z);
    }
    return s;
}

// Atoms grouped by scale and sorted by location so that evaluation only
// touches atoms within atom_cutoff scales of x.
class MixtureIndex {
public:
    explicit MixtureIndex(const FiniteGaussMixture& m) {
        std::map<double, std::vector<GaussAtom>> by_scale;
        for (const auto& a : m.atoms) by_scale[a.scale].push_back(a);
        for (auto& [s, v] : by_scale) {
            std::sort(v.begin(), v.end(), [](const GaussAtom& a, const GaussAtom& b) { return a.location < b.location; });
            Level lv;
            lv.scale = s;
            for (const auto& a : v) {
                lv.mu.push_back(a.location);
                lv.u.push_back(a.weight);
            }
            levels_.push_back(std::move(lv));
        }
    }

    double operator()(double x) const {
        double s = 0.0;
        for (const auto& lv : levels_) {
            const double r = atom_cutoff * lv.scale;
            auto lo = std::lower_bound(lv.mu.begin(), lv.mu.end(), x - r);
            auto hi = std::upper_bound(lo, lv.mu.end(), x + r);
            const auto i0 = static_cast<std::size_t>(lo - lv.mu.begin());
            const auto i1 = static_cast<std::size_t>(hi - lv.mu.begin());
            const double inv = 1.0 / lv.scale;
            for (std::size_t i = i0; i < i1; ++i) {
                const double z = (x - lv.mu[i]) * inv;
                s += lv.u[i] * std::exp(-0.5 * z * z);
            }
        }
        return s;
    }

    // smallest and largest atom location with its reach
    Interval reach() const {
        Interval r{0.0, 0.0};
        bool first = true;
        for (const auto& lv : levels_) {
            if (lv.mu.empty()) continue;
            const double lo = lv.mu.front() - atom_cutoff * lv.scale, hi = lv.mu.back() + atom_cutoff * lv.scale;
            if (first) {
                r = {lo, hi};
                first = false;
            } else {
                r.lo = std::min(r.lo, lo);
                r.hi = std::max(r.hi, hi);
            }
        }
        return r;
    }

private:
    struct Level {
        double scale = 1.0;
        std::vector<double> mu, u;
    };
    std::vector<Level> levels_;
};

struct EvalGrid {
    std::vector<double> points;
    std::vector<double> weights;

    EvalGrid() = default;
    explicit EvalGrid(std::vector<double> p, std::vector<double> w = {}) : points(std::move(p)), weights(std::move(w)) {
        for (std::size_t i = 1; i < points.size(); ++i)
            if (!(points[i] > points[i - 1])) throw std::invalid_argument("EvalGrid points must be strictly increasing");
        if (!weights.empty() && weights.size() != points.size())
            throw std::invalid_argument("EvalGrid weights must match points");
    }

    static EvalGrid uniform(double a, double b, double step) { return EvalGrid(linspace(a, b, step)); }
    std::size_t size() const { return points.size(); }
};

template <class F, class G>
double grid_sup_diff(const F& f, const G& g, const std::vector<double>& xs) {
    double m = 0.0;
    for (double x : xs) m = std::max(m, std::abs(f(x) - g(x)));
    return m;
}

template <class F>
double grid_sup(const F& f, const std::vector<double>& xs) {
    double m = 0.0;
    for (double x : xs) m = std::max(m, std::abs(f(x)));
    return m;
}

template <class F, class G>
double empirical_l2(const F& f, const G& g, const std::vector<double>& xs) {
    if (xs.empty()) throw std::invalid_argument("empirical_l2 needs at least one covariate");
    double s = 0.0;
    for (double x : xs) {
        const double d = f(x) - g(x);
        s += d * d;
    }
    return std::sqrt(s / static_cast<double>(xs.size()));
}

inline double gaussian_perturbation_bound(double mu1, double mu2, double sigma1, double sigma2) {
    if (!(sigma1 > 0.0) || !(sigma2 > 0.0)) throw std::invalid_argument("scales must be positive");
    const double r = sigma1 / sigma2;
    if (r < 0.5 || r > 2.0) throw std::invalid_argument("scale ratio must lie in [1/2, 2]");
    const double s = std::max(sigma1, sigma2);
    return 4.0 * std::abs(sigma1 - sigma2) / s + std::abs(mu1 - mu2) / s;
}

// Dense-grid sup of |phi((x-mu1)/s1) - phi((x-mu2)/s2)|.
inline double gaussian_sup_difference(double mu1, double mu2, double sigma1, double sigma2, double step_frac = 1.0 / 64.0) {
    const double smin = std::min(sigma1, sigma2), smax = std::max(sigma1, sigma2);
    const double lo = std::min(mu1, mu2) - 12.0 * smax, hi = std::max(mu1, mu2) + 12.0 * smax;
    const double step = smin * step_frac;
    double m = 0.0;
    for (double x = lo; x <= hi; x += step)
        m = std::max(m, std::abs(phi((x - mu1) / sigma1) - phi((x - mu2) / sigma2)));
    return m;
}

}  // namespace gmix

#endif
