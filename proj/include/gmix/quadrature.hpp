#ifndef GMIX_QUADRATURE_HPP
#define GMIX_QUADRATURE_HPP

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <vector>

namespace gmix {

inline constexpr double pi = std::numbers::pi;
inline constexpr double sqrt_2pi = 2.5066282746310002;

// Composite Gauss-Legendre nodes on [a,b]; panels of width at most `panel`.
struct QuadRule {
    std::vector<double> x;
    std::vector<double> w;
    std::size_t size() const { return x.size(); }
};

inline QuadRule gauss_panels(double a, double b, double panel) {
    using G = boost::math::quadrature::gauss<double, 16>;
    QuadRule q;
    if (!(b > a)) return q;
    const auto np = static_cast<std::size_t>(std::max(1.0, std::ceil((b - a) / panel)));
    const double hw = 0.5 * (b - a) / static_cast<double>(np);
    const auto& ab = G::abscissa();
    const auto& wt = G::weights();
    q.x.reserve(np * 16);
    q.w.reserve(np * 16);
    for (std::size_t p = 0; p < np; ++p) {
        const double mid = a + (2.0 * static_cast<double>(p) + 1.0) * hw;
        for (std::size_t i = 0; i < ab.size(); ++i) {
            // boost stores the non-negative half of the symmetric rule
            if (ab[i] == 0.0) {
                q.x.push_back(mid);
                q.w.push_back(hw * wt[i]);
                continue;
            }
            q.x.push_back(mid - hw * ab[i]);
            q.w.push_back(hw * wt[i]);
            q.x.push_back(mid + hw * ab[i]);
            q.w.push_back(hw * wt[i]);
        }
    }
    return q;
}

template <class F>
double integrate(const QuadRule& q, F&& f) {
    double s = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) s += q.w[i] * f(q.x[i]);
    return s;
}

// Uniform symmetric grid: n nodes (odd) covering [-half_range, half_range].
struct UniformGrid {
    double half_range = 0.0;
    std::size_t n = 0;

    double step() const { return 2.0 * half_range / static_cast<double>(n - 1); }
    double at(std::size_t i) const { return -half_range + step() * static_cast<double>(i); }
    bool symmetric() const { return n >= 3 && n % 2 == 1 && half_range > 0.0; }
};

inline std::vector<double> linspace(double a, double b, double step) {
    std::vector<double> out;
    const auto n = static_cast<std::size_t>(std::floor((b - a) / step + 1e-9)) + 1;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(a + step * static_cast<double>(i));
    return out;
}

}  // namespace gmix

#endif
