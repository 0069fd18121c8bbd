#ifndef GMIX_RATES_HPP
#define GMIX_RATES_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gmix {

enum class RateKind { location, location_scale, hybrid };

inline const char* to_string(RateKind k) {
    switch (k) {
        case RateKind::location: return "location";
        case RateKind::location_scale: return "location_scale";
        case RateKind::hybrid: return "hybrid";
    }
    return "?";
}

inline RateKind parse_rate_kind(const std::string& s) {
    if (s == "location") return RateKind::location;
    if (s == "location_scale" || s == "location-scale") return RateKind::location_scale;
    if (s == "hybrid") return RateKind::hybrid;
    throw std::invalid_argument("unknown mixture kind: " + s);
}

struct RateSpec {
    RateKind kind = RateKind::location;
    double beta = 1.0;
    double p = 2.0;  // +inf allowed
    double b7 = 0.0;

    void validate() const {
        if (!(beta > 0.0) || !std::isfinite(beta)) throw std::invalid_argument("rate needs finite beta > 0");
        if (!(p > 0.0)) throw std::invalid_argument("rate needs p > 0");
    }
};

// Symbolic formulas, one per exponent family.
namespace formula {
inline constexpr const char* loc_small = "2β/(3β+1)";
inline constexpr const char* moments = "2β/(2β+1+2β/p)";
inline constexpr const char* ls_small = "2β/(3β+2)";
inline constexpr const char* ls_large = "β/(β+1)";
inline constexpr const char* hyb_mid = "p/(p+1)";
inline constexpr const char* smooth = "2β/(2β+1)";
}  // namespace formula

struct RateResult {
    double q = 0.0;
    double log_power = 0.0;
    std::string regime;   // threshold condition that fired
    std::string formula;  // symbolic q
    int column = 0;       // Table 1 column when thresholds are ordered 2β/(β+1) ≤ 2 ≤ 2β
    std::string attained; // for the two-term minima, which term attains it
};

namespace detail {

inline double moments_q(double b, double p) { return std::isinf(p) ? 2.0 * b / (2.0 * b + 1.0) : 2.0 * b / (2.0 * b + 1.0 + 2.0 * b / p); }

}  // namespace detail

// At a threshold the right-hand regime is used.
inline RateResult rate_exponent(const RateSpec& s) {
    s.validate();
    const double b = s.beta, p = s.p;
    const double t_mid = 2.0 * b / (b + 1.0);
    RateResult r;
    switch (s.kind) {
        case RateKind::location:
            if (p < 2.0) {
                r.q = 2.0 * b / (3.0 * b + 1.0);
                r.log_power = 2.0 - r.q;
                r.regime = "p<2";
                r.formula = formula::loc_small;
                r.column = p < t_mid ? 0 : 1;
            } else {
                r.q = detail::moments_q(b, p);
                r.log_power = 2.0 - 1.5 * r.q;
                r.regime = "p>=2";
                r.formula = formula::moments;
                r.column = p < 2.0 * b ? 2 : 3;
            }
            break;
        case RateKind::location_scale: {
            if (p < 2.0 * b) {
                // minimum of the two rates, i.e. the larger exponent
                const double q1 = 2.0 * b / (3.0 * b + 2.0), q2 = detail::moments_q(b, p);
                if (p < t_mid) {
                    r.q = q1;
                    r.log_power = 4.0 - 8.0 * b / (3.0 * b + 2.0);
                    r.regime = "p<2β/(β+1)";
                    r.formula = formula::ls_small;
                    r.attained = "2β/(3β+2)";
                    r.column = 0;
                } else {
                    r.q = q2;
                    r.log_power = 4.0 - 2.0 * q2;
                    r.regime = "2β/(β+1)<=p<2β";
                    r.formula = formula::moments;
                    r.attained = "2β/(2β+1+2β/p)";
                    r.column = p < 2.0 ? 1 : 2;
                }
                if (std::abs(r.q - std::max(q1, q2)) > 1e-14) throw std::logic_error("location-scale regime split disagrees with the minimum");
            } else {
                r.q = b / (b + 1.0);
                r.log_power = 4.0 - 2.0 * b / (b + 1.0);
                r.regime = "p>=2β";
                r.formula = formula::ls_large;
                r.column = 3;
            }
            break;
        }
        case RateKind::hybrid:
            if (p < t_mid) {
                r.q = 2.0 * b / (3.0 * b + 1.0);
                r.log_power = 4.0 - 3.0 * r.q;
                r.regime = "p<2β/(β+1)";
                r.formula = formula::loc_small;
                r.attained = "2β/(3β+1)";
                r.column = 0;
            } else if (p < 2.0 * b) {
                r.q = p / (p + 1.0);
                r.log_power = 4.0 - r.q;
                r.regime = "2β/(β+1)<=p<2β";
                r.formula = formula::hyb_mid;
                r.attained = "p/(p+1)";
                r.column = p < 2.0 ? 1 : 2;
            } else {
                r.q = 2.0 * b / (2.0 * b + 1.0);
                r.log_power = 4.0 - 2.0 * b * std::max(4.0 - s.b7, 3.0) / (2.0 * b + 1.0);
                r.regime = "p>=2β";
                r.formula = formula::smooth;
                r.column = 3;
            }
            break;
    }
    return r;
}

// Continued-fraction reconstruction of a rational value.
inline std::optional<std::pair<long, long>> as_fraction(double x, long max_den = 10000, double tol = 1e-12) {
    if (!std::isfinite(x)) return std::nullopt;
    long h0 = 0, h1 = 1, k0 = 1, k1 = 0;
    double v = x;
    for (int i = 0; i < 64; ++i) {
        const double a = std::floor(v);
        const long ai = static_cast<long>(a);
        const long h2 = ai * h1 + h0, k2 = ai * k1 + k0;
        if (k2 > max_den) break;
        h0 = h1;
        h1 = h2;
        k0 = k1;
        k1 = k2;
        if (std::abs(static_cast<double>(h1) / static_cast<double>(k1) - x) <= tol) return std::make_pair(h1, k1);
        const double frac = v - a;
        if (frac < 1e-15) break;
        v = 1.0 / frac;
    }
    return std::nullopt;
}

inline std::string format_q(double q, bool exact) {
    if (exact)
        if (auto f = as_fraction(q)) return std::to_string(f->first) + "/" + std::to_string(f->second);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", q);
    return buf;
}

// Table 1 layout: three rows, four threshold columns.
inline constexpr std::array<const char*, 4> table_columns = {"0<p<2, p<2β/(β+1)", "0<p<2, p≥2β/(β+1)", "p≥2, p<2β", "p≥2, p≥2β"};

inline std::array<std::array<std::string, 4>, 3> symbolic_table() {
    using namespace formula;
    return {{{loc_small, loc_small, moments, moments},
             {ls_small, moments, moments, ls_large},
             {loc_small, hyb_mid, hyb_mid, formula::smooth}}};
}

inline std::string render_symbolic_table() {
    const auto t = symbolic_table();
    const std::array<const char*, 3> rows = {"Location", "Location-scale", "Hybrid"};
    std::ostringstream o;
    o << "| |";
    for (const auto* c : table_columns) o << ' ' << c << " |";
    o << "\n|---|---|---|---|---|\n";
    for (std::size_t i = 0; i < 3; ++i) {
        o << "| " << rows[i] << " |";
        for (const auto& c : t[i]) o << ' ' << c << " |";
        o << '\n';
    }
    return o.str();
}

// The symbolic cells regenerated from the calculator at a representative
// point of every column (β = 2 orders the thresholds 4/3 < 2 < 4).
inline std::array<std::array<std::string, 4>, 3> calculated_symbolic_table() {
    const std::array<double, 4> ps = {1.0, 1.5, 3.0, 5.0};
    std::array<std::array<std::string, 4>, 3> t;
    const std::array<RateKind, 3> kinds = {RateKind::location, RateKind::location_scale, RateKind::hybrid};
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 4; ++j) {
            const RateResult r = rate_exponent({kinds[i], 2.0, ps[j]});
            if (r.column != static_cast<int>(j)) throw std::logic_error("representative point landed in the wrong column");
            t[i][j] = r.formula;
        }
    return t;
}

enum class TableFormat { markdown, csv };

// Numeric grid over (β, p); each cell shows q for the three kinds with regime labels.
inline std::string render_table(const std::vector<double>& betas, const std::vector<double>& ps,
                                TableFormat fmt = TableFormat::markdown, bool exact = false) {
    if (betas.empty() || ps.empty()) throw std::invalid_argument("render_table needs nonempty grids");
    std::ostringstream o;
    const std::array<RateKind, 3> kinds = {RateKind::location, RateKind::location_scale, RateKind::hybrid};
    if (fmt == TableFormat::csv) {
        o << "kind,beta,p,q,log_power,regime,formula\n";
        for (auto k : kinds)
            for (double b : betas)
                for (double p : ps) {
                    const RateResult r = rate_exponent({k, b, p});
                    o << to_string(k) << ',' << b << ',' << p << ',' << format_q(r.q, exact) << ',' << r.log_power << ",\"" << r.regime
                      << "\",\"" << r.formula << "\"\n";
                }
        return o.str();
    }
    for (auto k : kinds) {
        o << "### " << to_string(k) << "\n\n| β \\ p |";
        for (double p : ps) o << ' ' << p << " |";
        o << "\n|---|";
        for (std::size_t j = 0; j < ps.size(); ++j) o << "---|";
        o << '\n';
        for (double b : betas) {
            o << "| " << b << " |";
            for (double p : ps) {
                const RateResult r = rate_exponent({k, b, p});
                o << ' ' << format_q(r.q, exact) << " [" << r.formula << "] |";
            }
            o << '\n';
        }
        o << '\n';
    }
    return o.str();
}

struct DominanceReport {
    std::size_t points = 0;
    std::size_t violations = 0;
    double worst_margin = std::numeric_limits<double>::infinity();  // min over points of the two gaps
};

// hybrid q >= location q >= location-scale q at every lattice point
inline DominanceReport check_dominance(const std::vector<double>& betas, const std::vector<double>& ps) {
    DominanceReport d;
    for (double b : betas)
        for (double p : ps) {
            const double qh = rate_exponent({RateKind::hybrid, b, p}).q;
            const double ql = rate_exponent({RateKind::location, b, p}).q;
            const double qs = rate_exponent({RateKind::location_scale, b, p}).q;
            const double m = std::min(qh - ql, ql - qs);
            d.worst_margin = std::min(d.worst_margin, m);
            if (m < -1e-14) ++d.violations;
            ++d.points;
        }
    return d;
}

}  // namespace gmix

#endif
