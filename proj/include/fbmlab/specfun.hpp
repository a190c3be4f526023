#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace fbmlab {

namespace detail {

inline bool is_nonpositive_integer(double x) {
    return x <= 0.0 && x == std::floor(x);
}

// Lanczos approximation, g = 7, 9 coefficients.
inline double gamma_lanczos_positive(double x) {
    static constexpr double g = 7.0;
    static constexpr double coef[9] = {
        0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
        771.32342877765313,      -176.61502916214059,   12.507343278686905,
        -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};
    const double z = x - 1.0;
    double a = coef[0];
    for (int i = 1; i < 9; ++i) a += coef[i] / (z + i);
    const double t = z + g + 0.5;
    constexpr double sqrt_two_pi = 2.5066282746310005024;
    return sqrt_two_pi * std::pow(t, z + 0.5) * std::exp(-t) * a;
}

}  // namespace detail

/// Gamma function on the real line, poles excluded.
inline double gamma_fn(double x) {
    if (detail::is_nonpositive_integer(x))
        throw std::domain_error("gamma_fn: pole at non-positive integer");
    if (x >= 0.5) return detail::gamma_lanczos_positive(x);
    // reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x)
    constexpr double pi = 3.14159265358979323846;
    return pi / (std::sin(pi * x) * detail::gamma_lanczos_positive(1.0 - x));
}

/// Euler Beta. Arguments are sorted before evaluation so the symmetry
/// beta(x,y) == beta(y,x) holds bitwise.
inline double beta_fn(double x, double y) {
    if (!(x > 0.0) || !(y > 0.0)) throw std::domain_error("beta_fn: arguments must be positive");
    const double lo = std::min(x, y), hi = std::max(x, y);
    if (lo + hi < 100.0) return gamma_fn(lo) * gamma_fn(hi) / gamma_fn(lo + hi);
    return std::exp(std::lgamma(lo) + std::lgamma(hi) - std::lgamma(lo + hi));
}

struct HypergeomParams {
    double a = 0.0;
    double b = 0.0;
    double c = 1.0;
    double z = 0.0;
};

namespace detail {

// Plain Gauss series at |z| < 1. Term-ratio stopping rule, hard cap.
inline double gauss_series(double a, double b, double c, double z) {
    constexpr std::size_t cap = 100000;
    double sum = 1.0, term = 1.0;
    for (std::size_t k = 0; k < cap; ++k) {
        const double kk = static_cast<double>(k);
        term *= (a + kk) * (b + kk) / ((c + kk) * (kk + 1.0)) * z;
        sum += term;
        if (std::abs(term) < 1e-16 * std::abs(sum)) return sum;
    }
    throw std::domain_error("hyp2f1: series did not converge within term cap");
}

}  // namespace detail

/// Gauss hypergeometric function F(a,b;c;z) on z <= 0 or |z| < 1.
///
/// z in [-1, 0): Pfaff transformation into argument z/(z-1) in (0, 1/2],
/// then series. z < -1: the 1/z connection formula splits F into two series,
/// each mapped by Pfaff back into (0, 1/2) -- the transformed series alone
/// cannot reach full accuracy for deeply negative arguments. Degenerate
/// parameter differences fall back to the plain Pfaff series.
inline double hyp2f1(const HypergeomParams& p) {
    const double a = p.a, b = p.b, c = p.c, z = p.z;
    if (detail::is_nonpositive_integer(c))
        throw std::domain_error("hyp2f1: c must not be a non-positive integer");
    if (!(z <= 0.0 || std::abs(z) < 1.0))
        throw std::domain_error("hyp2f1: argument outside supported domain");
    if (z == 0.0 || a == 0.0 || b == 0.0) return 1.0;
    if (z > 0.0) return detail::gauss_series(a, b, c, z);
    if (z >= -1.0) {
        const double u = z / (z - 1.0);  // in (0, 1/2]
        return std::pow(1.0 - z, -a) * detail::gauss_series(a, c - b, c, u);
    }
    // z < -1: connection in 1/z, valid for non-integer b - a
    const double ba = b - a;
    if (std::abs(ba - std::round(ba)) < 1e-9) {
        const double u = z / (z - 1.0);
        return std::pow(1.0 - z, -a) * detail::gauss_series(a, c - b, c, u);
    }
    const double w = 1.0 / z;              // in (-1, 0)
    const double v = w / (w - 1.0);        // in (0, 1/2)
    const double g1 = gamma_fn(c) * gamma_fn(ba) / (gamma_fn(b) * gamma_fn(c - a));
    const double g2 = gamma_fn(c) * gamma_fn(-ba) / (gamma_fn(a) * gamma_fn(c - b));
    const double f1 = std::pow(1.0 - w, -a) * detail::gauss_series(a, c - b, a - b + 1.0, v);
    const double f2 = std::pow(1.0 - w, -b) * detail::gauss_series(b, c - a, b - a + 1.0, v);
    return g1 * std::pow(-z, -a) * f1 + g2 * std::pow(-z, -b) * f2;
}

inline double hyp2f1(double a, double b, double c, double z) {
    return hyp2f1(HypergeomParams{a, b, c, z});
}

}  // namespace fbmlab
