#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "grid.hpp"
#include "kernel.hpp"
#include "specfun.hpp"

namespace fbmlab {

namespace detail {

// Product-trapezoidal coefficients: the singular factor (t_i - s)^{alpha-1} is
// integrated exactly against the piecewise-linear interpolant of f. By grid
// uniformity the coefficients depend only on the lag k = i - j.
struct FracCoeffs {
    std::vector<double> a;  // multiplies f_{i-k}
    std::vector<double> b;  // multiplies f_{i-k+1}

    FracCoeffs(double alpha, std::size_t n, double dt) : a(n + 1), b(n + 1) {
        const double da = std::pow(dt, alpha);
        const double inv_gamma = 1.0 / gamma_fn(alpha);
        double pk_a = 0.0;   // (k-1)^alpha
        double pk_a1 = 0.0;  // (k-1)^{alpha+1}
        for (std::size_t k = 1; k <= n; ++k) {
            const double kd = static_cast<double>(k);
            const double ka = std::pow(kd, alpha);
            const double ka1 = ka * kd;
            const double m0 = da * (ka - pk_a) / alpha;
            const double m1 = da * dt * (ka1 - pk_a1) / (alpha + 1.0);
            a[k] = inv_gamma * ((1.0 - kd) * m0 + m1 / dt);
            b[k] = inv_gamma * (kd * m0 - m1 / dt);
            pk_a = ka;
            pk_a1 = ka1;
        }
    }
};

}  // namespace detail

/// Left Riemann-Liouville fractional integral I^alpha on the grid,
/// (I^alpha f)(t) = Gamma(alpha)^{-1} int_0^t (t-s)^{alpha-1} f(s) ds.
inline GridFunction frac_integral(const GridFunction& f, double alpha) {
    if (!(alpha > 0.0 && alpha <= 2.0))
        throw std::domain_error("frac_integral: alpha must lie in (0,2]");
    const std::size_t n = f.grid.n;
    const detail::FracCoeffs c(alpha, n, f.grid.dt());
    std::vector<double> out(n + 1, 0.0);
    for (std::size_t i = 1; i <= n; ++i) {
        double acc = 0.0;
        for (std::size_t k = 1; k <= i; ++k)
            acc += c.a[k] * f.values[i - k] + c.b[k] * f.values[i - k + 1];
        out[i] = acc;
    }
    return GridFunction(f.grid, std::move(out));
}

/// Left Riemann-Liouville derivative D^alpha f = d/dt I^{1-alpha} f, the time
/// derivative realized by forward differences (backward at the last node).
inline GridFunction frac_derivative(const GridFunction& f, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::domain_error("frac_derivative: alpha must lie in (0,1)");
    const GridFunction g = frac_integral(f, 1.0 - alpha);
    const std::size_t n = f.grid.n;
    const double dt = f.grid.dt();
    std::vector<double> out(n + 1);
    for (std::size_t i = 0; i < n; ++i) out[i] = (g.values[i + 1] - g.values[i]) / dt;
    out[n] = (g.values[n] - g.values[n - 1]) / dt;
    return GridFunction(f.grid, std::move(out));
}

namespace detail {

// Multiply node values by s^{expo}. A singular node 0 (negative exponent with
// nonzero value) is excluded: the prefactor is integrable in every composition
// used here, and the subsequent product integration sees the cell through its
// right node.
inline GridFunction multiply_power(const GridFunction& f, double expo) {
    std::vector<double> v(f.values.size());
    v[0] = (expo > 0.0) ? 0.0 : (expo == 0.0 ? f.values[0] : 0.0);
    for (std::size_t i = 1; i < v.size(); ++i)
        v[i] = f.values[i] * std::pow(f.grid.node(i), expo);
    return GridFunction(f.grid, std::move(v));
}

}  // namespace detail

/// K_H through its fractional-calculus composition,
///   H <= 1/2:  p_H * I^{2H} [ s^{1/2-H} I^{1/2-H} [ s^{H-1/2} f ] ]
///   H >= 1/2:  p_H * I^{1} [ s^{H-1/2} I^{H-1/2} [ s^{1/2-H} f ] ]
/// carrying the normalization p_H that matches the covariance kernel, so the
/// result agrees with apply_kh up to discretization error.
inline GridFunction compose_kh_via_fractional(const GridFunction& f, double H) {
    if (!(H > 0.0 && H < 1.0))
        throw std::domain_error("compose_kh_via_fractional: H must lie in (0,1)");
    if (detail::is_half(H)) return frac_integral(f, 1.0);
    const double ph = detail::kernel_norm_ph(H);
    GridFunction out =
        (H < 0.5)
            ? frac_integral(detail::multiply_power(
                                frac_integral(detail::multiply_power(f, H - 0.5), 0.5 - H),
                                0.5 - H),
                            2.0 * H)
            : frac_integral(detail::multiply_power(
                                frac_integral(detail::multiply_power(f, 0.5 - H), H - 0.5),
                                H - 0.5),
                            1.0);
    for (auto& v : out.values) v *= ph;
    return out;
}

}  // namespace fbmlab
