#pragma once

// Test-side oracles, kept independent of the library's evaluation paths:
// a double-exponential quadrature for singular-endpoint integrals, a Stirling
// gamma, the brute-force transformed hypergeometric series, and fixed
// Gauss-Legendre panels for the kernel's integral representation.

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace oracles {

// tanh-sinh quadrature on (a,b); tolerates integrable endpoint singularities.
inline double tanh_sinh(const std::function<double(double)>& f, double a, double b,
                        int levels = 9) {
    const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    const double pi_half = 1.57079632679489661923;
    auto node_term = [&](double t) {
        const double sh = pi_half * std::sinh(t);
        if (std::abs(sh) > 30.0) return 0.0;
        const double ch = std::cosh(sh);
        const double w = pi_half * std::cosh(t) / (ch * ch);
        const double x = std::tanh(sh);
        double acc = 0.0;
        for (double sgn : {-1.0, 1.0}) {
            const double node = mid + sgn * half * x;
            if (node <= a || node >= b) continue;
            acc += w * f(node);
        }
        return acc;
    };
    double h = 1.0;
    double sum = pi_half * f(mid);  // k = 0
    for (int k = 1; k * h <= 7.0; ++k) sum += node_term(k * h);
    for (int lev = 1; lev <= levels; ++lev) {
        h *= 0.5;
        for (int k = 1; k * h <= 7.0; k += 2) sum += node_term(k * h);
    }
    return sum * h * half;
}

// Stirling series with argument shift; independent of the Lanczos route.
inline double stirling_gamma(double x) {
    if (x <= 0.0) throw std::domain_error("stirling_gamma: positive arguments only");
    double shift = 1.0;
    while (x < 20.0) {
        shift *= x;
        x += 1.0;
    }
    const double inv = 1.0 / x;
    const double series = 1.0 + inv / 12.0 + inv * inv / 288.0 -
                          139.0 * inv * inv * inv / 51840.0 -
                          571.0 * inv * inv * inv * inv / 2488320.0;
    constexpr double sqrt_two_pi = 2.50662827463100050242;
    const double g = sqrt_two_pi * std::pow(x, x - 0.5) * std::exp(-x) * series;
    return g / shift;
}

// Brute-force partial sums of the Pfaff-transformed Gauss series,
// F(a,b;c;z) = (1-z)^{-a} sum_k (a)_k (c-b)_k / ((c)_k k!) u^k, u = z/(z-1).
inline double hyp2f1_bruteforce(double a, double b, double c, double z,
                                std::size_t terms = 10000) {
    if (z > 0.0) throw std::domain_error("hyp2f1_bruteforce: z <= 0 expected");
    if (z == 0.0) return 1.0;
    const double u = z / (z - 1.0);
    const double bb = c - b;
    double sum = 1.0, term = 1.0;
    for (std::size_t k = 0; k < terms; ++k) {
        const double kk = static_cast<double>(k);
        term *= (a + kk) * (bb + kk) / ((c + kk) * (kk + 1.0)) * u;
        sum += term;
    }
    return std::pow(1.0 - z, -a) * sum;
}

// 64-point Gauss-Legendre rule on [0,1]; nodes by Newton iteration on P_64.
struct GaussLegendre64 {
    std::vector<double> x, w;

    static const GaussLegendre64& instance() {
        static const GaussLegendre64 rule;
        return rule;
    }

  private:
    GaussLegendre64() {
        const int n = 64;
        x.resize(n);
        w.resize(n);
        const double pi = 3.14159265358979323846;
        for (int i = 0; i < n; ++i) {
            double z = std::cos(pi * (i + 0.75) / (n + 0.5));
            double p1 = 0.0, dp = 0.0;
            for (int it = 0; it < 100; ++it) {
                double q0 = 1.0, q1 = z;
                for (int k = 2; k <= n; ++k) {
                    const double q2 = ((2.0 * k - 1.0) * z * q1 - (k - 1.0) * q0) / k;
                    q0 = q1;
                    q1 = q2;
                }
                dp = n * (z * q1 - q0) / (z * z - 1.0);
                const double dz = q1 / dp;
                z -= dz;
                p1 = q1;
                if (std::abs(dz) < 1e-15) break;
            }
            (void)p1;
            x[i] = 0.5 * (1.0 - z);
            w[i] = 1.0 / ((1.0 - z * z) * dp * dp);
        }
    }
};

// Integral representation of the kernel for H > 1/2:
//   K(t,s) = alpha_bar s^{1/2-H} int_s^t r^{H-1/2} (r-s)^{H-3/2} dr,
// the (r-s) singularity removed by the power substitution x = u^{1/(H-1/2)}.
inline double kernel_integral_form(double t, double s, double H, double alpha_bar) {
    if (!(H > 0.5)) throw std::domain_error("kernel_integral_form: H > 1/2 only");
    const double p = H - 0.5;
    const auto& gl = GaussLegendre64::instance();
    double acc = 0.0;
    for (std::size_t i = 0; i < gl.x.size(); ++i) {
        const double x = std::pow(gl.x[i], 1.0 / p);
        acc += gl.w[i] * std::pow(s + (t - s) * x, H - 0.5);
    }
    acc *= std::pow(t - s, H - 0.5) / p;
    return alpha_bar * std::pow(s, 0.5 - H) * acc;
}

// Central finite difference.
inline double central_diff(const std::function<double(double)>& f, double x, double h) {
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

}  // namespace oracles
