#pragma once

#include <cmath>
#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <vector>

#include "grid.hpp"
#include "specfun.hpp"

namespace fbmlab {

/// Hurst parameter with the derived quantities used by the admissibility
/// conditions: H0 = |H - 1/2|, A_H = {p >= 1 : p*H0 < 1}, kappa_p = 1/(1-p*H0).
struct HurstParams {
    double H = 0.5;
    double T = 1.0;

    HurstParams() = default;
    HurstParams(double hurst, double horizon) : H(hurst), T(horizon) {
        if (!(H > 0.0 && H < 1.0)) throw std::domain_error("HurstParams: H must lie in (0,1)");
        if (!(T > 0.0)) throw std::domain_error("HurstParams: T must be positive");
    }

    double h0() const { return std::abs(H - 0.5); }
    bool admissible(double p) const { return p >= 1.0 && p * h0() < 1.0; }
    double kappa_p(double p) const {
        if (!admissible(p)) throw std::domain_error("HurstParams: p outside admissible set");
        return 1.0 / (1.0 - p * h0());
    }
};

/// Covariance of fractional Brownian motion.
inline double covariance_rh(double t, double s, double H) {
    if (t < 0.0 || s < 0.0) throw std::domain_error("covariance_rh: negative time");
    return 0.5 * (std::pow(t, 2.0 * H) + std::pow(s, 2.0 * H) - std::pow(std::abs(t - s), 2.0 * H));
}

namespace detail {

inline bool is_half(double H) { return std::abs(H - 0.5) < 1e-12; }

// Normalization constant linking the hypergeometric kernel expression to the
// kernel that factorizes the fBm covariance: K = p_H * K_hypergeometric.
inline double kernel_norm_ph(double H) {
    if (is_half(H)) return 1.0;
    if (H > 0.5) {
        const double c = std::sqrt(H * (2.0 * H - 1.0) / beta_fn(2.0 - 2.0 * H, H - 0.5));
        return c * gamma_fn(H - 0.5);
    }
    const double b = std::sqrt(2.0 * H / ((1.0 - 2.0 * H) * beta_fn(1.0 - 2.0 * H, H + 0.5)));
    return b * gamma_fn(H + 0.5);
}

// Coefficients of the kernel split K(t,s) = P s^{H-1/2} + G2 (t-s)^{H-1/2} rho^{1/2-H} S2(rho)
// for rho = s/t < 1/2, and K = invG (t-s)^{H-1/2} rho^{H-1/2} S(1-rho) otherwise.
// S2 = 2F1(1/2-H, 1; 2-2H; rho), S = 2F1(H-1/2, 2H; H+1/2; u). Both argument ranges
// stay inside [0, 1/2], so the series converge geometrically.
struct KernelEval {
    double H, Hm, Hp;  // Hm = H-1/2, Hp = H+1/2
    double P = 0.0, G2 = 0.0, invG = 1.0;
    bool half = true;

    explicit KernelEval(double hurst) : H(hurst), Hm(hurst - 0.5), Hp(hurst + 0.5) {
        if (!(H > 0.0 && H < 1.0)) throw std::domain_error("kernel: H must lie in (0,1)");
        half = is_half(H);
        if (half) return;
        const double ph = kernel_norm_ph(H);
        P = ph * gamma_fn(1.0 - 2.0 * H) / gamma_fn(0.5 - H);
        G2 = ph * gamma_fn(2.0 * H - 1.0) / (gamma_fn(H - 0.5) * gamma_fn(2.0 * H));
        invG = ph / gamma_fn(Hp);
    }

    double series_s2(double rho) const {
        double sum = 1.0, term = 1.0;
        for (int k = 0; k < 400; ++k) {
            term *= (0.5 - H + k) / (2.0 - 2.0 * H + k) * rho;
            sum += term;
            if (std::abs(term) < 1e-17 * std::abs(sum)) break;
        }
        return sum;
    }
    double series_s(double u) const {
        double sum = 1.0, term = 1.0;
        for (int k = 0; k < 400; ++k) {
            term *= (Hm + k) * (2.0 * H + k) / ((Hp + k) * (k + 1.0)) * u;
            sum += term;
            if (std::abs(term) < 1e-17 * std::abs(sum)) break;
        }
        return sum;
    }

    double operator()(double t, double s) const {
        if (half) return 1.0;
        const double rho = s / t;
        if (rho < 0.5)
            return P * std::pow(s, Hm) +
                   G2 * std::pow(t - s, Hm) * std::pow(rho, -Hm) * series_s2(rho);
        return invG * std::pow(t - s, Hm) * std::pow(rho, Hm) * series_s(1.0 - rho);
    }
};

}  // namespace detail

/// Volterra kernel of fractional Brownian motion, normalized so that
/// R_H(t,s) = int_0^{t^s} K(t,r) K(s,r) dr. Diverges as s->t for H<1/2 and as
/// s->0 for H != 1/2; callers must keep 0 < s < t.
inline double kernel_kh(double t, double s, double H) {
    if (!(s > 0.0) || !(s < t)) throw std::domain_error("kernel_kh: need 0 < s < t");
    return detail::KernelEval(H)(t, s);
}

/// dK/dt = alpha_H (H-1/2) (s/t)^{1/2-H} (t-s)^{H-3/2}; identically zero at H=1/2.
inline double kernel_dkdt(double t, double s, double H) {
    if (!(s > 0.0) || !(s < t)) throw std::domain_error("kernel_dkdt: need 0 < s < t");
    if (detail::is_half(H)) return 0.0;
    const double alpha = std::sqrt(2.0 * H * gamma_fn(1.5 - H) /
                                   (gamma_fn(H + 0.5) * gamma_fn(2.0 - 2.0 * H)));
    return alpha * (H - 0.5) * std::pow(s / t, 0.5 - H) * std::pow(t - s, H - 1.5);
}

/// Scalar constants attached to the kernel at a given H.
struct KernelConstants {
    double H = 0.5;
    double alpha_h = 1.0;      // sqrt(2H Gamma(3/2-H) / (Gamma(H+1/2) Gamma(2-2H)))
    double alpha_bar_h = 0.0;  // alpha_h * (H - 1/2)
    double c_h = 1.0;          // constant of the identity K_H(C_H s^{1/2-H})(t) = t

    static KernelConstants make(double H);
};

/// Constant C_H with K_H(C_H s^{1/2-H})(t) = t. Closed form derived from the
/// fractional-composition representation of K_H carrying the same covariance
/// normalization as kernel_kh.
inline double constant_ch(double H) {
    if (!(H > 0.0 && H < 1.0)) throw std::domain_error("constant_ch: H must lie in (0,1)");
    if (detail::is_half(H)) return 1.0;
    return gamma_fn(1.5 - H) / gamma_fn(2.0 - 2.0 * H) / detail::kernel_norm_ph(H);
}

inline KernelConstants KernelConstants::make(double H) {
    KernelConstants k;
    k.H = H;
    k.alpha_h = std::sqrt(2.0 * H * gamma_fn(1.5 - H) /
                          (gamma_fn(H + 0.5) * gamma_fn(2.0 - 2.0 * H)));
    k.alpha_bar_h = k.alpha_h * (H - 0.5);
    k.c_h = constant_ch(H);
    return k;
}

/// Lower-triangular matrix of integrated kernel weights,
/// w[i][j] ~= int_{t_j}^{t_{j+1}} K_H(t_i, s) ds for j < i, stored packed.
///
/// apply_cell0 holds a second version of the first column: the plain cell
/// integral misrepresents midpoint-sampled integrands carrying the s^{1/2-H}
/// endpoint profile (the profile of every drift integrand the identity and the
/// gradient controls use), so the column used by apply_kh product-integrates
/// that profile exactly. Synthesis and covariance sums use the plain column.
struct KernelWeights {
    TimeGrid grid;
    double H = 0.5;
    std::vector<double> w;            // packed rows: row i at offset i(i-1)/2, length i
    std::vector<double> apply_cell0;  // [i] = first-column weight for apply-type sums, i>=1

    std::size_t row_offset(std::size_t i) const { return i * (i - 1) / 2; }
    const double* row(std::size_t i) const { return w.data() + row_offset(i); }
    double at(std::size_t i, std::size_t j) const {
        return j < i ? w[row_offset(i) + j] : 0.0;
    }
    double apply_at(std::size_t i, std::size_t j) const {
        if (j >= i) return 0.0;
        return j == 0 ? apply_cell0[i] : w[row_offset(i) + j];
    }
};

namespace detail {

struct GaussRule {
    const double* x;
    const double* wt;
    int n;
};

inline GaussRule gl2() {
    static const double x[2] = {0.21132486540518711775, 0.78867513459481288225};
    static const double w[2] = {0.5, 0.5};
    return {x, w, 2};
}
inline GaussRule gl4() {
    static const double x[4] = {0.06943184420297371239, 0.33000947820757186760,
                                0.66999052179242813240, 0.93056815579702628761};
    static const double w[4] = {0.17392742256872692869, 0.32607257743127307131,
                                0.32607257743127307131, 0.17392742256872692869};
    return {x, w, 4};
}
inline GaussRule gl8() {
    static const double x[8] = {0.01985507175123188415, 0.10166676129318663020,
                                0.23723379504183550709, 0.40828267875217509753,
                                0.59171732124782490247, 0.76276620495816449291,
                                0.89833323870681336980, 0.98014492824876811585};
    static const double w[8] = {0.05061426814518812957, 0.11119051722668723527,
                                0.15685332293894364367, 0.18134189168918099148,
                                0.18134189168918099148, 0.15685332293894364367,
                                0.11119051722668723527, 0.05061426814518812957};
    return {x, w, 8};
}

// int_0^1 K(1,rho) drho via the P/Q split with power substitutions at both
// singular endpoints; used for the bi-singular first row of the weight matrix.
inline double kernel_unit_mass(const KernelEval& ke) {
    const double Hm = ke.Hm, Hp = ke.Hp;
    double total = ke.P / Hp;  // closed-form P-part over [0,1]
    const GaussRule g = gl8();
    // near part: int_0^{1/2} G2 (1-r)^{Hm} r^{-Hm} S2(r) dr, sub r = 0.5 xi^{1/(1-Hm)}
    const double ex1 = 1.0 - Hm;
    double acc = 0.0;
    for (int k = 0; k < g.n; ++k) {
        const double r = 0.5 * std::pow(g.x[k], 1.0 / ex1);
        acc += g.wt[k] * ke.G2 * std::pow(1.0 - r, Hm) * ke.series_s2(r);
    }
    total += std::pow(0.5, ex1) / ex1 * acc;
    // far part: int_{1/2}^1 (K - P r^{Hm}) dr, sub x = 1-r = 0.5 xi^{1/(1+Hm)}
    const double ex2 = 1.0 + Hm;
    acc = 0.0;
    for (int k = 0; k < g.n; ++k) {
        const double x = 0.5 * std::pow(g.x[k], 1.0 / ex2);
        const double r = 1.0 - x;
        acc += g.wt[k] * ke.invG * std::pow(r, Hm) * ke.series_s(x);
    }
    total += std::pow(0.5, ex2) / ex2 * acc;
    total -= ke.P * (1.0 - std::pow(0.5, Hp)) / Hp;
    return total;
}

}  // namespace detail

/// Builds the integrated-kernel weight matrix on a uniform grid.
///
/// Per-cell quadrature: the s^{H-1/2} branch of the kernel is integrated in
/// closed form on every cell; the remainder is handled by two-point
/// Gauss-Legendre on interior cells and by power-substituted four-point rules
/// on the two singular cells of each row (s->0 and the diagonal s->t_i).
/// Construction is gated by the defining identity of C_H; a gross violation
/// indicates an inconsistent constant and aborts loudly.
inline KernelWeights build_weights(const TimeGrid& grid, double H) {
    const std::size_t n = grid.n;
    const double dt = grid.dt();
    KernelWeights W;
    W.grid = grid;
    W.H = H;
    W.w.assign(n * (n + 1) / 2, 0.0);
    W.apply_cell0.assign(n + 1, 0.0);

    if (detail::is_half(H)) {
        for (auto& v : W.w) v = dt;
        for (std::size_t i = 1; i <= n; ++i) W.apply_cell0[i] = dt;
        return W;
    }

    const detail::KernelEval ke(H);
    const double Hm = ke.Hm, Hp = ke.Hp;
    const double ch = constant_ch(H);
    const detail::GaussRule g2 = detail::gl2();
    const detail::GaussRule g4 = detail::gl4();

    // node powers t_j^{H+1/2} for the closed-form P-part
    std::vector<double> node_pow(n + 1);
    for (std::size_t j = 0; j <= n; ++j) node_pow[j] = std::pow(grid.node(j), Hp);

    // per Gauss-node tables over cell offsets: a[m] = (m - x_g)^{Hm} covers
    // (t_i - s)^{Hm} / dt^{Hm} at lag m = i - j; b/c[j] = (j + x_g)^{+-Hm}.
    std::vector<double> lag_pow[2], off_pow_p[2], off_pow_m[2];
    for (int gq = 0; gq < 2; ++gq) {
        lag_pow[gq].resize(n + 1);
        off_pow_p[gq].resize(n);
        off_pow_m[gq].resize(n);
        for (std::size_t m = 1; m <= n; ++m)
            lag_pow[gq][m] = std::pow(static_cast<double>(m) - g2.x[gq], Hm);
        for (std::size_t j = 0; j < n; ++j) {
            const double o = static_cast<double>(j) + g2.x[gq];
            off_pow_p[gq][j] = std::pow(o, Hm);
            off_pow_m[gq][j] = std::pow(o, -Hm);
        }
    }
    const double dt_hm = std::pow(dt, Hm);
    const double dt_hp = std::pow(dt, Hp);

    // row 1 by self-similarity: both singularities share the single cell
    W.w[0] = dt_hp * detail::kernel_unit_mass(ke);
    W.apply_cell0[1] = dt_hp * std::pow(2.0, -Hm) / ch;

    for (std::size_t i = 2; i <= n; ++i) {
        double* row = W.w.data() + W.row_offset(i);
        const double ti = grid.node(i);
        const double i_pow_p = std::pow(static_cast<double>(i), Hm);
        const double i_pow_m = 1.0 / i_pow_p;

        // interior cells 1 .. i-2: closed-form P + 2-pt Gauss remainder
        for (std::size_t j = 1; j + 1 < i; ++j) {
            double acc = 0.0;
            for (int gq = 0; gq < 2; ++gq) {
                const double rho = (static_cast<double>(j) + g2.x[gq]) / static_cast<double>(i);
                const double tms = dt_hm * lag_pow[gq][i - j];  // (t_i - s)^{Hm}
                double rem;
                if (rho < 0.5) {
                    rem = ke.G2 * tms * off_pow_m[gq][j] * i_pow_p * ke.series_s2(rho);
                } else {
                    const double kfull = ke.invG * tms * off_pow_p[gq][j] * i_pow_m *
                                         ke.series_s(1.0 - rho);
                    rem = kfull - ke.P * dt_hm * off_pow_p[gq][j];
                }
                acc += g2.wt[gq] * rem;
            }
            row[j] = ke.P * (node_pow[j + 1] - node_pow[j]) / Hp + dt * acc;
        }

        // cell 0: P closed; Q via power substitution killing the s^{1/2-H} factor
        {
            const double ex = 1.5 - H;
            double acc = 0.0;
            for (int k = 0; k < g4.n; ++k) {
                const double s = dt * std::pow(g4.x[k], 1.0 / ex);
                acc += g4.wt[k] * ke.G2 * std::pow(ti - s, Hm) * std::pow(ti, Hm) *
                       ke.series_s2(s / ti);
            }
            row[0] = ke.P * node_pow[1] / Hp + std::pow(dt, ex) / ex * acc;
        }

        // diagonal cell i-1: x = t_i - s, x^{Hm} factored by substitution
        {
            double acc = 0.0;
            for (int k = 0; k < g4.n; ++k) {
                const double x = dt * std::pow(g4.x[k], 1.0 / Hp);
                const double rho = (ti - x) / ti;
                acc += g4.wt[k] * ke.invG * std::pow(rho, Hm) * ke.series_s(1.0 - rho);
            }
            row[i - 1] = dt_hp / Hp * acc;
        }

        // apply-type first column: exact against the (s / (dt/2))^{1/2-H} profile
        {
            const double ex = 2.0 - 2.0 * H;
            double acc = 0.0;
            for (int k = 0; k < g4.n; ++k) {
                const double s = dt * std::pow(g4.x[k], 1.0 / ex);
                acc += g4.wt[k] * ke.G2 * std::pow(ti - s, Hm) * std::pow(ti, Hm) *
                       ke.series_s2(s / ti);
            }
            const double half_mid = std::pow(0.5 * dt, Hm);
            W.apply_cell0[i] =
                ke.P * half_mid * dt + half_mid * std::pow(dt, ex) / ex * acc;
        }
    }

    // construction gate: the defining identity of C_H at t = T
    {
        double out = 0.0;
        for (std::size_t j = 0; j < n; ++j)
            out += W.apply_at(n, j) * ch * std::pow(grid.midpoint(j), -Hm);
        if (std::abs(out - grid.T) > 1e-2 * grid.T)
            throw std::runtime_error("build_weights: C_H identity gate violated");
    }
    return W;
}

/// (K_H f)(t_i) with f given at cell midpoints. out[0] = 0.
inline GridFunction apply_kh(const std::vector<double>& f_mid, const KernelWeights& W) {
    const std::size_t n = W.grid.n;
    if (f_mid.size() != n) throw std::invalid_argument("apply_kh: midpoint sample size mismatch");
    std::vector<double> out(n + 1, 0.0);
    for (std::size_t i = 1; i <= n; ++i) {
        const double* row = W.row(i);
        double acc = W.apply_cell0[i] * f_mid[0];
        for (std::size_t j = 1; j < i; ++j) acc += row[j] * f_mid[j];
        out[i] = acc;
    }
    return GridFunction(W.grid, std::move(out));
}

inline GridFunction apply_kh(const std::function<double(double)>& f, const KernelWeights& W) {
    return apply_kh(sample_midpoints(W.grid, f), W);
}

/// Process-wide immutable weight cache keyed by (n, H, T).
class WeightCache {
  public:
    static std::shared_ptr<const KernelWeights> get(const TimeGrid& grid, double H) {
        static WeightCache instance;
        const Key key{grid.n, H, grid.T};
        {
            std::lock_guard<std::mutex> lock(instance.mutex_);
            auto it = instance.map_.find(key);
            if (it != instance.map_.end()) return it->second;
        }
        auto built = std::make_shared<const KernelWeights>(build_weights(grid, H));
        std::lock_guard<std::mutex> lock(instance.mutex_);
        auto [it, inserted] = instance.map_.emplace(key, built);
        return it->second;
    }

  private:
    using Key = std::tuple<std::size_t, double, double>;
    std::mutex mutex_;
    std::map<Key, std::shared_ptr<const KernelWeights>> map_;
};

}  // namespace fbmlab
