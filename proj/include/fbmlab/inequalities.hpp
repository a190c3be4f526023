#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "check.hpp"
#include "kernel.hpp"
#include "malliavin.hpp"
#include "model.hpp"
#include "noise.hpp"
#include "solver.hpp"
#include "stats.hpp"

namespace fbmlab {

/// Explicit constants of the Harnack-type bounds.
struct HarnackConstants {
    double T = 1.0, H = 0.5;
    double Kd = 0.0;    // bound on |db|
    double Ksig = 1.0;  // bound on |sigma^{-1}|
    double ch = 1.0;
    double c_grad = 0.0;   // 2 Ksig^2 (Kd^2 T / 3 + C_H^2 / ((2-2H) T^{2H}))
    double bracket = 0.0;  // C_H^2/((2-2H)T^{2H}) + 4 C_H Kd T^{1/2-H}/(5-2H) + Kd^2 T/3

    static HarnackConstants make(double T, double H, double Kd, double Ksig) {
        HarnackConstants c;
        c.T = T;
        c.H = H;
        c.Kd = Kd;
        c.Ksig = Ksig;
        c.ch = constant_ch(H);
        const double pow2h = std::pow(T, 2.0 * H);
        c.c_grad = 2.0 * Ksig * Ksig * (Kd * Kd * T / 3.0 + c.ch * c.ch / ((2.0 - 2.0 * H) * pow2h));
        c.bracket = c.ch * c.ch / ((2.0 - 2.0 * H) * pow2h) +
                    4.0 * c.ch * Kd * std::pow(T, 0.5 - H) / (5.0 - 2.0 * H) +
                    Kd * Kd * T / 3.0;
        return c;
    }

    double c_shift(double p) const {
        if (!(p > 1.0)) throw std::domain_error("HarnackConstants: p must exceed 1");
        return p * Ksig * Ksig / (p - 1.0) * bracket;
    }
    double c_shift_log() const { return Ksig * Ksig * bracket; }
};

namespace detail {

inline constexpr double rel_tol = 1e-2;  // one-sided slack on the certified side

inline bool one_sided_pass(double lhs, double rhs, double se) {
    return lhs <= rhs * (1.0 + rel_tol) + 3.0 * se;
}

}  // namespace detail

/// |nabla_y P_T f(x)|^2 <= C(T,K3,K4,H) |y|^2 P_T f^2(x), LHS through the
/// gradient weight on the same paths as the RHS.
inline CheckResult check_gradient_bound(const EstimatorConfig& cfg,
                                        const std::function<double(double)>& f) {
    if (!cfg.model.additive)
        throw std::invalid_argument("check_gradient_bound: requires additive noise");
    const auto W = WeightCache::get(cfg.grid(), cfg.H);
    const auto ctrl = default_control(cfg.H, cfg.T);
    const auto prefix = detail::control_prefix(ctrl, *W);
    const std::size_t n = W->grid.n;
    auto res = ensemble_means(cfg.paths, 2, [&](std::size_t p, std::vector<double>& out) {
        const auto inc = sample_wiener(W->grid, cfg.seed, p);
        const auto X = solve_volterra(cfg.model, cfg.x0, inc, *W);
        double m = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double tj = W->grid.node(j);
            m += cfg.model.inv_sigma(tj, 0.0) *
                 ((1.0 + prefix[j]) * cfg.model.db(tj, X.x[j]) -
                  ctrl.uprime(W->grid.midpoint(j))) *
                 cfg.y * inc.dw[j];
        }
        const double fx = f(X.x.back());
        out[0] = fx * m;
        out[1] = fx * fx;
    });
    const auto c = HarnackConstants::make(cfg.T, cfg.H, cfg.model.K3, cfg.model.K4);
    CheckResult r;
    r.name = "gradient-bound";
    r.lhs = res[0].value * res[0].value;
    r.rhs = c.c_grad * cfg.y * cfg.y * res[1].value;
    r.se_combined = std::hypot(2.0 * std::abs(res[0].value) * res[0].std_error,
                               c.c_grad * cfg.y * cfg.y * res[1].std_error);
    r.pass = detail::one_sided_pass(r.lhs, r.rhs, r.se_combined);
    r.details["gradient_estimate"] = res[0].value;
    r.details["c_grad"] = c.c_grad;
    return r;
}

/// (P_T f(x))^p <= P_T f^p(y) exp[p/(p-1) C |x-y|^2] with common increments
/// for the two initial points. x == y reduces to shared-sample Jensen, which
/// holds deterministically.
inline CheckResult check_harnack(const EstimatorConfig& cfg, double x, double y,
                                 const std::function<double(double)>& f, double p) {
    if (!(p > 1.0)) throw std::domain_error("check_harnack: p must exceed 1");
    if (!cfg.model.additive)
        throw std::invalid_argument("check_harnack: requires additive noise");
    const auto W = WeightCache::get(cfg.grid(), cfg.H);
    const bool same = (x == y);
    auto res = ensemble_means(cfg.paths, 2, [&](std::size_t pi, std::vector<double>& out) {
        const auto inc = sample_wiener(W->grid, cfg.seed, pi);
        const auto Xx = solve_volterra(cfg.model, x, inc, *W);
        const double fx = f(Xx.x.back());
        double fy;
        if (same) {
            fy = fx;
        } else {
            const auto Xy = solve_volterra(cfg.model, y, inc, *W);
            fy = f(Xy.x.back());
        }
        if (fx < 0.0 || fy < 0.0) throw std::domain_error("check_harnack: f must be non-negative");
        out[0] = fx;
        out[1] = std::pow(fy, p);
    });
    const auto c = HarnackConstants::make(cfg.T, cfg.H, cfg.model.K3, cfg.model.K4);
    const double d = std::abs(x - y);
    CheckResult r;
    r.name = "harnack";
    r.lhs = std::pow(res[0].value, p);
    r.rhs = res[1].value * std::exp(p / (p - 1.0) * c.c_grad * d * d);
    if (same) {
        r.exact = true;
        r.se_combined = 0.0;
        r.pass = r.lhs <= r.rhs * (1.0 + 1e-12);
    } else {
        r.se_combined =
            std::hypot(p * std::pow(res[0].value, p - 1.0) * res[0].std_error,
                       std::exp(p / (p - 1.0) * c.c_grad * d * d) * res[1].std_error);
        r.pass = detail::one_sided_pass(r.lhs, r.rhs, r.se_combined);
    }
    r.details["p"] = p;
    r.details["distance"] = d;
    r.details["c_grad"] = c.c_grad;
    return r;
}

/// P_T log f(x) <= log P_T f(y) + C |x-y|^2, f bounded away from zero.
inline CheckResult check_log_harnack(const EstimatorConfig& cfg, double x, double y,
                                     const std::function<double(double)>& f) {
    if (!cfg.model.additive)
        throw std::invalid_argument("check_log_harnack: requires additive noise");
    const auto W = WeightCache::get(cfg.grid(), cfg.H);
    const bool same = (x == y);
    auto res = ensemble_means(cfg.paths, 2, [&](std::size_t pi, std::vector<double>& out) {
        const auto inc = sample_wiener(W->grid, cfg.seed, pi);
        const auto Xx = solve_volterra(cfg.model, x, inc, *W);
        const double fx = f(Xx.x.back());
        if (!(fx > 0.0)) throw std::domain_error("check_log_harnack: f must be positive");
        double fy = fx;
        if (!same) {
            const auto Xy = solve_volterra(cfg.model, y, inc, *W);
            fy = f(Xy.x.back());
            if (!(fy > 0.0)) throw std::domain_error("check_log_harnack: f must be positive");
        }
        out[0] = std::log(fx);
        out[1] = fy;
    });
    const auto c = HarnackConstants::make(cfg.T, cfg.H, cfg.model.K3, cfg.model.K4);
    const double d = std::abs(x - y);
    CheckResult r;
    r.name = "log-harnack";
    r.lhs = res[0].value;
    r.rhs = std::log(res[1].value) + c.c_grad * d * d;
    if (same) {
        r.exact = true;
        r.pass = r.lhs <= r.rhs + 1e-12;
    } else {
        r.se_combined = std::hypot(res[0].std_error, res[1].std_error / res[1].value);
        r.pass = r.lhs <= r.rhs + 3.0 * r.se_combined + detail::rel_tol * std::abs(r.rhs);
    }
    r.details["distance"] = d;
    r.details["c_grad"] = c.c_grad;
    return r;
}

/// Shift Harnack family: (P_T f)^p <= P_T {f(y + .)}^p exp[C_shift(p) y^2] and
/// the log variant P_T log f <= log P_T f(y + .) + C_shift_log y^2. Both sides
/// use the identical terminal sample, the right side with shifted argument.
inline CheckResult check_shift_harnack(const EstimatorConfig& cfg, double shift,
                                       const std::function<double(double)>& f, double p,
                                       bool log_variant = false) {
    if (!cfg.model.additive)
        throw std::invalid_argument("check_shift_harnack: requires additive noise");
    if (!log_variant && !(p > 1.0)) throw std::domain_error("check_shift_harnack: p must exceed 1");
    const auto W = WeightCache::get(cfg.grid(), cfg.H);
    auto res = ensemble_means(cfg.paths, 2, [&](std::size_t pi, std::vector<double>& out) {
        const auto inc = sample_wiener(W->grid, cfg.seed, pi);
        const auto X = solve_volterra(cfg.model, cfg.x0, inc, *W);
        const double xt = X.x.back();
        const double fx = f(xt), fs = f(shift + xt);
        if (log_variant) {
            if (!(fx > 0.0) || !(fs > 0.0))
                throw std::domain_error("check_shift_harnack: f must be positive");
            out[0] = std::log(fx);
            out[1] = fs;
        } else {
            if (fx < 0.0 || fs < 0.0)
                throw std::domain_error("check_shift_harnack: f must be non-negative");
            out[0] = fx;
            out[1] = std::pow(fs, p);
        }
    });
    const auto c = HarnackConstants::make(cfg.T, cfg.H, cfg.model.K1, cfg.model.K2);
    CheckResult r;
    if (log_variant) {
        r.name = "shift-log-harnack";
        r.lhs = res[0].value;
        r.rhs = std::log(res[1].value) + c.c_shift_log() * shift * shift;
        if (shift == 0.0) {
            r.exact = true;
            r.pass = r.lhs <= r.rhs + 1e-12;
        } else {
            r.se_combined = std::hypot(res[0].std_error, res[1].std_error / res[1].value);
            r.pass = r.lhs <= r.rhs + 3.0 * r.se_combined + detail::rel_tol * std::abs(r.rhs);
        }
    } else {
        r.name = "shift-harnack";
        r.lhs = std::pow(res[0].value, p);
        r.rhs = res[1].value * std::exp(c.c_shift(p) * shift * shift);
        if (shift == 0.0) {
            r.exact = true;
            r.pass = r.lhs <= r.rhs * (1.0 + 1e-12);
        } else {
            r.se_combined =
                std::hypot(p * std::pow(res[0].value, p - 1.0) * res[0].std_error,
                           std::exp(c.c_shift(p) * shift * shift) * res[1].std_error);
            r.pass = detail::one_sided_pass(r.lhs, r.rhs, r.se_combined);
        }
    }
    r.details["p"] = p;
    r.details["shift"] = shift;
    return r;
}

/// Numerical continuity probe: |P_T f(x0 + r) - P_T f(x0)| under common
/// increments for a decreasing ladder of radii. The differences themselves are
/// near-deterministic under common increments; PASS means they decay
/// monotonically (up to noise) to below the 3-sigma resolution the plain
/// estimator of P_T f would have, i.e. continuity holds at statistical scale.
inline CheckResult probe_strong_feller(const EstimatorConfig& cfg,
                                       const std::function<double(double)>& f,
                                       const std::vector<double>& radii) {
    if (radii.empty()) throw std::invalid_argument("probe_strong_feller: need radii");
    const auto W = WeightCache::get(cfg.grid(), cfg.H);
    const std::size_t m = radii.size();
    auto res = ensemble_means(cfg.paths, m + 1, [&](std::size_t pi, std::vector<double>& out) {
        const auto inc = sample_wiener(W->grid, cfg.seed, pi);
        const auto X0 = solve_volterra(cfg.model, cfg.x0, inc, *W);
        const double f0 = f(X0.x.back());
        out[m] = f0;
        for (std::size_t k = 0; k < m; ++k) {
            if (radii[k] == 0.0) {
                out[k] = 0.0;
                continue;
            }
            const auto Xr = solve_volterra(cfg.model, cfg.x0 + radii[k], inc, *W);
            out[k] = f(Xr.x.back()) - f0;
        }
    });
    CheckResult r;
    r.name = "strong-feller-probe";
    const double resolution = 3.0 * res[m].std_error;
    bool decays = std::abs(res[m - 1].value) <= resolution + 1e-12;
    bool monotone = true;
    for (std::size_t k = 0; k < m; ++k) {
        if (k + 1 < m &&
            std::abs(res[k + 1].value) >
                std::abs(res[k].value) + 3.0 * (res[k].std_error + res[k + 1].std_error))
            monotone = false;
        r.details["diff_r" + std::to_string(k)] = res[k].value;
        r.details["se_r" + std::to_string(k)] = res[k].std_error;
    }
    r.lhs = std::abs(res[m - 1].value);
    r.rhs = resolution;
    r.se_combined = res[m].std_error;
    r.pass = decays && monotone;
    return r;
}

}  // namespace fbmlab
