#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <stdexcept>
#include <vector>

#include "check.hpp"
#include "grid.hpp"
#include "kernel.hpp"
#include "model.hpp"
#include "noise.hpp"
#include "solver.hpp"
#include "stats.hpp"

namespace fbmlab {

struct WeightedEstimate {
    double value = 0.0;
    double std_error = 0.0;
    std::size_t paths = 0;
    double weight_second_moment = 0.0;
};

/// Deterministic control u' entering the gradient weight. Admissible when the
/// discrete normalization 1 + sum_j w[n][j] u'(m_j) vanishes within 1e-3.
struct ControlFunction {
    std::function<double(double)> uprime;
};

/// u'(t) = -(C_H / T) t^{1/2-H}; its kernel image is -t/T, so the
/// normalization holds for every H by the defining identity of C_H.
inline ControlFunction default_control(double H, double T) {
    const double ch = constant_ch(H);
    return {[ch, T, H](double t) { return -ch / T * std::pow(t, 0.5 - H); }};
}

/// Common configuration of the Monte Carlo estimators.
struct EstimatorConfig {
    CoefficientModel model;
    double x0 = 0.0;
    double y = 1.0;
    double H = 0.5;
    double T = 1.0;
    std::size_t n = 512;
    std::size_t paths = 100000;
    std::uint64_t seed = 42;

    TimeGrid grid() const { return TimeGrid(T, n); }
    void validate() const {
        if (paths < 100) throw std::invalid_argument("EstimatorConfig: need at least 100 paths");
        if (n < 2) throw std::invalid_argument("EstimatorConfig: need at least 2 grid cells");
    }
};

namespace detail {

// A_i = int_0^{t_i} K_H(t_i, r) u'(r) dr by the apply-type quadrature; A_0 = 0.
inline std::vector<double> control_prefix(const ControlFunction& ctrl, const KernelWeights& W) {
    const std::size_t n = W.grid.n;
    std::vector<double> umid(n);
    for (std::size_t j = 0; j < n; ++j) umid[j] = ctrl.uprime(W.grid.midpoint(j));
    std::vector<double> a(n + 1, 0.0);
    for (std::size_t i = 1; i <= n; ++i) {
        double acc = W.apply_cell0[i] * umid[0];
        const double* row = W.row(i);
        for (std::size_t j = 1; j < i; ++j) acc += row[j] * umid[j];
        a[i] = acc;
    }
    return a;
}

}  // namespace detail

/// Discrete normalization defect 1 + int_0^T K_H(T,r) u'(r) dr.
inline double control_normalization_defect(const ControlFunction& ctrl, const KernelWeights& W) {
    return 1.0 + detail::control_prefix(ctrl, W).back();
}

/// P_T f(x0) = E f(X_T) by plain Monte Carlo.
inline WeightedEstimate estimate_ptf(const EstimatorConfig& cfg,
                                     const std::function<double(double)>& f) {
    cfg.validate();
    const auto W = WeightCache::get(cfg.grid(), cfg.H);
    auto res = ensemble_means(cfg.paths, 1, [&](std::size_t p, std::vector<double>& out) {
        const auto inc = sample_wiener(W->grid, cfg.seed, p);
        const auto X = solve_volterra(cfg.model, cfg.x0, inc, *W);
        out[0] = f(X.x.back());
    });
    return {res[0].value, res[0].std_error, cfg.paths, 0.0};
}

namespace detail {

struct WeightedRun {
    MeanSe fM;      // E [ f(X_T) M_T ]
    MeanSe M;       // E M_T  (centering diagnostic)
    MeanSe M2;      // E M_T^2
    MeanSe fval;    // E f(X_T)
};

// Shared engine: M_T = sum_j coef_j(X_j) dW_j with an adapted coefficient.
inline WeightedRun run_weighted(const EstimatorConfig& cfg,
                                const std::function<double(double)>& f,
                                const KernelWeights& W,
                                const std::function<double(std::size_t, double)>& coef) {
    const std::size_t n = W.grid.n;
    auto res = ensemble_means(cfg.paths, 4, [&](std::size_t p, std::vector<double>& out) {
        const auto inc = sample_wiener(W.grid, cfg.seed, p);
        const auto X = solve_volterra(cfg.model, cfg.x0, inc, W);
        double m = 0.0;
        for (std::size_t j = 0; j < n; ++j) m += coef(j, X.x[j]) * inc.dw[j];
        const double fx = f(X.x.back());
        out[0] = fx * m;
        out[1] = m;
        out[2] = m * m;
        out[3] = fx;
    });
    return {res[0], res[1], res[2], res[3]};
}

}  // namespace detail

/// Gradient of the semigroup, nabla_y P_T f(x0) = E[f(X_T) M_T], with the
/// stochastic-integral weight built from an admissible control:
///   M_T = int_0^T sigma(s)^{-1} ((1 + int_0^s K_H(s,r) u'(r) dr) db(s, X_s) - u'(s)) y dW_s.
inline WeightedEstimate bismut_gradient(const EstimatorConfig& cfg,
                                        const std::function<double(double)>& f,
                                        const ControlFunction& ctrl) {
    if (!cfg.model.additive)
        throw std::invalid_argument("bismut_gradient: requires additive noise");
    cfg.validate();
    const auto W = WeightCache::get(cfg.grid(), cfg.H);
    const double defect = control_normalization_defect(ctrl, *W);
    if (std::abs(defect) > 1e-3)
        throw std::invalid_argument("bismut_gradient: control normalization violated, defect " +
                                    std::to_string(defect));
    const auto prefix = detail::control_prefix(ctrl, *W);
    const std::size_t n = W->grid.n;
    std::vector<double> umid(n), invsig(n), tnode(n);
    for (std::size_t j = 0; j < n; ++j) {
        umid[j] = ctrl.uprime(W->grid.midpoint(j));
        tnode[j] = W->grid.node(j);
        invsig[j] = cfg.model.inv_sigma(tnode[j], 0.0);
    }
    const double y = cfg.y;
    auto run = detail::run_weighted(
        cfg, f, *W, [&](std::size_t j, double xj) {
            return invsig[j] * ((1.0 + prefix[j]) * cfg.model.db(tnode[j], xj) - umid[j]) * y;
        });
    return {run.fM.value, run.fM.std_error, cfg.paths, run.M2.value};
}

inline WeightedEstimate bismut_gradient(const EstimatorConfig& cfg,
                                        const std::function<double(double)>& f) {
    return bismut_gradient(cfg, f, default_control(cfg.H, cfg.T));
}

/// Integration-by-parts (shift) weight: P_T(nabla_y f)(x0) = E[f(X_T) M_T] with
///   M_T = int_0^T sigma(s)^{-1} (C_H s^{1/2-H} - s db(s, X_s)) (y/T) dW_s.
inline WeightedEstimate ibp_shift_gradient(const EstimatorConfig& cfg,
                                           const std::function<double(double)>& f) {
    if (!cfg.model.additive)
        throw std::invalid_argument("ibp_shift_gradient: requires additive noise");
    cfg.validate();
    const auto W = WeightCache::get(cfg.grid(), cfg.H);
    const std::size_t n = W->grid.n;
    const double ch = constant_ch(cfg.H);
    std::vector<double> smid(n), invsig(n), tnode(n);
    for (std::size_t j = 0; j < n; ++j) {
        smid[j] = ch * std::pow(W->grid.midpoint(j), 0.5 - cfg.H);
        tnode[j] = W->grid.node(j);
        invsig[j] = cfg.model.inv_sigma(tnode[j], 0.0);
    }
    const double y_over_t = cfg.y / cfg.T;
    auto run = detail::run_weighted(
        cfg, f, *W, [&](std::size_t j, double xj) {
            return invsig[j] * (smid[j] - tnode[j] * cfg.model.db(tnode[j], xj)) * y_over_t;
        });
    return {run.fM.value, run.fM.std_error, cfg.paths, run.M2.value};
}

/// Entropy form of the gradient bound, two variants:
///  - "shift":    |P_T(nabla_y f)| <= a * Ent + (K2^2 y^2 / a) * bracket * P_T f
///  - "gradient": |nabla_y P_T f|  <= a * Ent + (C(T,K3,K4,H) / a) * y^2 * P_T f
/// where Ent = P_T(f log f) - (P_T f) log(P_T f) and bracket is the explicit
/// constant of the shift-Harnack family.
inline CheckResult entropy_gradient_bound_check(const EstimatorConfig& cfg,
                                                const std::function<double(double)>& f,
                                                double alpha,
                                                const std::string& variant = "gradient") {
    if (!(alpha > 0.0)) throw std::domain_error("entropy_gradient_bound_check: alpha must be > 0");
    if (!cfg.model.additive)
        throw std::invalid_argument("entropy_gradient_bound_check: requires additive noise");
    const auto W = WeightCache::get(cfg.grid(), cfg.H);
    const std::size_t n = W->grid.n;
    const double ch = constant_ch(cfg.H);
    const double H = cfg.H, T = cfg.T;

    std::vector<double> coef_static(n), tnode(n);
    const bool gradient_variant = (variant == "gradient");
    const auto ctrl = default_control(H, T);
    const auto prefix = detail::control_prefix(ctrl, *W);
    for (std::size_t j = 0; j < n; ++j) tnode[j] = W->grid.node(j);

    auto res = ensemble_means(cfg.paths, 4, [&](std::size_t p, std::vector<double>& out) {
        const auto inc = sample_wiener(W->grid, cfg.seed, p);
        const auto X = solve_volterra(cfg.model, cfg.x0, inc, *W);
        double m = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double invs = cfg.model.inv_sigma(tnode[j], 0.0);
            double c;
            if (gradient_variant) {
                c = invs * ((1.0 + prefix[j]) * cfg.model.db(tnode[j], X.x[j]) -
                            ctrl.uprime(W->grid.midpoint(j))) * cfg.y;
            } else {
                c = invs * (ch * std::pow(W->grid.midpoint(j), 0.5 - H) -
                            tnode[j] * cfg.model.db(tnode[j], X.x[j])) * (cfg.y / T);
            }
            m += c * inc.dw[j];
        }
        const double fx = f(X.x.back());
        if (!(fx > 0.0))
            throw std::domain_error("entropy_gradient_bound_check: f must be strictly positive");
        out[0] = fx * m;
        out[1] = fx;
        out[2] = fx * std::log(fx);
        out[3] = m * m;
    });

    const double mean_f = res[1].value;
    const double entropy = res[2].value - mean_f * std::log(mean_f);
    const double kd = gradient_variant ? cfg.model.K3 : cfg.model.K1;
    const double ks = gradient_variant ? cfg.model.K4 : cfg.model.K2;
    const double pow2h = std::pow(T, 2.0 * H);
    double constant;
    if (gradient_variant) {
        constant = 2.0 * ks * ks * (kd * kd * T / 3.0 + ch * ch / ((2.0 - 2.0 * H) * pow2h));
    } else {
        const double bracket = ch * ch / ((2.0 - 2.0 * H) * pow2h) +
                               4.0 * ch * kd * std::pow(T, 0.5 - H) / (5.0 - 2.0 * H) +
                               kd * kd * T / 3.0;
        constant = ks * ks * bracket;
    }
    CheckResult r;
    r.name = gradient_variant ? "entropy-gradient-bound" : "entropy-shift-bound";
    r.lhs = std::abs(res[0].value);
    r.rhs = alpha * entropy + constant / alpha * cfg.y * cfg.y * mean_f;
    const double se_ent = std::hypot(res[2].std_error,
                                     (std::abs(std::log(mean_f)) + 1.0) * res[1].std_error);
    r.se_combined = std::hypot(res[0].std_error,
                               std::hypot(alpha * se_ent,
                                          constant / alpha * cfg.y * cfg.y * res[1].std_error));
    r.pass = r.lhs <= r.rhs + 3.0 * r.se_combined;
    r.details["entropy_term"] = entropy;
    r.details["constant"] = constant;
    r.details["mean_f"] = mean_f;
    r.details["weight_second_moment"] = res[3].value;
    return r;
}

}  // namespace fbmlab
