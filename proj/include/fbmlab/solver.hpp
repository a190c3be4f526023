#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "grid.hpp"
#include "kernel.hpp"
#include "model.hpp"
#include "noise.hpp"

namespace fbmlab {

struct SolutionPath {
    TimeGrid grid;
    double x0 = 0.0;
    std::vector<double> x;  // n+1 nodes
};

namespace detail {

[[noreturn]] inline void blowup(const char* who, std::size_t step) {
    throw std::runtime_error(std::string(who) + ": non-finite state at step " +
                             std::to_string(step));
}

}  // namespace detail

/// Left-point Euler scheme for the Volterra equation
///   X_i = x0 + sum_{j<i} w[i][j] b(t_j, X_j) + sum_{j<i} (w[i][j]/dt) sigma(t_j, X_j) dW_j.
/// Adapted (Ito-consistent) coefficient evaluation; the full weight row is
/// re-summed per node, O(n^2) per path.
inline SolutionPath solve_volterra(const CoefficientModel& model, double x0,
                                   const WienerIncrements& inc, const KernelWeights& W) {
    if (inc.grid != W.grid) throw std::invalid_argument("solve_volterra: grid mismatch");
    const std::size_t n = W.grid.n;
    const double inv_dt = 1.0 / W.grid.dt();
    SolutionPath sol;
    sol.grid = W.grid;
    sol.x0 = x0;
    sol.x.assign(n + 1, 0.0);
    sol.x[0] = x0;
    std::vector<double> g(n);  // integrand against the weight row
    for (std::size_t i = 1; i <= n; ++i) {
        const std::size_t j = i - 1;
        const double tj = W.grid.node(j);
        g[j] = model.b(tj, sol.x[j]) + model.sigma(tj, sol.x[j]) * inc.dw[j] * inv_dt;
        const double* row = W.row(i);
        double acc = 0.0;
        for (std::size_t k = 0; k < i; ++k) acc += row[k] * g[k];
        sol.x[i] = x0 + acc;
        if (!std::isfinite(sol.x[i])) detail::blowup("solve_volterra", i);
    }
    return sol;
}

/// Derivative process of the flow in direction y:
///   Y_i = y + sum w[i][j] db(t_j, X_j) Y_j + sum (w[i][j]/dt) dsigma(t_j, X_j) Y_j dW_j.
/// Exactly linear in y.
inline SolutionPath solve_variational(const CoefficientModel& model, double y,
                                      const WienerIncrements& inc, const KernelWeights& W,
                                      const SolutionPath& base) {
    if (inc.grid != W.grid || base.grid != W.grid)
        throw std::invalid_argument("solve_variational: grid mismatch");
    const std::size_t n = W.grid.n;
    const double inv_dt = 1.0 / W.grid.dt();
    SolutionPath sol;
    sol.grid = W.grid;
    sol.x0 = y;
    sol.x.assign(n + 1, 0.0);
    sol.x[0] = y;
    std::vector<double> g(n);
    for (std::size_t i = 1; i <= n; ++i) {
        const std::size_t j = i - 1;
        const double tj = W.grid.node(j);
        g[j] = (model.db(tj, base.x[j]) +
                model.dsigma(tj, base.x[j]) * inc.dw[j] * inv_dt) *
               sol.x[j];
        const double* row = W.row(i);
        double acc = 0.0;
        for (std::size_t k = 0; k < i; ++k) acc += row[k] * g[k];
        sol.x[i] = y + acc;
        if (!std::isfinite(sol.x[i])) detail::blowup("solve_variational", i);
    }
    return sol;
}

/// Additive-noise coupled path X_t + (t/T) shift; exact, no re-solving needed.
inline SolutionPath solve_shifted(const CoefficientModel& model, const SolutionPath& base,
                                  double shift) {
    if (!model.additive)
        throw std::invalid_argument("solve_shifted: requires additive (state-free) sigma");
    SolutionPath out = base;
    const double T = base.grid.T;
    for (std::size_t i = 0; i < out.x.size(); ++i)
        out.x[i] += base.grid.node(i) / T * shift;
    return out;
}

/// Textbook Euler-Maruyama, the H = 1/2 reference.
inline SolutionPath euler_maruyama(const CoefficientModel& model, double x0,
                                   const WienerIncrements& inc) {
    const std::size_t n = inc.grid.n;
    const double dt = inc.grid.dt();
    SolutionPath sol;
    sol.grid = inc.grid;
    sol.x0 = x0;
    sol.x.assign(n + 1, 0.0);
    sol.x[0] = x0;
    for (std::size_t i = 1; i <= n; ++i) {
        const std::size_t j = i - 1;
        const double tj = inc.grid.node(j);
        sol.x[i] = sol.x[j] + model.b(tj, sol.x[j]) * dt + model.sigma(tj, sol.x[j]) * inc.dw[j];
        if (!std::isfinite(sol.x[i])) detail::blowup("euler_maruyama", i);
    }
    return sol;
}

}  // namespace fbmlab
