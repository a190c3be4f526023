#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "grid.hpp"
#include "kernel.hpp"
#include "rng.hpp"

namespace fbmlab {

/// Gaussian increments dW_j ~ N(0, dt), reproducible from (seed, path_index).
struct WienerIncrements {
    TimeGrid grid;
    std::uint64_t seed = 0;
    std::uint64_t path_index = 0;
    std::vector<double> dw;
};

inline WienerIncrements sample_wiener(const TimeGrid& grid, std::uint64_t seed,
                                      std::uint64_t path_index) {
    WienerIncrements w;
    w.grid = grid;
    w.seed = seed;
    w.path_index = path_index;
    w.dw.resize(grid.n);
    const double sqdt = std::sqrt(grid.dt());
    for (std::size_t j = 0; j < grid.n; ++j)
        w.dw[j] = sqdt * normal_draw(seed, path_index, j, 0);
    return w;
}

struct FbmPath {
    TimeGrid grid;
    std::vector<double> values;  // n+1, values[0] = 0
};

/// Volterra synthesis B_i = sum_{j<i} (w[i][j]/dt) dW_j.
inline FbmPath fbm_from_wiener(const WienerIncrements& inc, const KernelWeights& W) {
    if (inc.grid != W.grid) throw std::invalid_argument("fbm_from_wiener: grid mismatch");
    const std::size_t n = W.grid.n;
    const double inv_dt = 1.0 / W.grid.dt();
    std::vector<double> scaled(n);
    for (std::size_t j = 0; j < n; ++j) scaled[j] = inc.dw[j] * inv_dt;
    FbmPath path;
    path.grid = W.grid;
    path.values.assign(n + 1, 0.0);
    for (std::size_t i = 1; i <= n; ++i) {
        const double* row = W.row(i);
        double acc = 0.0;
        for (std::size_t j = 0; j < i; ++j) acc += row[j] * scaled[j];
        path.values[i] = acc;
    }
    return path;
}

/// Single node of the synthesis, for estimators that only need B at one time.
inline double fbm_node_from_wiener(const WienerIncrements& inc, const KernelWeights& W,
                                   std::size_t i) {
    const double inv_dt = 1.0 / W.grid.dt();
    const double* row = W.row(i);
    double acc = 0.0;
    for (std::size_t j = 0; j < i; ++j) acc += row[j] * inc.dw[j];
    return acc * inv_dt;
}

/// Dense Cholesky factor of the exact fBm covariance on grid nodes 1..n.
/// Validation-only oracle; capped at n = 2048.
struct FbmCholesky {
    TimeGrid grid;
    double H = 0.5;
    std::vector<double> L;  // packed lower-triangular, n x n over nodes 1..n

    static FbmCholesky make(const TimeGrid& grid, double H) {
        const std::size_t n = grid.n;
        if (n > 2048) throw std::invalid_argument("FbmCholesky: n capped at 2048");
        FbmCholesky f;
        f.grid = grid;
        f.H = H;
        f.L.assign(n * (n + 1) / 2, 0.0);
        std::vector<double> R(n * n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k <= i; ++k)
                R[i * n + k] = covariance_rh(grid.node(i + 1), grid.node(k + 1), H);
        double jitter = 0.0;
        for (int attempt = 0; attempt < 4; ++attempt) {
            if (f.factorize(R, jitter)) {
                if (attempt > 0) f.jitter_used = jitter;
                return f;
            }
            jitter = (jitter == 0.0) ? 1e-14 : jitter * 100.0;
        }
        throw std::runtime_error("FbmCholesky: covariance not positive definite after jitter retries");
    }

    double at(std::size_t i, std::size_t k) const { return L[i * (i + 1) / 2 + k]; }
    double jitter_used = 0.0;

  private:
    bool factorize(const std::vector<double>& R, double jitter) {
        const std::size_t n = grid.n;
        std::fill(L.begin(), L.end(), 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t k = 0; k <= i; ++k) {
                double sum = R[i * n + k];
                if (i == k) sum += jitter * (1.0 + R[i * n + i]);
                for (std::size_t m = 0; m < k; ++m) sum -= at(i, m) * at(k, m);
                if (i == k) {
                    if (sum <= 0.0) return false;
                    L[i * (i + 1) / 2 + k] = std::sqrt(sum);
                } else {
                    L[i * (i + 1) / 2 + k] = sum / at(k, k);
                }
            }
        }
        return true;
    }
};

/// Exact finite-dimensional fBm sample via the Cholesky factor. Uses an RNG
/// stream disjoint from sample_wiener so the two constructions stay independent.
inline FbmPath fbm_cholesky_oracle(const FbmCholesky& chol, std::uint64_t seed,
                                   std::uint64_t path_index) {
    const std::size_t n = chol.grid.n;
    std::vector<double> z(n);
    for (std::size_t j = 0; j < n; ++j) z[j] = normal_draw(seed, path_index, j, 1);
    FbmPath path;
    path.grid = chol.grid;
    path.values.assign(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (std::size_t k = 0; k <= i; ++k) acc += chol.at(i, k) * z[k];
        path.values[i + 1] = acc;
    }
    return path;
}

}  // namespace fbmlab
