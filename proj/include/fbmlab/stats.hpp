#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

#include "parallel.hpp"

namespace fbmlab {

struct MeanSe {
    double value = 0.0;
    double std_error = 0.0;
    std::size_t count = 0;
};

/// Welford accumulator for a single stream.
class RunningStats {
  public:
    void add(double x) {
        ++n_;
        const double d = x - mean_;
        mean_ += d / static_cast<double>(n_);
        m2_ += d * (x - mean_);
    }
    std::size_t count() const { return n_; }
    double mean() const { return mean_; }
    double variance() const { return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0; }
    double std_error() const {
        return n_ > 1 ? std::sqrt(variance() / static_cast<double>(n_)) : 0.0;
    }
    MeanSe summary() const { return {mean(), std_error(), count()}; }

  private:
    std::size_t n_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

namespace detail {
inline constexpr std::size_t ensemble_chunk = 4096;
}

/// Runs `worker(path_index, out_slots)` over paths [0, paths) and returns per-slot
/// mean / standard error. Paths are grouped into fixed-size chunks whose partial
/// sums are reduced in chunk order, so the result is bitwise independent of the
/// number of worker threads.
inline std::vector<MeanSe> ensemble_means(
    std::size_t paths, std::size_t slots,
    const std::function<void(std::size_t, std::vector<double>&)>& worker) {
    if (paths == 0) throw std::invalid_argument("ensemble_means: need at least one path");
    const std::size_t chunk = detail::ensemble_chunk;
    const std::size_t chunks = (paths + chunk - 1) / chunk;
    std::vector<double> sums(chunks * slots, 0.0), sqs(chunks * slots, 0.0);
    parallel_chunks(chunks, [&](std::size_t c) {
        std::vector<double> out(slots);
        const std::size_t begin = c * chunk;
        const std::size_t end = std::min(paths, begin + chunk);
        double* sum_row = sums.data() + c * slots;
        double* sq_row = sqs.data() + c * slots;
        for (std::size_t p = begin; p < end; ++p) {
            std::fill(out.begin(), out.end(), 0.0);
            worker(p, out);
            for (std::size_t s = 0; s < slots; ++s) {
                sum_row[s] += out[s];
                sq_row[s] += out[s] * out[s];
            }
        }
    });
    std::vector<MeanSe> res(slots);
    for (std::size_t s = 0; s < slots; ++s) {
        double sum = 0.0, sq = 0.0;
        for (std::size_t c = 0; c < chunks; ++c) {
            sum += sums[c * slots + s];
            sq += sqs[c * slots + s];
        }
        const double np = static_cast<double>(paths);
        const double mean = sum / np;
        const double var = paths > 1 ? std::max(0.0, (sq - np * mean * mean) / (np - 1.0)) : 0.0;
        res[s] = {mean, paths > 1 ? std::sqrt(var / np) : 0.0, paths};
    }
    return res;
}

/// Two-sample Kolmogorov-Smirnov statistic (inputs need not be sorted).
inline double ks_statistic(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("ks_statistic: empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
    std::size_t ia = 0, ib = 0;
    double d = 0.0;
    while (ia < a.size() && ib < b.size()) {
        const double x = std::min(a[ia], b[ib]);
        while (ia < a.size() && a[ia] <= x) ++ia;
        while (ib < b.size() && b[ib] <= x) ++ib;
        d = std::max(d, std::abs(static_cast<double>(ia) / na - static_cast<double>(ib) / nb));
    }
    return d;
}

/// Critical value of the two-sample KS test; alpha in {0.05, 0.01, 0.001}.
inline double ks_critical(std::size_t n1, std::size_t n2, double alpha) {
    double c;
    if (alpha <= 0.001) c = 1.94947;
    else if (alpha <= 0.01) c = 1.62762;
    else c = 1.35810;
    const double m = static_cast<double>(n1), n = static_cast<double>(n2);
    return c * std::sqrt((m + n) / (m * n));
}

}  // namespace fbmlab
