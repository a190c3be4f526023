#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

namespace fbmlab {

/// Uniform partition of [0,T] with n cells and n+1 nodes t_i = i*T/n.
struct TimeGrid {
    double T = 1.0;
    std::size_t n = 1;

    TimeGrid() = default;
    TimeGrid(double horizon, std::size_t cells) : T(horizon), n(cells) {
        if (!(T > 0.0)) throw std::invalid_argument("TimeGrid: T must be positive");
        if (n < 1) throw std::invalid_argument("TimeGrid: need at least one cell");
    }

    double dt() const { return T / static_cast<double>(n); }
    double node(std::size_t i) const { return T * static_cast<double>(i) / static_cast<double>(n); }
    double midpoint(std::size_t j) const {
        return T * (static_cast<double>(j) + 0.5) / static_cast<double>(n);
    }

    bool operator==(const TimeGrid& o) const { return n == o.n && T == o.T; }
    bool operator!=(const TimeGrid& o) const { return !(*this == o); }
};

/// Function known at grid nodes; the companion of the fractional-calculus
/// operators, which interpolate piecewise-linearly between nodes.
struct GridFunction {
    TimeGrid grid;
    std::vector<double> values;  // size n+1

    GridFunction() = default;
    GridFunction(TimeGrid g, std::vector<double> v) : grid(g), values(std::move(v)) {
        if (values.size() != grid.n + 1)
            throw std::invalid_argument("GridFunction: values size must equal node count");
        if (!std::isfinite(values[0]))
            throw std::invalid_argument("GridFunction: value at t=0 must be finite");
    }

    static GridFunction from_nodes(const TimeGrid& g, const std::function<double(double)>& f) {
        std::vector<double> v(g.n + 1);
        for (std::size_t i = 0; i <= g.n; ++i) v[i] = f(g.node(i));
        return GridFunction(g, std::move(v));
    }

    double& operator[](std::size_t i) { return values[i]; }
    double operator[](std::size_t i) const { return values[i]; }
    std::size_t size() const { return values.size(); }
};

/// Samples of a function at cell midpoints, the abscissas used by the Volterra
/// quadrature. Kept separate from GridFunction: midpoints avoid the t=0 node,
/// where several integrands of interest are singular.
inline std::vector<double> sample_midpoints(const TimeGrid& g,
                                            const std::function<double(double)>& f) {
    std::vector<double> v(g.n);
    for (std::size_t j = 0; j < g.n; ++j) v[j] = f(g.midpoint(j));
    return v;
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) throw std::invalid_argument("max_abs_diff: size mismatch");
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace fbmlab
