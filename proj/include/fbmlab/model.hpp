#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace fbmlab {

/// Drift / diffusion pair with spatial derivatives and the bound constants the
/// inequality constants are assembled from: K1 (and K3) bound |db|, K2 (and K4)
/// bound |sigma^{-1}| from above, K5 from below, K6 is the joint Lipschitz
/// constant of (b, sigma).
struct CoefficientModel {
    std::string name = "custom";
    std::function<double(double, double)> b;
    std::function<double(double, double)> db;
    std::function<double(double, double)> sigma;
    std::function<double(double, double)> dsigma;
    bool additive = true;  // sigma independent of state

    double K1 = 0.0, K2 = 1.0, K3 = 0.0, K4 = 1.0, K5 = 1.0, K6 = 0.0;
    double sigma_sup = 1.0;  // ||sigma||_inf on the relevant range

    double inv_sigma(double t, double x) const {
        const double s = sigma(t, x);
        if (s == 0.0) throw std::domain_error("CoefficientModel: sigma vanishes");
        return 1.0 / s;
    }
};

inline CoefficientModel model_zero_drift(double sigma0 = 1.0) {
    CoefficientModel m;
    m.name = "zero";
    m.b = [](double, double) { return 0.0; };
    m.db = [](double, double) { return 0.0; };
    m.sigma = [sigma0](double, double) { return sigma0; };
    m.dsigma = [](double, double) { return 0.0; };
    m.additive = true;
    m.K1 = m.K3 = 0.0;
    m.K2 = m.K4 = m.K5 = 1.0 / std::abs(sigma0);
    m.K6 = 0.0;
    m.sigma_sup = std::abs(sigma0);
    return m;
}

/// b(t,x) = kappa x, additive noise.
inline CoefficientModel model_linear(double kappa, double sigma0 = 1.0) {
    CoefficientModel m;
    m.name = "linear";
    m.b = [kappa](double, double x) { return kappa * x; };
    m.db = [kappa](double, double) { return kappa; };
    m.sigma = [sigma0](double, double) { return sigma0; };
    m.dsigma = [](double, double) { return 0.0; };
    m.additive = true;
    m.K1 = m.K3 = std::abs(kappa);
    m.K2 = m.K4 = m.K5 = 1.0 / std::abs(sigma0);
    m.K6 = std::abs(kappa);
    m.sigma_sup = std::abs(sigma0);
    return m;
}

/// Ornstein-Uhlenbeck style mean reversion b(t,x) = -theta x.
inline CoefficientModel model_ou(double theta, double sigma0 = 1.0) {
    CoefficientModel m = model_linear(-theta, sigma0);
    m.name = "ou";
    return m;
}

/// Bounded nonlinear drift b(t,x) = amp * sin(x), additive noise.
inline CoefficientModel model_trig(double amp, double sigma0 = 1.0) {
    CoefficientModel m;
    m.name = "trig";
    m.b = [amp](double, double x) { return amp * std::sin(x); };
    m.db = [amp](double, double x) { return amp * std::cos(x); };
    m.sigma = [sigma0](double, double) { return sigma0; };
    m.dsigma = [](double, double) { return 0.0; };
    m.additive = true;
    m.K1 = m.K3 = std::abs(amp);
    m.K2 = m.K4 = m.K5 = 1.0 / std::abs(sigma0);
    m.K6 = std::abs(amp);
    m.sigma_sup = std::abs(sigma0);
    return m;
}

/// State-dependent diffusion for the Brownian-degeneracy comparisons and the
/// transport coupling (H3 setting).
inline CoefficientModel model_multiplicative(double kappa, double s0, double s1) {
    CoefficientModel m;
    m.name = "mult";
    m.b = [kappa](double, double x) { return kappa * std::sin(x); };
    m.db = [kappa](double, double x) { return kappa * std::cos(x); };
    m.sigma = [s0, s1](double, double x) { return s0 + s1 * std::cos(x); };
    m.dsigma = [s1](double, double x) { return -s1 * std::sin(x); };
    m.additive = false;
    m.K1 = m.K3 = std::abs(kappa);
    const double smin = std::abs(s0) - std::abs(s1);
    if (smin <= 0.0) throw std::invalid_argument("model_multiplicative: sigma can vanish");
    m.K2 = m.K4 = 1.0 / smin;
    m.K5 = 1.0 / (std::abs(s0) + std::abs(s1));
    m.K6 = std::abs(kappa) + std::abs(s1);
    m.sigma_sup = std::abs(s0) + std::abs(s1);
    return m;
}

/// Drift tabulated against the state variable, piecewise linear, constant in
/// time; derivative from segment slopes.
inline CoefficientModel model_from_table(std::vector<double> xs, std::vector<double> bs,
                                         double sigma0 = 1.0) {
    if (xs.size() < 2 || xs.size() != bs.size())
        throw std::invalid_argument("model_from_table: need matching x/b tables, length >= 2");
    for (std::size_t i = 1; i < xs.size(); ++i)
        if (!(xs[i] > xs[i - 1]))
            throw std::invalid_argument("model_from_table: x table must be increasing");
    auto lookup = [xs, bs](double x) -> std::pair<double, double> {
        std::size_t lo = 0, hi = xs.size() - 1;
        if (x <= xs.front()) lo = 0;
        else if (x >= xs[hi - 1]) lo = hi - 1;
        else {
            while (hi - lo > 1) {
                const std::size_t mid = (lo + hi) / 2;
                (xs[mid] <= x ? lo : hi) = mid;
            }
        }
        const double slope = (bs[lo + 1] - bs[lo]) / (xs[lo + 1] - xs[lo]);
        return {bs[lo] + slope * (x - xs[lo]), slope};
    };
    CoefficientModel m;
    m.name = "table";
    m.b = [lookup](double, double x) { return lookup(x).first; };
    m.db = [lookup](double, double x) { return lookup(x).second; };
    m.sigma = [sigma0](double, double) { return sigma0; };
    m.dsigma = [](double, double) { return 0.0; };
    m.additive = true;
    double kmax = 0.0;
    for (std::size_t i = 1; i < xs.size(); ++i)
        kmax = std::max(kmax, std::abs((bs[i] - bs[i - 1]) / (xs[i] - xs[i - 1])));
    m.K1 = m.K3 = m.K6 = kmax;
    m.K2 = m.K4 = m.K5 = 1.0 / std::abs(sigma0);
    m.sigma_sup = std::abs(sigma0);
    return m;
}

/// Bounded observables selectable from the command line.
struct Observable {
    std::string name;
    std::function<double(double)> f;
    std::function<double(double)> df;
};

inline Observable make_observable(const std::string& name) {
    if (name == "id") return {"id", [](double z) { return z; }, [](double) { return 1.0; }};
    if (name == "square")
        return {"square", [](double z) { return z * z; }, [](double z) { return 2.0 * z; }};
    if (name == "sin")
        return {"sin", [](double z) { return std::sin(z); }, [](double z) { return std::cos(z); }};
    if (name == "exp-clamped") {
        return {"exp-clamped",
                [](double z) { return std::exp(std::min(z, 5.0)); },
                [](double z) { return z < 5.0 ? std::exp(z) : 0.0; }};
    }
    throw std::invalid_argument("unknown observable: " + name);
}

}  // namespace fbmlab
