#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "fraccalc.hpp"
#include "inequalities.hpp"
#include "kernel.hpp"
#include "malliavin.hpp"
#include "model.hpp"
#include "noise.hpp"
#include "report.hpp"
#include "solver.hpp"
#include "stats.hpp"
#include "transport.hpp"

namespace fbmlab {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    double seconds = 0.0;
    std::string detail;
    std::vector<double> numbers;  // payload folded into the determinism hash
};

struct AcceptanceOptions {
    std::uint64_t seed = 42;
    double paths_scale = 1.0;      // scales every Monte Carlo path count
    bool run_determinism = true;   // criterion 10 re-runs the suite and compares hashes
    std::ostream* log = nullptr;   // per-criterion lines as they complete
};

namespace acceptance_detail {

using clock = std::chrono::steady_clock;

inline std::size_t scaled(std::size_t paths, double scale) {
    const auto p = static_cast<std::size_t>(static_cast<double>(paths) * scale);
    return std::max<std::size_t>(p, 200);
}

inline void emit(const AcceptanceOptions& opt, const CriterionResult& r) {
    if (!opt.log) return;
    std::ostringstream line;
    line << "[" << r.id << "] " << r.name << ": " << (r.pass ? "PASS" : "FAIL") << " ("
         << r.detail << ") [" << r.seconds << "s]";
    *opt.log << line.str() << std::endl;
}

struct Timer {
    clock::time_point t0 = clock::now();
    double seconds() const {
        return std::chrono::duration<double>(clock::now() - t0).count();
    }
};

// ---- criterion 1: kernel identity --------------------------------------
inline CriterionResult crit_kernel_identity(const AcceptanceOptions&) {
    Timer timer;
    CriterionResult r;
    r.id = 1;
    r.name = "kernel-identity K_H(C_H s^{1/2-H}) = t";
    const std::size_t n = 2000;
    double worst = 0.0;
    for (double H : {0.25, 0.5, 0.75}) {
        const auto W = WeightCache::get(TimeGrid(1.0, n), H);
        const double ch = constant_ch(H);
        const auto out = apply_kh(
            [&](double s) { return ch * std::pow(s, 0.5 - H); }, *W);
        double err = 0.0;
        for (std::size_t i = 1; i <= n; ++i)
            err = std::max(err, std::abs(out.values[i] - W->grid.node(i)));
        worst = std::max(worst, err);
        r.numbers.push_back(err);
    }
    r.seconds = timer.seconds();
    r.pass = worst <= 1e-3 && r.seconds < 5.0;
    std::ostringstream d;
    d << "max_err=" << worst << " limit=1e-3";
    r.detail = d.str();
    return r;
}

// ---- criterion 2: covariance factorization ------------------------------
inline CriterionResult crit_covariance(const AcceptanceOptions& opt) {
    Timer timer;
    CriterionResult r;
    r.id = 2;
    r.name = "covariance factorization and fBm synthesis";
    const std::size_t n = 2000;
    const double H = 0.7;
    const auto W = WeightCache::get(TimeGrid(1.0, n), H);
    const double dt = W->grid.dt();
    const std::size_t probes[4] = {n / 4, n / 2, 3 * n / 4, n};

    double det_err = 0.0;
    for (std::size_t a = 0; a < 4; ++a) {
        for (std::size_t c = a; c < 4; ++c) {
            const std::size_t i = probes[a], k = probes[c];
            const std::size_t m = std::min(i, k);
            const double* ri = W->row(i);
            const double* rk = W->row(k);
            double acc = 0.0;
            for (std::size_t j = 0; j < m; ++j) acc += ri[j] * rk[j];
            acc /= dt;
            const double ref = covariance_rh(W->grid.node(i), W->grid.node(k), H);
            det_err = std::max(det_err, std::abs(acc - ref) / ref);
        }
    }
    r.numbers.push_back(det_err);

    // Monte Carlo covariance at 8 probe pairs, 3-SE windows
    const std::size_t pairs[8][2] = {{0, 0}, {1, 1}, {2, 2}, {3, 3},
                                     {0, 1}, {0, 3}, {1, 2}, {2, 3}};
    const std::size_t paths = scaled(100000, opt.paths_scale);
    auto res = ensemble_means(paths, 8, [&](std::size_t p, std::vector<double>& out) {
        const auto inc = sample_wiener(W->grid, opt.seed, p);
        double b[4];
        for (int q = 0; q < 4; ++q) b[q] = fbm_node_from_wiener(inc, *W, probes[q]);
        for (int q = 0; q < 8; ++q) out[q] = b[pairs[q][0]] * b[pairs[q][1]];
    });
    double worst_z = 0.0;
    for (int q = 0; q < 8; ++q) {
        const double ref = covariance_rh(W->grid.node(probes[pairs[q][0]]),
                                         W->grid.node(probes[pairs[q][1]]), H);
        const double z = std::abs(res[q].value - ref) / res[q].std_error;
        worst_z = std::max(worst_z, z);
        r.numbers.push_back(res[q].value);
    }
    r.seconds = timer.seconds();
    r.pass = det_err <= 1e-3 && worst_z <= 3.0 && r.seconds < 60.0;
    std::ostringstream d;
    d << "det_rel_err=" << det_err << " worst_mc_z=" << worst_z;
    r.detail = d.str();
    return r;
}

// ---- criterion 3: Brownian degeneracy -----------------------------------
inline CriterionResult crit_brownian_degeneracy(const AcceptanceOptions& opt) {
    Timer timer;
    CriterionResult r;
    r.id = 3;
    r.name = "H=1/2 solver equals Euler-Maruyama";
    const std::size_t n = 512;
    const auto W = WeightCache::get(TimeGrid(1.0, n), 0.5);
    double worst = 0.0;
    int model_idx = 0;
    for (const auto& model :
         {model_linear(0.5, 0.8), model_multiplicative(0.8, 1.0, 0.3)}) {
        const auto inc = sample_wiener(W->grid, opt.seed, 1000 + model_idx);
        const auto a = solve_volterra(model, 0.1, inc, *W);
        const auto b = euler_maruyama(model, 0.1, inc);
        const double err = max_abs_diff(a.x, b.x);
        worst = std::max(worst, err);
        r.numbers.push_back(err);
        ++model_idx;
    }
    r.seconds = timer.seconds();
    r.pass = worst <= 1e-12 && r.seconds < 5.0;
    std::ostringstream d;
    d << "max_node_err=" << worst << " limit=1e-12";
    r.detail = d.str();
    return r;
}

// ---- criterion 4: gradient oracle triangle ------------------------------
inline CriterionResult crit_oracle_triangle(const AcceptanceOptions& opt) {
    Timer timer;
    CriterionResult r;
    r.id = 4;
    r.name = "gradient weight vs variational vs finite difference";
    const std::size_t n = 512;
    const std::size_t paths = scaled(100000, opt.paths_scale);
    const double x0 = 0.3, y = 1.0, T = 1.0, eps = 1e-3;
    const auto model = model_linear(0.5, 1.0);
    bool ok = true;
    std::ostringstream d;
    for (double H : {0.5, 0.7}) {
        const auto W = WeightCache::get(TimeGrid(T, n), H);
        const auto ctrl = default_control(H, T);
        const auto prefix = detail::control_prefix(ctrl, *W);
        std::vector<double> coef(n);
        for (std::size_t j = 0; j < n; ++j) {
            const double tj = W->grid.node(j);
            coef[j] = model.inv_sigma(tj, 0.0) *
                      ((1.0 + prefix[j]) * 0.5 - ctrl.uprime(W->grid.midpoint(j))) * y;
        }
        // slots: 0 fM_id, 1 fM_sin, 2 var_id, 3 var_sin, 4 fd_id, 5 fd_sin
        auto res = ensemble_means(paths, 6, [&](std::size_t p, std::vector<double>& out) {
            const auto inc = sample_wiener(W->grid, opt.seed, p);
            const auto X = solve_volterra(model, x0, inc, *W);
            const auto Y = solve_variational(model, y, inc, *W, X);
            const auto Xp = solve_volterra(model, x0 + eps, inc, *W);
            const auto Xm = solve_volterra(model, x0 - eps, inc, *W);
            double m = 0.0;
            for (std::size_t j = 0; j < n; ++j) m += coef[j] * inc.dw[j];
            const double xt = X.x.back(), yt = Y.x.back();
            out[0] = xt * m;
            out[1] = std::sin(xt) * m;
            out[2] = yt;  // f' = 1 for id
            out[3] = std::cos(xt) * yt;
            out[4] = (Xp.x.back() - Xm.x.back()) / (2.0 * eps);
            out[5] = (std::sin(Xp.x.back()) - std::sin(Xm.x.back())) / (2.0 * eps);
        });
        for (int f = 0; f < 2; ++f) {
            const MeanSe est[3] = {res[f], res[2 + f], res[4 + f]};
            for (int a = 0; a < 3; ++a) {
                for (int b = a + 1; b < 3; ++b) {
                    const double gap = std::abs(est[a].value - est[b].value);
                    // round-off floor covers the degenerate pairs whose
                    // common-noise variance vanishes identically
                    const double window =
                        3.0 * std::hypot(est[a].std_error, est[b].std_error) +
                        1e-9 * (1.0 + std::abs(est[a].value) + std::abs(est[b].value));
                    if (gap > window) ok = false;
                }
                r.numbers.push_back(est[a].value);
            }
        }
        d << "H=" << H << " id(" << res[0].value << "," << res[2].value << ","
          << res[4].value << ") sin(" << res[1].value << "," << res[3].value << ","
          << res[5].value << ") ";
    }
    r.seconds = timer.seconds();
    r.pass = ok && r.seconds < 300.0;
    r.detail = d.str();
    return r;
}

// ---- criterion 5: closed-form gradient ----------------------------------
inline CriterionResult crit_closed_form_gradient(const AcceptanceOptions& opt) {
    Timer timer;
    CriterionResult r;
    r.id = 5;
    r.name = "shift gradient vs Gaussian closed form";
    const double x0 = 0.3, y = 1.0, T = 1.0;
    bool ok = true;
    std::ostringstream d;
    for (double H : {0.5, 0.7}) {
        EstimatorConfig cfg;
        cfg.model = model_zero_drift(1.0);
        cfg.x0 = x0;
        cfg.y = y;
        cfg.H = H;
        cfg.T = T;
        cfg.n = 512;
        cfg.paths = scaled(100000, opt.paths_scale);
        cfg.seed = opt.seed;
        const auto est = ibp_shift_gradient(cfg, [](double z) { return std::sin(z); });
        const double ref = std::cos(x0) * std::exp(-std::pow(T, 2.0 * H) / 2.0) * y;
        const double z = std::abs(est.value - ref) / est.std_error;
        if (z > 3.0) ok = false;
        r.numbers.push_back(est.value);
        d << "H=" << H << " est=" << est.value << " ref=" << ref << " z=" << z << " ";
    }
    r.seconds = timer.seconds();
    r.pass = ok && r.seconds < 120.0;
    r.detail = d.str();
    return r;
}

// ---- criterion 6: inequality non-violation suite ------------------------
inline CriterionResult crit_inequality_suite(const AcceptanceOptions& opt) {
    Timer timer;
    CriterionResult r;
    r.id = 6;
    r.name = "Harnack-family non-violation suite";
    const double x0 = 0.2;
    auto bump = [](double z) { return std::exp(-(z - 0.3) * (z - 0.3)); };
    auto logpos = [](double z) { return 1.0 + std::exp(-z * z); };
    auto possin = [](double z) { return 2.0 + std::sin(z); };
    int fails = 0, total = 0, exact_count = 0;
    for (double H : {0.5, 0.7}) {
        EstimatorConfig cfg;
        cfg.model = model_linear(0.5, 1.0);
        cfg.x0 = x0;
        cfg.y = 1.0;
        cfg.H = H;
        cfg.T = 1.0;
        cfg.n = 256;
        cfg.paths = scaled(20000, opt.paths_scale);
        cfg.seed = opt.seed;
        auto note = [&](const CheckResult& c) {
            ++total;
            if (!c.pass) ++fails;
            if (c.exact) ++exact_count;
            r.numbers.push_back(c.lhs);
            r.numbers.push_back(c.rhs);
        };
        for (double dist : {0.0, 0.5, 1.0}) {
            for (double p : {2.0, 4.0})
                note(check_harnack(cfg, x0, x0 - dist, bump, p));
            note(check_log_harnack(cfg, x0, x0 - dist, logpos));
            for (double p : {2.0, 4.0})
                note(check_shift_harnack(cfg, dist, bump, p));
            note(check_shift_harnack(cfg, dist, logpos, 2.0, true));
        }
        note(check_gradient_bound(cfg, [](double z) { return std::sin(z); }));
        note(entropy_gradient_bound_check(cfg, possin, 1.0, "gradient"));
        note(entropy_gradient_bound_check(cfg, possin, 1.0, "shift"));
    }
    r.seconds = timer.seconds();
    r.pass = fails == 0 && r.seconds < 600.0;
    std::ostringstream d;
    d << total - fails << "/" << total << " checks pass (" << exact_count
      << " exact Jensen cases)";
    r.detail = d.str();
    return r;
}

// ---- criterion 7: transportation-cost bounds -----------------------------
inline CriterionResult crit_t2(const AcceptanceOptions& opt) {
    Timer timer;
    CriterionResult r;
    r.id = 7;
    r.name = "quadratic transportation bounds via coupling";
    int fails = 0, total = 0;
    auto note = [&](const CheckResult& c) {
        ++total;
        if (!c.pass) ++fails;
        r.numbers.push_back(c.lhs);
        r.numbers.push_back(c.rhs);
    };
    {
        T2Config cfg;
        cfg.model = model_zero_drift(1.0);
        cfg.x0 = 0.0;
        cfg.H = 0.7;
        cfg.n = 256;
        cfg.paths = scaled(20000, opt.paths_scale);
        cfg.seed = opt.seed;
        note(check_t2(cfg, DriftShift::constant(1.0), "uniform"));
        note(check_t2(cfg, DriftShift::constant(1.0), "l2"));
    }
    for (double H : {0.6, 0.75}) {
        T2Config cfg;
        cfg.model = model_ou(1.0, 1.0);
        cfg.x0 = 0.5;
        cfg.H = H;
        cfg.n = 256;
        cfg.paths = scaled(20000, opt.paths_scale);
        cfg.seed = opt.seed;
        note(check_t2(cfg, DriftShift::constant(0.5), "uniform"));
        note(check_t2(cfg, DriftShift::constant(0.5), "l2"));
    }
    r.seconds = timer.seconds();
    r.pass = fails == 0 && r.seconds < 300.0;
    std::ostringstream d;
    d << total - fails << "/" << total << " coupling bounds hold";
    r.detail = d.str();
    return r;
}

// ---- criterion 8: maximal inequality ------------------------------------
inline CriterionResult crit_maximal(const AcceptanceOptions& opt) {
    Timer timer;
    CriterionResult r;
    r.id = 8;
    r.name = "maximal inequality for the Volterra integral";
    bool ok = true;
    std::ostringstream d;
    for (double H : {0.6, 0.75}) {
        MaxIneqConfig cfg;
        cfg.H = H;
        cfg.p = 2.0;
        cfg.n = 256;
        cfg.paths = scaled(20000, opt.paths_scale);
        cfg.seed = opt.seed;
        const auto c = check_maximal_inequality(cfg, [](double) { return 1.0; });
        if (!c.pass) ok = false;
        r.numbers.push_back(c.lhs);
        r.numbers.push_back(c.rhs);
        d << "H=" << H << " lhs=" << c.lhs << " C(2)*T=" << c.rhs << " ";
    }
    r.seconds = timer.seconds();
    r.pass = ok && r.seconds < 120.0;
    r.detail = d.str();
    return r;
}

// ---- criterion 9: fractional-calculus consistency ------------------------
inline CriterionResult crit_fraccalc(const AcceptanceOptions&) {
    Timer timer;
    CriterionResult r;
    r.id = 9;
    r.name = "fractional-calculus semigroup, inversion, composition";
    double semi_err = 0.0, inv_err = 0.0, comp_err = 0.0;
    {
        const TimeGrid g(1.0, 4096);
        const auto f = GridFunction::from_nodes(
            g, [](double s) { return std::sin(3.0 * s) + s; });
        for (double a : {0.25, 0.5, 0.75}) {
            for (double b : {0.25, 0.5, 0.75}) {
                const auto lhs = frac_integral(frac_integral(f, b), a);
                const auto rhs = frac_integral(f, a + b);
                semi_err = std::max(semi_err, max_abs_diff(lhs.values, rhs.values));
            }
        }
        const auto f0 = GridFunction::from_nodes(
            g, [](double s) { return s * (1.0 - s) * std::exp(s); });
        for (double a : {0.25, 0.5, 0.75}) {
            const auto rec = frac_derivative(frac_integral(f0, a), a);
            inv_err = std::max(inv_err, max_abs_diff(rec.values, f0.values));
        }
    }
    {
        const TimeGrid g(1.0, 2048);
        auto smooth = [](double s) { return 1.0 + 0.5 * s + 0.25 * std::sin(2.0 * s); };
        const auto f_nodes = GridFunction::from_nodes(g, smooth);
        for (double H : {0.3, 0.5, 0.7}) {
            const auto W = WeightCache::get(g, H);
            const auto via_frac = compose_kh_via_fractional(f_nodes, H);
            const auto via_kernel = apply_kh(smooth, *W);
            comp_err = std::max(comp_err, max_abs_diff(via_frac.values, via_kernel.values));
        }
    }
    r.numbers = {semi_err, inv_err, comp_err};
    r.seconds = timer.seconds();
    r.pass = semi_err <= 5e-3 && inv_err <= 2e-2 && comp_err <= 1e-2 && r.seconds < 30.0;
    std::ostringstream d;
    d << "semigroup=" << semi_err << " inversion=" << inv_err
      << " composition=" << comp_err;
    r.detail = d.str();
    return r;
}

inline std::vector<CriterionResult> run_once(const AcceptanceOptions& opt) {
    std::vector<CriterionResult> out;
    out.push_back(crit_kernel_identity(opt));
    emit(opt, out.back());
    out.push_back(crit_covariance(opt));
    emit(opt, out.back());
    out.push_back(crit_brownian_degeneracy(opt));
    emit(opt, out.back());
    out.push_back(crit_oracle_triangle(opt));
    emit(opt, out.back());
    out.push_back(crit_closed_form_gradient(opt));
    emit(opt, out.back());
    out.push_back(crit_inequality_suite(opt));
    emit(opt, out.back());
    out.push_back(crit_t2(opt));
    emit(opt, out.back());
    out.push_back(crit_maximal(opt));
    emit(opt, out.back());
    out.push_back(crit_fraccalc(opt));
    emit(opt, out.back());
    return out;
}

inline std::string suite_hash(const std::vector<CriterionResult>& results) {
    DeterminismHash h;
    for (const auto& r : results) {
        h.add(r.name);
        for (double v : r.numbers) h.add(v);
    }
    return h.hex();
}

}  // namespace acceptance_detail

/// Runs the acceptance criteria; criterion 10 re-runs the whole suite and
/// compares determinism hashes. One CriterionResult per criterion, in order.
inline std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt) {
    using namespace acceptance_detail;
    auto results = run_once(opt);
    if (opt.run_determinism) {
        Timer timer;
        CriterionResult r;
        r.id = 10;
        r.name = "determinism: identical seeds, identical hashes";
        const std::string h1 = suite_hash(results);
        AcceptanceOptions quiet = opt;
        quiet.log = nullptr;
        const auto rerun = run_once(quiet);
        const std::string h2 = suite_hash(rerun);
        r.pass = (h1 == h2);
        r.seconds = timer.seconds();
        r.detail = "hash1=" + h1 + " hash2=" + h2;
        r.numbers.push_back(r.pass ? 1.0 : 0.0);
        results.push_back(r);
        emit(opt, results.back());
    }
    return results;
}

}  // namespace fbmlab
