// fbmlab: command-line laboratory for Volterra equations driven by
// fractional Brownian motion. Subcommands map onto the library modules;
// every stochastic run is reproducible from (seed, grid) and reports carry
// a determinism hash over their numeric content.

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <fbmlab/acceptance.hpp>
#include <fbmlab/fraccalc.hpp>
#include <fbmlab/inequalities.hpp>
#include <fbmlab/kernel.hpp>
#include <fbmlab/malliavin.hpp>
#include <fbmlab/model.hpp>
#include <fbmlab/noise.hpp>
#include <fbmlab/report.hpp>
#include <fbmlab/solver.hpp>
#include <fbmlab/transport.hpp>

namespace {

using namespace fbmlab;

constexpr int exit_ok = 0;
constexpr int exit_fail = 1;
constexpr int exit_usage = 2;

std::chrono::steady_clock::time_point cli_start;

struct CommonArgs {
    double H = 0.7;
    double T = 1.0;
    std::size_t n = 512;
    std::size_t paths = 100000;
    std::uint64_t seed = 0;
    CLI::Option* seed_opt = nullptr;
    std::string out;
    std::string json;
    std::string config_file;
};

void add_common(CLI::App* cmd, CommonArgs& a, bool stochastic) {
    cmd->add_option("--H", a.H, "Hurst parameter in (0,1)")->check(CLI::Range(1e-6, 1.0 - 1e-6));
    cmd->add_option("--T", a.T, "time horizon")->check(CLI::PositiveNumber);
    cmd->add_option("--n", a.n, "grid cells")->check(CLI::Range(std::size_t(2), std::size_t(100000)));
    if (stochastic) {
        cmd->add_option("--paths", a.paths, "Monte Carlo paths")
            ->check(CLI::Range(std::size_t(100), std::size_t(100000000)));
        a.seed_opt = cmd->add_option("--seed", a.seed, "RNG seed (required)");
    }
    cmd->add_option("--out", a.out, "CSV output path");
    cmd->add_option("--json", a.json, "JSON report path");
    cmd->add_option("--config", a.config_file, "key=value configuration file; flags override");
}

std::string trim_ws(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

// Plain key=value configuration; values already given on the command line win.
void apply_config_file(CLI::App* cmd, const std::string& path) {
    if (path.empty()) return;
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = trim_ws(line.substr(0, eq));
        const std::string value = trim_ws(line.substr(eq + 1));
        if (key.empty() || value.empty()) continue;
        CLI::Option* opt = cmd->get_option_no_throw("--" + key);
        if (opt == nullptr) throw std::invalid_argument("unknown config key: " + key);
        if (opt->count() > 0) continue;
        opt->add_result(value);
        opt->run_callback();
    }
}

void require_seed(const CommonArgs& a) {
    if (!a.seed_opt || a.seed_opt->count() == 0)
        throw CLI::ValidationError("--seed", "stochastic subcommands require an explicit seed");
}

std::pair<std::string, std::string> split_spec(const std::string& s) {
    const auto pos = s.find(':');
    if (pos == std::string::npos) return {s, ""};
    return {s.substr(0, pos), s.substr(pos + 1)};
}

std::pair<std::vector<double>, std::vector<double>> read_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open table file: " + path);
    std::vector<double> a, b;
    std::string line;
    while (std::getline(in, line)) {
        for (auto& c : line)
            if (c == ',' || c == ';' || c == '\t') c = ' ';
        std::istringstream row(line);
        double x, y;
        if (row >> x >> y) {
            a.push_back(x);
            b.push_back(y);
        }
    }
    if (a.size() < 2) throw std::invalid_argument("table needs at least two rows: " + path);
    return {a, b};
}

CoefficientModel parse_model(const std::string& spec) {
    const auto [name, arg] = split_spec(spec);
    if (name == "zero") return model_zero_drift(1.0);
    if (name == "custom-table" || name == "table") {
        auto [xs, bs] = read_table(arg);
        return model_from_table(std::move(xs), std::move(bs), 1.0);
    }
    const double v = arg.empty() ? 0.5 : std::stod(arg);
    if (name == "linear") return model_linear(v, 1.0);
    if (name == "ou") return model_ou(v, 1.0);
    if (name == "trig") return model_trig(v, 1.0);
    throw std::invalid_argument("unknown model: " + spec);
}

DriftShift parse_shift(const std::string& spec) {
    const auto [name, arg] = split_spec(spec);
    if (name == "const") return DriftShift::constant(std::stod(arg));
    if (name == "linear") return DriftShift::linear(std::stod(arg));
    if (name == "table") {
        auto [ts, us] = read_table(arg);
        return DriftShift::table(std::move(ts), std::move(us));
    }
    throw std::invalid_argument("unknown shift spec: " + spec);
}

ControlFunction parse_control(const std::string& spec, double H, double T) {
    const auto [name, arg] = split_spec(spec);
    if (name == "default") return default_control(H, T);
    if (name == "table") {
        auto tbl = read_table(arg);
        DriftShift interp = DriftShift::table(std::move(tbl.first), std::move(tbl.second));
        return {[interp](double t) { return interp(t); }};
    }
    throw std::invalid_argument("unknown control spec: " + spec);
}

void finish_report(Report& rep, const std::string& json_path) {
    rep.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - cli_start).count();
    if (!json_path.empty())
        rep.write(json_path);
    else
        std::cout << rep.to_json().dump(2) << "\n";
}

// ---- kernel ---------------------------------------------------------------

int run_kernel(const CommonArgs& a, const std::string& check) {
    const TimeGrid grid(a.T, a.n);
    Report rep;
    rep.config["subcommand"] = "kernel";
    rep.config["H"] = a.H;
    rep.config["T"] = a.T;
    rep.config["n"] = a.n;
    rep.config["check"] = check;
    const auto kc = KernelConstants::make(a.H);
    rep.constants["alpha_H"] = kc.alpha_h;
    rep.constants["alpha_bar_H"] = kc.alpha_bar_h;
    rep.constants["C_H"] = kc.c_h;

    std::vector<std::vector<double>> rows;  // t, s, value, reference, error
    double max_err = 0.0;
    double tolerance = 0.0;
    if (check == "identity") {
        tolerance = 1e-3 * a.T;
        const auto W = WeightCache::get(grid, a.H);
        const auto out = apply_kh(
            [&](double s) { return kc.c_h * std::pow(s, 0.5 - a.H); }, *W);
        for (std::size_t i = 1; i <= a.n; ++i) {
            const double t = grid.node(i);
            const double err = std::abs(out.values[i] - t);
            max_err = std::max(max_err, err);
            if (i % std::max<std::size_t>(a.n / 64, 1) == 0)
                rows.push_back({t, 0.0, out.values[i], t, err});
        }
    } else if (check == "covariance") {
        tolerance = 1e-3;
        const auto W = WeightCache::get(grid, a.H);
        const double dt = grid.dt();
        for (int qi = 1; qi <= 4; ++qi) {
            for (int qk = qi; qk <= 4; ++qk) {
                const std::size_t i = a.n * qi / 4, k = a.n * qk / 4;
                double acc = 0.0;
                for (std::size_t j = 0; j < std::min(i, k); ++j)
                    acc += W->at(i, j) * W->at(k, j);
                acc /= dt;
                const double ref = covariance_rh(grid.node(i), grid.node(k), a.H);
                const double err = std::abs(acc - ref) / ref;
                max_err = std::max(max_err, err);
                rows.push_back({grid.node(i), grid.node(k), acc, ref, err});
            }
        }
    } else if (check == "representation") {
        if (!(a.H > 0.5))
            throw std::domain_error("representation check needs H > 1/2");
        tolerance = 1e-8;
        for (int q = 1; q < 20; ++q) {
            const double t = a.T, s = a.T * q / 20.0;
            const double got = kernel_kh(t, s, a.H);
            // integral form with the (r-s) singularity removed by the power
            // substitution; composite Simpson on the smooth remainder
            const double p = a.H - 0.5;
            const int m = 4096;
            auto g = [&](double xi) {
                const double x = std::pow(xi, 1.0 / p);
                return std::pow(s + (t - s) * x, a.H - 0.5);
            };
            double acc = g(0.0) + g(1.0);
            for (int i = 1; i < m; ++i) acc += g(i / double(m)) * (i % 2 ? 4.0 : 2.0);
            acc /= 3.0 * m;
            acc *= std::pow(t - s, a.H - 0.5) / p;
            const double ref = kc.alpha_bar_h * std::pow(s, 0.5 - a.H) * acc;
            const double err = std::abs(got - ref) / ref;
            max_err = std::max(max_err, err);
            rows.push_back({t, s, got, ref, err});
        }
    } else {
        throw std::invalid_argument("kernel --check must be identity|covariance|representation");
    }

    if (!a.out.empty()) {
        CsvWriter csv(a.out, {"t", "s", "value", "reference", "error"});
        for (const auto& r : rows) csv.row(r);
    }
    rep.results["max_error"] = max_err;
    rep.results["tolerance"] = tolerance;
    rep.verdicts["within_tolerance"] = max_err <= tolerance;
    finish_report(rep, a.json);
    return max_err <= tolerance ? exit_ok : exit_fail;
}

// ---- fbm -------------------------------------------------------------------

int run_fbm(const CommonArgs& a, const std::string& validate) {
    require_seed(a);
    const TimeGrid grid(a.T, a.n);
    const auto W = WeightCache::get(grid, a.H);
    Report rep;
    rep.config["subcommand"] = "fbm";
    rep.config["H"] = a.H;
    rep.config["T"] = a.T;
    rep.config["n"] = a.n;
    rep.config["paths"] = a.paths;
    rep.config["seed"] = a.seed;

    bool pass = true;
    if (validate == "covariance") {
        const std::size_t probes[4] = {a.n / 4, a.n / 2, 3 * a.n / 4, a.n};
        const std::size_t idx[8][2] = {{0, 0}, {1, 1}, {2, 2}, {3, 3},
                                       {0, 1}, {0, 3}, {1, 2}, {2, 3}};
        auto res = ensemble_means(a.paths, 8, [&](std::size_t p, std::vector<double>& out) {
            const auto inc = sample_wiener(grid, a.seed, p);
            double b[4];
            for (int q = 0; q < 4; ++q) b[q] = fbm_node_from_wiener(inc, *W, probes[q]);
            for (int q = 0; q < 8; ++q) out[q] = b[idx[q][0]] * b[idx[q][1]];
        });
        double worst_z = 0.0;
        std::vector<std::vector<double>> table;
        for (int q = 0; q < 8; ++q) {
            const double ti = grid.node(probes[idx[q][0]]);
            const double tk = grid.node(probes[idx[q][1]]);
            const double ref = covariance_rh(ti, tk, a.H);
            const double z = std::abs(res[q].value - ref) / res[q].std_error;
            worst_z = std::max(worst_z, z);
            rep.results["cov_" + std::to_string(q)] = res[q].value;
            table.push_back({ti, tk, res[q].value, ref, res[q].std_error, z});
        }
        if (!a.out.empty()) {
            CsvWriter csv(a.out, {"t", "s", "empirical", "reference", "se", "z"});
            for (const auto& row : table) csv.row(row);
        }
        rep.results["worst_z"] = worst_z;
        pass = worst_z <= 3.0;
        rep.verdicts["covariance_within_3se"] = pass;
    } else if (!a.out.empty()) {
        CsvWriter csv(a.out, {"path", "t", "value"});
        const std::size_t emit = std::min<std::size_t>(a.paths, 64);
        for (std::size_t p = 0; p < emit; ++p) {
            const auto path = fbm_from_wiener(sample_wiener(grid, a.seed, p), *W);
            for (std::size_t i = 0; i <= a.n; ++i)
                csv.row({static_cast<double>(p), grid.node(i), path.values[i]});
        }
        rep.results["paths_written"] = std::min<std::size_t>(a.paths, 64);
    }
    finish_report(rep, a.json);
    return pass ? exit_ok : exit_fail;
}

// ---- solve ------------------------------------------------------------------

int run_solve(const CommonArgs& a, const std::string& model_spec, double x0) {
    require_seed(a);
    const TimeGrid grid(a.T, a.n);
    const auto W = WeightCache::get(grid, a.H);
    const auto model = parse_model(model_spec);
    Report rep;
    rep.config["subcommand"] = "solve";
    rep.config["model"] = model_spec;
    rep.config["H"] = a.H;
    rep.config["T"] = a.T;
    rep.config["n"] = a.n;
    rep.config["paths"] = a.paths;
    rep.config["seed"] = a.seed;
    rep.config["x0"] = x0;

    if (!a.out.empty()) {
        CsvWriter csv(a.out, {"path", "t", "value"});
        const std::size_t emit = std::min<std::size_t>(a.paths, 64);
        for (std::size_t p = 0; p < emit; ++p) {
            const auto X = solve_volterra(model, x0, sample_wiener(grid, a.seed, p), *W);
            for (std::size_t i = 0; i <= a.n; ++i)
                csv.row({static_cast<double>(p), grid.node(i), X.x[i]});
        }
    }
    auto res = ensemble_means(a.paths, 2, [&](std::size_t p, std::vector<double>& out) {
        const auto X = solve_volterra(model, x0, sample_wiener(grid, a.seed, p), *W);
        out[0] = X.x.back();
        out[1] = X.x.back() * X.x.back();
    });
    rep.results["terminal_mean"] = res[0].value;
    rep.results["terminal_mean_se"] = res[0].std_error;
    rep.results["terminal_second_moment"] = res[1].value;
    finish_report(rep, a.json);
    return exit_ok;
}

// ---- bismut / ibp ------------------------------------------------------------

int run_gradient(const CommonArgs& a, const std::string& model_spec, double x0, double y,
                 const std::string& fname, const std::string& control_spec, bool bismut) {
    require_seed(a);
    EstimatorConfig cfg;
    cfg.model = parse_model(model_spec);
    cfg.x0 = x0;
    cfg.y = y;
    cfg.H = a.H;
    cfg.T = a.T;
    cfg.n = a.n;
    cfg.paths = a.paths;
    cfg.seed = a.seed;
    const auto obs = make_observable(fname);

    Report rep;
    rep.config["subcommand"] = bismut ? "bismut" : "ibp";
    rep.config["model"] = model_spec;
    rep.config["H"] = a.H;
    rep.config["T"] = a.T;
    rep.config["n"] = a.n;
    rep.config["paths"] = a.paths;
    rep.config["seed"] = a.seed;
    rep.config["x0"] = x0;
    rep.config["y"] = y;
    rep.config["f"] = fname;
    rep.constants["C_H"] = constant_ch(a.H);

    WeightedEstimate est;
    if (bismut) {
        const auto ctrl = parse_control(control_spec, a.H, a.T);
        est = bismut_gradient(cfg, obs.f, ctrl);
    } else {
        est = ibp_shift_gradient(cfg, obs.f);
    }
    rep.results["estimate"] = est.value;
    rep.results["std_error"] = est.std_error;
    rep.results["weight_second_moment"] = est.weight_second_moment;

    // pathwise oracle on common increments: the initial-point gradient uses
    // the derivative path, the shift gradient moves the derivative onto f
    const auto W = WeightCache::get(cfg.grid(), cfg.H);
    auto oracle = ensemble_means(cfg.paths, 1, [&](std::size_t p, std::vector<double>& out) {
        const auto inc = sample_wiener(W->grid, cfg.seed, p);
        const auto X = solve_volterra(cfg.model, cfg.x0, inc, *W);
        if (bismut) {
            const auto Y = solve_variational(cfg.model, cfg.y, inc, *W, X);
            out[0] = obs.df(X.x.back()) * Y.x.back();
        } else {
            out[0] = obs.df(X.x.back()) * cfg.y;
        }
    });
    rep.results["pathwise_oracle"] = oracle[0].value;
    rep.results["pathwise_oracle_se"] = oracle[0].std_error;
    const double window = 3.0 * std::hypot(est.std_error, oracle[0].std_error) +
                          1e-9 * (1.0 + std::abs(est.value));
    const bool pass = std::abs(est.value - oracle[0].value) <= window;
    rep.verdicts["agrees_with_pathwise_oracle"] = pass;
    finish_report(rep, a.json);
    return pass ? exit_ok : exit_fail;
}

// ---- harnack -------------------------------------------------------------------

int run_harnack(const CommonArgs& a, const std::string& variant, const std::string& model_spec,
                double x0, double distance, double p, double shift) {
    require_seed(a);
    EstimatorConfig cfg;
    cfg.model = parse_model(model_spec);
    cfg.x0 = x0;
    cfg.y = 1.0;
    cfg.H = a.H;
    cfg.T = a.T;
    cfg.n = a.n;
    cfg.paths = a.paths;
    cfg.seed = a.seed;

    auto bump = [](double z) { return std::exp(-(z - 0.3) * (z - 0.3)); };
    auto logpos = [](double z) { return 1.0 + std::exp(-z * z); };

    Report rep;
    rep.config["subcommand"] = "harnack";
    rep.config["variant"] = variant;
    rep.config["model"] = model_spec;
    rep.config["H"] = a.H;
    rep.config["T"] = a.T;
    rep.config["n"] = a.n;
    rep.config["paths"] = a.paths;
    rep.config["seed"] = a.seed;
    rep.config["x0"] = x0;
    const auto hc = HarnackConstants::make(a.T, a.H, cfg.model.K3, cfg.model.K4);
    rep.constants["C_H"] = hc.ch;
    rep.constants["c_grad"] = hc.c_grad;

    CheckResult res;
    if (variant == "gradient") {
        res = check_gradient_bound(cfg, [](double z) { return std::sin(z); });
    } else if (variant == "harnack") {
        res = check_harnack(cfg, x0, x0 - distance, bump, p);
    } else if (variant == "log") {
        res = check_log_harnack(cfg, x0, x0 - distance, logpos);
    } else if (variant == "shift") {
        res = check_shift_harnack(cfg, shift, bump, p);
    } else if (variant == "shift-log") {
        res = check_shift_harnack(cfg, shift, logpos, p, true);
    } else if (variant == "feller") {
        res = probe_strong_feller(cfg, [x0](double z) { return z > x0 + 0.1 ? 1.0 : 0.0; },
                                  {1.0, 0.5, 0.25, 0.1, 0.02, 0.004});
    } else {
        throw std::invalid_argument(
            "harnack --variant must be gradient|harnack|log|shift|shift-log|feller");
    }
    rep.add_check(res);
    if (!a.out.empty()) {
        CsvWriter csv(a.out, {"lhs", "rhs", "se_combined", "margin_se", "pass"});
        const double margin = res.se_combined > 0.0
                                  ? (res.rhs - res.lhs) / res.se_combined
                                  : (res.rhs - res.lhs);
        csv.row({res.lhs, res.rhs, res.se_combined, margin, res.pass ? 1.0 : 0.0});
    }
    finish_report(rep, a.json);
    return res.pass ? exit_ok : exit_fail;
}

// ---- transport / maxineq ---------------------------------------------------------

int run_transport(const CommonArgs& a, const std::string& metric, const std::string& u_spec,
                  const std::string& model_spec, double x0) {
    require_seed(a);
    T2Config cfg;
    cfg.model = parse_model(model_spec);
    cfg.x0 = x0;
    cfg.H = a.H;
    cfg.T = a.T;
    cfg.n = a.n;
    cfg.paths = a.paths;
    cfg.seed = a.seed;
    const auto u = parse_shift(u_spec);

    Report rep;
    rep.config["subcommand"] = "transport";
    rep.config["metric"] = metric;
    rep.config["u"] = u_spec;
    rep.config["model"] = model_spec;
    rep.config["H"] = a.H;
    rep.config["T"] = a.T;
    rep.config["n"] = a.n;
    rep.config["paths"] = a.paths;
    rep.config["seed"] = a.seed;
    const auto res = check_t2(cfg, u, metric);
    const auto tc = TransportConstants::make(a.H, a.T, cfg.model.K6, cfg.model.sigma_sup);
    rep.constants["alpha_TH"] = tc.alpha_th;
    rep.constants["beta_TH"] = tc.beta_th;
    rep.constants["C_2"] = tc.c_p;
    rep.constants["theta"] = tc.theta;
    rep.add_check(res);
    finish_report(rep, a.json);
    return res.pass ? exit_ok : exit_fail;
}

int run_maxineq(const CommonArgs& a, const std::string& phi_spec, double p, double theta) {
    require_seed(a);
    MaxIneqConfig cfg;
    cfg.H = a.H;
    cfg.T = a.T;
    cfg.p = p;
    cfg.theta = theta;
    cfg.n = a.n;
    cfg.paths = a.paths;
    cfg.seed = a.seed;
    const auto [name, arg] = split_spec(phi_spec);
    std::function<double(double)> phi;
    if (name == "const")
        phi = [v = arg.empty() ? 1.0 : std::stod(arg)](double) { return v; };
    else if (name == "linear")
        phi = [v = arg.empty() ? 1.0 : std::stod(arg)](double t) { return v * t; };
    else
        throw std::invalid_argument("maxineq --phi must be const:V or linear:V");

    Report rep;
    rep.config["subcommand"] = "maxineq";
    rep.config["phi"] = phi_spec;
    rep.config["p"] = p;
    rep.config["H"] = a.H;
    rep.config["T"] = a.T;
    rep.config["n"] = a.n;
    rep.config["paths"] = a.paths;
    rep.config["seed"] = a.seed;
    const auto res = check_maximal_inequality(cfg, phi);
    rep.add_check(res);
    finish_report(rep, a.json);
    return res.pass ? exit_ok : exit_fail;
}

// ---- selftest --------------------------------------------------------------------

int run_selftest(std::uint64_t seed, double scale, const std::string& json_path) {
    AcceptanceOptions opt;
    opt.seed = seed;
    opt.paths_scale = scale;
    opt.log = &std::cout;
    const auto results = run_acceptance(opt);
    Report rep;
    rep.config["subcommand"] = "selftest";
    rep.config["seed"] = seed;
    rep.config["paths_scale"] = scale;
    bool all = true;
    for (const auto& r : results) {
        ordered_json j;
        j["pass"] = r.pass;
        j["detail"] = r.detail;
        rep.results["criterion_" + std::to_string(r.id)] = std::move(j);
        rep.verdicts["criterion_" + std::to_string(r.id)] = r.pass;
        all = all && r.pass;
    }
    rep.results["suite_hash"] = acceptance_detail::suite_hash(results);
    std::cout << "suite determinism hash: "
              << rep.results["suite_hash"].get<std::string>() << "\n";
    if (!json_path.empty()) rep.write(json_path);
    return all ? exit_ok : exit_fail;
}

}  // namespace

int main(int argc, char** argv) {
    cli_start = std::chrono::steady_clock::now();
    CLI::App app{"fbmlab: numerical laboratory for Volterra equations driven by "
                 "fractional Brownian motion"};
    app.require_subcommand(1);

    CommonArgs kernel_args, fbm_args, solve_args, bis_args, ibp_args, har_args, tra_args,
        max_args;
    std::string kernel_check = "identity";
    auto* kernel_cmd = app.add_subcommand("kernel", "kernel evaluation checks");
    add_common(kernel_cmd, kernel_args, false);
    kernel_cmd->add_option("--check", kernel_check, "identity|covariance|representation");

    std::string fbm_validate;
    auto* fbm_cmd = app.add_subcommand("fbm", "fractional Brownian paths");
    add_common(fbm_cmd, fbm_args, true);
    fbm_cmd->add_option("--validate", fbm_validate, "covariance");

    std::string solve_model = "linear:0.5";
    double solve_x0 = 0.0;
    auto* solve_cmd = app.add_subcommand("solve", "Volterra equation paths");
    add_common(solve_cmd, solve_args, true);
    solve_cmd->add_option("--model", solve_model, "zero|linear:K|ou:K|trig:K|custom-table:FILE");
    solve_cmd->add_option("--x0", solve_x0, "initial state");

    std::string bis_model = "linear:0.5", bis_f = "id", bis_control = "default";
    double bis_x0 = 0.0, bis_y = 1.0;
    auto* bis_cmd = app.add_subcommand("bismut", "semigroup gradient via stochastic weight");
    add_common(bis_cmd, bis_args, true);
    bis_cmd->add_option("--model", bis_model);
    bis_cmd->add_option("--x0", bis_x0);
    bis_cmd->add_option("--y", bis_y, "gradient direction");
    bis_cmd->add_option("--f", bis_f, "id|square|sin|exp-clamped");
    bis_cmd->add_option("--control", bis_control, "default|table:FILE");

    std::string ibp_model = "linear:0.5", ibp_f = "id";
    double ibp_x0 = 0.0, ibp_y = 1.0;
    auto* ibp_cmd = app.add_subcommand("ibp", "shifted-observable gradient weight");
    add_common(ibp_cmd, ibp_args, true);
    ibp_cmd->add_option("--model", ibp_model);
    ibp_cmd->add_option("--x0", ibp_x0);
    ibp_cmd->add_option("--y", ibp_y, "shift direction");
    ibp_cmd->add_option("--f", ibp_f, "id|square|sin|exp-clamped");

    std::string har_variant = "harnack", har_model = "linear:0.5";
    double har_x0 = 0.2, har_distance = 0.5, har_p = 2.0, har_shift = 0.5;
    auto* har_cmd = app.add_subcommand("harnack", "inequality verification harness");
    add_common(har_cmd, har_args, true);
    har_cmd->add_option("--variant", har_variant, "gradient|harnack|log|shift|shift-log|feller");
    har_cmd->add_option("--model", har_model);
    har_cmd->add_option("--x0", har_x0);
    har_cmd->add_option("--distance", har_distance, "initial-point separation");
    har_cmd->add_option("--p", har_p, "Harnack exponent > 1");
    har_cmd->add_option("--shift", har_shift, "observable shift");

    std::string tra_metric = "uniform", tra_u = "const:0.5", tra_model = "ou:1.0";
    double tra_x0 = 0.5;
    auto* tra_cmd = app.add_subcommand("transport", "transportation-cost bound check");
    add_common(tra_cmd, tra_args, true);
    tra_cmd->add_option("--metric", tra_metric, "uniform|l2");
    tra_cmd->add_option("--u", tra_u, "const:V|linear:V|table:FILE");
    tra_cmd->add_option("--model", tra_model);
    tra_cmd->add_option("--x0", tra_x0);

    std::string max_phi = "const:1.0";
    double max_p = 2.0, max_theta = -1.0;
    auto* max_cmd = app.add_subcommand("maxineq", "maximal inequality check");
    add_common(max_cmd, max_args, true);
    max_cmd->add_option("--phi", max_phi, "const:V|linear:V");
    max_cmd->add_option("--p", max_p, "moment order >= 2");
    max_cmd->add_option("--theta", max_theta, "exponent-splitting knob in (0, 2H-1)");

    std::uint64_t st_seed = 42;
    double st_scale = 1.0;
    std::string st_json;
    auto* st_cmd = app.add_subcommand("selftest", "run the acceptance suite");
    st_cmd->add_option("--seed", st_seed);
    st_cmd->add_option("--scale", st_scale, "path-count multiplier")
        ->check(CLI::Range(0.001, 10.0));
    st_cmd->add_option("--json", st_json, "JSON report path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        if (kernel_cmd->parsed()) {
            apply_config_file(kernel_cmd, kernel_args.config_file);
            return run_kernel(kernel_args, kernel_check);
        }
        if (fbm_cmd->parsed()) {
            apply_config_file(fbm_cmd, fbm_args.config_file);
            return run_fbm(fbm_args, fbm_validate);
        }
        if (solve_cmd->parsed()) {
            apply_config_file(solve_cmd, solve_args.config_file);
            return run_solve(solve_args, solve_model, solve_x0);
        }
        if (bis_cmd->parsed()) {
            apply_config_file(bis_cmd, bis_args.config_file);
            return run_gradient(bis_args, bis_model, bis_x0, bis_y, bis_f, bis_control, true);
        }
        if (ibp_cmd->parsed()) {
            apply_config_file(ibp_cmd, ibp_args.config_file);
            return run_gradient(ibp_args, ibp_model, ibp_x0, ibp_y, ibp_f, "default", false);
        }
        if (har_cmd->parsed()) {
            apply_config_file(har_cmd, har_args.config_file);
            return run_harnack(har_args, har_variant, har_model, har_x0, har_distance, har_p,
                               har_shift);
        }
        if (tra_cmd->parsed()) {
            apply_config_file(tra_cmd, tra_args.config_file);
            return run_transport(tra_args, tra_metric, tra_u, tra_model, tra_x0);
        }
        if (max_cmd->parsed()) {
            apply_config_file(max_cmd, max_args.config_file);
            return run_maxineq(max_args, max_phi, max_p, max_theta);
        }
        if (st_cmd->parsed()) return run_selftest(st_seed, st_scale, st_json);
    } catch (const CLI::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const std::domain_error& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return exit_usage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return exit_usage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    }
    return exit_usage;
}
