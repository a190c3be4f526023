#include <doctest.h>

#include <cmath>

#include <fbmlab/malliavin.hpp>

using namespace fbmlab;

namespace {

EstimatorConfig base_config(double H, std::size_t paths = 40000) {
    EstimatorConfig cfg;
    cfg.model = model_zero_drift(1.0);
    cfg.x0 = 0.3;
    cfg.y = 1.0;
    cfg.H = H;
    cfg.T = 1.0;
    cfg.n = 256;
    cfg.paths = paths;
    cfg.seed = 4242;
    return cfg;
}

}  // namespace

TEST_SUITE("malliavin") {

TEST_CASE("default control satisfies the discrete normalization") {
    for (double H : {0.25, 0.5, 0.7, 0.75}) {
        const auto W = WeightCache::get(TimeGrid(1.0, 512), H);
        const double defect = control_normalization_defect(default_control(H, 1.0), *W);
        CHECK(std::abs(defect) <= 1e-3);
    }
}

TEST_CASE("violated normalization is a configuration error") {
    auto cfg = base_config(0.7, 1000);
    ControlFunction bad{[](double) { return 0.0; }};  // 1 + 0 != 0
    CHECK_THROWS_AS(bismut_gradient(cfg, [](double z) { return z; }, bad),
                    std::invalid_argument);
}

TEST_CASE("semigroup estimate: constants, martingale mean, Gaussian variance") {
    SUBCASE("constant observable has zero standard error") {
        auto cfg = base_config(0.7, 2000);
        const auto est = estimate_ptf(cfg, [](double) { return 3.25; });
        CHECK(est.value == doctest::Approx(3.25).epsilon(1e-14));
        CHECK(est.std_error == doctest::Approx(0.0));
    }
    SUBCASE("identity observable at H = 1/2 recovers the start point") {
        auto cfg = base_config(0.5);
        const auto est = estimate_ptf(cfg, [](double z) { return z; });
        CHECK(std::abs(est.value - cfg.x0) <= 3.0 * est.std_error);
    }
    SUBCASE("second moment x0^2 + T^{2H}") {
        for (double H : {0.4, 0.7}) {
            auto cfg = base_config(H);
            const auto est = estimate_ptf(cfg, [](double z) { return z * z; });
            const double ref = cfg.x0 * cfg.x0 + 1.0;  // T = 1
            CHECK(std::abs(est.value - ref) <= 3.0 * est.std_error);
        }
    }
}

TEST_CASE("gradient weight: driftless Brownian case is exactly computable") {
    auto cfg = base_config(0.5);
    const auto est = bismut_gradient(cfg, [](double z) { return z; });
    // weight reduces to W_T / T and E[(x0 + W_T) W_T / T] = 1
    CHECK(std::abs(est.value - 1.0) <= 3.0 * est.std_error);
    CHECK(est.weight_second_moment == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("gradient of a constant vanishes; weight is centered") {
    auto cfg = base_config(0.7);
    cfg.model = model_linear(0.5, 1.0);
    const auto est = bismut_gradient(cfg, [](double) { return 1.0; });
    CHECK(std::abs(est.value) <= 3.0 * est.std_error + 1e-12);
}

TEST_CASE("gradient weight scales exactly linearly in y") {
    auto cfg = base_config(0.7, 2000);
    cfg.model = model_linear(0.5, 1.0);
    const auto e1 = bismut_gradient(cfg, [](double z) { return std::sin(z); });
    cfg.y = 2.0;
    const auto e2 = bismut_gradient(cfg, [](double z) { return std::sin(z); });
    CHECK(e2.value == doctest::Approx(2.0 * e1.value).epsilon(1e-12));
}

TEST_CASE("oracle triangle on the linear model") {
    const double x0 = 0.3, eps = 1e-3;
    for (double H : {0.5, 0.7}) {
        EstimatorConfig cfg = base_config(H, 60000);
        cfg.model = model_linear(0.5, 1.0);
        cfg.x0 = x0;
        const auto bis = bismut_gradient(cfg, [](double z) { return std::sin(z); });
        const auto W = WeightCache::get(cfg.grid(), H);
        auto res = ensemble_means(cfg.paths, 2, [&](std::size_t p, std::vector<double>& out) {
            const auto inc = sample_wiener(W->grid, cfg.seed, p);
            const auto X = solve_volterra(cfg.model, x0, inc, *W);
            const auto Y = solve_variational(cfg.model, 1.0, inc, *W, X);
            out[0] = std::cos(X.x.back()) * Y.x.back();
            const auto Xp = solve_volterra(cfg.model, x0 + eps, inc, *W);
            const auto Xm = solve_volterra(cfg.model, x0 - eps, inc, *W);
            out[1] = (std::sin(Xp.x.back()) - std::sin(Xm.x.back())) / (2.0 * eps);
        });
        const double w01 = 3.0 * std::hypot(bis.std_error, res[0].std_error);
        const double w02 = 3.0 * std::hypot(bis.std_error, res[1].std_error);
        const double w12 = 3.0 * std::hypot(res[0].std_error, res[1].std_error);
        CHECK(std::abs(bis.value - res[0].value) <= w01);
        CHECK(std::abs(bis.value - res[1].value) <= w02);
        CHECK(std::abs(res[0].value - res[1].value) <= w12);
    }
}

TEST_CASE("shift gradient: Gaussian characteristic-function oracle") {
    for (double H : {0.5, 0.7}) {
        auto cfg = base_config(H, 60000);
        const auto est = ibp_shift_gradient(cfg, [](double z) { return std::sin(z); });
        const double ref = std::cos(cfg.x0) * std::exp(-0.5);  // T^{2H} = 1 at T = 1
        CHECK(std::abs(est.value - ref) <= 3.0 * est.std_error);
    }
}

TEST_CASE("shift gradient: zero direction gives exactly zero") {
    auto cfg = base_config(0.7, 2000);
    cfg.y = 0.0;
    const auto est = ibp_shift_gradient(cfg, [](double z) { return std::sin(z); });
    CHECK(est.value == 0.0);
    CHECK(est.std_error == 0.0);
}

TEST_CASE("shift and gradient weights coincide for zero drift") {
    auto cfg = base_config(0.6);
    const auto a = ibp_shift_gradient(cfg, [](double z) { return z; });
    const auto b = bismut_gradient(cfg, [](double z) { return z; });
    CHECK(std::abs(a.value - 1.0) <= 3.0 * a.std_error);
    CHECK(std::abs(b.value - 1.0) <= 3.0 * b.std_error);
    CHECK(a.value == doctest::Approx(b.value).epsilon(1e-10));
}

TEST_CASE("entropy-form bounds hold") {
    SUBCASE("constant observable: left side vanishes") {
        auto cfg = base_config(0.7, 4000);
        cfg.model = model_linear(0.5, 1.0);
        const auto r = entropy_gradient_bound_check(cfg, [](double) { return 1.0; }, 1.0);
        CHECK(r.pass);
        CHECK(r.rhs > 0.0);
    }
    SUBCASE("positive smooth observable at both variants") {
        auto cfg = base_config(0.7, 20000);
        cfg.model = model_linear(0.5, 1.0);
        auto f = [](double z) { return 2.0 + std::sin(z); };
        CHECK(entropy_gradient_bound_check(cfg, f, 1.0, "gradient").pass);
        CHECK(entropy_gradient_bound_check(cfg, f, 1.0, "shift").pass);
    }
    SUBCASE("zero direction passes trivially") {
        auto cfg = base_config(0.6, 4000);
        cfg.y = 0.0;
        const auto r =
            entropy_gradient_bound_check(cfg, [](double z) { return 2.0 + std::sin(z); }, 1.0);
        CHECK(r.pass);
    }
    SUBCASE("non-positive observable rejected") {
        auto cfg = base_config(0.6, 500);
        CHECK_THROWS_AS(
            entropy_gradient_bound_check(cfg, [](double z) { return std::sin(z); }, 1.0),
            std::domain_error);
    }
}

}  // TEST_SUITE
