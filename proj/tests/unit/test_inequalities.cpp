#include <doctest.h>

#include <cmath>

#include <fbmlab/inequalities.hpp>

using namespace fbmlab;

namespace {

EstimatorConfig harnack_config(double H, std::size_t paths = 20000) {
    EstimatorConfig cfg;
    cfg.model = model_linear(0.5, 1.0);
    cfg.x0 = 0.2;
    cfg.y = 1.0;
    cfg.H = H;
    cfg.T = 1.0;
    cfg.n = 256;
    cfg.paths = paths;
    cfg.seed = 777;
    return cfg;
}

double bump(double z) { return std::exp(-(z - 0.3) * (z - 0.3)); }
double logpos(double z) { return 1.0 + std::exp(-z * z); }

}  // namespace

TEST_SUITE("inequalities") {

TEST_CASE("constants recompute to hand values") {
    // H = 1/2, T = 1, K3 = K4 = 1: C = 2 (1/3 + 1) = 8/3
    const auto c = HarnackConstants::make(1.0, 0.5, 1.0, 1.0);
    CHECK(c.c_grad == doctest::Approx(8.0 / 3.0).epsilon(1e-12));
    // bracket at H = 1/2: 1 + 4/4 + 1/3 = 7/3; c_shift(2) = 2 * 7/3
    CHECK(c.bracket == doctest::Approx(7.0 / 3.0).epsilon(1e-12));
    CHECK(c.c_shift(2.0) == doctest::Approx(14.0 / 3.0).epsilon(1e-12));
    CHECK(c.c_shift_log() == doctest::Approx(7.0 / 3.0).epsilon(1e-12));
    CHECK_THROWS_AS(c.c_shift(1.0), std::domain_error);
}

TEST_CASE("exponential Harnack factor decreases in p for a fixed sample") {
    const auto c = HarnackConstants::make(1.0, 0.7, 0.5, 1.0);
    const double d2 = 0.49;
    double prev = std::exp(2.0 * c.c_grad * d2);  // p = 2: p/(p-1) = 2
    for (double p : {3.0, 4.0, 8.0}) {
        const double cur = std::exp(p / (p - 1.0) * c.c_grad * d2);
        CHECK(cur < prev);
        prev = cur;
    }
}

TEST_CASE("gradient bound holds; trivial for constants") {
    auto cfg = harnack_config(0.7);
    SUBCASE("constant observable") {
        const auto r = check_gradient_bound(cfg, [](double) { return 1.0; });
        CHECK(r.pass);
        CHECK(r.lhs <= 1e-4);
    }
    SUBCASE("bounded oscillating observable") {
        const auto r = check_gradient_bound(cfg, [](double z) { return std::sin(z); });
        CHECK(r.pass);
    }
}

TEST_CASE("Harnack inequality: Jensen cases exact, separated points pass") {
    for (double H : {0.5, 0.7}) {
        auto cfg = harnack_config(H);
        SUBCASE("coincident points reduce to shared-sample Jensen") {
            const auto r = check_harnack(cfg, 0.2, 0.2, bump, 2.0);
            CHECK(r.pass);
            CHECK(r.exact);
        }
        SUBCASE("separated points") {
            const auto r = check_harnack(cfg, 0.2, -0.8, bump, 2.0);
            CHECK(r.pass);
            CHECK(!r.exact);
        }
        SUBCASE("constant observable passes at any separation") {
            const auto r = check_harnack(cfg, 0.2, -0.8, [](double) { return 0.7; }, 2.0);
            CHECK(r.pass);
            CHECK(r.lhs == doctest::Approx(0.49).epsilon(1e-12));
        }
    }
    auto cfg = harnack_config(0.6, 2000);
    CHECK_THROWS_AS(check_harnack(cfg, 0.0, 1.0, bump, 1.0), std::domain_error);
}

TEST_CASE("log-Harnack inequality") {
    auto cfg = harnack_config(0.6);
    SUBCASE("Jensen case") {
        const auto r = check_log_harnack(cfg, 0.2, 0.2, logpos);
        CHECK(r.pass);
        CHECK(r.exact);
    }
    SUBCASE("separated points") {
        const auto r = check_log_harnack(cfg, 0.2, -0.3, logpos);
        CHECK(r.pass);
    }
}

TEST_CASE("shift Harnack: zero shift exact, closed-form Gaussian cross-check") {
    auto cfg = harnack_config(0.5);
    SUBCASE("zero shift") {
        const auto r = check_shift_harnack(cfg, 0.0, bump, 2.0);
        CHECK(r.pass);
        CHECK(r.exact);
    }
    SUBCASE("driftless case against Gauss-Hermite style quadrature") {
        cfg.model = model_zero_drift(1.0);
        cfg.paths = 40000;
        const auto r = check_shift_harnack(cfg, 0.5, bump, 2.0);
        CHECK(r.pass);
        // X_T ~ N(x0, 1): both sides by tanh-sinh quadrature over the density
        auto density = [&](double z) {
            const double d = z - cfg.x0;
            return std::exp(-0.5 * d * d) / std::sqrt(2.0 * 3.14159265358979323846);
        };
        double lhs_q = 0.0, rhs_q = 0.0;
        const double lo = cfg.x0 - 10.0, hi = cfg.x0 + 10.0, step = 1e-3;
        for (double z = lo; z < hi; z += step) {
            lhs_q += bump(z) * density(z) * step;
            rhs_q += std::pow(bump(0.5 + z), 2.0) * density(z) * step;
        }
        CHECK(std::abs(r.lhs - lhs_q * lhs_q) <= 4.0 * r.se_combined + 1e-4);
        const auto c = HarnackConstants::make(1.0, 0.5, 0.0, 1.0);
        const double rhs_ref = rhs_q * std::exp(c.c_shift(2.0) * 0.25);
        CHECK(r.rhs == doctest::Approx(rhs_ref).epsilon(0.05));
    }
    SUBCASE("log variant") {
        const auto r = check_shift_harnack(cfg, 0.5, logpos, 2.0, true);
        CHECK(r.pass);
    }
}

TEST_CASE("strong Feller probe observes decay, even for a step observable") {
    auto cfg = harnack_config(0.7, 20000);
    const std::vector<double> radii = {1.0, 0.5, 0.25, 0.1, 0.02, 0.004};
    SUBCASE("continuous observable") {
        const auto r = probe_strong_feller(cfg, [](double z) { return std::tanh(z); }, radii);
        CHECK(r.pass);
    }
    SUBCASE("step observable") {
        const auto r = probe_strong_feller(
            cfg, [&](double z) { return z > cfg.x0 + 0.1 ? 1.0 : 0.0; }, radii);
        CHECK(r.pass);
    }
    SUBCASE("zero radius difference is exactly zero") {
        const auto r = probe_strong_feller(cfg, [](double z) { return std::tanh(z); },
                                           {0.5, 0.0});
        CHECK(r.details.at("diff_r1") == 0.0);
    }
}

TEST_CASE("state-dependent diffusion is rejected by the weighted checks") {
    auto cfg = harnack_config(0.7, 500);
    cfg.model = model_multiplicative(0.5, 1.0, 0.3);
    CHECK_THROWS_AS(check_gradient_bound(cfg, [](double z) { return std::sin(z); }),
                    std::invalid_argument);
    CHECK_THROWS_AS(check_harnack(cfg, 0.2, -0.3, bump, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(check_log_harnack(cfg, 0.2, -0.3, logpos), std::invalid_argument);
    CHECK_THROWS_AS(check_shift_harnack(cfg, 0.5, bump, 2.0), std::invalid_argument);
}

TEST_CASE("verdicts reproduce bitwise for a fixed seed") {
    auto cfg = harnack_config(0.7, 4000);
    const auto a = check_harnack(cfg, 0.2, -0.3, bump, 2.0);
    const auto b = check_harnack(cfg, 0.2, -0.3, bump, 2.0);
    CHECK(a.lhs == b.lhs);
    CHECK(a.rhs == b.rhs);
    CHECK(a.pass == b.pass);
}

}  // TEST_SUITE
