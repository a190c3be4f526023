#include <doctest.h>

#include <cmath>

#include <fbmlab/kernel.hpp>

#include "support/oracles.hpp"

using namespace fbmlab;

TEST_SUITE("kernel") {

TEST_CASE("hurst parameters and admissible exponents") {
    HurstParams h(0.3, 1.0);
    CHECK(h.h0() == doctest::Approx(0.2));
    CHECK(h.admissible(2.0));
    CHECK(!h.admissible(6.0));
    CHECK(h.kappa_p(2.0) == doctest::Approx(1.0 / 0.6).epsilon(1e-14));
    CHECK_THROWS_AS(h.kappa_p(5.5), std::domain_error);
    CHECK_THROWS_AS(HurstParams(1.2, 1.0), std::domain_error);
}

TEST_CASE("covariance formula") {
    CHECK(covariance_rh(0.6, 0.6, 0.3) == doctest::Approx(std::pow(0.6, 0.6)).epsilon(1e-14));
    CHECK(covariance_rh(0.4, 0.0, 0.7) == doctest::Approx(0.0));
    // R_{0.75}(2,1) = (2^{1.5} + 1 - 1)/2 = sqrt(2)
    CHECK(covariance_rh(2.0, 1.0, 0.75) ==
          doctest::Approx(1.4142135623730950488).epsilon(1e-14));
}

TEST_CASE("kernel is 1 in the Brownian case and guards its domain") {
    for (double s : {0.1, 0.5, 0.9}) CHECK(kernel_kh(1.0, s, 0.5) == 1.0);
    CHECK_THROWS_AS(kernel_kh(1.0, 0.0, 0.7), std::domain_error);
    CHECK_THROWS_AS(kernel_kh(1.0, 1.0, 0.7), std::domain_error);
    CHECK_THROWS_AS(kernel_kh(0.5, 0.7, 0.7), std::domain_error);
}

TEST_CASE("hypergeometric and integral representations agree for H > 1/2") {
    for (double H : {0.6, 0.75, 0.9}) {
        const auto kc = KernelConstants::make(H);
        for (int i = 0; i < 50; ++i) {
            const double t = 0.2 + 0.8 * (i % 7) / 7.0 + 0.013 * (i % 3);
            const double s = t * (0.04 + 0.92 * i / 49.0);
            const double ref = oracles::kernel_integral_form(t, s, H, kc.alpha_bar_h);
            const double got = kernel_kh(t, s, H);
            CHECK(std::abs(got - ref) <= 1e-8 * std::abs(ref));
        }
    }
}

TEST_CASE("pointwise covariance factorization by quadrature") {
    SUBCASE("H above 1/2") {
        for (double H : {0.6, 0.7, 0.75}) {
            const double t = 1.0, s = 0.7;
            const double got = oracles::tanh_sinh(
                [&](double r) { return kernel_kh(t, r, H) * kernel_kh(s, r, H); }, 0.0, s);
            CHECK(got == doctest::Approx(covariance_rh(t, s, H)).epsilon(1e-4));
        }
    }
    SUBCASE("H below 1/2 with singular endpoints") {
        for (double H : {0.3, 0.4}) {
            const double t = 1.0, s = 0.7;
            const double got = oracles::tanh_sinh(
                [&](double r) { return kernel_kh(t, r, H) * kernel_kh(s, r, H); }, 0.0, s);
            CHECK(got == doctest::Approx(covariance_rh(t, s, H)).epsilon(1e-3));
        }
    }
}

TEST_CASE("time derivative of the kernel") {
    CHECK(kernel_dkdt(1.0, 0.5, 0.5) == 0.0);
    for (double H : {0.25, 0.75}) {
        const double t = 1.0, s = 0.5;
        const double fd = oracles::central_diff(
            [&](double tt) { return kernel_kh(tt, s, H); }, t, 1e-6);
        const double got = kernel_dkdt(t, s, H);
        CHECK(std::abs(got - fd) <= 1e-6 * std::abs(fd));
        if (H > 0.5) CHECK(got > 0.0);
        if (H < 0.5) CHECK(got < 0.0);
    }
}

TEST_CASE("monotone memory for H > 1/2") {
    const double H = 0.75, s = 0.4;
    double prev = kernel_kh(0.5, s, H);
    for (double t : {0.7, 1.0, 1.5, 2.5}) {
        const double cur = kernel_kh(t, s, H);
        CHECK(cur > prev);
        prev = cur;
    }
}

TEST_CASE("identity constant: gate values and degenerate case") {
    CHECK(constant_ch(0.5) == 1.0);
    // frozen from the defining identity 1/C_H = int_0^1 K(1,r) r^{1/2-H} dr,
    // evaluated by the quadrature oracle below
    CHECK(constant_ch(0.25) == doctest::Approx(1.2919960074821).epsilon(1e-10));
    CHECK(constant_ch(0.75) == doctest::Approx(0.7130964233554).epsilon(1e-10));
    for (double H : {0.25, 0.6, 0.75}) {
        const double mass = oracles::tanh_sinh(
            [&](double r) { return kernel_kh(1.0, r, H) * std::pow(r, 0.5 - H); }, 0.0, 1.0);
        CHECK(constant_ch(H) * mass == doctest::Approx(1.0).epsilon(1e-6));
    }
    CHECK_THROWS_AS(constant_ch(0.0), std::domain_error);
}

TEST_CASE("weights reduce to dt exactly at H = 1/2") {
    const TimeGrid g(2.0, 64);
    const auto W = build_weights(g, 0.5);
    for (std::size_t i = 1; i <= g.n; ++i)
        for (std::size_t j = 0; j < i; ++j) CHECK(W.at(i, j) == g.dt());
    const auto out = apply_kh([](double) { return 1.0; }, W);
    for (std::size_t i = 0; i <= g.n; ++i)
        CHECK(out.values[i] == doctest::Approx(g.node(i)).epsilon(1e-13));
}

TEST_CASE("row sums converge to the kernel image of 1") {
    const TimeGrid g(1.0, 512);
    for (double H : {0.3, 0.7}) {
        const auto W = build_weights(g, H);
        for (double t : {0.5, 1.0}) {
            const std::size_t i = static_cast<std::size_t>(t * g.n);
            double sum = 0.0;
            for (std::size_t j = 0; j < i; ++j) sum += W.at(i, j);
            const double ref = oracles::tanh_sinh(
                [&](double s) { return kernel_kh(t, s, H); }, 0.0, t);
            CHECK(sum == doctest::Approx(ref).epsilon(2e-5));
        }
    }
}

TEST_CASE("defining identity through the weights") {
    const std::size_t n = 2000;
    for (double H : {0.25, 0.75}) {
        const auto W = build_weights(TimeGrid(1.0, n), H);
        const double ch = constant_ch(H);
        const auto out = apply_kh([&](double s) { return ch * std::pow(s, 0.5 - H); }, W);
        double err = 0.0;
        for (std::size_t i = 1; i <= n; ++i)
            err = std::max(err, std::abs(out.values[i] - W.grid.node(i)));
        CHECK(err <= 1e-3);
    }
}

TEST_CASE("identity at the finer grid of the constant's contract") {
    const std::size_t n = 4000;
    const double H = 0.75;
    const auto W = build_weights(TimeGrid(1.0, n), H);
    const double ch = constant_ch(H);
    const auto out = apply_kh([&](double s) { return ch * std::pow(s, -0.25); }, W);
    double err = 0.0;
    for (std::size_t i = 1; i <= n; ++i)
        err = std::max(err, std::abs(out.values[i] - W.grid.node(i)));
    CHECK(err <= 1e-3);
}

TEST_CASE("weight-based covariance factorization") {
    const std::size_t n = 2000;
    const double H = 0.7;
    const auto W = build_weights(TimeGrid(1.0, n), H);
    const double dt = W.grid.dt();
    for (double a : {0.25, 0.5, 1.0}) {
        for (double c : {0.25, 0.75, 1.0}) {
            const auto i = static_cast<std::size_t>(a * n);
            const auto k = static_cast<std::size_t>(c * n);
            const std::size_t m = std::min(i, k);
            double acc = 0.0;
            for (std::size_t j = 0; j < m; ++j) acc += W.at(i, j) * W.at(k, j);
            acc /= dt;
            const double ref = covariance_rh(W.grid.node(i), W.grid.node(k), H);
            CHECK(acc == doctest::Approx(ref).epsilon(1e-3));
        }
    }
}

TEST_CASE("apply_kh basics") {
    const TimeGrid g(1.0, 128);
    const auto W = build_weights(g, 0.7);
    SUBCASE("zero maps to zero") {
        const auto out = apply_kh([](double) { return 0.0; }, W);
        for (double v : out.values) CHECK(v == 0.0);
    }
    SUBCASE("grid mismatch is a usage error") {
        std::vector<double> wrong(64, 1.0);
        CHECK_THROWS_AS(apply_kh(wrong, W), std::invalid_argument);
    }
}

TEST_CASE("weight cache returns shared immutable instances") {
    const TimeGrid g(1.0, 64);
    const auto a = WeightCache::get(g, 0.7);
    const auto b = WeightCache::get(g, 0.7);
    CHECK(a.get() == b.get());
    const auto c = WeightCache::get(g, 0.71);
    CHECK(a.get() != c.get());
}

}  // TEST_SUITE
