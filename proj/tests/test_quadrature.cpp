#include <doctest.h>

#include <cmath>
#include <numbers>

#include "chemostat/quadrature.hpp"

using namespace chemostat;

TEST_CASE("simpson_fixed is exact for cubics") {
    auto cubic = [](double t) { return 2.0 * t * t * t - t * t + 3.0 * t - 5.0; };
    // antiderivative: t^4/2 - t^3/3 + 3t^2/2 - 5t
    auto F = [](double t) {
        return 0.5 * t * t * t * t - t * t * t / 3.0 + 1.5 * t * t - 5.0 * t;
    };
    const double got = simpson_fixed(cubic, -1.0, 2.5, 4);
    CHECK(got == doctest::Approx(F(2.5) - F(-1.0)).epsilon(1e-14));
}

TEST_CASE("simpson_adaptive hits tolerance on smooth integrands") {
    auto f = [](double t) { return std::exp(t) * std::sin(3.0 * t); };
    // exact: e^t (sin 3t - 3 cos 3t)/10
    auto F = [](double t) {
        return std::exp(t) * (std::sin(3.0 * t) - 3.0 * std::cos(3.0 * t)) / 10.0;
    };
    const double exact = F(2.0) - F(0.0);
    CHECK(std::abs(simpson_adaptive(f, 0.0, 2.0, 1e-10) - exact) < 1e-9);
}

TEST_CASE("simpson_adaptive on the counterexample kernel") {
    constexpr double pi = std::numbers::pi;
    auto f = [](double t) {
        return pi * std::exp(-pi / 2.0 + std::sin(t) - std::cos(t));
    };
    const double got = simpson_adaptive(f, 0.0, 2.0 * pi, 1e-10);
    // pi e^{-pi/2} * 2 pi * I0(sqrt 2), bessel I0(sqrt(2)) ~ 1.56608292975
    const double exact =
        pi * std::exp(-pi / 2.0) * 2.0 * pi * 1.5660829297563505;
    CHECK(got == doctest::Approx(exact).epsilon(1e-9));
    CHECK(got > 6.42);
    CHECK(got < 6.44);
}

TEST_CASE("degenerate interval integrates to zero") {
    auto f = [](double t) { return t * t; };
    CHECK(simpson_fixed(f, 1.0, 1.0, 4) == 0.0);
    CHECK(simpson_adaptive(f, 1.0, 1.0, 1e-12) == 0.0);
}

TEST_CASE("orientation: reversed limits flip the sign") {
    auto f = [](double t) { return std::cos(t); };
    const double fwd = simpson_adaptive(f, 0.0, 1.0, 1e-12);
    const double bwd = simpson_adaptive(f, 1.0, 0.0, 1e-12);
    CHECK(fwd == doctest::Approx(-bwd).epsilon(1e-12));
    CHECK(fwd == doctest::Approx(std::sin(1.0)).epsilon(1e-10));
}
