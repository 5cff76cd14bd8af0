#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "chemostat/timefn.hpp"

using namespace chemostat;

namespace {

TimeFunction sampled_sine(double omega, double mean, double amp, int n) {
    std::vector<double> s(n);
    for (int i = 0; i < n; ++i)
        s[i] = mean + amp * std::sin(2.0 * M_PI * i / n);
    return TimeFunction::periodic(omega, std::move(s));
}

} // namespace

TEST_CASE("constant kind") {
    auto f = TimeFunction::constant(0.7);
    CHECK(f.is_constant());
    CHECK(f.eval(-3.0) == 0.7);
    CHECK(f.eval(1e6) == 0.7);
    CHECK(f.integrate(2.0, 5.0) == doctest::Approx(2.1).epsilon(1e-14));
    CHECK(f.max_value() == 0.7);
    CHECK(f.min_value() == 0.7);
}

TEST_CASE("periodic wrapping, including far negative times") {
    auto f = sampled_sine(5.0, 1.0, 0.5, 1000);
    CHECK(f.is_periodic());
    CHECK(f.period() == 5.0);
    for (double t : {0.3, 1.7, 4.9}) {
        CHECK(f.eval(t) == doctest::Approx(f.eval(t + 5.0)).epsilon(1e-12));
        CHECK(f.eval(t) == doctest::Approx(f.eval(t - 35.0)).epsilon(1e-12));
    }
    // piecewise-linear approximation of the sine stays close with 1000 samples
    CHECK(f.eval(1.25) == doctest::Approx(1.0 + 0.5 * std::sin(2.0 * M_PI * 0.25))
                              .epsilon(1e-5));
}

TEST_CASE("periodic integral over k periods equals k times one period") {
    auto f = sampled_sine(5.0, 1.0, 0.5, 64);
    const double one = f.integrate(0.0, 5.0, 1e-12);
    CHECK(f.integrate(0.0, 15.0, 1e-12) == doctest::Approx(3.0 * one).epsilon(1e-10));
    CHECK(one == doctest::Approx(5.0).epsilon(1e-10)); // mean 1, sine averages out
    CHECK(f.average(5.0) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("integral additivity across arbitrary split points") {
    auto f = sampled_sine(2.0, 0.8, 0.3, 48);
    const double whole = f.integrate(-1.3, 7.9, 1e-12);
    const double split =
        f.integrate(-1.3, 0.41, 1e-12) + f.integrate(0.41, 7.9, 1e-12);
    CHECK(whole == doctest::Approx(split).epsilon(1e-10));
}

TEST_CASE("tabulated interpolation and hold extrapolation") {
    auto f = TimeFunction::tabulated({0.0, 1.0, 3.0}, {2.0, 4.0, 0.0},
                                     TimeFunction::Extrapolation::hold);
    CHECK(f.eval(0.5) == doctest::Approx(3.0));
    CHECK(f.eval(2.0) == doctest::Approx(2.0));
    CHECK(f.eval(10.0) == 0.0);  // hold past the last knot
    CHECK(f.eval(-5.0) == 2.0);  // hold before the first knot
    // exact for piecewise-linear data: trapezoid areas
    CHECK(f.integrate(0.0, 3.0, 1e-12) == doctest::Approx(3.0 + 4.0).epsilon(1e-12));
}

TEST_CASE("tabulated without extrapolation rejects out-of-range queries") {
    auto f = TimeFunction::tabulated({0.0, 1.0}, {1.0, 1.0});
    CHECK_THROWS_AS(f.eval(1.5), std::domain_error);
    CHECK_THROWS_AS(f.eval(-0.1), std::domain_error);
}

TEST_CASE("construction rejects bad input") {
    CHECK_THROWS_AS(TimeFunction::constant(-1.0), std::invalid_argument);
    CHECK_THROWS_AS(TimeFunction::periodic(0.0, {1.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(TimeFunction::periodic(1.0, {1.0, -0.5}), std::invalid_argument);
    CHECK_THROWS_AS(TimeFunction::tabulated({0.0, 0.0}, {1.0, 1.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(TimeFunction::tabulated({0.0, 1.0}, {1.0}),
                    std::invalid_argument);
}

TEST_CASE("scaled multiplies pointwise") {
    auto f = sampled_sine(5.0, 1.0, 0.5, 64).scaled(2.5);
    CHECK(f.eval(1.3) == doctest::Approx(2.5 * sampled_sine(5.0, 1.0, 0.5, 64).eval(1.3)));
    CHECK(TimeFunction::constant(2.0).scaled(0.5).constant_value() == 1.0);
    CHECK_THROWS_AS(f.scaled(-1.0), std::invalid_argument);
}
