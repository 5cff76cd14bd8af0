#include <doctest.h>

#include <stdexcept>

#include "chemostat/model.hpp"

using namespace chemostat;

TEST_CASE("monod uptake and derivative") {
    auto p = UptakeFunction::monod(2.0, 0.5);
    CHECK(p.eval(0.0) == 0.0);
    CHECK(p.eval(0.5) == doctest::Approx(1.0));
    CHECK(p.eval(1e9) == doctest::Approx(2.0).epsilon(1e-8)); // saturates at m
    // p'(s) = m a / (a+s)^2
    CHECK(p.derivative(0.5) == doctest::Approx(1.0 / 1.0));
    // strictly increasing
    CHECK(p.eval(0.2) < p.eval(0.3));
    CHECK_THROWS_AS(UptakeFunction::monod(-1.0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(UptakeFunction::monod(1.0, 0.0), std::invalid_argument);
}

TEST_CASE("table uptake interpolates and extends by the last slope") {
    auto p = UptakeFunction::table({0.0, 1.0, 2.0}, {0.0, 3.0, 4.0});
    CHECK(p.eval(0.5) == doctest::Approx(1.5));
    CHECK(p.eval(1.5) == doctest::Approx(3.5));
    CHECK(p.eval(3.0) == doctest::Approx(5.0)); // last slope is 1
    CHECK(p.eval(0.0) == 0.0);
}

TEST_CASE("table uptake rejects non-monotone or nonzero-origin data") {
    CHECK_THROWS_AS(UptakeFunction::table({0.0, 1.0}, {0.5, 1.0}),
                    std::invalid_argument); // p(0) != 0
    CHECK_THROWS_AS(UptakeFunction::table({0.0, 1.0, 2.0}, {0.0, 2.0, 1.0}),
                    std::invalid_argument); // not increasing
    CHECK_THROWS_AS(UptakeFunction::table({0.5, 1.0}, {0.0, 1.0}),
                    std::invalid_argument); // first knot must be s = 0
}

TEST_CASE("model construction validates tau") {
    auto p = UptakeFunction::monod(1.0, 0.3);
    CHECK_THROWS_AS(ChemostatModel(p, TimeFunction::constant(1.0),
                                   TimeFunction::constant(0.3), -0.5),
                    std::invalid_argument);
}

TEST_CASE("history interpolation") {
    History h(2.0, {-2.0, 0.0}, {1.0, 3.0}, {-2.0, -1.0, 0.0}, {0.0, 0.5, 0.25});
    CHECK(h.s_at(-1.0) == doctest::Approx(2.0));
    CHECK(h.x_at(-1.5) == doctest::Approx(0.25));
    CHECK(h.x_at(0.0) == doctest::Approx(0.25));
    CHECK_THROWS_AS(History(2.0, {-1.0, 0.0}, {1.0, 1.0}, {-2.0, 0.0}, {0.1, 0.1}),
                    std::invalid_argument); // s knots must span [-tau, 0]
}

TEST_CASE("constant history helper") {
    auto h = History::constants(1.5, 0.8, 0.2);
    CHECK(h.s_at(-1.5) == 0.8);
    CHECK(h.s_at(-0.3) == 0.8);
    CHECK(h.x_at(0.0) == 0.2);
}

TEST_CASE("null detection") {
    // x identically zero: null
    CHECK_FALSE(is_non_null(History::constants(1.0, 1.0, 0.0)));
    // x(0) > 0: non-null regardless of s
    CHECK(is_non_null(History::constants(1.0, 0.0, 0.1)));
    // x positive somewhere in the past with nutrient present there: non-null
    History seeded(1.0, {-1.0, 0.0}, {1.0, 1.0}, {-1.0, -0.5, 0.0},
                   {0.0, 0.4, 0.0});
    CHECK(is_non_null(seeded));
    // x positive only where s = 0 and x(0) = 0: cannot seed growth
    History starved(1.0, {-1.0, -0.5, 0.0}, {0.0, 0.0, 0.0},
                    {-1.0, -0.5, 0.0}, {0.0, 0.4, 0.0});
    CHECK_FALSE(is_non_null(starved));
}

TEST_CASE("zero-delay history") {
    auto h = History::constants(0.0, 1.0, 0.3);
    CHECK(h.s_at(0.0) == 1.0);
    CHECK(h.x_at(0.0) == 0.3);
    CHECK(is_non_null(h));
}
