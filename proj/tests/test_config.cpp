#include <doctest.h>

#include <cmath>
#include <string>

#include "chemostat/config.hpp"

using namespace chemostat;

namespace {

const char* kValid = R"({
  "name": "demo",
  "model": {
    "uptake": {"kind": "monod", "m": 1.0, "a": 0.3},
    "s0": {"kind": "constant", "value": 1.0},
    "D": {"kind": "constant", "value": 0.2},
    "tau": 1.0
  },
  "history": {"s": {"constant": 1.0}, "x": {"constant": 0.1}},
  "run": {"t_end": 50.0, "h": 0.01},
  "criterion": {"check": "auto"}
})";

} // namespace

TEST_CASE("valid scenario parses") {
    auto cfg = parse_scenario(kValid);
    CHECK(cfg.name == "demo");
    CHECK(cfg.model.tau == 1.0);
    CHECK(cfg.model.p.eval(0.3) == doctest::Approx(0.5));
    CHECK(cfg.t_end == 50.0);
    CHECK(cfg.h == 0.01);
    CHECK(cfg.z0 == 1.0); // defaults to the history's s(0)
    REQUIRE(cfg.history.has_value());
    CHECK(cfg.history->x_at(0.0) == 0.1);
    CHECK(cfg.warnings.empty());
}

TEST_CASE("missing fields are blamed by path") {
    try {
        parse_scenario(R"({"model": {"tau": 1.0}})");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("model.uptake") != std::string::npos);
    }
}

TEST_CASE("wrong types are blamed by path") {
    std::string doc = kValid;
    doc.replace(doc.find("\"m\": 1.0"), 8, "\"m\": \"x\"");
    try {
        parse_scenario(doc);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("model.uptake.m") != std::string::npos);
    }
}

TEST_CASE("invalid JSON is reported as such") {
    CHECK_THROWS_AS(parse_scenario("{ not json"), ConfigError);
}

TEST_CASE("unknown kinds and checks are rejected") {
    std::string doc = kValid;
    doc.replace(doc.find("\"kind\": \"monod\""), 15, "\"kind\": \"holly\"");
    CHECK_THROWS_AS(parse_scenario(doc), ConfigError);

    std::string doc2 = kValid;
    doc2.replace(doc2.find("\"check\": \"auto\""), 15, "\"check\": \"maybe\"");
    CHECK_THROWS_AS(parse_scenario(doc2), ConfigError);
}

TEST_CASE("step is lowered to divide the delay, with a warning") {
    std::string doc = kValid;
    doc.replace(doc.find("\"h\": 0.01"), 9, "\"h\": 0.03");
    auto cfg = parse_scenario(doc);
    REQUIRE(cfg.warnings.size() == 1);
    // 1.0 / 0.03 = 33.33 -> 34 steps
    CHECK(cfg.h == doctest::Approx(1.0 / 34.0).epsilon(1e-12));
    const double ratio = cfg.model.tau / cfg.h;
    CHECK(std::abs(ratio - std::round(ratio)) < 1e-9);
}

TEST_CASE("resolution presets rescale the step") {
    auto fast = parse_scenario(kValid);
    apply_resolution(fast, "fast");
    CHECK(fast.h == doctest::Approx(0.04).epsilon(1e-12));
    auto fine = parse_scenario(kValid);
    apply_resolution(fine, "fine");
    CHECK(fine.h == doctest::Approx(0.0025).epsilon(1e-12));
    auto cfg = parse_scenario(kValid);
    CHECK_THROWS_AS(apply_resolution(cfg, "turbo"), ConfigError);
}

TEST_CASE("periodic and table signals parse") {
    auto cfg = parse_scenario(R"({
      "model": {
        "uptake": {"kind": "table", "s": [0.0, 1.0], "p": [0.0, 2.0]},
        "s0": {"kind": "table", "t": [0.0, 10.0], "values": [1.0, 2.0]},
        "D": {"kind": "periodic", "omega": 5.0, "samples": [0.2, 0.3, 0.2, 0.1]},
        "tau": 0.0
      }
    })");
    CHECK(cfg.model.D.is_periodic());
    CHECK(cfg.model.D.period() == 5.0);
    CHECK(cfg.model.s0.eval(5.0) == doctest::Approx(1.5));
    CHECK(cfg.model.s0.eval(20.0) == 2.0); // hold extrapolation
    CHECK_FALSE(cfg.history.has_value());
}

TEST_CASE("semantic errors in nested values keep their path prefix") {
    std::string doc = kValid;
    doc.replace(doc.find("\"value\": 0.2"), 12, "\"value\": -0.2");
    try {
        parse_scenario(doc);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("model.D") != std::string::npos);
    }
}

TEST_CASE("load_scenario surfaces missing files") {
    CHECK_THROWS_AS(load_scenario("/nonexistent/scenario.json"), ConfigError);
}

TEST_CASE("shipped scenario files all parse") {
    for (const char* name :
         {"constant_persistent.json", "constant_washout.json",
          "periodic_persistent.json", "periodic_washout.json",
          "counterexample.json", "tau_zero.json"}) {
        auto cfg = load_scenario(std::string(SCENARIO_DIR) + "/" + name);
        CHECK(!cfg.name.empty());
        CHECK(cfg.history.has_value());
        const double ratio = cfg.model.tau > 0 ? cfg.model.tau / cfg.h : 1.0;
        CHECK(std::abs(ratio - std::round(ratio)) < 1e-9);
    }
}
