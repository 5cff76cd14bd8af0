#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "chemostat/commands.hpp"

using namespace chemostat;
namespace fs = std::filesystem;

namespace {

std::string scenario(const char* name) {
    return std::string(SCENARIO_DIR) + "/" + name;
}

struct TempDir {
    fs::path path;
    explicit TempDir(const char* tag)
        : path(fs::temp_directory_path() / (std::string("chemostat_cmd_") + tag)) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string str() const { return path.string(); }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

CommandOptions opts_for(const TempDir& dir) {
    CommandOptions o;
    o.out_dir = dir.str();
    return o;
}

} // namespace

TEST_CASE("simulate: persistent scenario, exit 0, summary verdict") {
    TempDir dir("sim_p");
    std::ostringstream log;
    auto cfg = load_scenario(scenario("constant_persistent.json"));
    CHECK(cmd_simulate(cfg, opts_for(dir), log) == kExitPersistent);
    const std::string summary = slurp(dir.path / "summary.json");
    CHECK(summary.find("\"persistent\"") != std::string::npos);
    const std::string csv = slurp(dir.path / "trajectory.csv");
    CHECK(csv.rfind("t,s,x,I,y,psi,defect", 0) == 0);
}

TEST_CASE("simulate: shipped counterexample washes out, exit 3") {
    TempDir dir("sim_ce");
    std::ostringstream log;
    auto cfg = load_scenario(scenario("counterexample.json"));
    CHECK(cmd_simulate(cfg, opts_for(dir), log) == kExitNotPersistent);
    CHECK(slurp(dir.path / "summary.json").find("not-persistent") != std::string::npos);
}

TEST_CASE("simulate: null history is a config error") {
    TempDir dir("sim_null");
    std::ostringstream log;
    auto cfg = load_scenario(scenario("constant_persistent.json"));
    cfg.history = History::constants(cfg.model.tau, 1.0, 0.0);
    CHECK_THROWS_AS(cmd_simulate(cfg, opts_for(dir), log), ConfigError);
}

TEST_CASE("check: exit codes flip across the constant boundary") {
    // p(s0) = 0.5, tau = 1: boundary D* of 0.5 e^{-D} = D, about 0.3517
    auto make = [](double D) {
        std::ostringstream doc;
        doc << R"({"model": {"uptake": {"kind": "monod", "m": 1.0, "a": 1.0},
                 "s0": {"kind": "constant", "value": 1.0},
                 "D": {"kind": "constant", "value": )"
            << D << R"(}, "tau": 1.0}})";
        return parse_scenario(doc.str());
    };
    TempDir dir("check_flip");
    std::ostringstream log;
    CHECK(cmd_check(make(0.32), opts_for(dir), log) == kExitPersistent);
    CHECK(cmd_check(make(0.39), opts_for(dir), log) == kExitNotPersistent);
    const std::string report = slurp(dir.path / "report.json");
    CHECK(report.find("\"criterion\"") != std::string::npos);
}

TEST_CASE("check: periodic counterexample exits 3 with the known margin") {
    TempDir dir("check_ce");
    std::ostringstream log;
    auto cfg = load_scenario(scenario("counterexample.json"));
    CHECK(cmd_check(cfg, opts_for(dir), log) == kExitNotPersistent);
    // margin lands near -0.16
    const std::string report = slurp(dir.path / "report.json");
    const auto pos = report.find("\"margin\": ");
    REQUIRE(pos != std::string::npos);
    const double margin = std::strtod(report.c_str() + pos + 10, nullptr);
    CHECK(margin == doctest::Approx(-0.16).epsilon(0.05));
}

TEST_CASE("phi: zero delay gives a constant-one phi column") {
    TempDir dir("phi_tau0");
    std::ostringstream log;
    auto cfg = load_scenario(scenario("tau_zero.json"));
    CHECK(cmd_phi(cfg, opts_for(dir), log) == 0);
    std::istringstream csv(slurp(dir.path / "phi.csv"));
    std::string line;
    std::getline(csv, line);
    CHECK(line == "t,z,c,phi");
    while (std::getline(csv, line)) {
        const auto last = line.rfind(',');
        CHECK(std::strtod(line.c_str() + last + 1, nullptr) == 1.0);
    }
}

TEST_CASE("phi: counterexample summary reports a small residual and the trace") {
    TempDir dir("phi_ce");
    std::ostringstream log;
    auto cfg = load_scenario(scenario("counterexample.json"));
    CHECK(cmd_phi(cfg, opts_for(dir), log) == 0);
    const std::string summary = slurp(dir.path / "phi_summary.json");
    CHECK(summary.find("convergence_trace") != std::string::npos);
    const auto pos = summary.find("\"residual\": ");
    REQUIRE(pos != std::string::npos);
    CHECK(std::strtod(summary.c_str() + pos + 12, nullptr) < 1e-5);
}

TEST_CASE("sweep: D-scale boundary matches the scalar root") {
    TempDir dir("sweep_d");
    std::ostringstream log;
    auto cfg = load_scenario(scenario("constant_persistent.json"));
    SweepSpec spec{"D-scale", 0.5, 5.0, 46};
    CHECK(cmd_sweep(cfg, spec, opts_for(dir), log) == 0);
    const std::string summary = slurp(dir.path / "sweep_summary.json");
    const auto pos = summary.find("\"estimate\": ");
    REQUIRE(pos != std::string::npos);
    const double est = std::strtod(summary.c_str() + pos + 12, nullptr);
    // oracle: root of (1/1.3) e^{-D} = D, then divided by the base D = 0.2
    double lo = 0.1, hi = 1.0;
    for (int i = 0; i < 100; ++i) {
        const double mid = 0.5 * (lo + hi);
        ((1.0 / 1.3) * std::exp(-mid) - mid > 0.0 ? lo : hi) = mid;
    }
    CHECK(est == doctest::Approx(lo / 0.2).epsilon(1e-2));
}

TEST_CASE("sweep: tau boundary matches ln(p/D)/D") {
    TempDir dir("sweep_tau");
    std::ostringstream log;
    auto cfg = load_scenario(scenario("constant_persistent.json"));
    SweepSpec spec{"tau", 0.0, 12.0, 49};
    CHECK(cmd_sweep(cfg, spec, opts_for(dir), log) == 0);
    const std::string summary = slurp(dir.path / "sweep_summary.json");
    const auto pos = summary.find("\"estimate\": ");
    REQUIRE(pos != std::string::npos);
    const double est = std::strtod(summary.c_str() + pos + 12, nullptr);
    // p e^{-D tau} = D  =>  tau* = ln(p/D)/D with p = 1/1.3, D = 0.2
    const double tau_star = std::log((1.0 / 1.3) / 0.2) / 0.2;
    CHECK(est == doctest::Approx(tau_star).epsilon(1e-2));
}

TEST_CASE("sweep: range without a crossing reports no boundary") {
    TempDir dir("sweep_none");
    std::ostringstream log;
    auto cfg = load_scenario(scenario("constant_persistent.json"));
    SweepSpec spec{"s0-scale", 1.0, 2.0, 6};
    CHECK(cmd_sweep(cfg, spec, opts_for(dir), log) == 0);
    const std::string summary = slurp(dir.path / "sweep_summary.json");
    CHECK(summary.find("\"boundaries\": []") != std::string::npos);
}

TEST_CASE("sweep: bad parameter or range is a config error") {
    TempDir dir("sweep_bad");
    std::ostringstream log;
    auto cfg = load_scenario(scenario("constant_persistent.json"));
    CHECK_THROWS_AS(cmd_sweep(cfg, {"pressure", 0.1, 1.0, 5}, opts_for(dir), log),
                    ConfigError);
    CHECK_THROWS_AS(cmd_sweep(cfg, {"tau", 1.0, 1.0, 5}, opts_for(dir), log),
                    ConfigError);
    CHECK_THROWS_AS(cmd_sweep(cfg, {"tau", 0.0, 1.0, 1}, opts_for(dir), log),
                    ConfigError);
}

TEST_CASE("sweep is deterministic and honors the thread cap") {
    auto run_once = [](const char* tag) {
        TempDir dir(tag);
        std::ostringstream log;
        auto cfg = load_scenario(scenario("periodic_persistent.json"));
        SweepSpec spec{"D-scale", 0.5, 4.0, 12};
        REQUIRE(cmd_sweep(cfg, spec, opts_for(dir), log) == 0);
        return slurp(dir.path / "sweep.csv");
    };
    setenv("CHEMOSTAT_THREADS", "3", 1);
    const std::string a = run_once("det_a");
    setenv("CHEMOSTAT_THREADS", "1", 1);
    const std::string b = run_once("det_b");
    unsetenv("CHEMOSTAT_THREADS");
    CHECK(a == b);
}

TEST_CASE("simulate output bytes are deterministic") {
    auto run_once = [](const char* tag) {
        TempDir dir(tag);
        std::ostringstream log;
        auto cfg = load_scenario(scenario("constant_washout.json"));
        REQUIRE(cmd_simulate(cfg, opts_for(dir), log) == kExitNotPersistent);
        return slurp(dir.path / "trajectory.csv") + slurp(dir.path / "summary.json");
    };
    CHECK(run_once("det_sim_a") == run_once("det_sim_b"));
}
