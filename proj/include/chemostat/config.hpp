#ifndef CHEMOSTAT_CONFIG_HPP
#define CHEMOSTAT_CONFIG_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "chemostat/model.hpp"

namespace chemostat {

/// Scenario-file problem: unparsable JSON or a semantically invalid field.
/// The message names the offending field by dotted path.
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// One scenario: the model, an initial condition, run controls, and the
/// criterion block. Parsed from a single JSON document.
struct ScenarioConfig {
    std::string name;

    ChemostatModel model;
    std::optional<History> history; // required by simulate, optional elsewhere

    // run block
    double t_end = 100.0;
    double h = 1e-2;
    double z0 = 0.0; // washout initial nutrient; defaults to s(0-) history or s0(0)
    double phi_tol = 1e-8;
    double classify_threshold = 1e-4;
    double tail_fraction = 0.25;

    // criterion block
    std::string check = "auto"; // auto | constant | periodic | window | search | necessary
    double omega = 0.0;
    double eta = 0.0;
    double T = 0.0;
    double horizon = 0.0;
    double stride = 0.0;

    std::vector<std::string> warnings;
};

/// Parse a scenario from JSON text. Throws ConfigError with a field-anchored
/// message on any problem. If tau > 0 and h does not divide tau, h is
/// lowered to tau / ceil(tau/h) and a warning is recorded.
ScenarioConfig parse_scenario(const std::string& json_text);

/// parse_scenario on the contents of a file.
ScenarioConfig load_scenario(const std::string& path);

/// Scale the step size for a resolution preset: "fast" = 4h, "default" = h,
/// "fine" = h/4; h is re-aligned to divide tau afterwards.
void apply_resolution(ScenarioConfig& cfg, const std::string& resolution);

} // namespace chemostat

#endif
