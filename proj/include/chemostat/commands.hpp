#ifndef CHEMOSTAT_COMMANDS_HPP
#define CHEMOSTAT_COMMANDS_HPP

#include <iosfwd>
#include <string>

#include "chemostat/config.hpp"

namespace chemostat {

/// Exit codes shared by every command.
inline constexpr int kExitPersistent = 0;
inline constexpr int kExitConfigError = 1;
inline constexpr int kExitNumericError = 2;
inline constexpr int kExitNotPersistent = 3;
inline constexpr int kExitInconclusive = 4;

struct CommandOptions {
    std::string out_dir = ".";
    std::string resolution = "default"; // fast | default | fine
    std::string format = "csv";         // csv | json (tabular outputs)
};

struct SweepSpec {
    std::string parameter; // tau | D-scale | s0-scale
    double from = 0.0;
    double to = 0.0;
    int steps = 0;
};

/// Integrate the scenario, write the trajectory table and a summary JSON
/// with the tail-classification verdict; exit code follows the verdict.
int cmd_simulate(const ScenarioConfig& cfg, const CommandOptions& opts,
                 std::ostream& log);

/// Build z, c and phi for the scenario and write the (t, z, c, phi) table
/// plus a residual summary. Periodic inputs use the periodic construction
/// (the summary then carries the convergence trace; c is not tabulated).
int cmd_phi(const ScenarioConfig& cfg, const CommandOptions& opts,
            std::ostream& log);

/// Evaluate the criterion selected by the config (or by regime when
/// check = "auto") and write the report JSON; exit code follows the verdict.
int cmd_check(const ScenarioConfig& cfg, const CommandOptions& opts,
              std::ostream& log);

/// Run the built-in counterexample pipeline; one PASS/FAIL line per item.
int cmd_reproduce(const CommandOptions& opts, std::ostream& log);

/// Evaluate the criterion across a parameter range; writes (value, verdict,
/// margin) rows and reports the persistence boundary by margin sign change.
/// CHEMOSTAT_THREADS caps worker parallelism.
int cmd_sweep(const ScenarioConfig& cfg, const SweepSpec& sweep,
              const CommandOptions& opts, std::ostream& log);

} // namespace chemostat

#endif
