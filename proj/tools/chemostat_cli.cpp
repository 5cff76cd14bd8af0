#include <iostream>

#include <CLI11.hpp>

#include "chemostat/commands.hpp"
#include "chemostat/dde.hpp"

using namespace chemostat;

int main(int argc, char** argv) {
    CLI::App app{"Chemostat persistence toolkit: delayed single-species model "
                 "with time-varying nutrient input and washout"};
    app.require_subcommand(1);

    std::string config_path;
    SweepSpec sweep;
    CommandOptions opts;

    auto add_common = [&](CLI::App* sub, bool needs_config) {
        auto* c = sub->add_option("--config", config_path, "scenario JSON file");
        if (needs_config) c->required();
        sub->add_option("--out", opts.out_dir, "output directory")
            ->capture_default_str();
        sub->add_option("--resolution", opts.resolution, "fast, default, or fine")
            ->check(CLI::IsMember({"fast", "default", "fine"}))
            ->capture_default_str();
        sub->add_option("--format", opts.format, "tabular output format")
            ->check(CLI::IsMember({"csv", "json"}))
            ->capture_default_str();
    };

    auto* simulate = app.add_subcommand("simulate", "integrate the scenario and "
                                                    "classify its tail");
    add_common(simulate, true);
    auto* phi = app.add_subcommand("phi", "construct the washout solution and "
                                          "its inherent weight function");
    add_common(phi, true);
    auto* check = app.add_subcommand("check", "evaluate the persistence "
                                              "criterion for the scenario");
    add_common(check, true);
    auto* reproduce =
        app.add_subcommand("reproduce", "run the built-in counterexample checks");
    add_common(reproduce, false);
    auto* sw = app.add_subcommand("sweep", "scan a parameter range and locate "
                                           "the persistence boundary");
    add_common(sw, true);
    sw->add_option("--param", sweep.parameter, "tau, D-scale, or s0-scale")
        ->required();
    sw->add_option("--from", sweep.from, "range start")->required();
    sw->add_option("--to", sweep.to, "range end")->required();
    sw->add_option("--steps", sweep.steps, "grid points")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (reproduce->parsed()) return cmd_reproduce(opts, std::cout);
        const ScenarioConfig cfg = load_scenario(config_path);
        for (const auto& w : cfg.warnings) std::cerr << "warning: " << w << "\n";
        if (simulate->parsed()) return cmd_simulate(cfg, opts, std::cout);
        if (phi->parsed()) return cmd_phi(cfg, opts, std::cout);
        if (check->parsed()) return cmd_check(cfg, opts, std::cout);
        if (sw->parsed()) return cmd_sweep(cfg, sweep, opts, std::cout);
    } catch (const IntegrationError& e) {
        std::cerr << "numeric error at t = " << e.blame_time() << ": " << e.what()
                  << "\n";
        return kExitNumericError;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return kExitNumericError;
    }
    return kExitConfigError;
}
