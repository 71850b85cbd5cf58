#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "spiralsim/impact.hpp"
#include "spiralsim/scenario.hpp"

namespace {

// Exit codes: 0 success, 1 configuration/validation error, 2 numeric failure.
constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitNumeric = 2;

int execute(const std::string& path, bool sweep_requested, const spiralsim::RunOptions& options) {
    try {
        const spiralsim::Scenario scenario = spiralsim::parse_scenario_file(path);
        if (sweep_requested && scenario.command != spiralsim::Command::Sweep) {
            std::cerr << "error: 'sweep' expects a scenario with command = sweep (got '"
                      << spiralsim::to_string(scenario.command) << "'); use 'run' instead\n";
            return kExitValidation;
        }
        if (!sweep_requested && scenario.command == spiralsim::Command::Sweep) {
            std::cerr << "error: scenario has command = sweep; invoke it via 'sweep'\n";
            return kExitValidation;
        }
        const auto written = sweep_requested ? spiralsim::run_sweep(scenario, options)
                                             : spiralsim::run_scenario(scenario, options);
        for (const std::string& file : written) {
            std::cout << file << '\n';
        }
        return kExitOk;
    } catch (const spiralsim::ScenarioError& error) {
        std::cerr << "error: " << error.what() << '\n';
        return kExitValidation;
    } catch (const std::invalid_argument& error) {
        std::cerr << "error: " << error.what() << '\n';
        return kExitValidation;
    } catch (const spiralsim::SolverError& error) {
        std::cerr << "numeric failure: " << error.what() << " (residual " << error.residual
                  << ")\n";
        return kExitNumeric;
    } catch (const std::exception& error) {
        std::cerr << "numeric failure: " << error.what() << '\n';
        return kExitNumeric;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Leverage-spiral market simulator: spirals, growth exponents, extraction, "
                 "rebalancing regress, roundtrip cycles, haircut policies"};
    app.require_subcommand(1);

    spiralsim::RunOptions options;
    app.add_option("--out", options.out_override, "Output path prefix (overrides the scenario)");
    app.add_option("--tol", options.tol, "Exponent-comparison pass tolerance (default 0.05)");
    app.add_option("--threads", options.threads, "Worker threads for sweep cells")
        ->check(CLI::PositiveNumber);

    std::string run_file;
    std::string sweep_file;
    CLI::App* run_cmd = app.add_subcommand("run", "Execute a single scenario file");
    run_cmd->add_option("scenario", run_file, "Scenario file")->required();
    run_cmd->fallthrough();  // accept the global options after the subcommand too
    CLI::App* sweep_cmd = app.add_subcommand("sweep", "Execute a parameter-sweep scenario file");
    sweep_cmd->add_option("scenario", sweep_file, "Scenario file")->required();
    sweep_cmd->fallthrough();

    CLI11_PARSE(app, argc, argv);

    if (run_cmd->parsed()) {
        return execute(run_file, false, options);
    }
    return execute(sweep_file, true, options);
}
