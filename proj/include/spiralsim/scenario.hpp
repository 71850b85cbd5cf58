#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace spiralsim {

/// Configuration or validation failure in a scenario document (CLI exit 1).
class ScenarioError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Command { Spiral, Exponents, Kelly, Roundtrip, Policy, Sweep };

const char* to_string(Command c);

/// One sweep axis: a scenario key swept over an inclusive numeric range.
struct SweepAxis {
    std::string param;
    double from = 0.0;
    double to = 0.0;
    double step = 0.0;
};

/**
 * A parsed scenario document: one command plus the numeric parameter block
 * it needs. Parsing validates the whole block against the target module's
 * preconditions before anything runs; unknown or inapplicable keys are hard
 * errors rather than silent defaults.
 */
struct Scenario {
    Command command = Command::Spiral;
    std::map<std::string, double> values;  // validated numeric keys
    std::vector<SweepAxis> axes;           // sweep command only, 1-2 axes
    std::string out;                       // output path prefix

    /// Value lookup with a default for optional keys.
    double get(const std::string& key, double fallback) const;
    /// Value lookup for keys guaranteed present after validation.
    double at(const std::string& key) const;
    bool has(const std::string& key) const;
};

/**
 * Parse a flat key = value document (# comments, optional [section]
 * headers) into a validated Scenario. Throws ScenarioError with a line and
 * key diagnostic on malformed lines, unknown keys, keys inapplicable to the
 * command, duplicates, or precondition violations (e.g. "alpha must lie in
 * (0,1)").
 */
Scenario parse_scenario(const std::string& text);

/// Convenience: read the file and parse it.
Scenario parse_scenario_file(const std::string& path);

/// Runtime knobs shared by the run/sweep entry points.
struct RunOptions {
    std::string out_override;   // overrides the scenario's `out` prefix
    double tol = 0.0;           // exponent-comparison pass threshold; <= 0 keeps the 5% default
    std::size_t threads = 1;    // sweep cell parallelism
};

/**
 * Execute a non-sweep scenario: run the target module and write its data
 * CSV(s) under the output prefix plus a deterministic `_summary.txt`
 * sidecar. Returns the paths written. Numeric failures (solver
 * non-convergence, overflow) propagate as SolverError/runtime_error for the
 * CLI to map to exit code 2.
 */
std::vector<std::string> run_scenario(const Scenario& scenario, const RunOptions& options);

/**
 * Execute a sweep: the Cartesian product of the axes (at most two), one
 * spiral/exponent pipeline per cell, one summary row per cell ordered by
 * axis values. Cell failures are recorded in-row and never abort the sweep.
 * Cells run on `options.threads` workers; assembly is order-independent.
 */
std::vector<std::string> run_sweep(const Scenario& scenario, const RunOptions& options);

}  // namespace spiralsim
