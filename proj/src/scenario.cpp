#include "spiralsim/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include "spiralsim/continuum.hpp"
#include "spiralsim/csv.hpp"
#include "spiralsim/kelly.hpp"
#include "spiralsim/policy.hpp"
#include "spiralsim/roundtrip.hpp"
#include "spiralsim/spiral.hpp"

namespace spiralsim {

namespace {

const std::set<std::string>& numeric_keys() {
    static const std::set<std::string> keys = {
        "alpha", "gamma", "k",    "khat",  "epsilon", "rounds",     "rate",
        "pool_cap", "x0", "S0",   "z0",    "mu",      "r",          "sigma",
        "V0",   "N",     "N_r",   "k_hi",  "k_lo",    "c_unit",     "cycles",
        "alpha_base", "beta_conc", "beta_liq", "liquidity_ref"};
    return keys;
}

/// Which numeric keys each command accepts (beyond the common command/out).
const std::set<std::string>& allowed_keys(Command command) {
    static const std::set<std::string> spiral = {"alpha", "gamma",    "k",  "epsilon", "rounds",
                                                 "rate",  "pool_cap", "x0", "S0",      "z0"};
    static const std::set<std::string> exponents = {"alpha", "gamma", "k",  "khat", "epsilon",
                                                    "rounds", "rate", "x0", "S0",   "z0"};
    static const std::set<std::string> kelly = {"mu", "r",  "sigma", "V0",
                                                "S0", "k",  "gamma", "rounds"};
    static const std::set<std::string> roundtrip = {"N",      "N_r",    "k_hi", "k_lo", "gamma",
                                                    "c_unit", "cycles", "S0"};
    static const std::set<std::string> policy = {
        "alpha_base", "beta_conc", "beta_liq", "liquidity_ref", "gamma", "k",
        "epsilon",    "rounds",    "rate",     "pool_cap",      "x0",    "S0", "z0"};
    static const std::set<std::string> sweep = {"alpha", "gamma",    "k",  "epsilon", "rounds",
                                                "rate",  "pool_cap", "x0", "S0",      "z0"};
    switch (command) {
        case Command::Spiral: return spiral;
        case Command::Exponents: return exponents;
        case Command::Kelly: return kelly;
        case Command::Roundtrip: return roundtrip;
        case Command::Policy: return policy;
        case Command::Sweep: return sweep;
    }
    return spiral;
}

std::vector<std::string> required_keys(Command command) {
    switch (command) {
        case Command::Spiral:
        case Command::Exponents:
        case Command::Sweep: return {"alpha", "gamma", "k", "rounds"};
        case Command::Kelly: return {"mu", "r", "sigma", "k", "gamma"};
        case Command::Roundtrip: return {"N", "N_r", "k_hi", "k_lo", "gamma", "cycles"};
        case Command::Policy: return {"alpha_base", "gamma", "k", "rounds", "liquidity_ref"};
    }
    return {};
}

std::string trim(const std::string& text) {
    const auto begin = text.find_first_not_of(" \t\r");
    if (begin == std::string::npos) {
        return "";
    }
    const auto end = text.find_last_not_of(" \t\r");
    return text.substr(begin, end - begin + 1);
}

double parse_double(const std::string& token, std::size_t line_no, const std::string& key) {
    const std::string value = trim(token);
    double parsed = 0.0;
    const auto result = std::from_chars(value.data(), value.data() + value.size(), parsed);
    if (result.ec != std::errc() || result.ptr != value.data() + value.size()) {
        throw ScenarioError("line " + std::to_string(line_no) + ": key '" + key +
                            "' has a malformed numeric value '" + value + "'");
    }
    return parsed;
}

std::size_t to_count(double value, const std::string& key) {
    if (!(value > 0.0) || value != std::floor(value) || value > 1e9) {
        throw ScenarioError("key '" + key + "' must be a positive integer count");
    }
    return static_cast<std::size_t>(value);
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> parts;
    std::stringstream stream(text);
    std::string item;
    while (std::getline(stream, item, ',')) {
        parts.push_back(trim(item));
    }
    return parts;
}

void check_range(bool ok, const std::string& message) {
    if (!ok) {
        throw ScenarioError(message);
    }
}

/// Precondition pass over a fully parsed document, before anything runs.
void validate_scenario(const Scenario& scenario) {
    for (const std::string& key : required_keys(scenario.command)) {
        const bool swept = std::any_of(scenario.axes.begin(), scenario.axes.end(),
                                       [&](const SweepAxis& axis) { return axis.param == key; });
        if (!scenario.has(key) && !swept) {
            throw ScenarioError("command '" + std::string(to_string(scenario.command)) +
                                "' requires key '" + key + "'");
        }
    }

    if (scenario.has("alpha")) {
        check_range(scenario.at("alpha") > 0.0 && scenario.at("alpha") < 1.0,
                    "alpha must lie in (0,1)");
    }
    if (scenario.has("alpha_base")) {
        check_range(scenario.at("alpha_base") > 0.0 && scenario.at("alpha_base") < 1.0,
                    "alpha_base must lie in (0,1)");
    }
    if (scenario.has("gamma")) {
        check_range(scenario.at("gamma") > 0.0 && scenario.at("gamma") <= 1.0,
                    "gamma must lie in (0,1]");
    }
    for (const char* key : {"k", "khat", "k_hi", "k_lo", "rate", "c_unit", "z0", "N",
                            "beta_conc", "beta_liq"}) {
        if (scenario.has(key)) {
            check_range(scenario.at(key) >= 0.0, std::string(key) + " must be >= 0");
        }
    }
    if (scenario.has("epsilon")) {
        check_range(scenario.at("epsilon") >= 0.0 && scenario.at("epsilon") <= 1.0,
                    "epsilon must lie in [0,1]");
    }
    for (const char* key : {"x0", "S0", "V0", "pool_cap", "sigma", "N_r", "liquidity_ref"}) {
        if (scenario.has(key)) {
            check_range(scenario.at(key) > 0.0, std::string(key) + " must be > 0");
        }
    }
    if (scenario.has("rounds")) {
        to_count(scenario.at("rounds"), "rounds");
    }
    if (scenario.has("cycles")) {
        to_count(scenario.at("cycles"), "cycles");
    }
    if (scenario.command == Command::Roundtrip && scenario.has("k_hi") && scenario.has("k_lo")) {
        check_range(scenario.at("k_hi") >= scenario.at("k_lo"), "k_hi must be >= k_lo");
    }

    if (scenario.command == Command::Sweep) {
        check_range(!scenario.axes.empty(), "sweep requires at least one axis");
        check_range(scenario.axes.size() <= 2, "sweep supports at most 2 axes");
        static const std::set<std::string> sweepable = {"alpha", "gamma", "k", "epsilon", "rate"};
        for (const SweepAxis& axis : scenario.axes) {
            check_range(sweepable.count(axis.param) > 0,
                        "sweep.param '" + axis.param + "' is not sweepable");
            check_range(axis.step > 0.0, "sweep.step must be > 0");
            check_range(axis.from <= axis.to, "sweep.from must not exceed sweep.to");
        }
    } else {
        check_range(scenario.axes.empty(), "sweep.* keys are only valid with command = sweep");
    }
}

}  // namespace

const char* to_string(Command c) {
    switch (c) {
        case Command::Spiral: return "spiral";
        case Command::Exponents: return "exponents";
        case Command::Kelly: return "kelly";
        case Command::Roundtrip: return "roundtrip";
        case Command::Policy: return "policy";
        case Command::Sweep: return "sweep";
    }
    return "unknown";
}

double Scenario::get(const std::string& key, double fallback) const {
    const auto it = values.find(key);
    return it == values.end() ? fallback : it->second;
}

double Scenario::at(const std::string& key) const {
    const auto it = values.find(key);
    if (it == values.end()) {
        throw ScenarioError("missing required key '" + key + "'");
    }
    return it->second;
}

bool Scenario::has(const std::string& key) const { return values.count(key) > 0; }

Scenario parse_scenario(const std::string& text) {
    Scenario scenario;
    bool saw_command = false;
    std::string raw_command;
    std::vector<std::string> sweep_params;
    std::vector<double> sweep_from;
    std::vector<double> sweep_to;
    std::vector<double> sweep_step;
    std::set<std::string> seen;

    std::stringstream stream(text);
    std::string raw_line;
    std::size_t line_no = 0;
    while (std::getline(stream, raw_line)) {
        ++line_no;
        const auto comment = raw_line.find('#');
        std::string line = trim(comment == std::string::npos ? raw_line
                                                             : raw_line.substr(0, comment));
        if (line.empty()) {
            continue;
        }
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw ScenarioError("line " + std::to_string(line_no) +
                                    ": malformed section header");
            }
            continue;  // section headers organize the file; keys stay flat
        }
        const auto equals = line.find('=');
        if (equals == std::string::npos) {
            throw ScenarioError("line " + std::to_string(line_no) +
                                ": expected 'key = value', got '" + line + "'");
        }
        const std::string key = trim(line.substr(0, equals));
        const std::string value = trim(line.substr(equals + 1));
        if (key.empty() || value.empty()) {
            throw ScenarioError("line " + std::to_string(line_no) + ": empty key or value");
        }
        if (!seen.insert(key).second) {
            throw ScenarioError("line " + std::to_string(line_no) + ": duplicate key '" + key +
                                "'");
        }

        if (key == "command") {
            raw_command = value;
            saw_command = true;
        } else if (key == "out") {
            scenario.out = value;
        } else if (key == "sweep.param") {
            sweep_params = split_list(value);
        } else if (key == "sweep.from" || key == "sweep.to" || key == "sweep.step") {
            std::vector<double> parsed;
            for (const std::string& item : split_list(value)) {
                parsed.push_back(parse_double(item, line_no, key));
            }
            (key == "sweep.from" ? sweep_from : key == "sweep.to" ? sweep_to : sweep_step) =
                parsed;
        } else if (numeric_keys().count(key) > 0) {
            scenario.values[key] = parse_double(value, line_no, key);
        } else {
            throw ScenarioError("line " + std::to_string(line_no) + ": unknown key '" + key +
                                "'");
        }
    }

    if (!saw_command) {
        throw ScenarioError("scenario is missing the 'command' key");
    }
    if (raw_command == "spiral") {
        scenario.command = Command::Spiral;
    } else if (raw_command == "exponents") {
        scenario.command = Command::Exponents;
    } else if (raw_command == "kelly") {
        scenario.command = Command::Kelly;
    } else if (raw_command == "roundtrip") {
        scenario.command = Command::Roundtrip;
    } else if (raw_command == "policy") {
        scenario.command = Command::Policy;
    } else if (raw_command == "sweep") {
        scenario.command = Command::Sweep;
    } else {
        throw ScenarioError("unknown command '" + raw_command + "'");
    }

    if (!sweep_params.empty() || !sweep_from.empty() || !sweep_to.empty() ||
        !sweep_step.empty()) {
        const std::size_t axes = sweep_params.size();
        if (sweep_from.size() != axes || sweep_to.size() != axes || sweep_step.size() != axes) {
            throw ScenarioError("sweep.param/from/to/step lists must have matching lengths");
        }
        for (std::size_t i = 0; i < axes; ++i) {
            scenario.axes.push_back({sweep_params[i], sweep_from[i], sweep_to[i], sweep_step[i]});
        }
    }

    // Reject keys the target command does not consume; a tolerated stray key
    // is indistinguishable from a misspelling that silently changed nothing.
    for (const auto& [key, value] : scenario.values) {
        (void)value;
        if (allowed_keys(scenario.command).count(key) == 0) {
            throw ScenarioError("key '" + key + "' is not applicable to command '" +
                                std::string(to_string(scenario.command)) + "'");
        }
    }

    validate_scenario(scenario);
    return scenario;
}

Scenario parse_scenario_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ScenarioError("cannot open scenario file: " + path);
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_scenario(buffer.str());
}

namespace {

struct OutputPaths {
    std::string prefix;

    std::string data(const std::string& suffix) const { return prefix + suffix; }
};

OutputPaths resolve_output(const Scenario& scenario, const RunOptions& options) {
    const std::string prefix = options.out_override.empty() ? scenario.out : options.out_override;
    if (prefix.empty()) {
        throw ScenarioError("no output prefix: set 'out' in the scenario or pass --out");
    }
    const std::filesystem::path parent = std::filesystem::path(prefix).parent_path();
    if (!parent.empty()) {
        std::filesystem::create_directories(parent);
    }
    return {prefix};
}

void write_summary(const std::string& path, const std::vector<std::string>& lines) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open output file: " + path);
    }
    for (const std::string& line : lines) {
        out << line << '\n';
    }
}

MarketState initial_state(const Scenario& scenario) {
    MarketState state;
    state.x = scenario.get("x0", 100.0);
    state.y = 0.0;
    state.z = scenario.get("z0", 0.0);
    state.s = scenario.get("S0", 1.0);
    return state;
}

SpiralParams spiral_params(const Scenario& scenario, const RunOptions&) {
    SpiralParams params;
    params.alpha = scenario.command == Command::Policy ? scenario.at("alpha_base")
                                                       : scenario.at("alpha");
    params.epsilon = scenario.get("epsilon", 0.0);
    params.rounds = to_count(scenario.at("rounds"), "rounds");
    params.rate_per_round = scenario.get("rate", 0.0);
    if (scenario.has("pool_cap")) {
        params.pool_cap = scenario.at("pool_cap");
    }
    return params;
}

std::vector<std::string> trace_row(const RoundRecord& record, bool with_alpha) {
    std::vector<std::string> row = {
        format_number(record.round),  format_number(record.y_borrowed),
        format_number(record.w_invested), format_number(record.e_extracted),
        format_number(record.x),      format_number(record.z),
        format_number(record.s),      format_number(record.ltv)};
    if (with_alpha) {
        row.push_back(format_number(record.alpha_eff));
    }
    return row;
}

std::vector<std::string> trace_summary_lines(const Scenario& scenario,
                                             const SpiralTrace& trace) {
    return {
        std::string("command: ") + to_string(scenario.command),
        std::string("termination: ") + to_string(trace.termination),
        "rounds_recorded: " + format_number(trace.rounds.size()),
        "total_borrowed: " + format_number(trace.total_borrowed),
        "total_extracted: " + format_number(trace.total_extracted),
        std::string("price_strictly_increasing: ") + (trace.price_monotonic ? "true" : "false"),
        "final_x: " + format_number(trace.final_state.x),
        "final_z: " + format_number(trace.final_state.z),
        "final_S: " + format_number(trace.final_state.s),
        std::string("stability: ") +
            (trace.rounds.empty() ? "undetermined" : to_string(stability_report(trace))),
    };
}

std::size_t last_decade_start(std::size_t n) { return std::max<std::size_t>(1, (n + 9) / 10); }

/// Exponent-report row (9 columns); empty cells where a regime has no numbers.
std::vector<std::string> exponent_row(const ComparisonReport& report) {
    std::vector<std::string> row(9);
    row[0] = format_number(report.alpha);
    row[1] = format_number(report.gamma);
    if (report.closed.regime != Regime::Singular) {
        row[2] = format_number(report.closed.m);
        row[3] = format_number(report.closed.n);
    }
    row[4] = format_number(report.m_fit);
    row[5] = format_number(report.n_fit);
    if (report.closed.regime == Regime::Growth) {
        row[6] = format_number(report.m_err);
        row[7] = format_number(report.n_err);
    }
    row[8] = report.verdict;
    return row;
}

constexpr const char* kTraceHeader = "round,y_borrowed,w_invested,e_extracted,x,z,S,ltv";
constexpr const char* kExponentHeader =
    "alpha,gamma,m_closed,n_closed,m_fit,n_fit,m_err,n_err,verdict";

std::vector<std::string> run_spiral_command(const Scenario& scenario, const RunOptions& options) {
    const OutputPaths paths = resolve_output(scenario, options);
    const ImpactModel model{scenario.at("k"), scenario.at("gamma")};
    const SpiralTrace trace = run_spiral(initial_state(scenario), spiral_params(scenario, options), model);

    std::vector<std::vector<std::string>> rows;
    rows.reserve(trace.rounds.size());
    for (const RoundRecord& record : trace.rounds) {
        rows.push_back(trace_row(record, false));
    }
    const std::string trace_path = paths.data("_trace.csv");
    write_csv(trace_path, kTraceHeader, rows);

    const std::string summary_path = paths.data("_summary.txt");
    write_summary(summary_path, trace_summary_lines(scenario, trace));
    return {trace_path, summary_path};
}

std::vector<std::string> run_policy_command(const Scenario& scenario, const RunOptions& options) {
    const OutputPaths paths = resolve_output(scenario, options);
    const ImpactModel model{scenario.at("k"), scenario.at("gamma")};
    HaircutPolicy policy;
    policy.alpha_base = scenario.at("alpha_base");
    policy.beta_conc = scenario.get("beta_conc", 0.0);
    policy.beta_liq = scenario.get("beta_liq", 0.0);
    policy.liquidity_ref = scenario.at("liquidity_ref");

    const SpiralTrace trace = run_spiral_with_policy(initial_state(scenario),
                                                     spiral_params(scenario, options), policy, model);

    std::vector<std::vector<std::string>> rows;
    rows.reserve(trace.rounds.size());
    for (const RoundRecord& record : trace.rounds) {
        rows.push_back(trace_row(record, true));
    }
    const std::string trace_path = paths.data("_trace.csv");
    write_csv(trace_path, std::string(kTraceHeader) + ",alpha_eff", rows);

    const std::string summary_path = paths.data("_summary.txt");
    write_summary(summary_path, trace_summary_lines(scenario, trace));
    return {trace_path, summary_path};
}

std::vector<std::string> run_exponents_command(const Scenario& scenario,
                                               const RunOptions& options) {
    const OutputPaths paths = resolve_output(scenario, options);
    const double alpha = scenario.at("alpha");
    const double gamma = scenario.at("gamma");
    const ImpactModel model{scenario.at("k"), gamma};
    const SpiralParams params = spiral_params(scenario, options);
    const SpiralTrace trace = run_spiral(initial_state(scenario), params, model);

    const std::size_t n = trace.rounds.size();
    const double compare_tol = options.tol > 0.0 ? options.tol : 0.05;
    const ComparisonReport report =
        compare_discrete_continuum(trace, alpha, gamma, last_decade_start(n), n, compare_tol);

    const std::string report_path = paths.data("_exponents.csv");
    write_csv(report_path, kExponentHeader, {exponent_row(report)});

    std::vector<std::string> summary = {
        std::string("command: ") + to_string(scenario.command),
        std::string("regime: ") + to_string(report.closed.regime),
        "verdict: " + report.verdict,
        std::string("termination: ") + to_string(trace.termination),
    };
    if (scenario.has("khat")) {
        // Cross-check the continuum path itself when a continuum coefficient
        // is supplied: integrate the reduced system and fit slopes vs time.
        ContinuumParams cont;
        cont.khat = scenario.at("khat");
        cont.gamma = gamma;
        const auto trajectory = integrate_ode(alpha, cont);
        std::vector<double> ts;
        std::vector<double> xs;
        std::vector<double> prices;
        for (const OdePoint& point : trajectory) {
            ts.push_back(point.t);
            xs.push_back(point.x);
            prices.push_back(point.s);
        }
        summary.push_back("ode_m_fit: " + format_number(fit_power_law_xy(ts, xs).slope));
        summary.push_back("ode_n_fit: " + format_number(fit_power_law_xy(ts, prices).slope));
    }
    const std::string summary_path = paths.data("_summary.txt");
    write_summary(summary_path, summary);
    return {report_path, summary_path};
}

std::vector<std::string> run_kelly_command(const Scenario& scenario, const RunOptions& options) {
    const OutputPaths paths = resolve_output(scenario, options);
    KellyParams params;
    params.mu = scenario.at("mu");
    params.r = scenario.at("r");
    params.sigma = scenario.at("sigma");
    params.v0 = scenario.get("V0", 1.0);
    params.s0 = scenario.get("S0", 1.0);
    params.model = ImpactModel{scenario.at("k"), scenario.at("gamma")};
    params.max_steps = to_count(scenario.get("rounds", 200.0), "rounds");

    const RegressSeries series = simulate_regress(params);
    std::vector<std::vector<std::string>> rows;
    rows.reserve(series.steps.size());
    std::vector<double> adjustments;
    adjustments.reserve(series.steps.size());
    for (const RegressStep& step : series.steps) {
        rows.push_back({format_number(step.step), format_number(step.trade_units),
                        format_number(step.price), format_number(step.portfolio_value)});
        adjustments.push_back(step.trade_units);
    }
    const std::string series_path = paths.data("_kelly.csv");
    write_csv(series_path, "step,trade_units,price,portfolio_value", rows);

    const RegressClass label = classify_regress(adjustments, params.ratio_window);
    const std::string summary_path = paths.data("_summary.txt");
    write_summary(summary_path,
                  {std::string("command: ") + to_string(scenario.command),
                   "kelly_fraction: " + format_number(kelly_fraction(params.mu, params.r, params.sigma)),
                   "steps: " + format_number(series.steps.size()),
                   std::string("overflow_halt: ") + (series.overflow ? "true" : "false"),
                   std::string("classification: ") + to_string(label.label),
                   "estimated_ratio: " + format_number(label.estimated_ratio)});
    return {series_path, summary_path};
}

std::vector<std::string> run_roundtrip_command(const Scenario& scenario,
                                               const RunOptions& options) {
    const OutputPaths paths = resolve_output(scenario, options);
    RoundtripParams params;
    params.position_units = scenario.get("N", 0.0);
    params.roundtrip_units = scenario.at("N_r");
    params.model_hi = ImpactModel{scenario.at("k_hi"), scenario.at("gamma")};
    params.model_lo = ImpactModel{scenario.at("k_lo"), scenario.at("gamma")};
    params.cost_per_unit = scenario.get("c_unit", 0.0);
    params.cycles = to_count(scenario.at("cycles"), "cycles");
    params.s0 = scenario.get("S0", 1.0);

    const RoundtripTrace trace = simulate_roundtrip(params);
    std::vector<std::vector<std::string>> rows;
    rows.reserve(trace.cycles.size());
    for (const CycleRecord& record : trace.cycles) {
        rows.push_back({format_number(record.cycle), format_number(record.ds_buy),
                        format_number(record.ds_sell), format_number(record.ds_net),
                        format_number(record.cost), format_number(record.mtm_gain),
                        format_number(record.pnl_cum)});
    }
    const std::string trace_path = paths.data("_roundtrip.csv");
    write_csv(trace_path, "cycle,dS_buy,dS_sell,dS_net,cost,mtm_gain,pnl_cum", rows);

    const std::string summary_path = paths.data("_summary.txt");
    write_summary(summary_path,
                  {std::string("command: ") + to_string(scenario.command),
                   "total_pnl: " + format_number(trace.total_pnl),
                   "mean_dS: " + format_number(trace.mean_ds),
                   "mean_dC: " + format_number(trace.mean_dc),
                   std::string("viable: ") + (trace.decision.viable ? "true" : "false"),
                   "viability_margin: " + format_number(trace.decision.margin),
                   "final_price: " + format_number(trace.final_price)});
    return {trace_path, summary_path};
}

std::vector<double> axis_values(const SweepAxis& axis) {
    std::vector<double> values;
    // Half-step slack absorbs accumulated rounding at the far endpoint.
    for (double v = axis.from; v <= axis.to + 0.5 * axis.step; v += axis.step) {
        values.push_back(std::min(v, axis.to));
    }
    return values;
}

constexpr const char* kSweepHeader =
    "alpha,gamma,m_closed,n_closed,m_fit,n_fit,m_err,n_err,verdict,"
    "total_borrowed,total_extracted,S_final,stability";

std::vector<std::string> sweep_cell(const Scenario& base, const RunOptions& options,
                                    const std::vector<std::pair<std::string, double>>& overrides) {
    Scenario cell = base;
    cell.command = Command::Spiral;
    cell.axes.clear();
    for (const auto& [key, value] : overrides) {
        cell.values[key] = value;
    }

    std::vector<std::string> row(13);
    row[0] = format_number(cell.at("alpha"));
    row[1] = format_number(cell.at("gamma"));
    try {
        const ImpactModel model{cell.at("k"), cell.at("gamma")};
        const SpiralTrace trace =
            run_spiral(initial_state(cell), spiral_params(cell, options), model);
        row[9] = format_number(trace.total_borrowed);
        row[10] = format_number(trace.total_extracted);
        row[11] = format_number(trace.final_state.s);
        row[12] = trace.rounds.empty() ? "undetermined" : to_string(stability_report(trace));

        const std::size_t n = trace.rounds.size();
        const double compare_tol = options.tol > 0.0 ? options.tol : 0.05;
        const ComparisonReport report = compare_discrete_continuum(
            trace, cell.at("alpha"), cell.at("gamma"), last_decade_start(n), n, compare_tol);
        const std::vector<std::string> fitted = exponent_row(report);
        std::copy(fitted.begin() + 2, fitted.end(), row.begin() + 2);
    } catch (const std::exception& error) {
        std::string message = error.what();
        std::replace(message.begin(), message.end(), ',', ';');
        row[8] = "error: " + message;
    }
    return row;
}

}  // namespace

std::vector<std::string> run_scenario(const Scenario& scenario, const RunOptions& options) {
    switch (scenario.command) {
        case Command::Spiral: return run_spiral_command(scenario, options);
        case Command::Exponents: return run_exponents_command(scenario, options);
        case Command::Kelly: return run_kelly_command(scenario, options);
        case Command::Roundtrip: return run_roundtrip_command(scenario, options);
        case Command::Policy: return run_policy_command(scenario, options);
        case Command::Sweep: return run_sweep(scenario, options);
    }
    throw ScenarioError("unhandled command");
}

std::vector<std::string> run_sweep(const Scenario& scenario, const RunOptions& options) {
    if (scenario.command != Command::Sweep) {
        throw ScenarioError("run_sweep requires a scenario with command = sweep");
    }
    const OutputPaths paths = resolve_output(scenario, options);

    // Cartesian product in ascending axis order; cell index encodes position
    // so assembly is independent of execution order.
    std::vector<std::vector<std::pair<std::string, double>>> cells;
    const std::vector<double> first = axis_values(scenario.axes[0]);
    if (scenario.axes.size() == 1) {
        for (double v : first) {
            cells.push_back({{scenario.axes[0].param, v}});
        }
    } else {
        const std::vector<double> second = axis_values(scenario.axes[1]);
        for (double a : first) {
            for (double b : second) {
                cells.push_back({{scenario.axes[0].param, a}, {scenario.axes[1].param, b}});
            }
        }
    }

    std::vector<std::vector<std::string>> rows(cells.size());
    const std::size_t workers = std::max<std::size_t>(1, options.threads);
    if (workers == 1) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            rows[i] = sweep_cell(scenario, options, cells[i]);
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t t = 0; t < workers; ++t) {
            pool.emplace_back([&]() {
                for (std::size_t i = next.fetch_add(1); i < cells.size();
                     i = next.fetch_add(1)) {
                    rows[i] = sweep_cell(scenario, options, cells[i]);
                }
            });
        }
        for (std::thread& worker : pool) {
            worker.join();
        }
    }

    const std::string table_path = paths.data("_sweep.csv");
    write_csv(table_path, kSweepHeader, rows);

    const std::string summary_path = paths.data("_summary.txt");
    write_summary(summary_path, {std::string("command: ") + to_string(scenario.command),
                                 "cells: " + format_number(cells.size())});
    return {table_path, summary_path};
}

}  // namespace spiralsim
