// Acceptance harness: each invocation checks one numbered criterion of the
// shipped model and prints exactly one "CRITERION N: PASS/FAIL — detail"
// line. Usage: acceptance <cli-binary> <fixtures-dir> <criterion 1..10>.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "spiralsim/continuum.hpp"
#include "spiralsim/csv.hpp"
#include "spiralsim/kelly.hpp"
#include "spiralsim/policy.hpp"
#include "spiralsim/roundtrip.hpp"
#include "spiralsim/scenario.hpp"
#include "spiralsim/spiral.hpp"

namespace fs = std::filesystem;
using namespace spiralsim;

namespace {

std::string g_cli;       // path to the scenario CLI binary
std::string g_fixtures;  // directory holding the .scn fixtures

double elapsed_ms(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
        .count();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in.good()) {
        throw std::runtime_error("cannot read " + path);
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> lines;
    std::stringstream stream(text);
    std::string line;
    while (std::getline(stream, line)) {
        lines.push_back(line);
    }
    return lines;
}

/// Value of a "key: value" line in a summary file; empty when absent.
std::string summary_value(const std::string& summary, const std::string& key) {
    const std::string prefix = key + ": ";
    for (const std::string& line : lines_of(summary)) {
        if (line.rfind(prefix, 0) == 0) {
            return line.substr(prefix.size());
        }
    }
    return {};
}

struct CliResult {
    int exit_code = -1;
    std::string output;

    /// Lines that name written files (absolute paths under our temp dirs).
    std::vector<std::string> written() const {
        std::vector<std::string> paths;
        for (const std::string& line : lines_of(output)) {
            if (!line.empty() && line.front() == '/') {
                paths.push_back(line);
            }
        }
        return paths;
    }
};

CliResult run_cli(const std::string& args) {
    const std::string cmd = g_cli + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (pipe == nullptr) {
        return {-1, "popen failed for: " + cmd};
    }
    std::string output;
    char buf[4096];
    std::size_t n = 0;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) {
        output.append(buf, n);
    }
    const int status = pclose(pipe);
    CliResult result;
    result.output = output;
    if (WIFEXITED(status)) {
        result.exit_code = WEXITSTATUS(status);
    }
    return result;
}

/// Fresh per-criterion scratch directory under the system temp root.
fs::path scratch_dir(int criterion) {
    const fs::path dir =
        fs::temp_directory_path() / "spiralsim_acceptance" / ("c" + std::to_string(criterion));
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string fmt(double v) { return format_number(v); }

// ---------------------------------------------------------------------------
// 1. Zero-impact borrowing converges to the geometric limit quickly.
// ---------------------------------------------------------------------------
bool criterion_1(std::string& detail) {
    const auto start = std::chrono::steady_clock::now();
    SpiralParams params;
    params.alpha = 0.5;
    params.rounds = 200;
    const MarketState init{100.0, 0.0, 0.0, 1.0};
    const SpiralTrace trace = run_spiral(init, params, ImpactModel{0.0, 0.5});
    const double limit = geometric_borrow_limit(0.5, 100.0, 1.0);
    const double rel_err = std::abs(trace.total_borrowed - limit) / limit;
    const double ms = elapsed_ms(start);

    const bool converged = rel_err <= 1e-6;
    const bool fast = ms < 1000.0;
    detail = "total borrowed " + fmt(trace.total_borrowed) + " vs limit " + fmt(limit) +
             " (rel err " + fmt(rel_err) + ") in " + fmt(ms) + " ms";
    return converged && fast;
}

// ---------------------------------------------------------------------------
// 2. Fitted discrete growth exponents match the tabulated closed forms
//    m = alpha/(3 alpha - 1), n = (1-alpha)/(3 alpha - 1) at gamma = 1/2,
//    within 5% over fit window [1000, 10000].
// ---------------------------------------------------------------------------
bool criterion_2(std::string& detail) {
    const double gamma = 0.5;
    const ImpactModel model{0.1, gamma};
    bool all_pass = true;
    std::string cells;

    for (const double alpha : {0.5, 2.0 / 3.0, 0.8}) {
        const auto start = std::chrono::steady_clock::now();
        SpiralParams params;
        params.alpha = alpha;
        params.rounds = 10000;
        const MarketState init{100.0, 0.0, 0.0, 1.0};
        const SpiralTrace trace = run_spiral(init, params, model);

        std::string cell = "alpha=" + fmt(alpha) + ": ";
        bool cell_pass = false;
        try {
            const ComparisonReport report =
                compare_discrete_continuum(trace, alpha, gamma, 1000, 10000, 0.05);
            cell_pass = report.pass;
            cell += "m_fit=" + fmt(report.m_fit) + "/m=" + fmt(report.closed.m) +
                    ", n_fit=" + fmt(report.n_fit) + "/n=" + fmt(report.closed.n) + " -> " +
                    report.verdict;
        } catch (const std::invalid_argument& err) {
            // The run left double range before the fit window closed; there
            // is no slope to compare, which cannot satisfy the criterion.
            cell += std::string(err.what()) + " (termination: " +
                    to_string(trace.termination) + ") -> fail";
        }
        const double ms = elapsed_ms(start);
        if (ms >= 30000.0) {
            cell_pass = false;
            cell += " [overtime " + fmt(ms) + " ms]";
        }
        all_pass = all_pass && cell_pass;
        cells += (cells.empty() ? "" : "; ") + cell;
    }
    detail = cells;
    return all_pass;
}

// ---------------------------------------------------------------------------
// 3. Closed-form exponent identities hold to 1e-12 across the growth regime.
// ---------------------------------------------------------------------------
bool criterion_3(std::string& detail) {
    std::size_t points = 0;
    double worst = 0.0;
    for (int i = 0; i < 10; ++i) {
        const double gamma = 0.05 + 0.1 * i;  // 0.05 .. 0.95
        const double boundary = gamma / (1.0 + gamma);
        for (int j = 1; j <= 10; ++j) {
            const double alpha = boundary + (0.98 - boundary) * j / 10.5;
            const ExponentPair pair = closed_form_exponents(alpha, gamma);
            if (pair.regime != Regime::Growth) {
                detail = "grid point alpha=" + fmt(alpha) + ", gamma=" + fmt(gamma) +
                         " unexpectedly outside the growth regime";
                return false;
            }
            const double d = pair.denominator;
            const double r1 = std::abs(pair.m * d - alpha * (1.0 - gamma));
            const double r2 = std::abs(pair.n * d - (1.0 - alpha) * (1.0 - gamma));
            const double r3 = std::abs(pair.m / pair.n - alpha / (1.0 - alpha));
            worst = std::max({worst, r1, r2, r3});
            ++points;
        }
    }
    detail = std::to_string(points) + " growth-regime grid points, worst identity residual " +
             fmt(worst);
    return points == 100 && worst <= 1e-12;
}

// ---------------------------------------------------------------------------
// 4. Implicit post-trade price solver: residual <= 1e-12 * S on random
//    inputs; linear-impact closed form reproduced to 1e-9.
// ---------------------------------------------------------------------------
bool criterion_4(std::string& detail) {
    std::mt19937_64 rng(20260819u);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const auto log_uniform = [&](double lo, double hi) {
        return std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * unit(rng));
    };

    double worst_rel_residual = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const double s_prev = log_uniform(1e-3, 1e3);
        const double w = (i % 100 == 0) ? 0.0 : log_uniform(1e-6, 1e6);
        const double k = 10.0 * unit(rng);
        const double gamma = 0.05 + 0.95 * unit(rng);
        const ImpactModel model{k, gamma};
        const double s = solve_post_trade_price(model, s_prev, w);
        const double residual =
            std::abs(s - s_prev - (w > 0.0 ? eval_impact(model, w / s) : 0.0));
        worst_rel_residual = std::max(worst_rel_residual, residual / s);
    }

    double worst_linear = 0.0;
    for (int i = 0; i < 2000; ++i) {
        const double s_prev = log_uniform(1e-3, 1e3);
        const double w = log_uniform(1e-6, 1e6);
        const double k = 1e-3 + 10.0 * unit(rng);
        const ImpactModel model{k, 1.0};
        const double s = solve_post_trade_price(model, s_prev, w);
        const double closed = 0.5 * (s_prev + std::sqrt(s_prev * s_prev + 4.0 * k * w));
        worst_linear = std::max(worst_linear, std::abs(s - closed) / closed);
    }

    detail = "10000 draws: worst residual/S " + fmt(worst_rel_residual) +
             "; 2000 linear-impact draws: worst closed-form deviation " + fmt(worst_linear);
    return worst_rel_residual <= 1e-12 && worst_linear <= 1e-9;
}

// ---------------------------------------------------------------------------
// 5. The exponent-denominator boundary alpha = gamma/(1+gamma) is flagged
//    singular and never reported as numeric predictions.
// ---------------------------------------------------------------------------
bool criterion_5(std::string& detail) {
    for (const double gamma : {0.25, 0.5, 0.75}) {
        const double alpha = gamma / (1.0 + gamma);
        const ExponentPair pair = closed_form_exponents(alpha, gamma);
        if (pair.regime != Regime::Singular || pair.m != 0.0 || pair.n != 0.0) {
            detail = "gamma=" + fmt(gamma) + ": boundary not reported singular";
            return false;
        }
    }

    // The full comparison pipeline must carry the flag through as a verdict.
    SpiralParams params;
    params.alpha = 1.0 / 3.0;
    params.rounds = 500;
    const SpiralTrace trace =
        run_spiral(MarketState{100.0, 0.0, 0.0, 1.0}, params, ImpactModel{0.1, 0.5});
    const ComparisonReport report =
        compare_discrete_continuum(trace, 1.0 / 3.0, 0.5, 50, 500, 0.05);
    detail = "boundary flagged singular for gamma in {0.25, 0.5, 0.75}; pipeline verdict '" +
             report.verdict + "'";
    return report.verdict == "singular" && !report.pass;
}

// ---------------------------------------------------------------------------
// 6. The recorded extraction fixture diverts more cash than the whole
//    initial position value while the price still rises every round, and its
//    extraction fraction matches the sustainable-extraction search.
// ---------------------------------------------------------------------------
bool criterion_6(std::string& detail) {
    const Scenario scenario = parse_scenario_file(g_fixtures + "/extraction_long.scn");
    SpiralParams params;
    params.alpha = scenario.at("alpha");
    params.epsilon = scenario.at("epsilon");
    params.rounds = static_cast<std::size_t>(scenario.at("rounds"));
    const ImpactModel model{scenario.at("k"), scenario.at("gamma")};
    const MarketState init{scenario.get("x0", 100.0), 0.0, scenario.get("z0", 0.0),
                           scenario.get("S0", 1.0)};
    const double initial_value = init.x * init.s - init.z;

    const SpiralTrace trace = run_spiral(init, params, model);
    const bool completed = trace.termination == Termination::Completed;
    const bool rising = trace.price_monotonic;
    const bool exceeds = trace.total_extracted > initial_value;

    // The fixture claims its epsilon came from the search at this horizon.
    const ExtractionResult search = max_sustainable_extraction(init, params, model, params.rounds);
    const bool sustainable = params.epsilon <= search.epsilon_star;
    const bool near_optimum = search.epsilon_star - params.epsilon <= 5e-4;

    detail = "extracted " + fmt(trace.total_extracted) + " > initial value " +
             fmt(initial_value) + "; termination " + to_string(trace.termination) +
             ", strictly rising price " + (rising ? "true" : "false") +
             "; search epsilon_star " + fmt(search.epsilon_star) + " vs fixture epsilon " +
             fmt(params.epsilon);
    return completed && rising && exceeds && sustainable && near_optimum;
}

// ---------------------------------------------------------------------------
// 7. Roundtrip cycling: simulated PnL sign agrees with the viability
//    decision on random parameters; symmetric impact loses exactly the cost.
// ---------------------------------------------------------------------------
bool criterion_7(std::string& detail) {
    std::mt19937_64 rng(771177u);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    std::size_t agree = 0;
    const int draws = 1000;
    for (int i = 0; i < draws; ++i) {
        RoundtripParams params;
        params.position_units = 100.0 * unit(rng);
        params.roundtrip_units = 0.01 + 5.0 * unit(rng);
        const double gamma = 0.3 + 0.7 * unit(rng);
        const double k_hi = 0.01 + 0.5 * unit(rng);
        params.model_hi = ImpactModel{k_hi, gamma};
        params.model_lo = ImpactModel{k_hi * unit(rng), gamma};
        params.cost_per_unit = 0.2 * unit(rng);
        params.cycles = 1 + static_cast<std::size_t>(19.0 * unit(rng));
        params.s0 = 0.5 + 4.5 * unit(rng);
        params.volume_norm = 0.5 + 49.5 * unit(rng);

        const RoundtripTrace trace = simulate_roundtrip(params);
        const Viability decision = viability(params.position_units, params.roundtrip_units,
                                             trace.mean_ds, trace.mean_dc);
        if ((trace.total_pnl >= 0.0) == decision.viable &&
            decision.viable == trace.decision.viable) {
            ++agree;
        }
    }

    // Equal impact regimes: no net move, so the strategy pays exactly its
    // accumulated friction.
    RoundtripParams symmetric;
    symmetric.position_units = 50.0;
    symmetric.roundtrip_units = 0.04;
    symmetric.model_hi = ImpactModel{0.2, 0.5};
    symmetric.model_lo = ImpactModel{0.2, 0.5};
    symmetric.cost_per_unit = 10.0;
    symmetric.cycles = 10;
    const RoundtripTrace null_trace = simulate_roundtrip(symmetric);
    double accumulated_cost = 0.0;
    for (const CycleRecord& record : null_trace.cycles) {
        accumulated_cost += record.cost;
    }
    const bool exact_null =
        null_trace.total_pnl == -accumulated_cost && null_trace.mean_ds == 0.0;

    detail = std::to_string(agree) + "/" + std::to_string(draws) +
             " random draws sign-consistent; symmetric null pnl " + fmt(null_trace.total_pnl) +
             " == -cost " + fmt(-accumulated_cost) + (exact_null ? " (exact)" : " (MISMATCH)");
    return agree == static_cast<std::size_t>(draws) && exact_null;
}

// ---------------------------------------------------------------------------
// 8. The haircut policy fixture bounds the otherwise divergent baseline, and
//    a policy with zero sensitivities reproduces the static engine exactly.
// ---------------------------------------------------------------------------
bool criterion_8(std::string& detail) {
    const fs::path dir = scratch_dir(8);

    const CliResult base = run_cli("run " + g_fixtures + "/spiral_divergent.scn --out " +
                                   (dir / "base").string());
    const CliResult suppressed = run_cli("run " + g_fixtures + "/policy_suppression.scn --out " +
                                         (dir / "supp").string());
    const CliResult off = run_cli("run " + g_fixtures + "/policy_off.scn --out " +
                                  (dir / "off").string());
    if (base.exit_code != 0 || suppressed.exit_code != 0 || off.exit_code != 0) {
        detail = "CLI run failed: " + base.output + suppressed.output + off.output;
        return false;
    }

    const std::string base_summary = slurp((dir / "base_summary.txt").string());
    const std::string supp_summary = slurp((dir / "supp_summary.txt").string());
    const bool baseline_divergent = summary_value(base_summary, "stability") == "divergent";
    const bool suppressed_bounded = summary_value(supp_summary, "stability") == "bounded" &&
                                    summary_value(supp_summary, "termination") == "completed";

    // Strip the trailing alpha_eff column; everything else must be identical.
    const auto base_lines = lines_of(slurp((dir / "base_trace.csv").string()));
    const auto off_lines = lines_of(slurp((dir / "off_trace.csv").string()));
    bool identical = base_lines.size() == off_lines.size();
    for (std::size_t i = 0; identical && i < off_lines.size(); ++i) {
        const auto cut = off_lines[i].rfind(',');
        identical = cut != std::string::npos && off_lines[i].substr(0, cut) == base_lines[i];
    }

    detail = std::string("baseline stability ") + summary_value(base_summary, "stability") +
             "; suppressed stability " + summary_value(supp_summary, "stability") +
             " (termination " + summary_value(supp_summary, "termination") +
             "); policy-off trace identical over " + std::to_string(base_lines.size()) +
             " lines: " + (identical ? "true" : "false");
    return baseline_divergent && suppressed_bounded && identical;
}

// ---------------------------------------------------------------------------
// 9. Adjustment-series classifier: exact labels on geometric and alternating
//    series, invariant under positive rescaling.
// ---------------------------------------------------------------------------
bool criterion_9(std::string& detail) {
    const auto geometric = [](double ratio, std::size_t terms) {
        std::vector<double> series(terms);
        double a = 1.0;
        for (std::size_t i = 0; i < terms; ++i) {
            series[i] = a;
            a *= ratio;
        }
        return series;
    };

    const std::vector<double> convergent = geometric(0.5, 40);
    const std::vector<double> divergent = geometric(2.0, 40);
    const std::vector<double> alternating = geometric(-1.0, 40);

    const RegressClass c = classify_regress(convergent, 16);
    const RegressClass d = classify_regress(divergent, 16);
    const RegressClass o = classify_regress(alternating, 16);
    const bool exact = c.label == RegressLabel::Convergent && c.estimated_ratio == 0.5 &&
                       d.label == RegressLabel::Divergent && d.estimated_ratio == 2.0 &&
                       o.label == RegressLabel::Oscillatory && o.estimated_ratio == -1.0;

    std::mt19937_64 rng(99u);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::size_t invariant = 0;
    for (int i = 0; i < 100; ++i) {
        const double scale = std::exp(std::log(1e-6) + std::log(1e12) * unit(rng));
        bool ok = true;
        for (const auto* series : {&convergent, &divergent, &alternating}) {
            std::vector<double> scaled = *series;
            for (double& v : scaled) {
                v *= scale;
            }
            const RegressClass before = classify_regress(*series, 16);
            const RegressClass after = classify_regress(scaled, 16);
            ok = ok && before.label == after.label &&
                 std::abs(before.estimated_ratio - after.estimated_ratio) <= 1e-12;
        }
        if (ok) {
            ++invariant;
        }
    }

    detail = std::string("labels/ratios exact: ") + (exact ? "true" : "false") + " (" +
             to_string(c.label) + " 0.5, " + to_string(d.label) + " 2, " + to_string(o.label) +
             " -1); scale-invariant under " + std::to_string(invariant) + "/100 rescalings";
    return exact && invariant == 100;
}

// ---------------------------------------------------------------------------
// 10. Every fixture produces byte-identical data files on repeated runs;
//     sweeps are additionally invariant in the worker count.
// ---------------------------------------------------------------------------
bool criterion_10(std::string& detail) {
    const fs::path dir = scratch_dir(10);

    std::vector<fs::path> fixtures;
    for (const auto& entry : fs::directory_iterator(g_fixtures)) {
        if (entry.path().extension() == ".scn") {
            fixtures.push_back(entry.path());
        }
    }
    std::sort(fixtures.begin(), fixtures.end());
    if (fixtures.empty()) {
        detail = "no .scn fixtures found in " + g_fixtures;
        return false;
    }

    std::size_t files_compared = 0;
    for (const fs::path& fixture : fixtures) {
        const Scenario scenario = parse_scenario_file(fixture.string());
        const bool is_sweep = scenario.command == Command::Sweep;
        const std::string subcommand = is_sweep ? "sweep" : "run";
        const std::string stem = fixture.stem().string();

        std::vector<std::vector<std::string>> written;
        for (const std::string& variant : is_sweep
                 ? std::vector<std::string>{"--threads 1", "--threads 1", "--threads 4"}
                 : std::vector<std::string>{"", ""}) {
            const std::string prefix =
                (dir / (stem + "_r" + std::to_string(written.size()))).string();
            const CliResult run =
                run_cli(subcommand + " " + fixture.string() + " --out " + prefix + " " + variant);
            if (run.exit_code != 0) {
                detail = stem + ": CLI exited " + std::to_string(run.exit_code) + ": " +
                         run.output;
                return false;
            }
            written.push_back(run.written());
        }

        for (std::size_t r = 1; r < written.size(); ++r) {
            if (written[r].size() != written[0].size()) {
                detail = stem + ": run produced a different file count";
                return false;
            }
            for (std::size_t f = 0; f < written[0].size(); ++f) {
                if (slurp(written[r][f]) != slurp(written[0][f])) {
                    detail = stem + ": " + written[r][f] + " differs from " + written[0][f];
                    return false;
                }
                ++files_compared;
            }
        }
    }

    detail = std::to_string(fixtures.size()) + " fixtures re-run, " +
             std::to_string(files_compared) +
             " file comparisons byte-identical (sweep also worker-count invariant)";
    return true;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc != 4) {
        std::cerr << "usage: acceptance <cli-binary> <fixtures-dir> <criterion 1..10>\n";
        return 2;
    }
    g_cli = argv[1];
    g_fixtures = argv[2];
    const int criterion = std::atoi(argv[3]);

    const std::function<bool(std::string&)> checks[] = {
        criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
        criterion_6, criterion_7, criterion_8, criterion_9, criterion_10,
    };
    if (criterion < 1 || criterion > 10) {
        std::cerr << "criterion must be in 1..10\n";
        return 2;
    }

    bool pass = false;
    std::string detail;
    try {
        pass = checks[criterion - 1](detail);
    } catch (const std::exception& err) {
        pass = false;
        detail = std::string("unexpected exception: ") + err.what();
    }

    std::cout << "CRITERION " << criterion << ": " << (pass ? "PASS" : "FAIL") << " — " << detail
              << "\n";
    return pass ? 0 : 1;
}
