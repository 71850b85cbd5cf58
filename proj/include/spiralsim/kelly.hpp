#pragma once

#include <cstddef>
#include <vector>

#include "spiralsim/impact.hpp"

namespace spiralsim {

/**
 * Optimal constant fraction (mu - r) / sigma^2 of wealth held in the risky
 * asset. Rejects sigma <= 0.
 */
double kelly_fraction(double mu, double r, double sigma);

/**
 * Setup for the rebalancing regress: a portfolio of cash and risky units
 * repeatedly re-targets the optimal fraction, but every adjustment trade
 * moves the price, which invalidates the target it was chasing.
 */
struct KellyParams {
    double mu = 0.0;      // risky drift per unit time
    double r = 0.0;       // riskless rate per unit time
    double sigma = 1.0;   // volatility per sqrt(time), > 0
    double v0 = 1.0;      // initial portfolio value, > 0
    double s0 = 1.0;      // initial price, > 0
    ImpactModel model;
    std::size_t max_steps = 200;
    std::size_t ratio_window = 16;  // trailing ratios used by the classifier
};

void validate(const KellyParams& params);

/// One adjustment: signed trade size, the price it filled at, and value after.
struct RegressStep {
    std::size_t step = 0;
    double trade_units = 0.0;      // signed adjustment a_i (buy > 0, sell < 0)
    double price = 0.0;            // post-trade price
    double portfolio_value = 0.0;  // cash + units * price after the trade
};

struct RegressSeries {
    std::vector<RegressStep> steps;
    bool overflow = false;  // halted by the 1e100 guard or a price collapse
};

/**
 * Simulate the adjustment regress from an all-cash start. Each step computes
 * target units = kelly_fraction * V / S, trades the difference a_i in full at
 * the post-impact price (buys shift the price up by k|a_i|^gamma via the
 * implicit-solve equation, which is explicit for unit-denominated trades;
 * sells shift it down by the same magnitude law), then revalues the
 * portfolio at the new price. The series truncates at max_steps, when |a_i|
 * underflows 1e-15 * v0/s0 (the terminal near-zero trade is recorded), or —
 * flagged as overflow — when values exceed 1e100 or a sell would push the
 * price to zero.
 */
RegressSeries simulate_regress(const KellyParams& params);

enum class RegressLabel { Convergent, Divergent, Oscillatory, Undetermined };

const char* to_string(RegressLabel label);

struct RegressClass {
    RegressLabel label = RegressLabel::Undetermined;
    double estimated_ratio = 0.0;  // median trailing adjustment ratio
};

/**
 * Three-way classification of an adjustment series from the median rho of
 * consecutive signed ratios a_{i+1}/a_i over the trailing ratio_window
 * terms: Convergent when |rho| < 1-delta, Divergent when rho > 1+delta,
 * Oscillatory (sign-alternating, non-shrinking) when rho < -(1-delta), else
 * Undetermined. A series ending in an exact zero is Convergent regardless of
 * length — the regress is dead. Shorter series than ratio_window are
 * Undetermined.
 */
RegressClass classify_regress(const std::vector<double>& series, std::size_t ratio_window,
                              double delta = 0.05);

}  // namespace spiralsim
