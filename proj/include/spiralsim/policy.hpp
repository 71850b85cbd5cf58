#pragma once

#include <functional>

#include "spiralsim/spiral.hpp"

namespace spiralsim {

/**
 * Dynamic haircut rule: the loan-to-value cap shrinks as the borrower's
 * position concentrates relative to available liquidity, and as liquidity
 * falls below its reference level.
 */
struct HaircutPolicy {
    double alpha_base = 0.5;    // cap with both sensitivities off, in (0, 1)
    double beta_conc = 0.0;     // concentration sensitivity, >= 0
    double beta_liq = 0.0;      // liquidity sensitivity, >= 0
    double liquidity_ref = 1.0; // reference liquidity scale, > 0
};

void validate(const HaircutPolicy& policy);

/**
 * Effective loan-to-value cap
 *
 *   alpha_base / (1 + beta_conc * borrower_value/liquidity
 *                   + beta_liq * max(liquidity_ref/liquidity - 1, 0))
 *
 * Always in (0, alpha_base]; strictly decreasing in borrower_value, equal to
 * alpha_base when both sensitivities vanish. Rejects liquidity <= 0.
 */
double effective_alpha(const HaircutPolicy& policy, double borrower_value, double liquidity);

/// Maps engine state to the liquidity the policy sees each round.
using LiquidityModel = std::function<double(const MarketState&)>;

/**
 * run_spiral with the loan-to-value cap re-derived each round from the
 * borrower's current mark x*s via effective_alpha. The liquidity model
 * defaults to the constant policy.liquidity_ref. With both sensitivities at
 * zero the records reproduce run_spiral(init, params-with-alpha_base, model)
 * bit for bit — the policy layer adds no numeric perturbation. The applied
 * cap path is recorded per round in RoundRecord::alpha_eff.
 */
SpiralTrace run_spiral_with_policy(const MarketState& init, const SpiralParams& params,
                                   const HaircutPolicy& policy, const ImpactModel& model,
                                   const LiquidityModel& liquidity = {});

/// Price-path growth classification of a finished trace.
enum class Stability { Bounded, Divergent, Undetermined };

const char* to_string(Stability s);

/**
 * Classify a trace: runs that stopped because borrow capacity or the lender
 * pool was exhausted are Bounded (the state is frozen from then on); runs
 * that overflowed are Divergent; completed runs are classified by the fitted
 * log-log price slope over the last decade of rounds — below 0.05 Bounded,
 * above 0.2 Divergent, otherwise Undetermined (also when the window has
 * fewer than 10 points). Rejects empty traces.
 */
Stability stability_report(const SpiralTrace& trace);

}  // namespace spiralsim
