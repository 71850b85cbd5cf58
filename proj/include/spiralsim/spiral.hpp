#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "spiralsim/impact.hpp"
#include "spiralsim/market_state.hpp"

namespace spiralsim {

/**
 * Parameters of the discrete borrow -> convert loop: borrow up to a
 * loan-to-value cap alpha against current marks, optionally extract a
 * fraction of the fresh cash, invest the rest at the post-impact price.
 */
struct SpiralParams {
    double alpha = 0.5;            // loan-to-value cap, in (0, 1)
    double epsilon = 0.0;          // extraction fraction, in [0, 1]
    std::size_t rounds = 1;        // round budget, > 0
    double rate_per_round = 0.0;   // per-round multiplicative debt interest, >= 0
    std::optional<double> pool_cap;  // max total lendable cash; absent = unbounded
    double tol = 1e-9;             // residual tolerance for consistency checks
};

void validate(const SpiralParams& params);

/// Why a run stopped before (or at) its round budget.
enum class Termination {
    Completed,           // full round budget executed
    CapacityExhausted,   // borrow capacity fell below the dead-band
    PoolExhausted,       // lender pool cap reached
    NonFinite,           // state overflowed double range
};

const char* to_string(Termination t);

/// One completed round: what was borrowed/extracted/invested and the state after.
struct RoundRecord {
    std::size_t round = 0;      // 1-based round index
    double y_borrowed = 0.0;    // fresh cash borrowed this round
    double w_invested = 0.0;    // cash converted to risky units this round
    double e_extracted = 0.0;   // cash extracted this round
    double x = 0.0;             // post-round risky units
    double z = 0.0;             // post-round debt
    double s = 0.0;             // post-round price
    double ltv = 0.0;           // post-round loan-to-value z / (x * s)
    double alpha_eff = 0.0;     // loan-to-value cap applied this round
};

struct SpiralTrace {
    std::vector<RoundRecord> rounds;
    // State after the last recorded round (the initial state when no round
    // completed). A round that terminates the loop early commits nothing,
    // not even its interest accrual.
    MarketState final_state;
    double total_borrowed = 0.0;
    double total_extracted = 0.0;
    bool price_monotonic = true;  // strictly increasing price on every round
    Termination termination = Termination::Completed;
};

/**
 * Borrow up to capacity against current marks: y_new = max(0, alpha*x*s - z),
 * clipped so already_lent + y_new never exceeds the pool cap. Returns the
 * post-borrow state (y and z both increased by y_new) and y_new itself.
 * Never throws on zero capacity; y_new is simply 0.
 */
std::pair<MarketState, double> borrow_step(MarketState state, const SpiralParams& params,
                                           double already_lent);

/**
 * Convert cash w (<= state.y) into risky units at the post-impact price:
 * s' solves the implicit equation, x' = x + w/s', y' = y - w, z unchanged.
 * The price increment equals the impact of the units actually bought by
 * construction.
 */
MarketState invest_step(MarketState state, double w, const ImpactModel& model, double tol);

/**
 * Run the full borrow/extract/invest loop from an all-invested start
 * (init.y must be 0). Each round: accrue interest on z, borrow to the cap,
 * extract epsilon of the fresh cash, invest the rest. Stops early when
 * borrow capacity falls below 1e-12 * x0 * s0 (dead-band around the
 * geometric fixed point), when the pool cap is exhausted, or when the state
 * leaves double range.
 */
SpiralTrace run_spiral(const MarketState& init, const SpiralParams& params,
                       const ImpactModel& model);

/**
 * Zero-impact borrowing limit alpha/(1-alpha) * x0 * s0: the geometric-series
 * total that cumulative borrows approach when the price never moves.
 * Rejects alpha outside (0, 1).
 */
double geometric_borrow_limit(double alpha, double x0, double s0);

/// Outcome of the sustainable-extraction search.
struct ExtractionResult {
    double epsilon_star = 0.0;     // largest sustainable extraction fraction
    double total_extracted = 0.0;  // cumulative extraction at epsilon_star
    bool exceeds_initial = false;  // total_extracted > x0*s0 - z0
    std::string note;              // empty on success; reason when epsilon_star = 0
};

/**
 * Bisect (to 1e-4) for the largest extraction fraction epsilon such that a
 * run over target_rounds keeps the price strictly increasing every round and
 * never exhausts borrow capacity. Returns epsilon_star = 0 with an
 * explanatory note when the model has no impact (price can never rise) or
 * when even epsilon = 0 fails the criterion.
 */
ExtractionResult max_sustainable_extraction(const MarketState& init, SpiralParams params,
                                            const ImpactModel& model,
                                            std::size_t target_rounds);

namespace detail {

/// Per-round loan-to-value provider; lets policy layers re-derive alpha each round.
using AlphaProvider = std::function<double(const MarketState&)>;

/// Shared engine loop behind run_spiral and the policy wrapper.
SpiralTrace run_spiral_core(const MarketState& init, const SpiralParams& params,
                            const ImpactModel& model, const AlphaProvider& alpha_of);

}  // namespace detail

}  // namespace spiralsim
