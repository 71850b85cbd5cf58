#pragma once

#include <cstddef>
#include <vector>

#include "spiralsim/impact.hpp"

namespace spiralsim {

/**
 * Repeated buy-high-impact / sell-low-impact cycles executed against a held
 * position: each cycle trades roundtrip_units in and out, leaving a permanent
 * net price move that marks up the position.
 */
struct RoundtripParams {
    double position_units = 0.0;   // held position N marked up by the net move, >= 0
    double roundtrip_units = 1.0;  // units traded in and out per cycle, > 0
    ImpactModel model_hi;          // impact regime for the opening leg
    ImpactModel model_lo;          // impact regime for the closing leg, k_lo <= k_hi
    double cost_per_unit = 0.0;    // exogenous friction per unit roundtripped, >= 0
    std::size_t cycles = 1;
    double s0 = 1.0;               // starting price, > 0
    double volume_norm = 1.0;      // average volume normalizing trades to fractions, > 0
    bool short_side = false;       // run the mirrored strategy on a short position
};

void validate(const RoundtripParams& params);

/// The viability inequality N * dS >= N_r * dC, with its margin.
struct Viability {
    bool viable = false;
    double margin = 0.0;  // N * dS - N_r * dC; zero counts as viable
};

/**
 * Decide whether marking up a position of `position_units` by `ds` per cycle
 * covers the roundtrip cost `dc` per unit on `roundtrip_units`. All inputs
 * are expected nonnegative.
 */
Viability viability(double position_units, double roundtrip_units, double ds, double dc);

/// One cycle of the strategy, as written to the cycle trace.
struct CycleRecord {
    std::size_t cycle = 0;   // 1-based
    double ds_buy = 0.0;     // price move magnitude of the opening (high-impact) leg
    double ds_sell = 0.0;    // price move magnitude of the closing (low-impact) leg
    double ds_net = 0.0;     // permanent favorable move per cycle, ds_buy - ds_sell
    double cost = 0.0;       // roundtrip_units * dC for the cycle
    double mtm_gain = 0.0;   // position_units * ds_net
    double pnl_cum = 0.0;    // cumulative net PnL through this cycle
};

struct RoundtripTrace {
    std::vector<CycleRecord> cycles;
    double final_price = 0.0;
    double mean_ds = 0.0;        // mean per-cycle permanent move
    double mean_dc = 0.0;        // mean per-cycle roundtrip cost per unit
    double total_pnl = 0.0;
    Viability decision;          // viability at the trace means
};

/**
 * Simulate the cycles. The opening leg trades roundtrip_units at the
 * post-impact price (the implicit-solve increment, explicit for
 * unit-denominated trades); the closing leg reverses the same amount under
 * model_lo, filling at its pre-trade price with the downward shift applied
 * after. Both legs therefore fill at the same price level, so the cash cost
 * per unit roundtripped is exactly cost_per_unit plus the fill shortfall
 * (zero under these conventions), while the held position keeps the net
 * permanent move. With short_side the legs mirror: open by selling under
 * model_hi (price down), close by buying under model_lo (price up), the
 * short position gaining on the net downward move. The sign of the total
 * PnL agrees with viability(position_units, roundtrip_units, mean_ds,
 * mean_dc) by construction, which is the checkable form of the strategy's
 * profitability condition.
 */
RoundtripTrace simulate_roundtrip(const RoundtripParams& params);

}  // namespace spiralsim
