#include "spiralsim/roundtrip.hpp"

#include <cmath>
#include <stdexcept>

namespace spiralsim {

void validate(const RoundtripParams& params) {
    if (!(params.position_units >= 0.0) || !std::isfinite(params.position_units)) {
        throw std::invalid_argument("position_units must be finite and >= 0");
    }
    if (!(params.roundtrip_units > 0.0)) {
        throw std::invalid_argument("roundtrip_units must be > 0");
    }
    validate(params.model_hi);
    validate(params.model_lo);
    if (params.model_hi.k < params.model_lo.k) {
        throw std::invalid_argument("model_hi.k must be >= model_lo.k");
    }
    if (!(params.cost_per_unit >= 0.0)) {
        throw std::invalid_argument("cost_per_unit must be >= 0");
    }
    if (params.cycles == 0) {
        throw std::invalid_argument("cycles must be > 0");
    }
    if (!(params.s0 > 0.0)) {
        throw std::invalid_argument("s0 must be > 0");
    }
    if (!(params.volume_norm > 0.0)) {
        throw std::invalid_argument("volume_norm must be > 0");
    }
}

Viability viability(double position_units, double roundtrip_units, double ds, double dc) {
    Viability v;
    v.margin = position_units * ds - roundtrip_units * dc;
    v.viable = v.margin >= 0.0;
    return v;
}

RoundtripTrace simulate_roundtrip(const RoundtripParams& params) {
    validate(params);

    const double fraction = params.roundtrip_units / params.volume_norm;
    // Leg magnitudes depend only on the traded volume fraction, so they are
    // identical every cycle; the price level just ratchets by ds_net.
    const double ds_open = eval_impact(params.model_hi, fraction);
    const double ds_close = eval_impact(params.model_lo, fraction);
    const double ds_net = ds_open - ds_close;

    // Opening leg fills at the post-impact price, closing leg at its
    // pre-trade price — the same level — so the cycle's cash cost per unit is
    // exactly the exogenous friction and the per-unit roundtrip cost has no
    // execution-shortfall component under these conventions.
    const double dc = params.cost_per_unit;
    const double direction = params.short_side ? -1.0 : 1.0;

    RoundtripTrace trace;
    trace.cycles.reserve(params.cycles);

    double s = params.s0;
    double pnl = 0.0;
    for (std::size_t cycle = 1; cycle <= params.cycles; ++cycle) {
        s += direction * ds_open;   // open: buy (long) or sell (short) under model_hi
        s -= direction * ds_close;  // close the same amount under model_lo
        if (!(s > 0.0) || !std::isfinite(s)) {
            throw SolverError("roundtrip price path left the positive domain", s);
        }

        CycleRecord record;
        record.cycle = cycle;
        record.ds_buy = ds_open;
        record.ds_sell = ds_close;
        record.ds_net = ds_net;
        record.cost = params.roundtrip_units * dc;
        record.mtm_gain = params.position_units * ds_net;
        pnl += record.mtm_gain - record.cost;
        record.pnl_cum = pnl;
        trace.cycles.push_back(record);
    }

    trace.final_price = s;
    trace.mean_ds = ds_net;
    trace.mean_dc = dc;
    trace.total_pnl = pnl;
    trace.decision = viability(params.position_units, params.roundtrip_units, ds_net, dc);
    return trace;
}

}  // namespace spiralsim
