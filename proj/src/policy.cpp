#include "spiralsim/policy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "spiralsim/continuum.hpp"

namespace spiralsim {

void validate(const HaircutPolicy& policy) {
    if (!(policy.alpha_base > 0.0) || !(policy.alpha_base < 1.0)) {
        throw std::invalid_argument("alpha_base must lie in (0,1)");
    }
    if (!(policy.beta_conc >= 0.0) || !(policy.beta_liq >= 0.0)) {
        throw std::invalid_argument("policy sensitivities must be >= 0");
    }
    if (!(policy.liquidity_ref > 0.0)) {
        throw std::invalid_argument("liquidity_ref must be > 0");
    }
}

double effective_alpha(const HaircutPolicy& policy, double borrower_value, double liquidity) {
    validate(policy);
    if (!(borrower_value >= 0.0) || !std::isfinite(borrower_value)) {
        throw std::invalid_argument("borrower_value must be finite and >= 0");
    }
    if (!(liquidity > 0.0)) {
        throw std::invalid_argument("liquidity must be > 0");
    }
    const double scarcity = std::max(policy.liquidity_ref / liquidity - 1.0, 0.0);
    return policy.alpha_base /
           (1.0 + policy.beta_conc * (borrower_value / liquidity) + policy.beta_liq * scarcity);
}

SpiralTrace run_spiral_with_policy(const MarketState& init, const SpiralParams& params,
                                   const HaircutPolicy& policy, const ImpactModel& model,
                                   const LiquidityModel& liquidity) {
    validate(policy);
    const LiquidityModel liquidity_of =
        liquidity ? liquidity
                  : LiquidityModel([&policy](const MarketState&) { return policy.liquidity_ref; });
    return detail::run_spiral_core(init, params, model, [&](const MarketState& state) {
        return effective_alpha(policy, state.x * state.s, liquidity_of(state));
    });
}

const char* to_string(Stability s) {
    switch (s) {
        case Stability::Bounded: return "bounded";
        case Stability::Divergent: return "divergent";
        case Stability::Undetermined: return "undetermined";
    }
    return "unknown";
}

Stability stability_report(const SpiralTrace& trace) {
    if (trace.rounds.empty()) {
        throw std::invalid_argument("stability_report requires a nonempty trace");
    }
    switch (trace.termination) {
        case Termination::CapacityExhausted:
        case Termination::PoolExhausted:
            // Nothing can be borrowed any more, so the price is frozen from
            // here on: the path is bounded whatever its transient did.
            return Stability::Bounded;
        case Termination::NonFinite:
            return Stability::Divergent;
        case Termination::Completed:
            break;
    }

    const std::size_t n = trace.rounds.size();
    const std::size_t window_lo = std::max<std::size_t>(1, (n + 9) / 10);  // last decade
    if (n < window_lo + 9) {
        return Stability::Undetermined;
    }

    std::vector<double> prices;
    prices.reserve(n);
    for (const RoundRecord& record : trace.rounds) {
        prices.push_back(record.s);
    }
    const double slope = fit_power_law_exponent(prices, window_lo, n).slope;
    if (slope < 0.05) {
        return Stability::Bounded;
    }
    if (slope > 0.2) {
        return Stability::Divergent;
    }
    return Stability::Undetermined;
}

}  // namespace spiralsim
