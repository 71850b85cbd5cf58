#pragma once

namespace spiralsim {

/**
 * Four-component state of the leverage loop: risky units held, riskless
 * cash on hand, outstanding debt, and the current price.
 */
struct MarketState {
    double x = 0.0;  // risky-asset units, >= 0
    double y = 0.0;  // riskless cash, >= 0
    double z = 0.0;  // outstanding debt, >= 0
    double s = 1.0;  // price, > 0
};

/// Throws std::invalid_argument on non-finite fields, negative x/y/z, or s <= 0.
void validate(const MarketState& state);

}  // namespace spiralsim
