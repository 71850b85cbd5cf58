#include "spiralsim/market_state.hpp"

#include <cmath>
#include <stdexcept>

namespace spiralsim {

void validate(const MarketState& state) {
    if (!std::isfinite(state.x) || !std::isfinite(state.y) || !std::isfinite(state.z) ||
        !std::isfinite(state.s)) {
        throw std::invalid_argument("market state fields must be finite");
    }
    if (state.x < 0.0 || state.y < 0.0 || state.z < 0.0) {
        throw std::invalid_argument("units, cash and debt must be >= 0");
    }
    if (!(state.s > 0.0)) {
        throw std::invalid_argument("price must be > 0");
    }
}

}  // namespace spiralsim
