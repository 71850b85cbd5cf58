#include "spiralsim/spiral.hpp"

#include <algorithm>
#include <cmath>

namespace spiralsim {

void validate(const SpiralParams& params) {
    if (!(params.alpha > 0.0) || !(params.alpha < 1.0)) {
        throw std::invalid_argument("alpha must lie in (0,1)");
    }
    if (!(params.epsilon >= 0.0) || !(params.epsilon <= 1.0)) {
        throw std::invalid_argument("epsilon must lie in [0,1]");
    }
    if (params.rounds == 0) {
        throw std::invalid_argument("rounds must be > 0");
    }
    if (!(params.rate_per_round >= 0.0) || !std::isfinite(params.rate_per_round)) {
        throw std::invalid_argument("rate_per_round must be finite and >= 0");
    }
    if (params.pool_cap && !(*params.pool_cap > 0.0)) {
        throw std::invalid_argument("pool_cap must be > 0 when set");
    }
    if (!(params.tol > 0.0)) {
        throw std::invalid_argument("tol must be > 0");
    }
}

const char* to_string(Termination t) {
    switch (t) {
        case Termination::Completed: return "completed";
        case Termination::CapacityExhausted: return "capacity-exhausted";
        case Termination::PoolExhausted: return "pool-exhausted";
        case Termination::NonFinite: return "non-finite";
    }
    return "unknown";
}

std::pair<MarketState, double> borrow_step(MarketState state, const SpiralParams& params,
                                           double already_lent) {
    validate(state);
    double y_new = std::max(0.0, params.alpha * state.x * state.s - state.z);
    if (params.pool_cap) {
        y_new = std::min(y_new, std::max(0.0, *params.pool_cap - already_lent));
    }
    state.y += y_new;
    state.z += y_new;
    return {state, y_new};
}

MarketState invest_step(MarketState state, double w, const ImpactModel& model, double tol) {
    validate(state);
    if (w < 0.0 || w > state.y) {
        throw std::invalid_argument("invested cash must lie in [0, state.y]");
    }
    if (w == 0.0) {
        return state;
    }
    const double s_new = solve_post_trade_price(model, state.s, w, tol);
    state.x += w / s_new;
    state.y -= w;
    state.s = s_new;
    return state;
}

namespace detail {

SpiralTrace run_spiral_core(const MarketState& init, const SpiralParams& params,
                            const ImpactModel& model, const AlphaProvider& alpha_of) {
    validate(init);
    validate(params);
    validate(model);
    if (init.y != 0.0) {
        throw std::invalid_argument("initial cash y must be 0 (all-invested start)");
    }

    SpiralTrace trace;
    trace.rounds.reserve(std::min<std::size_t>(params.rounds, 1u << 20));

    // Dead-band below which borrow capacity counts as exhausted; avoids
    // spinning forever at the geometric-limit fixed point.
    const double capacity_floor = 1e-12 * init.x * init.s;

    MarketState state = init;
    double lent = 0.0;
    trace.termination = Termination::Completed;

    for (std::size_t round = 1; round <= params.rounds; ++round) {
        // Work on a scratch copy: a round that terminates the loop before
        // being recorded must not leak anything (not even its interest
        // accrual) into final_state, which always matches the last record.
        MarketState working = state;
        working.z *= 1.0 + params.rate_per_round;
        if (!std::isfinite(working.z)) {
            trace.termination = Termination::NonFinite;
            break;
        }

        SpiralParams round_params = params;
        round_params.alpha = alpha_of(working);

        const double uncapped =
            std::max(0.0, round_params.alpha * working.x * working.s - working.z);
        auto [borrowed_state, y_new] = borrow_step(working, round_params, lent);
        if (!std::isfinite(y_new) || !std::isfinite(borrowed_state.y) ||
            !std::isfinite(borrowed_state.z)) {
            trace.termination = Termination::NonFinite;
            break;
        }
        if (y_new <= capacity_floor) {
            trace.termination = uncapped > capacity_floor ? Termination::PoolExhausted
                                                          : Termination::CapacityExhausted;
            break;
        }
        lent += y_new;

        const double extracted = round_params.epsilon * y_new;
        const double invested = y_new - extracted;
        borrowed_state.y -= extracted;

        const double s_before = borrowed_state.s;
        MarketState next = invest_step(borrowed_state, invested, model, params.tol);

        if (!std::isfinite(next.x) || !std::isfinite(next.z) || !std::isfinite(next.s)) {
            trace.termination = Termination::NonFinite;
            break;
        }

        trace.total_borrowed += y_new;
        trace.total_extracted += extracted;
        trace.price_monotonic = trace.price_monotonic && next.s > s_before;

        RoundRecord record;
        record.round = round;
        record.y_borrowed = y_new;
        record.w_invested = invested;
        record.e_extracted = extracted;
        record.x = next.x;
        record.z = next.z;
        record.s = next.s;
        record.ltv = next.z / (next.x * next.s);
        record.alpha_eff = round_params.alpha;
        trace.rounds.push_back(record);

        state = next;
    }

    trace.final_state = state;
    return trace;
}

}  // namespace detail

SpiralTrace run_spiral(const MarketState& init, const SpiralParams& params,
                       const ImpactModel& model) {
    return detail::run_spiral_core(init, params, model,
                                   [&params](const MarketState&) { return params.alpha; });
}

double geometric_borrow_limit(double alpha, double x0, double s0) {
    if (!(alpha > 0.0) || !(alpha < 1.0)) {
        throw std::invalid_argument("alpha must lie in (0,1)");
    }
    if (!(x0 >= 0.0) || !(s0 > 0.0)) {
        throw std::invalid_argument("x0 must be >= 0 and s0 > 0");
    }
    return alpha / (1.0 - alpha) * x0 * s0;
}

ExtractionResult max_sustainable_extraction(const MarketState& init, SpiralParams params,
                                            const ImpactModel& model,
                                            std::size_t target_rounds) {
    validate(init);
    validate(model);
    params.rounds = target_rounds;
    validate(params);

    ExtractionResult result;
    if (model.k == 0.0) {
        result.note = "no-impact: price can never rise";
        return result;
    }

    // Sustainable = the price rises strictly every round and borrow capacity
    // never hits zero over the full horizon.
    const auto feasible = [&](double epsilon) {
        SpiralParams trial = params;
        trial.epsilon = epsilon;
        const SpiralTrace trace = run_spiral(init, trial, model);
        return trace.termination == Termination::Completed && trace.price_monotonic;
    };

    if (!feasible(0.0)) {
        result.note = "zero-extraction baseline already fails strict price growth";
        return result;
    }

    double lo = 0.0;  // feasible
    double hi = 1.0;  // infeasible: full extraction reinvests nothing
    while (hi - lo > 1e-4) {
        const double mid = 0.5 * (lo + hi);
        (feasible(mid) ? lo : hi) = mid;
    }

    SpiralParams at_star = params;
    at_star.epsilon = lo;
    const SpiralTrace trace = run_spiral(init, at_star, model);

    result.epsilon_star = lo;
    result.total_extracted = trace.total_extracted;
    result.exceeds_initial = trace.total_extracted > init.x * init.s - init.z;
    return result;
}

}  // namespace spiralsim
