#pragma once

#include <stdexcept>
#include <string>

namespace spiralsim {

/**
 * Permanent price impact law: a trade of volume-fraction A moves the price
 * by k * A^gamma, instantaneously and forever (no decay).
 */
struct ImpactModel {
    double k = 0.0;      // impact coefficient, price units per (volume-fraction)^gamma
    double gamma = 0.5;  // impact exponent, in (0, 1]
};

/// Throws std::invalid_argument if k < 0 or gamma is outside (0, 1].
void validate(const ImpactModel& model);

/**
 * Evaluate the impact law k * A^gamma for a nonnegative volume fraction A.
 * Returns 0 when A == 0 or k == 0. Negative A is rejected; callers that
 * need signed (sell-side) impact compose the magnitude with a sign.
 */
double eval_impact(const ImpactModel& model, double volume_fraction);

/// Raised when the implicit post-trade price iteration fails to converge.
class SolverError : public std::runtime_error {
public:
    SolverError(const std::string& what, double residual_)
        : std::runtime_error(what), residual(residual_) {}

    double residual;  // |g(S)| at the last iterate
};

/**
 * Solve the implicit post-trade price equation
 *
 *     S_new = S_prev + k * (w / S_new)^gamma
 *
 * for a purchase spending cash w at previous price S_prev. The right-hand
 * side evaluates the impact at the volume the cash actually buys at the new
 * price, so the equation is implicit in S_new. g(S) = S - S_prev - k(w/S)^gamma
 * is strictly increasing on (S_prev, inf) with g(S_prev) <= 0, so the root is
 * unique; it is bracketed by [S_prev, S_prev + k(w/S_prev)^gamma] because
 * impact evaluated at the lower price overestimates the fixed point.
 *
 * Bisection runs until the bracket cannot shrink further (floating-point
 * exhaustion), which lands the residual at machine-precision scale. `tol`
 * bounds the accepted residual relative to max(1, S_new) — the attainable
 * residual scales with the solution — and defaults to 1e-12 when <= 0.
 * Throws SolverError if the budget is exhausted above that bound.
 */
double solve_post_trade_price(const ImpactModel& model, double s_prev, double cash_in,
                              double tol = 0.0);

}  // namespace spiralsim
