#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "spiralsim/spiral.hpp"

namespace spiralsim {

/// Validity regime of the closed-form growth exponents.
enum class Regime {
    Growth,     // alpha - gamma*(1-alpha) > 0: positive power-law exponents
    Singular,   // alpha = gamma/(1+gamma): denominator vanishes, no prediction
    NonGrowth,  // denominator < 0: formulas give negative values, not interpreted
};

const char* to_string(Regime r);

/**
 * Continuum growth exponents for x(t) ~ t^m, S(t) ~ t^n. The m/n values are
 * meaningful only in the Growth regime; Singular results carry no numbers.
 */
struct ExponentPair {
    double m = 0.0;            // position growth exponent
    double n = 0.0;            // price growth exponent
    double denominator = 0.0;  // alpha - gamma*(1-alpha)
    Regime regime = Regime::Growth;
};

/**
 * Closed-form exponents m = alpha(1-gamma)/(alpha - gamma(1-alpha)) and
 * n = (1-alpha)(1-gamma)/(alpha - gamma(1-alpha)). The regime is Singular
 * when |denominator| < 1e-12 (alpha on the gamma/(1+gamma) boundary), in
 * which case m and n are left at 0 and must not be read as predictions.
 * Rejects alpha outside (0,1) and gamma outside (0,1].
 */
ExponentPair closed_form_exponents(double alpha, double gamma);

/**
 * Parameters for integrating the continuum limit of the spiral: the
 * coupled relations alpha*(x*S' + S*x') = S*x' and S' = khat*(x')^gamma,
 * reduced pointwise to explicit derivatives.
 */
struct ContinuumParams {
    double khat = 1.0;   // continuum impact coefficient
    double gamma = 0.5;  // impact exponent, in (0, 1); 1 has no power-law reduction
    double dt = 1e-3;    // fixed Euler step, must satisfy dt <= 1e-3 * t0
    double t0 = 1.0;     // start time, >= 1
    double t_max = 100.0;
    double x0 = 1.0;     // initial position at t0
    double s0 = 1.0;     // initial price at t0
};

void validate(const ContinuumParams& params);

struct OdePoint {
    double t = 0.0;
    double x = 0.0;
    double s = 0.0;
};

/**
 * Fixed-step explicit Euler integration of the reduced system
 *
 *     x'(t) = (khat * alpha * x / ((1-alpha) * S))^(1/(1-gamma))
 *     S'(t) = khat * (x')^gamma
 *
 * valid in the growth regime. Trajectories preserve the first integral
 * x * S^(-alpha/(1-alpha)) up to discretization drift. Throws when a step
 * would make x or S non-finite.
 */
std::vector<OdePoint> integrate_ode(double alpha, const ContinuumParams& params);

/// Least-squares power-law fit: slope of log(value) against log(index).
struct PowerLawFit {
    double slope = 0.0;
    double stderr_slope = 0.0;
};

/**
 * OLS slope of log(values[i-1]) vs log(i) over 1-based indices
 * [window_lo, window_hi] (inclusive). Requires >= 10 points in the window,
 * all values positive, and the window inside the series.
 */
PowerLawFit fit_power_law_exponent(const std::vector<double>& values, std::size_t window_lo,
                                   std::size_t window_hi);

/// Same fit with explicit positive abscissas (used for ODE time grids).
PowerLawFit fit_power_law_xy(const std::vector<double>& abscissa,
                             const std::vector<double>& values);

/**
 * Side-by-side comparison of a discrete trace against the closed-form
 * exponents: fitted slopes of x and S over the window, relative deviations,
 * and a verdict ("pass"/"fail" at `tol`, or "singular"/"non-growth" when the
 * closed forms carry no growth prediction).
 */
struct ComparisonReport {
    double alpha = 0.0;
    double gamma = 0.0;
    ExponentPair closed;
    double m_fit = 0.0;
    double n_fit = 0.0;
    double m_err = 0.0;  // |m_fit - m| / |m|, growth regime only
    double n_err = 0.0;
    bool pass = false;
    std::string verdict;
};

/**
 * Fit the trace's x and S series over [window_lo, window_hi] (1-based round
 * indices) and compare against closed_form_exponents(alpha, gamma).
 * Throws std::invalid_argument when the trace terminated before the window
 * end — a truncated fit would silently compare the wrong regime.
 */
ComparisonReport compare_discrete_continuum(const SpiralTrace& trace, double alpha, double gamma,
                                            std::size_t window_lo, std::size_t window_hi,
                                            double tol = 0.05);

}  // namespace spiralsim
