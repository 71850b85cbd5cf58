#include "spiralsim/impact.hpp"

#include <algorithm>
#include <cmath>

namespace spiralsim {

void validate(const ImpactModel& model) {
    if (!(model.k >= 0.0) || !std::isfinite(model.k)) {
        throw std::invalid_argument("impact coefficient k must be finite and >= 0");
    }
    if (!(model.gamma > 0.0) || !(model.gamma <= 1.0)) {
        throw std::invalid_argument("impact exponent gamma must lie in (0, 1]");
    }
}

double eval_impact(const ImpactModel& model, double volume_fraction) {
    if (volume_fraction < 0.0 || !std::isfinite(volume_fraction)) {
        throw std::invalid_argument("volume fraction must be finite and >= 0");
    }
    if (model.k == 0.0 || volume_fraction == 0.0) {
        return 0.0;
    }
    return model.k * std::pow(volume_fraction, model.gamma);
}

double solve_post_trade_price(const ImpactModel& model, double s_prev, double cash_in,
                              double tol) {
    validate(model);
    if (!(s_prev > 0.0) || !std::isfinite(s_prev)) {
        throw std::invalid_argument("previous price must be finite and > 0");
    }
    if (cash_in < 0.0 || !std::isfinite(cash_in)) {
        throw std::invalid_argument("trade cash must be finite and >= 0");
    }
    if (model.k == 0.0 || cash_in == 0.0) {
        return s_prev;  // no impact or no trade: price unchanged
    }

    // g(S) = S - s_prev - k(w/S)^gamma, strictly increasing on (s_prev, inf).
    const auto g = [&](double s) {
        return s - s_prev - eval_impact(model, cash_in / s);
    };

    double lo = s_prev;
    double hi = s_prev + eval_impact(model, cash_in / s_prev);
    if (!std::isfinite(hi)) {
        throw SolverError("post-trade price bracket overflowed", hi);
    }

    // Bisect until the bracket cannot shrink in double precision; the budget
    // is a safety net, not the expected exit.
    constexpr int kMaxIterations = 200;
    for (int i = 0; i < kMaxIterations; ++i) {
        const double mid = lo + 0.5 * (hi - lo);
        if (mid <= lo || mid >= hi) {
            break;  // floating-point exhaustion: lo and hi are adjacent
        }
        if (g(mid) < 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }

    // Pick whichever endpoint has the smaller residual.
    const double s_new = std::abs(g(lo)) <= std::abs(g(hi)) ? lo : hi;
    const double residual = std::abs(g(s_new));
    // tol is relative to the solution scale: the attainable residual is a few
    // ulp of the post-trade price, so an absolute bound would spuriously fail
    // for very large fills and be meaninglessly loose for very small ones.
    const double bound = (tol > 0.0 ? tol : 1e-12) * std::max(1.0, s_new);
    if (residual > bound) {
        throw SolverError("post-trade price iteration did not converge to tolerance", residual);
    }
    return s_new;
}

}  // namespace spiralsim
