#include "spiralsim/kelly.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace spiralsim {

double kelly_fraction(double mu, double r, double sigma) {
    if (!(sigma > 0.0)) {
        throw std::invalid_argument("sigma must be > 0");
    }
    return (mu - r) / (sigma * sigma);
}

void validate(const KellyParams& params) {
    if (!(params.sigma > 0.0)) {
        throw std::invalid_argument("sigma must be > 0");
    }
    if (!(params.v0 > 0.0) || !(params.s0 > 0.0)) {
        throw std::invalid_argument("v0 and s0 must be > 0");
    }
    validate(params.model);
    if (params.ratio_window < 4 || params.max_steps < params.ratio_window) {
        throw std::invalid_argument("require max_steps >= ratio_window >= 4");
    }
}

RegressSeries simulate_regress(const KellyParams& params) {
    validate(params);
    const double phi = kelly_fraction(params.mu, params.r, params.sigma);
    const double underflow = 1e-15 * params.v0 / params.s0;
    constexpr double kOverflow = 1e100;

    RegressSeries series;
    double units = 0.0;        // all-cash start
    double cash = params.v0;
    double s = params.s0;

    for (std::size_t step = 0; step < params.max_steps; ++step) {
        const double value = cash + units * s;
        const double target = phi * value / s;
        const double a = target - units;

        if (std::abs(a) <= underflow) {
            // Record the terminal near-zero adjustment so the classifier can
            // see the regress die, then stop.
            series.steps.push_back({step, a, s, value});
            break;
        }

        // Trade the full adjustment at the post-impact price. For a trade
        // denominated in units the implicit post-trade equation collapses to
        // an explicit shift of k|a|^gamma: the volume-fraction w/S_new is
        // |a| itself whichever way the price settles.
        const double shift = eval_impact(params.model, std::abs(a));
        const double s_new = a > 0.0 ? s + shift : s - shift;
        if (!(s_new > 0.0)) {
            // A sell this size would push the price through zero; the cascade
            // has left the model's domain.
            series.steps.push_back({step, a, s, value});
            series.overflow = true;
            break;
        }

        units += a;
        cash -= a * s_new;
        s = s_new;
        const double new_value = cash + units * s;
        series.steps.push_back({step, a, s, new_value});

        if (std::abs(a) > kOverflow || std::abs(new_value) > kOverflow || s > kOverflow) {
            series.overflow = true;
            break;
        }
    }
    return series;
}

const char* to_string(RegressLabel label) {
    switch (label) {
        case RegressLabel::Convergent: return "convergent";
        case RegressLabel::Divergent: return "divergent";
        case RegressLabel::Oscillatory: return "oscillatory";
        case RegressLabel::Undetermined: return "undetermined";
    }
    return "unknown";
}

RegressClass classify_regress(const std::vector<double>& series, std::size_t ratio_window,
                              double delta) {
    if (ratio_window < 4) {
        throw std::invalid_argument("ratio_window must be >= 4");
    }
    if (!(delta > 0.0) || !(delta < 1.0)) {
        throw std::invalid_argument("delta must lie in (0,1)");
    }

    RegressClass result;
    if (series.empty()) {
        return result;  // Undetermined
    }
    if (series.back() == 0.0) {
        // An exactly-dead tail means no further adjustment can ever occur;
        // that is convergence regardless of how short the series is.
        result.label = RegressLabel::Convergent;
        result.estimated_ratio = 0.0;
        return result;
    }
    if (series.size() < ratio_window) {
        return result;  // Undetermined: not enough terms for a trailing window
    }

    std::vector<double> ratios;
    ratios.reserve(ratio_window - 1);
    for (std::size_t i = series.size() - ratio_window; i + 1 < series.size(); ++i) {
        if (series[i] != 0.0) {
            ratios.push_back(series[i + 1] / series[i]);
        }
    }
    if (ratios.empty()) {
        return result;  // Undetermined: no well-defined ratios in the window
    }

    std::sort(ratios.begin(), ratios.end());
    const std::size_t half = ratios.size() / 2;
    const double rho = ratios.size() % 2 == 1
                           ? ratios[half]
                           : 0.5 * (ratios[half - 1] + ratios[half]);

    result.estimated_ratio = rho;
    if (std::abs(rho) < 1.0 - delta) {
        result.label = RegressLabel::Convergent;
    } else if (rho > 1.0 + delta) {
        result.label = RegressLabel::Divergent;
    } else if (rho < -(1.0 - delta)) {
        result.label = RegressLabel::Oscillatory;
    } else {
        result.label = RegressLabel::Undetermined;
    }
    return result;
}

}  // namespace spiralsim
