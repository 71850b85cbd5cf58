#include "spiralsim/continuum.hpp"

#include <cmath>
#include <stdexcept>

namespace spiralsim {

const char* to_string(Regime r) {
    switch (r) {
        case Regime::Growth: return "growth";
        case Regime::Singular: return "singular";
        case Regime::NonGrowth: return "non-growth";
    }
    return "unknown";
}

ExponentPair closed_form_exponents(double alpha, double gamma) {
    if (!(alpha > 0.0) || !(alpha < 1.0)) {
        throw std::invalid_argument("alpha must lie in (0,1)");
    }
    if (!(gamma > 0.0) || !(gamma <= 1.0)) {
        throw std::invalid_argument("gamma must lie in (0,1]");
    }

    ExponentPair pair;
    pair.denominator = alpha - gamma * (1.0 - alpha);
    if (std::abs(pair.denominator) < 1e-12) {
        pair.regime = Regime::Singular;  // no finite growth prediction on the boundary
        return pair;
    }
    pair.regime = pair.denominator > 0.0 ? Regime::Growth : Regime::NonGrowth;
    pair.m = alpha * (1.0 - gamma) / pair.denominator;
    pair.n = (1.0 - alpha) * (1.0 - gamma) / pair.denominator;
    return pair;
}

void validate(const ContinuumParams& params) {
    if (!(params.khat >= 0.0) || !std::isfinite(params.khat)) {
        throw std::invalid_argument("khat must be finite and >= 0");
    }
    if (!(params.gamma > 0.0) || !(params.gamma < 1.0)) {
        throw std::invalid_argument(
            "gamma must lie in (0,1) for the reduced system: at gamma=1 the relations force "
            "exponential, not power-law, growth");
    }
    if (!(params.t0 >= 1.0)) {
        throw std::invalid_argument("t0 must be >= 1");
    }
    if (!(params.t_max > params.t0)) {
        throw std::invalid_argument("t_max must exceed t0");
    }
    if (!(params.dt > 0.0) || params.dt > 1e-3 * params.t0) {
        throw std::invalid_argument("dt must lie in (0, 1e-3 * t0]");
    }
    if (!(params.x0 > 0.0) || !(params.s0 > 0.0)) {
        throw std::invalid_argument("x0 and s0 must be > 0");
    }
}

std::vector<OdePoint> integrate_ode(double alpha, const ContinuumParams& params) {
    validate(params);
    const ExponentPair closed = closed_form_exponents(alpha, params.gamma);
    if (closed.regime != Regime::Growth) {
        throw std::invalid_argument("integrate_ode requires the growth regime");
    }

    // Pointwise reduction of alpha*(x*S' + S*x') = S*x' and S' = khat*(x')^gamma:
    //   x' = (khat * alpha * x / ((1-alpha) * S))^(1/(1-gamma)),  S' = khat * (x')^gamma.
    const double inv_one_minus_gamma = 1.0 / (1.0 - params.gamma);
    const std::size_t steps =
        static_cast<std::size_t>(std::ceil((params.t_max - params.t0) / params.dt));

    std::vector<OdePoint> trajectory;
    trajectory.reserve(steps + 1);

    double t = params.t0;
    double x = params.x0;
    double s = params.s0;
    trajectory.push_back({t, x, s});

    for (std::size_t i = 0; i < steps; ++i) {
        const double dxdt =
            std::pow(params.khat * alpha * x / ((1.0 - alpha) * s), inv_one_minus_gamma);
        const double dsdt = params.khat * std::pow(dxdt, params.gamma);
        x += params.dt * dxdt;
        s += params.dt * dsdt;
        t += params.dt;
        if (!std::isfinite(x) || !std::isfinite(s)) {
            throw std::runtime_error("ode step produced a non-finite state");
        }
        trajectory.push_back({t, x, s});
    }
    return trajectory;
}

namespace {

PowerLawFit fit_loglog(const std::vector<double>& log_x, const std::vector<double>& log_y) {
    const std::size_t n = log_x.size();
    double mean_x = 0.0;
    double mean_y = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mean_x += log_x[i];
        mean_y += log_y[i];
    }
    mean_x /= static_cast<double>(n);
    mean_y /= static_cast<double>(n);

    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = log_x[i] - mean_x;
        sxx += dx * dx;
        sxy += dx * (log_y[i] - mean_y);
    }
    if (sxx == 0.0) {
        throw std::invalid_argument("degenerate fit window: all abscissas equal");
    }

    PowerLawFit fit;
    fit.slope = sxy / sxx;

    double ssr = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double predicted = mean_y + fit.slope * (log_x[i] - mean_x);
        const double r = log_y[i] - predicted;
        ssr += r * r;
    }
    fit.stderr_slope = n > 2 ? std::sqrt(ssr / (static_cast<double>(n - 2) * sxx)) : 0.0;
    return fit;
}

}  // namespace

PowerLawFit fit_power_law_exponent(const std::vector<double>& values, std::size_t window_lo,
                                   std::size_t window_hi) {
    if (window_lo < 1 || window_hi > values.size() || window_hi < window_lo + 9) {
        throw std::invalid_argument("fit window must contain >= 10 points inside the series");
    }
    std::vector<double> log_x;
    std::vector<double> log_y;
    log_x.reserve(window_hi - window_lo + 1);
    log_y.reserve(window_hi - window_lo + 1);
    for (std::size_t i = window_lo; i <= window_hi; ++i) {
        const double v = values[i - 1];
        if (!(v > 0.0)) {
            throw std::invalid_argument("power-law fit requires positive values");
        }
        log_x.push_back(std::log(static_cast<double>(i)));
        log_y.push_back(std::log(v));
    }
    return fit_loglog(log_x, log_y);
}

PowerLawFit fit_power_law_xy(const std::vector<double>& abscissa,
                             const std::vector<double>& values) {
    if (abscissa.size() != values.size() || abscissa.size() < 10) {
        throw std::invalid_argument("fit requires >= 10 matching (abscissa, value) points");
    }
    std::vector<double> log_x;
    std::vector<double> log_y;
    log_x.reserve(abscissa.size());
    log_y.reserve(values.size());
    for (std::size_t i = 0; i < abscissa.size(); ++i) {
        if (!(abscissa[i] > 0.0) || !(values[i] > 0.0)) {
            throw std::invalid_argument("power-law fit requires positive values");
        }
        log_x.push_back(std::log(abscissa[i]));
        log_y.push_back(std::log(values[i]));
    }
    return fit_loglog(log_x, log_y);
}

ComparisonReport compare_discrete_continuum(const SpiralTrace& trace, double alpha, double gamma,
                                            std::size_t window_lo, std::size_t window_hi,
                                            double tol) {
    if (trace.rounds.size() < window_hi) {
        throw std::invalid_argument("trace terminated at round " +
                                    std::to_string(trace.rounds.size()) +
                                    ", before the fit window end " + std::to_string(window_hi));
    }

    std::vector<double> xs;
    std::vector<double> prices;
    xs.reserve(trace.rounds.size());
    prices.reserve(trace.rounds.size());
    for (const RoundRecord& record : trace.rounds) {
        xs.push_back(record.x);
        prices.push_back(record.s);
    }

    ComparisonReport report;
    report.alpha = alpha;
    report.gamma = gamma;
    report.closed = closed_form_exponents(alpha, gamma);
    report.m_fit = fit_power_law_exponent(xs, window_lo, window_hi).slope;
    report.n_fit = fit_power_law_exponent(prices, window_lo, window_hi).slope;

    switch (report.closed.regime) {
        case Regime::Singular:
            report.verdict = "singular";  // no prediction to compare against
            break;
        case Regime::NonGrowth:
            report.verdict = "non-growth";  // closed forms not interpreted below the boundary
            break;
        case Regime::Growth:
            report.m_err = std::abs(report.m_fit - report.closed.m) / std::abs(report.closed.m);
            report.n_err = std::abs(report.n_fit - report.closed.n) / std::abs(report.closed.n);
            report.pass = report.m_err <= tol && report.n_err <= tol;
            report.verdict = report.pass ? "pass" : "fail";
            break;
    }
    return report;
}

}  // namespace spiralsim
