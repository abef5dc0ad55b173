#include "lerw/fit.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lerw/rng.hpp"

namespace lerw {

namespace {

// relative-error floor so exact synthetic inputs keep finite weights
constexpr double kRelativeErrorFloor = 1e-12;

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
};

LinearFit weighted_line(std::span<const double> x, std::span<const double> y,
                        std::span<const double> w) {
    double sw = 0.0, swx = 0.0, swy = 0.0, swxx = 0.0, swxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sw += w[i];
        swx += w[i] * x[i];
        swy += w[i] * y[i];
        swxx += w[i] * x[i] * x[i];
        swxy += w[i] * x[i] * y[i];
    }
    double det = sw * swxx - swx * swx;
    if (det == 0.0) throw std::invalid_argument("fit_power_law: degenerate scales");
    return LinearFit{(sw * swxy - swx * swy) / det, (swxx * swy - swx * swxy) / det};
}

}  // namespace

PowerLawFit fit_power_law(std::span<const ScalePoint> points,
                          std::uint64_t bootstrap_seed, int resamples) {
    if (points.size() < 3)
        throw std::invalid_argument("fit_power_law: need at least three scales");

    const std::size_t n = points.size();
    std::vector<double> log_x(n), log_y(n), rel_err(n), weight(n);
    for (std::size_t i = 0; i < n; ++i) {
        const ScalePoint& p = points[i];
        if (!(p.scale > 0.0))
            throw std::invalid_argument("fit_power_law: scales must be positive");
        if (!(p.estimate.mean > 0.0))
            throw std::invalid_argument("fit_power_law: means must be positive");
        log_x[i] = std::log(p.scale);
        log_y[i] = std::log(p.estimate.mean);
        rel_err[i] = std::max(p.estimate.stderr_of_mean / p.estimate.mean,
                              kRelativeErrorFloor);
        weight[i] = 1.0 / (rel_err[i] * rel_err[i]);
    }

    LinearFit base = weighted_line(log_x, log_y, weight);

    PowerLawFit fit;
    fit.exponent = base.slope;
    fit.amplitude = std::exp(base.intercept);
    fit.n_points = n;
    fit.std_residuals.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        double resid = log_y[i] - (base.intercept + base.slope * log_x[i]);
        fit.std_residuals[i] = resid / rel_err[i];
        fit.chi_squared += fit.std_residuals[i] * fit.std_residuals[i];
    }

    // parametric bootstrap over per-point normal errors
    TrialRng rng(bootstrap_seed, 0);
    std::vector<double> resampled(n);
    std::vector<double> exponents;
    exponents.reserve(static_cast<std::size_t>(resamples));
    for (int b = 0; b < resamples; ++b) {
        for (std::size_t i = 0; i < n; ++i) {
            const ScalePoint& p = points[i];
            double y = 0.0;
            int guard = 0;
            do {
                y = p.estimate.mean + p.estimate.stderr_of_mean * rng.standard_normal();
            } while (y <= 0.0 && ++guard < 64);
            if (y <= 0.0) y = p.estimate.mean * 1e-6;
            resampled[i] = std::log(y);
        }
        exponents.push_back(weighted_line(log_x, resampled, weight).slope);
    }
    std::sort(exponents.begin(), exponents.end());
    auto quantile = [&](double q) {
        double pos = q * static_cast<double>(exponents.size() - 1);
        auto lo = static_cast<std::size_t>(pos);
        auto hi = std::min(lo + 1, exponents.size() - 1);
        double frac = pos - static_cast<double>(lo);
        return exponents[lo] * (1.0 - frac) + exponents[hi] * frac;
    };
    fit.exponent_ci_lo = quantile(0.025);
    fit.exponent_ci_hi = quantile(0.975);

    double mean = 0.0;
    for (double e : exponents) mean += e;
    mean /= static_cast<double>(exponents.size());
    double var = 0.0;
    for (double e : exponents) var += (e - mean) * (e - mean);
    var /= static_cast<double>(exponents.size() - 1);
    fit.exponent_se = std::sqrt(std::max(var, 0.0));

    return fit;
}

}  // namespace lerw
