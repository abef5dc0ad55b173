#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "lerw/estimate.hpp"

namespace lerw {

struct ScalePoint {
    double scale = 0.0;
    Estimate estimate;
};

/// y ~ amplitude * scale^exponent fitted by weighted least squares in
/// log-log coordinates, weights 1/relative-stderr^2.  The confidence
/// interval comes from a parametric bootstrap: resampled means drawn from
/// per-point normal errors, refit, 2.5%/97.5% quantiles.
struct PowerLawFit {
    double exponent = 0.0;
    double amplitude = 0.0;
    double exponent_ci_lo = 0.0;
    double exponent_ci_hi = 0.0;
    double exponent_se = 0.0;  // bootstrap standard deviation
    double chi_squared = 0.0;
    std::size_t n_points = 0;
    std::vector<double> std_residuals;

    bool ci_contains(double value) const {
        return exponent_ci_lo <= value && value <= exponent_ci_hi;
    }
};

inline constexpr int kBootstrapResamples = 10000;

/// Requires at least three scales and positive means; throws
/// std::invalid_argument otherwise.
PowerLawFit fit_power_law(std::span<const ScalePoint> points,
                          std::uint64_t bootstrap_seed = 1,
                          int resamples = kBootstrapResamples);

}  // namespace lerw
