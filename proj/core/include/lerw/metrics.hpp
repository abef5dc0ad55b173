#pragma once

#include <span>
#include <vector>

#include "lerw/geometry.hpp"

namespace lerw {

/// Hausdorff distance between two finite nonempty point sets:
/// max of the two directed sup-inf Euclidean distances.
/// Throws std::invalid_argument on an empty set.
double hausdorff_distance(std::span<const Vec3> a, std::span<const Vec3> b);

/// Curve traced at constant speed through `points`, taking total time
/// `duration`; positions at fractional times come from linear
/// interpolation.  A single-point curve is the constant curve.
struct ParametrizedCurve {
    std::vector<Vec3> points;
    double duration = 0.0;

    Vec3 at(double t) const;
};

/// Distance between parametrized curves: |T2 - T1| plus the sup over
/// s in [0,1] of |c1(s*T1) - c2(s*T2)|, the sup taken over a uniform grid
/// of `grid_points` values of s (the curves are piecewise linear, so the
/// grid error is O(1/grid) for Lipschitz inputs).
double rho_distance(const ParametrizedCurve& c1, const ParametrizedCurve& c2,
                    int grid_points = 1025);

}  // namespace lerw
