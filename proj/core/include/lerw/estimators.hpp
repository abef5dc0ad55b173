#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "lerw/estimate.hpp"
#include "lerw/geometry.hpp"

namespace lerw {

/// P(x_m on the loop-erased walk): fraction of trials whose LERW on the
/// radius-m ball contains nearest_lattice_point(x, m).  x = 0 is exact
/// (the curve starts there); |x| >= 1 throws.
Estimate estimate_one_point(const Vec3& x, double mesh, std::uint64_t trials,
                            std::uint64_t seed, int workers = 1,
                            std::uint64_t first_trial = 0);

/// Same estimand against the truncated infinite-walk loop-erasure.
Estimate estimate_ilerw_one_point(const Vec3& x, double mesh,
                                  double truncation_factor, std::uint64_t trials,
                                  std::uint64_t seed, int workers = 1,
                                  std::uint64_t first_trial = 0);

/// P(curve comes within physical distance r of x).  Requires
/// r < min(|x|, 1-|x|)/2 and mesh*r >= 4 ("mesh too coarse" otherwise).
Estimate estimate_ball_hit(const Vec3& x, double r, double mesh,
                           std::uint64_t trials, std::uint64_t seed,
                           int workers = 1, std::uint64_t first_trial = 0);

/// Several radii against shared walks (common random numbers), so the
/// nested events stay nested trial by trial.  Radii must be ascending.
std::vector<Estimate> estimate_ball_hit_profile(const Vec3& x,
                                                std::span<const double> radii,
                                                double mesh, std::uint64_t trials,
                                                std::uint64_t seed, int workers = 1,
                                                std::uint64_t first_trial = 0);

enum class TwoPointMode { PointPoint, BallBall };

/// Joint hit frequency for two marked locations.  Point mode tests lattice
/// membership of both nearest sites; ball mode tests the r_z/r_w
/// neighborhoods (both radii must be < |z-w|/2).
Estimate estimate_two_point(const Vec3& z, const Vec3& w, TwoPointMode mode,
                            double r_z, double r_w, double mesh,
                            std::uint64_t trials, std::uint64_t seed,
                            int workers = 1, std::uint64_t first_trial = 0);

/// Non-intersection probability Es(m): a walk from the origin stopped on
/// leaving the radius-m ball, loop-erased, against the step-1-onward
/// range of an independent walk stopped the same way (unit lattice).
Estimate estimate_es(std::int64_t radius, std::uint64_t trials, std::uint64_t seed,
                     int workers = 1, std::uint64_t first_trial = 0);

/// Es at several radii from one shared pair of walks per trial.
std::vector<Estimate> estimate_es_profile(std::span<const std::int64_t> radii,
                                          std::uint64_t trials, std::uint64_t seed,
                                          int workers = 1,
                                          std::uint64_t first_trial = 0);

/// Mean step count of the LERW across the radius-m ball (the total-length
/// observable the growth exponent is fitted from).
Estimate estimate_length(double mesh, std::uint64_t trials, std::uint64_t seed,
                         int workers = 1, std::uint64_t first_trial = 0);

/// a_m(S) for S a ball of the given radius (0 selects the singleton
/// {reference site}) shifted to the reference point: the ratio
/// P(S hit) / P(reference site on curve) over shared trial streams.
struct DecouplingRatio {
    Estimate ratio;      // delta-method standard error
    MomentSummary raw;   // components: [shape hit, point hit]
};

DecouplingRatio decoupling_ratio(double shape_radius, double mesh,
                                 std::uint64_t trials, std::uint64_t seed,
                                 int workers = 1, std::uint64_t first_trial = 0);

/// Factorization experiment: from one curve per trial measures
/// [ball(z,r) and ball(w,r) hit, z and w sites on curve, ball(ref,r) hit,
/// ref site on curve] and compares joint/two-point against a_m(r)^2 with
/// full covariance bookkeeping.
struct DecouplingFactorization {
    MomentSummary raw;
    double joint_ratio = 0.0;
    double joint_ratio_se = 0.0;
    double a_squared = 0.0;
    double a_squared_se = 0.0;
    double difference = 0.0;      // joint_ratio - a_squared
    double difference_se = 0.0;   // delta method on the correlated means
};

DecouplingFactorization decoupling_factorization(const Vec3& z, const Vec3& w,
                                                 double shape_radius, double mesh,
                                                 std::uint64_t trials,
                                                 std::uint64_t seed, int workers = 1,
                                                 std::uint64_t first_trial = 0);

/// First-order (delta method) variance of f(means) given the gradient of f.
double delta_method_variance(const MomentSummary& summary,
                             std::span<const double> gradient);

}  // namespace lerw
