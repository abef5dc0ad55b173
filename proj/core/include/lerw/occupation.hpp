#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <span>

#include "lerw/geometry.hpp"
#include "lerw/loop_erasure.hpp"

namespace lerw {

enum class OccupationNormalization {
    Reference,  // counts / f_m with f_m = m^3 P(ref site on curve)
    Explicit,   // counts * m^-beta
};

/// Per-dyadic-box counts of curve sites inside the open unit ball, with a
/// normalization that turns counts into measure mass.
struct OccupationMeasure {
    double mesh = 1.0;
    int box_scale = 0;
    OccupationNormalization mode = OccupationNormalization::Explicit;
    double scale_factor = 1.0;  // f_m in Reference mode, mesh^beta in Explicit
    std::map<std::array<std::int64_t, 3>, std::uint64_t> counts;

    std::uint64_t count(const DyadicBox& box) const;
    double mass(const DyadicBox& box) const;
    std::uint64_t total_count() const;
};

/// Buckets the curve's sites (strictly inside the unit ball) into dyadic
/// boxes of the given scale.
OccupationMeasure occupation_measure(const SelfAvoidingPath& curve, int box_scale,
                                     OccupationNormalization mode,
                                     double scale_factor);

/// Volume of {points of the box within `radius` of the site cloud},
/// sampled at the centers of a cubic grid of the given pitch (counted
/// cells times pitch^3).  `lower` and `side` describe the box; points are
/// physical coordinates.
double sampled_neighborhood_volume(std::span<const Vec3> points, const Vec3& lower,
                                   double side, double radius, double pitch);

/// One sample of the renormalized neighborhood content
/// J = 2^((3-beta)s) * Vol(B(curve, 2^-s) cap V).
struct MinkowskiSample {
    double resolution_exponent = 0.0;  // s
    DyadicBox box;
    double value = 0.0;  // J
    double beta = 0.0;
};

/// Requires 2^-s >= 4/mesh (the neighborhood must dominate the mesh) and
/// an interior box; the sampling grid pitch is 2^-s / pitch_divisor.
MinkowskiSample minkowski_content(const SelfAvoidingPath& curve, const DyadicBox& box,
                                  double s, double beta, int pitch_divisor = 8);

}  // namespace lerw
