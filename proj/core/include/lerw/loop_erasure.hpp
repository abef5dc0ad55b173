#pragma once

#include <cstdint>
#include <vector>

#include "lerw/geometry.hpp"
#include "lerw/rng.hpp"
#include "lerw/walk.hpp"

namespace lerw {

/// Loop-erased path: no repeated sites, consecutive sites adjacent.
struct SelfAvoidingPath {
    std::vector<LatticePoint> points;
    double mesh = 1.0;

    std::size_t step_count() const {
        return points.empty() ? 0 : points.size() - 1;
    }
};

/// Chronological loop-erasure: s_0 is the last visit time of the first
/// site, s_i the last visit time of the site entered right after s_{i-1},
/// and the output reads the walk at s_0, s_1, ....  Runs in expected
/// O(len) via one backward pass that records last-visit indices.
SelfAvoidingPath loop_erase(const LatticePath& walk);

/// LERW on the ball: loop-erasure of the walk from the center stopped at
/// first exit.  The final point is the only one outside the open domain.
SelfAvoidingPath lerw_sample(const BallDomain& domain, TrialRng& rng);
SelfAvoidingPath lerw_sample(const BallDomain& domain, SeedSpec seed);

/// Finite stand-in for the loop-erasure of an infinite walk: erase loops
/// of a walk stopped at radius truncation_factor * mesh, then keep the
/// portion up to (and including) its first exit of radius mesh.  Loops
/// made near the origin after the walk leaves the much larger ball are
/// rare, which is what makes the truncation usable.
SelfAvoidingPath ilerw_sample(double mesh, double truncation_factor, TrialRng& rng);
SelfAvoidingPath ilerw_sample(double mesh, double truncation_factor, SeedSpec seed);

/// True when the erased path shares no site with walk.points[1..end].
bool paths_disjoint_after_first(const SelfAvoidingPath& erased,
                                const LatticePath& walk);

}  // namespace lerw
