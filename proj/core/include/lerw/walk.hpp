#pragma once

#include <cstdint>
#include <vector>

#include "lerw/geometry.hpp"
#include "lerw/harmonic.hpp"
#include "lerw/rng.hpp"

namespace lerw {

/// Nearest-neighbor walk in lattice units; `mesh` records the scale m so
/// physical coordinates are points/m.
struct LatticePath {
    std::vector<LatticePoint> points;
    double mesh = 1.0;

    std::size_t step_count() const {
        return points.empty() ? 0 : points.size() - 1;
    }
};

/// Simple random walk from `start`, stopped at the first site outside the
/// open domain (that exit site is the last path point).
LatticePath srw_until_exit(const BallDomain& domain, const LatticePoint& start,
                           TrialRng& rng);
LatticePath srw_until_exit(const BallDomain& domain, const LatticePoint& start,
                           SeedSpec seed);

struct HitOrExitResult {
    LatticePath path;
    bool hit = false;
};

/// Walk stopped at the first of {reach target, exit domain}; `hit` says
/// which happened.  start == target gives a zero-step path with hit set.
HitOrExitResult srw_until_hit_or_exit(const BallDomain& domain,
                                      const LatticePoint& start,
                                      const LatticePoint& target, TrialRng& rng);

/// Doob h-transform of the stopped walk: steps from y to a neighbor z with
/// probability proportional to h(z), which realizes conditioning on
/// hitting `target` before exiting when h is the exact hitting field.
/// Every sampled path ends at target and never leaves the domain.
/// Throws std::invalid_argument ("unreachable conditioning") if h(start) = 0.
LatticePath conditioned_walk(const BallDomain& domain, const LatticePoint& start,
                             const LatticePoint& target, const ScalarField& h,
                             TrialRng& rng);

/// Unconstrained walk stopped on first exit of the ball |p| >= stop_radius
/// (the finite stand-in for a transient walk run forever).
LatticePath srw_transient(const LatticePoint& start, double stop_radius,
                          TrialRng& rng);

}  // namespace lerw
