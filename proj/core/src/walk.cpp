#include "lerw/walk.hpp"

#include <cmath>
#include <stdexcept>

namespace lerw {

namespace {

std::size_t reserve_hint(double radius) {
    // exit times scale like radius^2
    double r = std::max(radius, 1.0);
    return static_cast<std::size_t>(std::min(r * r * 2.0 + 16.0, 1.0e7));
}

}  // namespace

LatticePath srw_until_exit(const BallDomain& domain, const LatticePoint& start,
                           TrialRng& rng) {
    if (!domain.contains(start))
        throw std::invalid_argument("srw_until_exit: start outside domain");
    LatticePath path;
    path.mesh = domain.radius;
    path.points.reserve(reserve_hint(domain.radius));
    path.points.push_back(start);

    const double r2 = domain.radius * domain.radius;
    LatticePoint p = start - domain.center;
    std::int64_t n2 = p.norm_sq();
    while (static_cast<double>(n2) < r2) {
        int d = rng.uniform_direction();
        const LatticePoint& step = kNeighborSteps[static_cast<std::size_t>(d)];
        // |p + e|^2 = |p|^2 + 2 p.e + 1
        n2 += 2 * (step.x * p.x + step.y * p.y + step.z * p.z) + 1;
        p = p + step;
        path.points.push_back(p + domain.center);
    }
    return path;
}

LatticePath srw_until_exit(const BallDomain& domain, const LatticePoint& start,
                           SeedSpec seed) {
    TrialRng rng(seed);
    return srw_until_exit(domain, start, rng);
}

HitOrExitResult srw_until_hit_or_exit(const BallDomain& domain,
                                      const LatticePoint& start,
                                      const LatticePoint& target, TrialRng& rng) {
    if (!domain.contains(start))
        throw std::invalid_argument("srw_until_hit_or_exit: start outside domain");
    if (!domain.contains(target))
        throw std::invalid_argument("srw_until_hit_or_exit: target outside domain");

    HitOrExitResult result;
    result.path.mesh = domain.radius;
    result.path.points.push_back(start);
    if (start == target) {
        result.hit = true;
        return result;
    }

    const double r2 = domain.radius * domain.radius;
    LatticePoint p = start - domain.center;
    LatticePoint t = target - domain.center;
    std::int64_t n2 = p.norm_sq();
    for (;;) {
        int d = rng.uniform_direction();
        const LatticePoint& step = kNeighborSteps[static_cast<std::size_t>(d)];
        n2 += 2 * (step.x * p.x + step.y * p.y + step.z * p.z) + 1;
        p = p + step;
        result.path.points.push_back(p + domain.center);
        if (p == t) {
            result.hit = true;
            return result;
        }
        if (static_cast<double>(n2) >= r2) {
            result.hit = false;
            return result;
        }
    }
}

LatticePath conditioned_walk(const BallDomain& domain, const LatticePoint& start,
                             const LatticePoint& target, const ScalarField& h,
                             TrialRng& rng) {
    if (!domain.contains(start))
        throw std::invalid_argument("conditioned_walk: start outside domain");
    if (h.at(start) <= 0.0)
        throw std::invalid_argument("conditioned_walk: unreachable conditioning");

    LatticePath path;
    path.mesh = domain.radius;
    path.points.push_back(start);
    if (start == target) return path;

    const DomainIndex& index = h.index();
    std::int32_t at = index.index_of(start);
    std::array<double, 6> weight{};
    while (index.site(static_cast<std::size_t>(at)) != target) {
        const auto& nb = index.neighbors(static_cast<std::size_t>(at));
        double total = 0.0;
        for (std::size_t d = 0; d < 6; ++d) {
            std::int32_t j = nb[d];
            weight[d] = j < 0 ? 0.0 : h.at_index(static_cast<std::size_t>(j));
            total += weight[d];
        }
        double u = rng.uniform01() * total;
        std::size_t d = 6;
        for (std::size_t i = 0; i < 6; ++i) {
            if (u < weight[i]) {
                d = i;
                break;
            }
            u -= weight[i];
        }
        if (d == 6) {  // boundary roundoff: take the last positive weight
            d = 5;
            while (weight[d] <= 0.0) --d;
        }
        at = nb[d];
        path.points.push_back(index.site(static_cast<std::size_t>(at)));
    }
    return path;
}

LatticePath srw_transient(const LatticePoint& start, double stop_radius,
                          TrialRng& rng) {
    if (start.norm() >= stop_radius)
        throw std::invalid_argument("srw_transient: start already outside stop radius");
    LatticePath path;
    path.mesh = 1.0;
    path.points.reserve(reserve_hint(stop_radius));
    path.points.push_back(start);

    const double r2 = stop_radius * stop_radius;
    LatticePoint p = start;
    std::int64_t n2 = p.norm_sq();
    while (static_cast<double>(n2) < r2) {
        int d = rng.uniform_direction();
        const LatticePoint& step = kNeighborSteps[static_cast<std::size_t>(d)];
        n2 += 2 * (step.x * p.x + step.y * p.y + step.z * p.z) + 1;
        p = p + step;
        path.points.push_back(p);
    }
    return path;
}

}  // namespace lerw
