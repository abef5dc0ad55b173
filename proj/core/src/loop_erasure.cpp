#include "lerw/loop_erasure.hpp"

#include <stdexcept>

#include "lerw/detail/point_map.hpp"

namespace lerw {

namespace {

thread_local detail::PointIndexMap t_last_visit;
thread_local detail::PointIndexMap t_membership;

}  // namespace

SelfAvoidingPath loop_erase(const LatticePath& walk) {
    const auto& pts = walk.points;
    if (pts.empty()) throw std::invalid_argument("loop_erase: empty path");

    detail::PointIndexMap& last_visit = t_last_visit;
    last_visit.reset(pts.size());
    for (std::size_t i = pts.size(); i-- > 0;)
        last_visit.insert_if_absent(detail::pack_point(pts[i]),
                                    static_cast<std::int64_t>(i));

    SelfAvoidingPath out;
    out.mesh = walk.mesh;
    const std::int64_t end = static_cast<std::int64_t>(pts.size()) - 1;
    std::int64_t i = 0;
    for (;;) {
        std::int64_t j = last_visit.get(detail::pack_point(pts[static_cast<std::size_t>(i)]));
        out.points.push_back(pts[static_cast<std::size_t>(j)]);
        if (j == end) break;
        i = j + 1;
    }
    return out;
}

SelfAvoidingPath lerw_sample(const BallDomain& domain, TrialRng& rng) {
    if (!domain.contains(domain.center))
        throw std::invalid_argument("lerw_sample: domain does not contain its center");
    return loop_erase(srw_until_exit(domain, domain.center, rng));
}

SelfAvoidingPath lerw_sample(const BallDomain& domain, SeedSpec seed) {
    TrialRng rng(seed);
    return lerw_sample(domain, rng);
}

SelfAvoidingPath ilerw_sample(double mesh, double truncation_factor, TrialRng& rng) {
    if (truncation_factor < 2.0)
        throw std::invalid_argument("ilerw_sample: truncation factor must be >= 2");
    LatticePath walk = srw_transient(LatticePoint{}, truncation_factor * mesh, rng);
    walk.mesh = mesh;
    SelfAvoidingPath erased = loop_erase(walk);

    const double r2 = mesh * mesh;
    std::size_t cut = erased.points.size();
    for (std::size_t i = 0; i < erased.points.size(); ++i) {
        if (static_cast<double>(erased.points[i].norm_sq()) >= r2) {
            cut = i + 1;  // keep the first exit site itself
            break;
        }
    }
    erased.points.resize(cut);
    return erased;
}

SelfAvoidingPath ilerw_sample(double mesh, double truncation_factor, SeedSpec seed) {
    TrialRng rng(seed);
    return ilerw_sample(mesh, truncation_factor, rng);
}

bool paths_disjoint_after_first(const SelfAvoidingPath& erased,
                                const LatticePath& walk) {
    detail::PointIndexMap& members = t_membership;
    members.reset(erased.points.size());
    for (std::size_t i = 0; i < erased.points.size(); ++i)
        members.insert_if_absent(detail::pack_point(erased.points[i]), 1);
    for (std::size_t i = 1; i < walk.points.size(); ++i)
        if (members.contains(detail::pack_point(walk.points[i]))) return false;
    return true;
}

}  // namespace lerw
