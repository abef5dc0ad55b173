#include "lerw/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string_view>

#include "lerw/detail/point_map.hpp"
#include "lerw/engine.hpp"
#include "lerw/loop_erasure.hpp"
#include "lerw/walk.hpp"

namespace lerw {

namespace {

bool contains_site(const std::vector<LatticePoint>& points, const LatticePoint& site) {
    return std::find(points.begin(), points.end(), site) != points.end();
}

void require_in_ball(const Vec3& x, const char* who) {
    if (x.norm() >= 1.0) {
        std::ostringstream msg;
        msg << who << ": point lies outside the unit ball";
        throw std::invalid_argument(msg.str());
    }
}

std::string describe(std::string_view name, double mesh) {
    std::ostringstream os;
    os << name << "[m=" << mesh << "]";
    return os.str();
}

double min_dist_sq(const std::vector<LatticePoint>& points, const Vec3& q) {
    double best = std::numeric_limits<double>::infinity();
    for (const LatticePoint& p : points) {
        double dx = static_cast<double>(p.x) - q.x;
        double dy = static_cast<double>(p.y) - q.y;
        double dz = static_cast<double>(p.z) - q.z;
        best = std::min(best, dx * dx + dy * dy + dz * dz);
    }
    return best;
}

}  // namespace

double delta_method_variance(const MomentSummary& summary,
                             std::span<const double> gradient) {
    double var = 0.0;
    for (std::size_t i = 0; i < gradient.size(); ++i)
        for (std::size_t j = 0; j < gradient.size(); ++j)
            var += gradient[i] * gradient[j] * summary.covariance(i, j);
    return var;
}

Estimate estimate_one_point(const Vec3& x, double mesh, std::uint64_t trials,
                            std::uint64_t seed, int workers,
                            std::uint64_t first_trial) {
    require_in_ball(x, "estimate_one_point");
    std::string descriptor = describe("one_point", mesh);
    if (x == Vec3{}) return Estimate{1.0, 0.0, trials, seed, descriptor};

    const BallDomain domain{mesh, {}};
    const LatticePoint site = nearest_lattice_point(x, mesh);
    TrialKernel kernel = [&domain, site](TrialRng& rng, std::span<double> out) {
        SelfAvoidingPath curve = lerw_sample(domain, rng);
        out[0] = contains_site(curve.points, site) ? 1.0 : 0.0;
    };
    return run_trials(kernel, 1, seed, first_trial, trials, workers)
        .estimate(0, std::move(descriptor));
}

Estimate estimate_ilerw_one_point(const Vec3& x, double mesh,
                                  double truncation_factor, std::uint64_t trials,
                                  std::uint64_t seed, int workers,
                                  std::uint64_t first_trial) {
    require_in_ball(x, "estimate_ilerw_one_point");
    const LatticePoint site = nearest_lattice_point(x, mesh);
    TrialKernel kernel = [mesh, truncation_factor, site](TrialRng& rng,
                                                         std::span<double> out) {
        SelfAvoidingPath curve = ilerw_sample(mesh, truncation_factor, rng);
        out[0] = contains_site(curve.points, site) ? 1.0 : 0.0;
    };
    return run_trials(kernel, 1, seed, first_trial, trials, workers)
        .estimate(0, describe("ilerw_one_point", mesh));
}

std::vector<Estimate> estimate_ball_hit_profile(const Vec3& x,
                                                std::span<const double> radii,
                                                double mesh, std::uint64_t trials,
                                                std::uint64_t seed, int workers,
                                                std::uint64_t first_trial) {
    require_in_ball(x, "estimate_ball_hit");
    if (radii.empty()) throw std::invalid_argument("estimate_ball_hit: no radii");
    if (!std::is_sorted(radii.begin(), radii.end()))
        throw std::invalid_argument("estimate_ball_hit: radii must be ascending");
    const double gap = GeometryContext::boundary_gap(x);
    for (double r : radii) {
        if (!(r < gap / 2.0))
            throw std::invalid_argument(
                "estimate_ball_hit: radius must stay below min(|x|,1-|x|)/2");
        if (mesh * r < 4.0)
            throw std::invalid_argument("estimate_ball_hit: mesh too coarse");
    }

    const BallDomain domain{mesh, {}};
    const Vec3 target{x.x * mesh, x.y * mesh, x.z * mesh};
    std::vector<double> thresholds(radii.size());
    for (std::size_t i = 0; i < radii.size(); ++i)
        thresholds[i] = (mesh * radii[i]) * (mesh * radii[i]);

    TrialKernel kernel = [&domain, &target, &thresholds](TrialRng& rng,
                                                         std::span<double> out) {
        SelfAvoidingPath curve = lerw_sample(domain, rng);
        double d2 = min_dist_sq(curve.points, target);
        for (std::size_t i = 0; i < thresholds.size(); ++i)
            out[i] = d2 <= thresholds[i] ? 1.0 : 0.0;
    };
    MomentSummary summary =
        run_trials(kernel, radii.size(), seed, first_trial, trials, workers);

    std::vector<Estimate> out;
    out.reserve(radii.size());
    for (std::size_t i = 0; i < radii.size(); ++i) {
        std::ostringstream os;
        os << "ball_hit[m=" << mesh << ",r=" << radii[i] << "]";
        out.push_back(summary.estimate(i, os.str()));
    }
    return out;
}

Estimate estimate_ball_hit(const Vec3& x, double r, double mesh,
                           std::uint64_t trials, std::uint64_t seed, int workers,
                           std::uint64_t first_trial) {
    double radii[1] = {r};
    return estimate_ball_hit_profile(x, radii, mesh, trials, seed, workers,
                                     first_trial)
        .front();
}

Estimate estimate_two_point(const Vec3& z, const Vec3& w, TwoPointMode mode,
                            double r_z, double r_w, double mesh,
                            std::uint64_t trials, std::uint64_t seed, int workers,
                            std::uint64_t first_trial) {
    require_in_ball(z, "estimate_two_point");
    require_in_ball(w, "estimate_two_point");
    if (z == w) throw std::invalid_argument("estimate_two_point: z equals w");
    if (mode == TwoPointMode::BallBall) {
        double sep = (z - w).norm();
        if (!(r_z < sep / 2.0 && r_w < sep / 2.0))
            throw std::invalid_argument(
                "estimate_two_point: ball radii must stay below |z-w|/2");
    }

    const BallDomain domain{mesh, {}};
    TrialKernel kernel;
    if (mode == TwoPointMode::PointPoint) {
        const LatticePoint sz = nearest_lattice_point(z, mesh);
        const LatticePoint sw = nearest_lattice_point(w, mesh);
        kernel = [&domain, sz, sw](TrialRng& rng, std::span<double> out) {
            SelfAvoidingPath curve = lerw_sample(domain, rng);
            out[0] = (contains_site(curve.points, sz) &&
                      contains_site(curve.points, sw))
                         ? 1.0
                         : 0.0;
        };
    } else {
        const Vec3 qz{z.x * mesh, z.y * mesh, z.z * mesh};
        const Vec3 qw{w.x * mesh, w.y * mesh, w.z * mesh};
        const double tz = (mesh * r_z) * (mesh * r_z);
        const double tw = (mesh * r_w) * (mesh * r_w);
        kernel = [&domain, qz, qw, tz, tw](TrialRng& rng, std::span<double> out) {
            SelfAvoidingPath curve = lerw_sample(domain, rng);
            out[0] = (min_dist_sq(curve.points, qz) <= tz &&
                      min_dist_sq(curve.points, qw) <= tw)
                         ? 1.0
                         : 0.0;
        };
    }
    return run_trials(kernel, 1, seed, first_trial, trials, workers)
        .estimate(0, describe("two_point", mesh));
}

namespace {

/// First index whose site has |p| >= radius (the final index when the
/// walk was already stopped at or beyond that radius).
std::size_t first_crossing(const std::vector<LatticePoint>& points, double radius) {
    const double r2 = radius * radius;
    for (std::size_t i = 0; i < points.size(); ++i)
        if (static_cast<double>(points[i].norm_sq()) >= r2) return i;
    return points.size() - 1;
}

thread_local detail::PointIndexMap t_es_members;

}  // namespace

std::vector<Estimate> estimate_es_profile(std::span<const std::int64_t> radii,
                                          std::uint64_t trials, std::uint64_t seed,
                                          int workers, std::uint64_t first_trial) {
    if (radii.empty()) throw std::invalid_argument("estimate_es: no radii");
    if (!std::is_sorted(radii.begin(), radii.end()))
        throw std::invalid_argument("estimate_es: radii must be ascending");
    for (std::int64_t r : radii)
        if (r < 1) throw std::invalid_argument("estimate_es: radius must be >= 1");

    const double r_max = static_cast<double>(radii.back());
    TrialKernel kernel = [radii, r_max](TrialRng& rng, std::span<double> out) {
        LatticePath walk = srw_transient(LatticePoint{}, r_max, rng);
        LatticePath other = srw_transient(LatticePoint{}, r_max, rng);
        for (std::size_t k = 0; k < radii.size(); ++k) {
            const double r = static_cast<double>(radii[k]);
            std::size_t stop = first_crossing(walk.points, r);
            std::size_t stop_other = first_crossing(other.points, r);

            LatticePath prefix;
            prefix.mesh = 1.0;
            prefix.points.assign(walk.points.begin(),
                                 walk.points.begin() +
                                     static_cast<std::ptrdiff_t>(stop + 1));
            SelfAvoidingPath erased = loop_erase(prefix);

            detail::PointIndexMap& members = t_es_members;
            members.reset(erased.points.size());
            for (const LatticePoint& p : erased.points)
                members.insert_if_absent(detail::pack_point(p), 1);

            bool disjoint = true;
            for (std::size_t i = 1; i <= stop_other; ++i) {
                if (members.contains(detail::pack_point(other.points[i]))) {
                    disjoint = false;
                    break;
                }
            }
            out[k] = disjoint ? 1.0 : 0.0;
        }
    };

    MomentSummary summary =
        run_trials(kernel, radii.size(), seed, first_trial, trials, workers);
    std::vector<Estimate> out;
    out.reserve(radii.size());
    for (std::size_t i = 0; i < radii.size(); ++i) {
        std::ostringstream os;
        os << "es[m=" << radii[i] << "]";
        out.push_back(summary.estimate(i, os.str()));
    }
    return out;
}

Estimate estimate_es(std::int64_t radius, std::uint64_t trials, std::uint64_t seed,
                     int workers, std::uint64_t first_trial) {
    std::int64_t radii[1] = {radius};
    return estimate_es_profile(radii, trials, seed, workers, first_trial).front();
}

Estimate estimate_length(double mesh, std::uint64_t trials, std::uint64_t seed,
                         int workers, std::uint64_t first_trial) {
    const BallDomain domain{mesh, {}};
    TrialKernel kernel = [&domain](TrialRng& rng, std::span<double> out) {
        out[0] = static_cast<double>(lerw_sample(domain, rng).step_count());
    };
    return run_trials(kernel, 1, seed, first_trial, trials, workers)
        .estimate(0, describe("length", mesh));
}

DecouplingRatio decoupling_ratio(double shape_radius, double mesh,
                                 std::uint64_t trials, std::uint64_t seed,
                                 int workers, std::uint64_t first_trial) {
    const GeometryContext geometry{mesh};
    const LatticePoint ref = geometry.reference_site();
    const BallDomain domain{mesh, {}};
    const Vec3 target{static_cast<double>(ref.x), static_cast<double>(ref.y),
                      static_cast<double>(ref.z)};
    const double threshold = (mesh * shape_radius) * (mesh * shape_radius);

    TrialKernel kernel = [&domain, ref, target, threshold, shape_radius](
                             TrialRng& rng, std::span<double> out) {
        SelfAvoidingPath curve = lerw_sample(domain, rng);
        bool on_site = contains_site(curve.points, ref);
        bool shape_hit = shape_radius <= 0.0
                             ? on_site
                             : min_dist_sq(curve.points, target) <= threshold;
        out[0] = shape_hit ? 1.0 : 0.0;
        out[1] = on_site ? 1.0 : 0.0;
    };
    MomentSummary summary = run_trials(kernel, 2, seed, first_trial, trials, workers);

    DecouplingRatio out;
    out.raw = summary;
    double num = summary.mean[0], den = summary.mean[1];
    double ratio = den > 0.0 ? num / den : 0.0;
    double gradient[2] = {den > 0.0 ? 1.0 / den : 0.0,
                          den > 0.0 ? -num / (den * den) : 0.0};
    double var = delta_method_variance(summary, gradient);
    out.ratio = Estimate{ratio, var > 0.0 ? std::sqrt(var) : 0.0, summary.n, seed,
                         describe("decoupling_ratio", mesh)};
    return out;
}

DecouplingFactorization decoupling_factorization(const Vec3& z, const Vec3& w,
                                                 double shape_radius, double mesh,
                                                 std::uint64_t trials,
                                                 std::uint64_t seed, int workers,
                                                 std::uint64_t first_trial) {
    require_in_ball(z, "decoupling_factorization");
    require_in_ball(w, "decoupling_factorization");
    if (shape_radius <= 0.0)
        throw std::invalid_argument("decoupling_factorization: shape radius must be positive");

    const GeometryContext geometry{mesh};
    const LatticePoint ref = geometry.reference_site();
    const BallDomain domain{mesh, {}};
    const LatticePoint sz = nearest_lattice_point(z, mesh);
    const LatticePoint sw = nearest_lattice_point(w, mesh);
    const Vec3 qz{z.x * mesh, z.y * mesh, z.z * mesh};
    const Vec3 qw{w.x * mesh, w.y * mesh, w.z * mesh};
    const Vec3 qref = [&] {
        Vec3 c = ref.to_physical(mesh);
        return Vec3{c.x * mesh, c.y * mesh, c.z * mesh};
    }();
    const double threshold = (mesh * shape_radius) * (mesh * shape_radius);

    TrialKernel kernel = [&](TrialRng& rng, std::span<double> out) {
        SelfAvoidingPath curve = lerw_sample(domain, rng);
        out[0] = (min_dist_sq(curve.points, qz) <= threshold &&
                  min_dist_sq(curve.points, qw) <= threshold)
                     ? 1.0
                     : 0.0;
        out[1] = (contains_site(curve.points, sz) && contains_site(curve.points, sw))
                     ? 1.0
                     : 0.0;
        out[2] = min_dist_sq(curve.points, qref) <= threshold ? 1.0 : 0.0;
        out[3] = contains_site(curve.points, ref) ? 1.0 : 0.0;
    };
    MomentSummary s = run_trials(kernel, 4, seed, first_trial, trials, workers);

    DecouplingFactorization out;
    out.raw = s;
    const double joint = s.mean[0], both = s.mean[1], shape = s.mean[2], point = s.mean[3];
    if (both > 0.0 && point > 0.0) {
        out.joint_ratio = joint / both;
        double g_joint[4] = {1.0 / both, -joint / (both * both), 0.0, 0.0};
        out.joint_ratio_se = std::sqrt(std::max(0.0, delta_method_variance(s, g_joint)));

        double a = shape / point;
        out.a_squared = a * a;
        double g_a2[4] = {0.0, 0.0, 2.0 * shape / (point * point),
                          -2.0 * shape * shape / (point * point * point)};
        out.a_squared_se = std::sqrt(std::max(0.0, delta_method_variance(s, g_a2)));

        out.difference = out.joint_ratio - out.a_squared;
        double g_diff[4] = {g_joint[0], g_joint[1], -g_a2[2], -g_a2[3]};
        out.difference_se = std::sqrt(std::max(0.0, delta_method_variance(s, g_diff)));
    }
    return out;
}

}  // namespace lerw
