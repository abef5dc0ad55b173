#include "lerw/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace lerw {

namespace {

double directed_distance(std::span<const Vec3> from, std::span<const Vec3> to) {
    double worst = 0.0;
    for (const Vec3& a : from) {
        double best = std::numeric_limits<double>::infinity();
        for (const Vec3& b : to) best = std::min(best, (a - b).norm_sq());
        worst = std::max(worst, best);
    }
    return std::sqrt(worst);
}

}  // namespace

double hausdorff_distance(std::span<const Vec3> a, std::span<const Vec3> b) {
    if (a.empty() || b.empty())
        throw std::invalid_argument("hausdorff_distance: empty set");
    return std::max(directed_distance(a, b), directed_distance(b, a));
}

Vec3 ParametrizedCurve::at(double t) const {
    if (points.empty())
        throw std::invalid_argument("ParametrizedCurve: no samples");
    if (points.size() == 1 || duration <= 0.0) return points.front();
    double clamped = std::clamp(t, 0.0, duration);
    double u = clamped / duration * static_cast<double>(points.size() - 1);
    auto lo = static_cast<std::size_t>(u);
    if (lo >= points.size() - 1) return points.back();
    double frac = u - static_cast<double>(lo);
    const Vec3& p = points[lo];
    const Vec3& q = points[lo + 1];
    return p + (q - p) * frac;
}

double rho_distance(const ParametrizedCurve& c1, const ParametrizedCurve& c2,
                    int grid_points) {
    if (grid_points < 2)
        throw std::invalid_argument("rho_distance: grid needs at least 2 points");
    double sup = 0.0;
    for (int i = 0; i < grid_points; ++i) {
        double s = static_cast<double>(i) / static_cast<double>(grid_points - 1);
        sup = std::max(sup, (c1.at(s * c1.duration) - c2.at(s * c2.duration)).norm_sq());
    }
    return std::abs(c2.duration - c1.duration) + std::sqrt(sup);
}

}  // namespace lerw
