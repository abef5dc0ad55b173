#include "lerw/geometry.hpp"

#include <algorithm>
#include <stdexcept>

namespace lerw {

namespace {

std::int64_t round_half_down(double v) {
    // round-to-nearest with .5 going toward -infinity
    return static_cast<std::int64_t>(std::ceil(v - 0.5));
}

}  // namespace

LatticePoint nearest_lattice_point(const Vec3& x, double mesh) {
    if (mesh <= 0.0) throw std::invalid_argument("nearest_lattice_point: mesh must be positive");
    return {round_half_down(mesh * x.x), round_half_down(mesh * x.y),
            round_half_down(mesh * x.z)};
}

std::vector<LatticePoint> domain_points(const BallDomain& domain) {
    std::vector<LatticePoint> points;
    const std::int64_t c = domain.max_offset();
    for (std::int64_t dx = -c; dx <= c; ++dx)
        for (std::int64_t dy = -c; dy <= c; ++dy)
            for (std::int64_t dz = -c; dz <= c; ++dz) {
                LatticePoint p = domain.center + LatticePoint{dx, dy, dz};
                if (domain.contains(p)) points.push_back(p);
            }
    return points;
}

std::vector<LatticePoint> inner_boundary(const BallDomain& domain) {
    std::vector<LatticePoint> boundary;
    for (const LatticePoint& p : domain_points(domain)) {
        for (const LatticePoint& step : kNeighborSteps) {
            if (!domain.contains(p + step)) {
                boundary.push_back(p);
                break;
            }
        }
    }
    return boundary;
}

std::array<Vec3, 8> DyadicBox::corners() const {
    std::array<Vec3, 8> out;
    for (int i = 0; i < 8; ++i) {
        out[static_cast<std::size_t>(i)] = {
            (i & 1) ? upper(0) : lower(0),
            (i & 2) ? upper(1) : lower(1),
            (i & 4) ? upper(2) : lower(2),
        };
    }
    return out;
}

DyadicBox DyadicBox::containing(const Vec3& p, int scale) {
    const double f = std::ldexp(1.0, scale);
    // x in (k/2^n, (k+1)/2^n]  <=>  k = ceil(x*2^n) - 1
    auto idx = [f](double v) {
        return static_cast<std::int64_t>(std::ceil(v * f)) - 1;
    };
    return DyadicBox{scale, {idx(p.x), idx(p.y), idx(p.z)}};
}

std::vector<DyadicBox> dyadic_partition(const DyadicBox& box, int target_scale) {
    if (target_scale < box.scale)
        throw std::invalid_argument("dyadic_partition: target scale coarser than box");
    const int levels = target_scale - box.scale;
    const std::int64_t per_axis = std::int64_t{1} << levels;
    std::vector<DyadicBox> out;
    out.reserve(static_cast<std::size_t>(per_axis * per_axis * per_axis));
    for (std::int64_t i = 0; i < per_axis; ++i)
        for (std::int64_t j = 0; j < per_axis; ++j)
            for (std::int64_t k = 0; k < per_axis; ++k) {
                out.push_back(DyadicBox{
                    target_scale,
                    {box.index[0] * per_axis + i, box.index[1] * per_axis + j,
                     box.index[2] * per_axis + k}});
            }
    return out;
}

double box_distance_to_origin(const DyadicBox& box) {
    double d2 = 0.0;
    for (int a = 0; a < 3; ++a) {
        double lo = box.lower(a), hi = box.upper(a);
        double nearest = std::clamp(0.0, lo, hi);
        d2 += nearest * nearest;
    }
    return std::sqrt(d2);
}

double box_distance_to_unit_sphere(const DyadicBox& box) {
    // farthest point of an axis-aligned box from the origin is a corner
    double max_norm = 0.0;
    for (const Vec3& c : box.corners()) max_norm = std::max(max_norm, c.norm());
    return 1.0 - max_norm;
}

bool is_interior_box(const DyadicBox& box) {
    const double sep = box.side();
    return box_distance_to_origin(box) >= sep &&
           box_distance_to_unit_sphere(box) >= sep;
}

}  // namespace lerw
