#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

namespace lerw {

/// Point in physical (continuum) coordinates.
struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    constexpr Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    constexpr Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    constexpr Vec3 operator*(double c) const { return {x * c, y * c, z * c}; }
    constexpr bool operator==(const Vec3& o) const = default;

    double norm_sq() const { return x * x + y * y + z * z; }
    double norm() const { return std::sqrt(norm_sq()); }
};

/// Lattice site in integer lattice units.  Physical coordinates are
/// obtained by dividing by the mesh scale m, which callers carry
/// alongside; integer bookkeeping avoids floating-point drift on long
/// walks.
struct LatticePoint {
    std::int64_t x = 0;
    std::int64_t y = 0;
    std::int64_t z = 0;

    constexpr LatticePoint operator+(const LatticePoint& o) const {
        return {x + o.x, y + o.y, z + o.z};
    }
    constexpr LatticePoint operator-(const LatticePoint& o) const {
        return {x - o.x, y - o.y, z - o.z};
    }
    constexpr bool operator==(const LatticePoint& o) const = default;

    std::int64_t norm_sq() const { return x * x + y * y + z * z; }
    double norm() const { return std::sqrt(static_cast<double>(norm_sq())); }
    std::int64_t l1_norm() const {
        return std::abs(x) + std::abs(y) + std::abs(z);
    }

    Vec3 to_physical(double mesh) const {
        return {static_cast<double>(x) / mesh, static_cast<double>(y) / mesh,
                static_cast<double>(z) / mesh};
    }
};

/// The six nearest-neighbor steps, indexed 0..5 as +x,-x,+y,-y,+z,-z.
inline constexpr std::array<LatticePoint, 6> kNeighborSteps = {{
    {1, 0, 0},
    {-1, 0, 0},
    {0, 1, 0},
    {0, -1, 0},
    {0, 0, 1},
    {0, 0, -1},
}};

inline bool are_neighbors(const LatticePoint& a, const LatticePoint& b) {
    return (a - b).l1_norm() == 1;
}

/// Closest lattice site to the physical point x at mesh scale m,
/// i.e. round(m*x) componentwise with half-integer ties broken toward
/// -infinity so the map is deterministic.
LatticePoint nearest_lattice_point(const Vec3& x, double mesh);

/// Open lattice ball: sites p with |p - center| < radius strictly, all in
/// lattice units.  The discretized unit ball at mesh m is
/// BallDomain{.radius = m}.
struct BallDomain {
    double radius = 0.0;
    LatticePoint center{};

    bool contains(const LatticePoint& p) const {
        return static_cast<double>((p - center).norm_sq()) < radius * radius;
    }

    /// Largest coordinate offset from the center any member site can have.
    std::int64_t max_offset() const {
        auto c = static_cast<std::int64_t>(std::ceil(radius)) - 1;
        return c < 0 ? 0 : c;
    }
};

/// All sites of the domain, in a fixed deterministic (x,y,z-lexicographic)
/// order.
std::vector<LatticePoint> domain_points(const BallDomain& domain);

/// Sites of the domain with at least one of their six neighbors outside.
std::vector<LatticePoint> inner_boundary(const BallDomain& domain);

/// Half-open dyadic cube of side 2^-scale in physical units:
/// (k_i/2^n, (k_i+1)/2^n] per axis.  Boxes of equal scale tile space.
struct DyadicBox {
    int scale = 0;
    std::array<std::int64_t, 3> index{};

    double side() const { return std::ldexp(1.0, -scale); }
    double lower(int axis) const {
        return static_cast<double>(index[static_cast<std::size_t>(axis)]) * side();
    }
    double upper(int axis) const { return lower(axis) + side(); }

    Vec3 center() const {
        return {lower(0) + 0.5 * side(), lower(1) + 0.5 * side(),
                lower(2) + 0.5 * side()};
    }

    bool contains(const Vec3& p) const {
        return p.x > lower(0) && p.x <= upper(0) && p.y > lower(1) &&
               p.y <= upper(1) && p.z > lower(2) && p.z <= upper(2);
    }

    std::array<Vec3, 8> corners() const;

    constexpr bool operator==(const DyadicBox& o) const = default;

    /// The unique scale-n box containing p (boxes are half-open above).
    static DyadicBox containing(const Vec3& p, int scale);
};

/// Splits V into the 2^{3(target_scale - V.scale)} boxes of the finer scale
/// that tile it.  Throws std::invalid_argument when target_scale < V.scale.
std::vector<DyadicBox> dyadic_partition(const DyadicBox& box, int target_scale);

/// Euclidean distance from the origin to the closure of the box.
double box_distance_to_origin(const DyadicBox& box);

/// Euclidean distance from the unit-sphere boundary to the box
/// (negative if the box pokes outside the unit ball).
double box_distance_to_unit_sphere(const DyadicBox& box);

/// Membership in the family of well-separated boxes: the box lies in the
/// punctured open unit ball and keeps distance >= 2^-scale (its own side)
/// from both the origin and the boundary sphere.
bool is_interior_box(const DyadicBox& box);

/// Mesh scale plus the reference point the scaling factor is pinned to.
struct GeometryContext {
    double mesh = 1.0;
    Vec3 reference_point{0.5, 0.0, 0.0};

    LatticePoint reference_site() const {
        return nearest_lattice_point(reference_point, mesh);
    }

    /// d_x = min(|x|, 1-|x|): distance from x to {0} and to the boundary.
    static double boundary_gap(const Vec3& x) {
        double r = x.norm();
        return std::min(r, 1.0 - r);
    }

    /// One-point comparison weight C_x: d_x^(beta-3) in the inner half of
    /// the ball, d_x^(beta-1) in the outer half.
    static double one_point_weight(const Vec3& x, double beta) {
        double d = boundary_gap(x);
        return x.norm() <= 0.5 ? std::pow(d, beta - 3.0) : std::pow(d, beta - 1.0);
    }
};

}  // namespace lerw
