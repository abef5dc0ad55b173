#include "lerw/occupation.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace lerw {

std::uint64_t OccupationMeasure::count(const DyadicBox& box) const {
    if (box.scale != box_scale) throw std::invalid_argument("OccupationMeasure: scale mismatch");
    auto it = counts.find(box.index);
    return it == counts.end() ? 0 : it->second;
}

double OccupationMeasure::mass(const DyadicBox& box) const {
    return static_cast<double>(count(box)) / scale_factor;
}

std::uint64_t OccupationMeasure::total_count() const {
    std::uint64_t total = 0;
    for (const auto& [key, c] : counts) total += c;
    return total;
}

OccupationMeasure occupation_measure(const SelfAvoidingPath& curve, int box_scale,
                                     OccupationNormalization mode,
                                     double scale_factor) {
    if (scale_factor <= 0.0)
        throw std::invalid_argument("occupation_measure: scale factor must be positive");
    OccupationMeasure measure;
    measure.mesh = curve.mesh;
    measure.box_scale = box_scale;
    measure.mode = mode;
    measure.scale_factor = scale_factor;

    const double m2 = curve.mesh * curve.mesh;
    for (const LatticePoint& p : curve.points) {
        if (static_cast<double>(p.norm_sq()) >= m2) continue;  // outside the open ball
        DyadicBox box = DyadicBox::containing(p.to_physical(curve.mesh), box_scale);
        ++measure.counts[box.index];
    }
    return measure;
}

double sampled_neighborhood_volume(std::span<const Vec3> points, const Vec3& lower,
                                   double side, double radius, double pitch) {
    if (side <= 0.0 || pitch <= 0.0 || radius <= 0.0)
        throw std::invalid_argument("sampled_neighborhood_volume: bad geometry");
    auto cells = static_cast<std::int64_t>(std::llround(side / pitch));
    if (cells < 1) cells = 1;
    const double h = side / static_cast<double>(cells);  // effective pitch
    if (cells > 1024)
        throw std::invalid_argument("sampled_neighborhood_volume: grid too fine");

    std::vector<char> marked(static_cast<std::size_t>(cells * cells * cells), 0);
    const double r2 = radius * radius;

    auto clamp_cell = [cells](std::int64_t v) {
        return std::min(std::max(v, std::int64_t{0}), cells - 1);
    };

    // mark every grid center within `radius` of some point: rasterize the
    // ball around each point rather than scanning the whole grid
    for (const Vec3& q : points) {
        if (q.x < lower.x - radius || q.x > lower.x + side + radius ||
            q.y < lower.y - radius || q.y > lower.y + side + radius ||
            q.z < lower.z - radius || q.z > lower.z + side + radius)
            continue;
        std::int64_t ix0 = clamp_cell(static_cast<std::int64_t>(
            std::floor((q.x - radius - lower.x) / h - 0.5)));
        std::int64_t ix1 = clamp_cell(static_cast<std::int64_t>(
            std::ceil((q.x + radius - lower.x) / h - 0.5)));
        std::int64_t iy0 = clamp_cell(static_cast<std::int64_t>(
            std::floor((q.y - radius - lower.y) / h - 0.5)));
        std::int64_t iy1 = clamp_cell(static_cast<std::int64_t>(
            std::ceil((q.y + radius - lower.y) / h - 0.5)));
        std::int64_t iz0 = clamp_cell(static_cast<std::int64_t>(
            std::floor((q.z - radius - lower.z) / h - 0.5)));
        std::int64_t iz1 = clamp_cell(static_cast<std::int64_t>(
            std::ceil((q.z + radius - lower.z) / h - 0.5)));

        for (std::int64_t i = ix0; i <= ix1; ++i) {
            double dx = lower.x + (static_cast<double>(i) + 0.5) * h - q.x;
            for (std::int64_t j = iy0; j <= iy1; ++j) {
                double dy = lower.y + (static_cast<double>(j) + 0.5) * h - q.y;
                double dxy = dx * dx + dy * dy;
                if (dxy > r2) continue;
                std::size_t base = static_cast<std::size_t>((i * cells + j) * cells);
                for (std::int64_t k = iz0; k <= iz1; ++k) {
                    double dz = lower.z + (static_cast<double>(k) + 0.5) * h - q.z;
                    if (dxy + dz * dz <= r2)
                        marked[base + static_cast<std::size_t>(k)] = 1;
                }
            }
        }
    }

    std::uint64_t hit = 0;
    for (char c : marked) hit += static_cast<unsigned char>(c);
    return static_cast<double>(hit) * h * h * h;
}

MinkowskiSample minkowski_content(const SelfAvoidingPath& curve, const DyadicBox& box,
                                  double s, double beta, int pitch_divisor) {
    const double radius = std::exp2(-s);
    if (radius * curve.mesh < 4.0)
        throw std::invalid_argument(
            "minkowski_content: neighborhood radius below 4 mesh units");
    if (!is_interior_box(box))
        throw std::invalid_argument("minkowski_content: box is not an interior box");
    if (pitch_divisor < 1)
        throw std::invalid_argument("minkowski_content: bad pitch divisor");

    std::vector<Vec3> physical;
    physical.reserve(curve.points.size());
    for (const LatticePoint& p : curve.points)
        physical.push_back(p.to_physical(curve.mesh));

    const Vec3 lower{box.lower(0), box.lower(1), box.lower(2)};
    double volume = sampled_neighborhood_volume(physical, lower, box.side(), radius,
                                                radius / pitch_divisor);

    MinkowskiSample sample;
    sample.resolution_exponent = s;
    sample.box = box;
    sample.beta = beta;
    sample.value = std::exp2((3.0 - beta) * s) * volume;
    return sample;
}

}  // namespace lerw
