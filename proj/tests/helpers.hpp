#pragma once

// Test-only oracles, deliberately naive and independent of the library's
// solver / loop-erasure code paths.

#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "lerw/geometry.hpp"
#include "lerw/harmonic.hpp"
#include "lerw/loop_erasure.hpp"
#include "lerw/rng.hpp"
#include "lerw/walk.hpp"

namespace lerw::testing {

/// Dense Gaussian elimination for the interior system
///   u_i - (1/6) sum_{j~i, j free} u_j = rhs_i  (free i),  u_i = fixed_i else.
/// Returns one value per site of the index.
inline std::vector<double> dense_dirichlet_solve(
    const DomainIndex& index, const std::map<std::size_t, double>& fixed,
    const std::vector<double>& rhs) {
    const std::size_t n = index.size();
    std::vector<std::size_t> free_sites;
    for (std::size_t i = 0; i < n; ++i)
        if (!fixed.count(i)) free_sites.push_back(i);
    const std::size_t f = free_sites.size();
    std::vector<std::size_t> position(n, SIZE_MAX);
    for (std::size_t k = 0; k < f; ++k) position[free_sites[k]] = k;

    std::vector<double> a(f * (f + 1), 0.0);  // augmented [A | b]
    auto at = [&](std::size_t row, std::size_t col) -> double& {
        return a[row * (f + 1) + col];
    };
    for (std::size_t k = 0; k < f; ++k) {
        std::size_t i = free_sites[k];
        at(k, k) = 1.0;
        at(k, f) = rhs[i];
        for (int d = 0; d < 6; ++d) {
            std::int32_t j = index.neighbors(i)[static_cast<std::size_t>(d)];
            if (j < 0) continue;
            auto jj = static_cast<std::size_t>(j);
            auto it = fixed.find(jj);
            if (it != fixed.end())
                at(k, f) += it->second / 6.0;
            else
                at(k, position[jj]) -= 1.0 / 6.0;
        }
    }

    // partial-pivot elimination
    for (std::size_t col = 0; col < f; ++col) {
        std::size_t pivot = col;
        for (std::size_t row = col + 1; row < f; ++row)
            if (std::abs(at(row, col)) > std::abs(at(pivot, col))) pivot = row;
        if (pivot != col)
            for (std::size_t c = 0; c <= f; ++c) std::swap(at(col, c), at(pivot, c));
        double diag = at(col, col);
        if (diag == 0.0) throw std::runtime_error("dense solve: singular system");
        for (std::size_t row = 0; row < f; ++row) {
            if (row == col) continue;
            double factor = at(row, col) / diag;
            if (factor == 0.0) continue;
            for (std::size_t c = col; c <= f; ++c) at(row, c) -= factor * at(col, c);
        }
    }

    std::vector<double> values(n, 0.0);
    for (const auto& [i, v] : fixed) values[i] = v;
    for (std::size_t k = 0; k < f; ++k)
        values[free_sites[k]] = at(k, f) / at(k, k);
    return values;
}

/// O(n^2)-style scan-and-cut loop erasure: walk forward, and when the new
/// site already sits on the current path at position i, cut back to i.
inline SelfAvoidingPath scan_cut_loop_erase(const LatticePath& walk) {
    SelfAvoidingPath out;
    out.mesh = walk.mesh;
    for (const LatticePoint& p : walk.points) {
        std::size_t found = out.points.size();
        for (std::size_t i = 0; i < out.points.size(); ++i) {
            if (out.points[i] == p) {
                found = i;
                break;
            }
        }
        if (found < out.points.size())
            out.points.resize(found + 1);
        else
            out.points.push_back(p);
    }
    return out;
}

/// Forward stack method with a position map (second oracle).
inline SelfAvoidingPath stack_loop_erase(const LatticePath& walk) {
    SelfAvoidingPath out;
    out.mesh = walk.mesh;
    std::map<std::array<std::int64_t, 3>, std::size_t> position;
    for (const LatticePoint& p : walk.points) {
        std::array<std::int64_t, 3> key{p.x, p.y, p.z};
        auto it = position.find(key);
        if (it != position.end()) {
            while (out.points.size() > it->second + 1) {
                const LatticePoint& q = out.points.back();
                position.erase({q.x, q.y, q.z});
                out.points.pop_back();
            }
        } else {
            position[key] = out.points.size();
            out.points.push_back(p);
        }
    }
    return out;
}

/// Free random walk of the given number of steps for oracle comparisons.
inline LatticePath random_walk(std::size_t steps, TrialRng& rng) {
    LatticePath path;
    path.mesh = 1.0;
    path.points.reserve(steps + 1);
    path.points.push_back({0, 0, 0});
    for (std::size_t i = 0; i < steps; ++i) {
        int d = rng.uniform_direction();
        path.points.push_back(path.points.back() +
                              kNeighborSteps[static_cast<std::size_t>(d)]);
    }
    return path;
}

inline bool is_self_avoiding(const SelfAvoidingPath& path) {
    std::map<std::array<std::int64_t, 3>, int> seen;
    for (std::size_t i = 0; i < path.points.size(); ++i) {
        const LatticePoint& p = path.points[i];
        if (++seen[{p.x, p.y, p.z}] > 1) return false;
        if (i > 0 && !are_neighbors(path.points[i - 1], p)) return false;
    }
    return true;
}

/// |observed - expected| measured in binomial standard deviations.
inline double binomial_sigma_distance(double observed_fraction, double expected,
                                      std::uint64_t n) {
    double sd = std::sqrt(expected * (1.0 - expected) / static_cast<double>(n));
    if (sd == 0.0) return observed_fraction == expected ? 0.0 : 1e9;
    return std::abs(observed_fraction - expected) / sd;
}

}  // namespace lerw::testing
