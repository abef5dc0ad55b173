#include "lerw/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

#include "lerw/engine.hpp"
#include "lerw/loop_erasure.hpp"

namespace lerw {

PowerLawFit estimate_beta(std::span<const double> meshes, std::uint64_t trials,
                          std::uint64_t seed, int workers) {
    if (meshes.size() < 4)
        throw std::invalid_argument("estimate_beta: need at least four scales");
    std::vector<ScalePoint> points;
    points.reserve(meshes.size());
    for (std::size_t i = 0; i < meshes.size(); ++i) {
        // disjoint trial ranges per scale
        Estimate est = estimate_length(meshes[i], trials, seed, workers,
                                       static_cast<std::uint64_t>(i) * trials);
        points.push_back(ScalePoint{meshes[i], est});
    }
    return fit_power_law(points, seed ^ 0x5eedf17ULL);
}

std::vector<double> funceq_scales(std::span<const double> n_list,
                                  std::span<const double> r_grid) {
    std::set<double> ts;
    for (double n : n_list)
        for (double r : r_grid)
            for (double s : r_grid) {
                ts.insert(n);
                ts.insert(n + r);
                ts.insert(n + s);
                ts.insert(n + r + s);
            }
    return {ts.begin(), ts.end()};
}

RatioTestReport funceq_from_estimates(std::span<const double> n_list,
                                      std::span<const double> r_grid,
                                      const std::map<double, Estimate>& z) {
    auto lookup = [&z](double t) -> const Estimate& {
        auto it = z.find(t);
        if (it == z.end()) {
            std::ostringstream msg;
            msg << "funceq: missing estimate for scale exponent " << t;
            throw std::invalid_argument(msg.str());
        }
        return it->second;
    };

    RatioTestReport report;
    report.pass = true;
    for (double n : n_list)
        for (double r : r_grid)
            for (double s : r_grid) {
                const Estimate& a = lookup(n + r + s);
                const Estimate& b = lookup(n);
                const Estimate& c = lookup(n + r);
                const Estimate& d = lookup(n + s);
                double ratio = (a.mean * b.mean) / (c.mean * d.mean);
                auto rel = [](const Estimate& e) {
                    return e.mean > 0.0 ? e.stderr_of_mean / e.mean : 0.0;
                };
                double se_log = std::sqrt(rel(a) * rel(a) + rel(b) * rel(b) +
                                          rel(c) * rel(c) + rel(d) * rel(d));
                FuncEqEntry entry;
                entry.n = n;
                entry.r = r;
                entry.s = s;
                entry.ratio = ratio;
                entry.ci_lo = ratio * std::exp(-1.96 * se_log);
                entry.ci_hi = ratio * std::exp(1.96 * se_log);
                if (!(entry.ci_lo <= 1.0 && 1.0 <= entry.ci_hi)) report.pass = false;
                report.entries.push_back(entry);
            }
    return report;
}

RatioTestReport funceq_check(const Vec3& x, std::span<const double> n_list,
                             std::span<const double> r_grid, std::uint64_t trials,
                             std::uint64_t seed, int workers) {
    std::map<double, Estimate> z;
    std::uint64_t stream = 0;
    for (double t : funceq_scales(n_list, r_grid)) {
        double mesh = std::exp2(t);
        z.emplace(t, estimate_one_point(x, mesh, trials, seed, workers,
                                        stream * trials));
        ++stream;
    }
    return funceq_from_estimates(n_list, r_grid, z);
}

MinkowskiOccupationReport minkowski_occupation_test(
    std::span<const DyadicBox> boxes, double mesh, std::span<const double> s_values,
    double beta, std::uint64_t trials, std::uint64_t seed, int workers,
    std::uint64_t first_trial) {
    if (boxes.empty() || s_values.empty())
        throw std::invalid_argument("minkowski_occupation_test: empty inputs");
    for (const DyadicBox& box : boxes)
        if (!is_interior_box(box))
            throw std::invalid_argument(
                "minkowski_occupation_test: box is not an interior box");
    for (double s : s_values)
        if (std::exp2(-s) * mesh < 4.0)
            throw std::invalid_argument(
                "minkowski_occupation_test: neighborhood radius below 4 mesh units");

    const std::size_t n_boxes = boxes.size();
    const std::size_t n_s = s_values.size();
    // components: J per (box,s), site count per box, J at the reference
    // cell per s, and the reference one-point indicator
    const std::size_t k = n_boxes * n_s + n_boxes + n_s + 1;

    const GeometryContext geometry{mesh};
    const LatticePoint ref = geometry.reference_site();
    const Vec3 ref_phys = ref.to_physical(mesh);
    const double cell_side = 1.0 / mesh;
    const Vec3 ref_cell_lower{ref_phys.x - 0.5 * cell_side,
                              ref_phys.y - 0.5 * cell_side,
                              ref_phys.z - 0.5 * cell_side};
    const BallDomain domain{mesh, {}};
    const double m2 = mesh * mesh;

    TrialKernel kernel = [&, beta](TrialRng& rng, std::span<double> out) {
        SelfAvoidingPath curve = lerw_sample(domain, rng);
        std::vector<Vec3> physical;
        physical.reserve(curve.points.size());
        for (const LatticePoint& p : curve.points)
            physical.push_back(p.to_physical(curve.mesh));

        std::size_t idx = 0;
        for (const DyadicBox& box : boxes) {
            const Vec3 lower{box.lower(0), box.lower(1), box.lower(2)};
            for (double s : s_values) {
                double radius = std::exp2(-s);
                double vol = sampled_neighborhood_volume(physical, lower, box.side(),
                                                         radius, radius / 8.0);
                out[idx++] = std::exp2((3.0 - beta) * s) * vol;
            }
        }
        for (const DyadicBox& box : boxes) {
            std::uint64_t count = 0;
            for (const LatticePoint& p : curve.points) {
                if (static_cast<double>(p.norm_sq()) >= m2) continue;
                if (box.contains(p.to_physical(curve.mesh))) ++count;
            }
            out[idx++] = static_cast<double>(count);
        }
        for (double s : s_values) {
            double radius = std::exp2(-s);
            double vol = sampled_neighborhood_volume(physical, ref_cell_lower,
                                                     cell_side, radius, cell_side / 4.0);
            out[idx++] = std::exp2((3.0 - beta) * s) * vol;
        }
        out[idx++] = std::find(curve.points.begin(), curve.points.end(), ref) !=
                             curve.points.end()
                         ? 1.0
                         : 0.0;
    };

    MomentSummary summary = run_trials(kernel, k, seed, first_trial, trials, workers);

    MinkowskiOccupationReport report;
    report.mesh = mesh;
    report.beta = beta;
    report.trials = summary.n;
    report.s_values.assign(s_values.begin(), s_values.end());

    const double mass_scale = std::pow(mesh, -beta);
    auto j_index = [n_s](std::size_t b, std::size_t si) { return b * n_s + si; };
    auto count_index = [n_boxes, n_s](std::size_t b) { return n_boxes * n_s + b; };
    auto ref_j_index = [n_boxes, n_s](std::size_t si) {
        return n_boxes * n_s + n_boxes + si;
    };
    const std::size_t ref_point_index = n_boxes * n_s + n_boxes + n_s;

    for (std::size_t b = 0; b < n_boxes; ++b) {
        for (std::size_t si = 0; si < n_s; ++si) {
            MinkowskiCellStat cell;
            cell.box = boxes[b];
            cell.s = s_values[si];
            std::size_t ji = j_index(b, si), ci = count_index(b);
            cell.mean_content = summary.mean[ji];
            cell.se_content = summary.se[ji];
            cell.mean_mass = summary.mean[ci] * mass_scale;
            cell.se_mass = summary.se[ci] * mass_scale;
            if (cell.mean_mass > 0.0) {
                cell.ratio = cell.mean_content / cell.mean_mass;
                std::vector<double> grad(k, 0.0);
                grad[ji] = 1.0 / cell.mean_mass;
                grad[ci] = -cell.mean_content / (cell.mean_mass * cell.mean_mass) *
                           mass_scale;
                cell.ratio_se =
                    std::sqrt(std::max(0.0, delta_method_variance(summary, grad)));
            }
            report.cells.push_back(cell);
        }
    }

    for (std::size_t si = 0; si < n_s; ++si) {
        double sum = 0.0, sum_sq = 0.0;
        for (std::size_t b = 0; b < n_boxes; ++b) {
            double ratio = report.cells[b * n_s + si].ratio;
            sum += ratio;
            sum_sq += ratio * ratio;
        }
        double nb = static_cast<double>(n_boxes);
        double mean = sum / nb;
        double var = sum_sq / nb - mean * mean;
        report.cross_box_cv.push_back(mean > 0.0 ? std::sqrt(std::max(0.0, var)) / mean
                                                 : 0.0);

        // c0(n,s) = E[J_s(ref cell)] / E[mass(ref cell)], the reference-cell
        // instance of the content/occupation ratio; the explicit mass of
        // the one-site cell is m^-beta times the one-point indicator
        std::size_t ji = ref_j_index(si);
        double denom = std::pow(mesh, -beta) * summary.mean[ref_point_index];
        report.c0.push_back(denom > 0.0 ? summary.mean[ji] / denom : 0.0);
        if (denom > 0.0) {
            std::vector<double> grad(k, 0.0);
            grad[ji] = 1.0 / denom;
            grad[ref_point_index] = -summary.mean[ji] / denom /
                                    summary.mean[ref_point_index];
            report.c0_se.push_back(
                std::sqrt(std::max(0.0, delta_method_variance(summary, grad))));
        } else {
            report.c0_se.push_back(0.0);
        }
    }
    return report;
}

AsymptoticConstantFit asymptotic_constant_fit(std::span<const ScalePoint> g_by_distance,
                                              double beta,
                                              std::uint64_t bootstrap_seed) {
    if (g_by_distance.size() < 3)
        throw std::invalid_argument("asymptotic_constant_fit: need at least three radii");

    AsymptoticConstantFit out;
    out.raw = fit_power_law(g_by_distance, bootstrap_seed);

    std::vector<ScalePoint> compensated(g_by_distance.begin(), g_by_distance.end());
    for (ScalePoint& p : compensated) {
        double comp = std::pow(p.scale, 3.0 - beta);
        p.estimate.mean *= comp;
        p.estimate.stderr_of_mean *= comp;
    }
    out.compensated = fit_power_law(compensated, bootstrap_seed ^ 0xb0075ULL);

    // weighted mean of the compensated values is the constant
    double sw = 0.0, swy = 0.0;
    for (const ScalePoint& p : compensated) {
        double se = std::max(p.estimate.stderr_of_mean, 1e-12 * p.estimate.mean);
        double w = 1.0 / (se * se);
        sw += w;
        swy += w * p.estimate.mean;
    }
    out.amplitude = sw > 0.0 ? swy / sw : 0.0;
    return out;
}

}  // namespace lerw
