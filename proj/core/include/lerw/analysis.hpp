#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "lerw/estimate.hpp"
#include "lerw/estimators.hpp"
#include "lerw/fit.hpp"
#include "lerw/geometry.hpp"
#include "lerw/occupation.hpp"

namespace lerw {

/// Growth-exponent fit: mean loop-erased length against the mesh scale.
/// Needs at least four scales.
PowerLawFit estimate_beta(std::span<const double> meshes, std::uint64_t trials,
                          std::uint64_t seed, int workers = 1);

struct FuncEqEntry {
    double n = 0.0;
    double r = 0.0;
    double s = 0.0;
    double ratio = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
};

/// Four-estimate ratio test; passes when every 95% interval covers 1.
struct RatioTestReport {
    std::vector<FuncEqEntry> entries;
    bool pass = false;
};

/// Ratios z(n+r+s) z(n) / (z(n+r) z(n+s)) built from the supplied
/// one-point estimates keyed by the exponent t (scale 2^t), with
/// delta-method intervals treating the four terms as independent.
RatioTestReport funceq_from_estimates(std::span<const double> n_list,
                                      std::span<const double> r_grid,
                                      const std::map<double, Estimate>& z);

/// Runs the one-point estimator at every needed scale 2^t (independent
/// seed substream per scale) and forms the ratio report.
RatioTestReport funceq_check(const Vec3& x, std::span<const double> n_list,
                             std::span<const double> r_grid, std::uint64_t trials,
                             std::uint64_t seed, int workers = 1);

/// All scale exponents t = n + r + s needed by funceq_check.
std::vector<double> funceq_scales(std::span<const double> n_list,
                                  std::span<const double> r_grid);

struct MinkowskiCellStat {
    DyadicBox box;
    double s = 0.0;
    double mean_content = 0.0;  // E[J]
    double se_content = 0.0;
    double mean_mass = 0.0;  // E[mu-bar]
    double se_mass = 0.0;
    double ratio = 0.0;  // E[J]/E[mu-bar]
    double ratio_se = 0.0;
};

struct MinkowskiOccupationReport {
    double mesh = 0.0;
    double beta = 0.0;
    std::uint64_t trials = 0;
    std::vector<double> s_values;
    std::vector<MinkowskiCellStat> cells;  // boxes x s, box-major
    std::vector<double> cross_box_cv;      // per s: CV of ratio across boxes
    std::vector<double> c0;                // per s: E[J_s(ref box)] / (m^beta P(ref))
    std::vector<double> c0_se;
};

/// Per trial samples one curve and measures, for every (box, s), the
/// renormalized neighborhood volume J and the explicitly scaled
/// occupation mass, plus the c0 statistic at the reference site.
MinkowskiOccupationReport minkowski_occupation_test(
    std::span<const DyadicBox> boxes, double mesh, std::span<const double> s_values,
    double beta, std::uint64_t trials, std::uint64_t seed, int workers = 1,
    std::uint64_t first_trial = 0);

struct AsymptoticConstantFit {
    PowerLawFit raw;          // g against the distance coordinate
    PowerLawFit compensated;  // g * scale^(3-beta): flat when the law holds
    double amplitude = 0.0;   // fitted constant (b1 for the origin ray)
};

/// `g_by_distance` pairs a distance coordinate (|x|, or 1-|x| for the
/// boundary mode) with an estimate of g there.
AsymptoticConstantFit asymptotic_constant_fit(std::span<const ScalePoint> g_by_distance,
                                              double beta,
                                              std::uint64_t bootstrap_seed = 1);

}  // namespace lerw
