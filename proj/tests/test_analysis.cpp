#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <map>

#include "lerw/analysis.hpp"
#include "lerw/fit.hpp"

using namespace lerw;

namespace {

std::vector<ScalePoint> synthetic_power_law(double amplitude, double exponent,
                                            std::initializer_list<double> scales,
                                            double relative_error = 0.0) {
    std::vector<ScalePoint> points;
    for (double x : scales) {
        double y = amplitude * std::pow(x, exponent);
        Estimate est{y, y * relative_error, 1000, 0, "synthetic"};
        points.push_back({x, est});
    }
    return points;
}

}  // namespace

TEST_CASE("noiseless power law is recovered exactly") {
    auto points = synthetic_power_law(3.0, -1.5, {2, 4, 8, 16});
    PowerLawFit fit = fit_power_law(points);
    CHECK(std::abs(fit.exponent - (-1.5)) < 1e-9);
    CHECK(std::abs(fit.amplitude - 3.0) < 1e-9);
    CHECK(fit.exponent_ci_hi - fit.exponent_ci_lo < 1e-9);
    // residuals are pure roundoff against the relative-error floor
    CHECK(fit.chi_squared < 1e-3);
}

TEST_CASE("power law fit rejects degenerate input") {
    auto single = synthetic_power_law(2.0, 1.0, {4});
    CHECK_THROWS_AS(fit_power_law(single), std::invalid_argument);
    auto two = synthetic_power_law(2.0, 1.0, {4, 8});
    CHECK_THROWS_AS(fit_power_law(two), std::invalid_argument);

    auto bad = synthetic_power_law(1.0, 1.0, {2, 4, 8});
    bad[1].estimate.mean = -0.5;
    CHECK_THROWS_AS(fit_power_law(bad), std::invalid_argument);
}

TEST_CASE("power law exponent is scale-equivariant") {
    auto points = synthetic_power_law(2.0, 0.75, {3, 9, 27, 81}, 0.05);
    PowerLawFit base = fit_power_law(points, 99);
    for (ScalePoint& p : points) p.scale *= 12.5;
    PowerLawFit scaled = fit_power_law(points, 99);
    CHECK(std::abs(base.exponent - scaled.exponent) < 1e-9);
    CHECK(std::abs(base.exponent_ci_lo - scaled.exponent_ci_lo) < 1e-9);
}

TEST_CASE("bootstrap interval covers a noisy synthetic exponent") {
    // deterministic noise pattern around y = 5 x^1.62
    auto points = synthetic_power_law(5.0, 1.62, {8, 16, 32, 64, 128}, 0.02);
    double bumps[5] = {1.01, 0.99, 1.02, 0.98, 1.01};
    for (int i = 0; i < 5; ++i) points[static_cast<std::size_t>(i)].estimate.mean *= bumps[i];
    PowerLawFit fit = fit_power_law(points, 7);
    CHECK(fit.ci_contains(1.62));
    CHECK(fit.exponent_se > 0.0);
    CHECK(fit.exponent_se < 0.05);
}

TEST_CASE("funceq ratios are exactly one on geometric input") {
    // z(t) = A B^t factorizes exactly, so every four-term ratio is 1
    const double A = 0.7, B = std::exp2(-1.376);
    std::map<double, Estimate> z;
    double n_list[2] = {4, 5};
    double r_grid[2] = {0, 0.5};
    for (double t : funceq_scales(n_list, r_grid)) {
        double value = A * std::pow(B, t);
        z.emplace(t, Estimate{value, 0.01 * value, 100000, 0, "synthetic"});
    }
    RatioTestReport report = funceq_from_estimates(n_list, r_grid, z);
    REQUIRE(report.entries.size() == 8);
    for (const FuncEqEntry& entry : report.entries) {
        CHECK(std::abs(entry.ratio - 1.0) < 1e-12);
        CHECK(entry.ci_lo <= 1.0);
        CHECK(entry.ci_hi >= 1.0);
    }
    CHECK(report.pass);
}

TEST_CASE("funceq flags ratios far from one") {
    std::map<double, Estimate> z;
    double n_list[1] = {4};
    double r_grid[2] = {0, 0.5};
    for (double t : funceq_scales(n_list, r_grid)) {
        double value = std::pow(2.0, -1.3 * t) * (t == 5.0 ? 2.0 : 1.0);  // spoiled
        z.emplace(t, Estimate{value, 0.001 * value, 100000, 0, "synthetic"});
    }
    RatioTestReport report = funceq_from_estimates(n_list, r_grid, z);
    CHECK(!report.pass);
}

TEST_CASE("funceq r=s=0 entry is exactly one even on real estimates") {
    double n_list[1] = {2};
    double r_grid[1] = {0};
    RatioTestReport report =
        funceq_check({0.5, 0, 0}, n_list, r_grid, 2000, 314, 2);
    REQUIRE(report.entries.size() == 1);
    CHECK(report.entries[0].ratio == 1.0);
}

TEST_CASE("asymptotic constant fit recovers a pure power law") {
    const double beta = 1.62, b1 = 2.4;
    auto points = synthetic_power_law(b1, beta - 3.0, {0.125, 0.25, 0.5}, 0.01);
    AsymptoticConstantFit fit = asymptotic_constant_fit(points, beta, 5);
    CHECK(std::abs(fit.raw.exponent - (beta - 3.0)) < 1e-6);
    CHECK(std::abs(fit.amplitude - b1) / b1 < 1e-6);
    CHECK(fit.compensated.ci_contains(0.0));
}

TEST_CASE("estimate beta demands enough scales") {
    double too_few[3] = {4, 8, 16};
    CHECK_THROWS_AS(estimate_beta(too_few, 100, 1, 1), std::invalid_argument);
}

TEST_CASE("minkowski-occupation report on a tiny configuration") {
    DyadicBox boxes[2] = {{3, {3, 0, 0}}, {3, {-4, 0, 0}}};
    double svals[2] = {3, 4};
    MinkowskiOccupationReport report =
        minkowski_occupation_test(boxes, 64.0, svals, 1.62, 400, 22, 2);
    REQUIRE(report.cells.size() == 4);
    for (const MinkowskiCellStat& cell : report.cells) {
        CHECK(cell.mean_content >= 0.0);
        CHECK(cell.mean_mass >= 0.0);
    }
    REQUIRE(report.cross_box_cv.size() == 2);
    REQUIRE(report.c0.size() == 2);
    for (double c0 : report.c0) CHECK(c0 >= 0.0);

    DyadicBox bad[1] = {{1, {0, 0, 0}}};
    CHECK_THROWS_AS(
        minkowski_occupation_test(bad, 64.0, svals, 1.62, 10, 1, 1),
        std::invalid_argument);
    double coarse[1] = {6};  // 2^-6 * 64 = 1 < 4
    CHECK_THROWS_AS(
        minkowski_occupation_test(boxes, 64.0, coarse, 1.62, 10, 1, 1),
        std::invalid_argument);
}
