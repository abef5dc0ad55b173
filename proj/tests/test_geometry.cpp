#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "lerw/geometry.hpp"
#include "lerw/metrics.hpp"
#include "lerw/rng.hpp"

using namespace lerw;

TEST_CASE("nearest lattice point rounds componentwise") {
    CHECK(nearest_lattice_point({0.5, 0, 0}, 16.0) == LatticePoint{8, 0, 0});
    CHECK(nearest_lattice_point({0, 0, 0}, 7.0) == LatticePoint{0, 0, 0});
    CHECK(nearest_lattice_point({0.49, 0, 0}, 2.0) == LatticePoint{1, 0, 0});
}

TEST_CASE("nearest lattice point breaks ties toward -infinity") {
    CHECK(nearest_lattice_point({0.25, 0, 0}, 2.0) == LatticePoint{0, 0, 0});
    CHECK(nearest_lattice_point({-0.25, 0, 0}, 2.0) == LatticePoint{-1, 0, 0});
    CHECK(nearest_lattice_point({0.75, 0.25, -0.25}, 2.0) == LatticePoint{1, 0, -1});
}

TEST_CASE("nearest lattice point stays within half a mesh cell") {
    TrialRng rng(11, 0);
    for (int trial = 0; trial < 2000; ++trial) {
        double m = 1.0 + 127.0 * rng.uniform01();
        Vec3 x{2.0 * rng.uniform01() - 1.0, 2.0 * rng.uniform01() - 1.0,
               2.0 * rng.uniform01() - 1.0};
        LatticePoint p = nearest_lattice_point(x, m);
        Vec3 back = p.to_physical(m);
        CHECK(std::abs(back.x - x.x) <= 0.5 / m + 1e-12);
        CHECK(std::abs(back.y - x.y) <= 0.5 / m + 1e-12);
        CHECK(std::abs(back.z - x.z) <= 0.5 / m + 1e-12);
    }
}

TEST_CASE("inner boundary of the radius-1.5 ball") {
    BallDomain domain{1.5, {}};
    auto boundary = inner_boundary(domain);
    CHECK(boundary.size() == 18);

    // brute-force oracle over [-2,2]^3
    std::set<std::array<std::int64_t, 3>> expected;
    for (std::int64_t x = -2; x <= 2; ++x)
        for (std::int64_t y = -2; y <= 2; ++y)
            for (std::int64_t z = -2; z <= 2; ++z) {
                LatticePoint p{x, y, z};
                if (!domain.contains(p)) continue;
                bool edge = false;
                for (const auto& step : kNeighborSteps)
                    if (!domain.contains(p + step)) edge = true;
                if (edge) expected.insert({x, y, z});
            }
    CHECK(expected.size() == 18);
    for (const auto& p : boundary) {
        CHECK(expected.count({p.x, p.y, p.z}) == 1);
        std::int64_t n2 = p.norm_sq();
        CHECK((n2 == 1 || n2 == 2));  // norms 1 and sqrt(2), origin excluded
        CHECK(domain.contains(p));
    }
}

TEST_CASE("inner boundary of a single-site domain is the site itself") {
    BallDomain domain{0.5, {}};
    auto boundary = inner_boundary(domain);
    REQUIRE(boundary.size() == 1);
    CHECK(boundary[0] == LatticePoint{0, 0, 0});
    CHECK(domain_points(domain).size() == 1);
}

TEST_CASE("hausdorff distance basics") {
    std::vector<Vec3> a{{0, 0, 0}};
    std::vector<Vec3> b{{1, 0, 0}};
    std::vector<Vec3> c{{0, 0, 0}, {2, 0, 0}};
    CHECK(hausdorff_distance(a, a) == 0.0);
    CHECK(hausdorff_distance(a, b) == doctest::Approx(1.0));
    CHECK(hausdorff_distance(c, a) == doctest::Approx(2.0));
    std::vector<Vec3> empty;
    CHECK_THROWS_AS(hausdorff_distance(empty, a), std::invalid_argument);
}

TEST_CASE("hausdorff distance is a metric on random finite sets") {
    TrialRng rng(17, 0);
    auto random_set = [&rng](std::size_t n) {
        std::vector<Vec3> out;
        for (std::size_t i = 0; i < n; ++i)
            out.push_back({rng.uniform01(), rng.uniform01(), rng.uniform01()});
        return out;
    };
    for (int trial = 0; trial < 200; ++trial) {
        auto a = random_set(1 + rng.uniform_below(6));
        auto b = random_set(1 + rng.uniform_below(6));
        auto c = random_set(1 + rng.uniform_below(6));
        double ab = hausdorff_distance(a, b);
        double ba = hausdorff_distance(b, a);
        double ac = hausdorff_distance(a, c);
        double cb = hausdorff_distance(c, b);
        CHECK(ab == doctest::Approx(ba));
        CHECK(ab <= ac + cb + 1e-12);
        CHECK(hausdorff_distance(a, a) == 0.0);
    }
}

TEST_CASE("rho distance on parametrized curves") {
    ParametrizedCurve line{{{0, 0, 0}, {1, 0, 0}}, 1.0};
    CHECK(rho_distance(line, line) == 0.0);

    ParametrizedCurve slow{{{0, 0, 0}, {1, 0, 0}}, 2.5};
    // same trace at proportional times, so only the duration term remains
    CHECK(rho_distance(line, slow) == doctest::Approx(1.5));

    ParametrizedCurve at_origin{{{0, 0, 0}}, 1.0};
    ParametrizedCurve at_e1{{{1, 0, 0}}, 1.0};
    CHECK(rho_distance(at_origin, at_e1) == doctest::Approx(1.0));
}

TEST_CASE("rho distance is symmetric and nonnegative on sampled curves") {
    TrialRng rng(23, 0);
    for (int trial = 0; trial < 50; ++trial) {
        ParametrizedCurve c1, c2;
        c1.duration = rng.uniform01() * 3.0;
        c2.duration = rng.uniform01() * 3.0;
        for (int i = 0; i < 5; ++i) {
            c1.points.push_back({rng.uniform01(), rng.uniform01(), rng.uniform01()});
            c2.points.push_back({rng.uniform01(), rng.uniform01(), rng.uniform01()});
        }
        double d12 = rho_distance(c1, c2);
        double d21 = rho_distance(c2, c1);
        CHECK(d12 == doctest::Approx(d21));
        CHECK(d12 >= 0.0);
        CHECK(rho_distance(c1, c1) == 0.0);
    }
}

TEST_CASE("dyadic partition tiles the box") {
    DyadicBox box{2, {1, 2, -1}};
    auto identity = dyadic_partition(box, 2);
    REQUIRE(identity.size() == 1);
    CHECK(identity[0] == box);

    auto children = dyadic_partition(box, 3);
    CHECK(children.size() == 8);

    auto grandchildren = dyadic_partition(box, 5);
    CHECK(grandchildren.size() == 512);

    CHECK_THROWS_AS(dyadic_partition(box, 1), std::invalid_argument);

    // membership test on random points: exactly one child contains each
    TrialRng rng(31, 0);
    for (int trial = 0; trial < 10000; ++trial) {
        Vec3 p{box.lower(0) + rng.uniform01() * box.side(),
               box.lower(1) + rng.uniform01() * box.side(),
               box.lower(2) + rng.uniform01() * box.side()};
        if (!box.contains(p)) continue;  // rare boundary draw
        int owners = 0;
        for (const auto& child : grandchildren)
            if (child.contains(p)) ++owners;
        CHECK(owners == 1);
    }
}

TEST_CASE("dyadic box lookup respects half-open faces") {
    DyadicBox box = DyadicBox::containing({0.25, 0.25, 0.25}, 2);
    CHECK(box.contains({0.25, 0.25, 0.25}));
    // upper faces belong to the box, lower faces to the neighbor below
    CHECK(DyadicBox::containing({0.25, 0.25, 0.25}, 2).index ==
          std::array<std::int64_t, 3>{0, 0, 0});
    CHECK(DyadicBox::containing({0.2500001, 0.1, 0.1}, 2).index ==
          std::array<std::int64_t, 3>{1, 0, 0});
}

TEST_CASE("interior boxes keep their side length away from origin and boundary") {
    int accepted = 0;
    for (int scale = 1; scale <= 4; ++scale) {
        std::int64_t range = std::int64_t{1} << scale;
        for (std::int64_t i = -range; i < range; ++i)
            for (std::int64_t j = -range; j < range; ++j)
                for (std::int64_t k = -range; k < range; ++k) {
                    DyadicBox box{scale, {i, j, k}};
                    if (!is_interior_box(box)) continue;
                    ++accepted;
                    double sep = box.side();
                    for (const Vec3& corner : box.corners()) {
                        CHECK(corner.norm() >= sep - 1e-12);
                        CHECK(1.0 - corner.norm() >= sep - 1e-12);
                    }
                }
    }
    CHECK(accepted > 0);
}

TEST_CASE("geometry context weights") {
    GeometryContext geometry{64.0};
    CHECK(geometry.reference_site() == LatticePoint{32, 0, 0});
    CHECK(GeometryContext::boundary_gap({0.25, 0, 0}) == doctest::Approx(0.25));
    CHECK(GeometryContext::boundary_gap({0.75, 0, 0}) == doctest::Approx(0.25));
    double beta = 1.6;
    CHECK(GeometryContext::one_point_weight({0.25, 0, 0}, beta) ==
          doctest::Approx(std::pow(0.25, beta - 3.0)));
    CHECK(GeometryContext::one_point_weight({0.75, 0, 0}, beta) ==
          doctest::Approx(std::pow(0.25, beta - 1.0)));
}
