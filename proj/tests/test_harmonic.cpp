#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <map>
#include <sstream>

#include "helpers.hpp"
#include "lerw/harmonic.hpp"
#include "lerw/loop_erasure.hpp"
#include "lerw/walk.hpp"

using namespace lerw;
using namespace lerw::testing;

namespace {

double max_harmonicity_residual(const ScalarField& field,
                                const std::map<std::size_t, double>& fixed,
                                double rhs = 0.0) {
    const DomainIndex& index = field.index();
    double worst = 0.0;
    for (std::size_t i = 0; i < index.size(); ++i) {
        if (fixed.count(i)) continue;
        double mean = 0.0;
        for (int d = 0; d < 6; ++d) {
            std::int32_t j = index.neighbors(i)[static_cast<std::size_t>(d)];
            if (j >= 0) mean += field.at_index(static_cast<std::size_t>(j));
        }
        mean /= 6.0;
        worst = std::max(worst, std::abs(field.at_index(i) - mean - rhs));
    }
    return worst;
}

}  // namespace

TEST_CASE("hitting field boundary conditions and harmonicity") {
    BallDomain domain{4.5, {}};
    ScalarField h = hitting_field(domain, {0, 0, 0});
    CHECK(h.at({0, 0, 0}) == 1.0);
    CHECK(h.at({5, 0, 0}) == 0.0);
    CHECK(h.at({4, 3, 0}) == 0.0);  // outside

    auto target = static_cast<std::size_t>(h.index().index_of({0, 0, 0}));
    CHECK(max_harmonicity_residual(h, {{target, 1.0}}) <= 1e-10);
    for (std::size_t i = 0; i < h.index().size(); ++i) {
        CHECK(h.at_index(i) >= 0.0);
        CHECK(h.at_index(i) <= 1.0);
    }
    CHECK_THROWS_AS(hitting_field(domain, {5, 0, 0}), std::invalid_argument);
}

TEST_CASE("hitting field agrees with the dense direct solve") {
    for (double radius : {2.0, 3.0, 4.0}) {
        BallDomain domain{radius, {}};
        auto index = std::make_shared<DomainIndex>(domain);
        ScalarField h = hitting_field(index, {0, 0, 0});

        auto target = static_cast<std::size_t>(index->index_of({0, 0, 0}));
        std::vector<double> rhs(index->size(), 0.0);
        std::vector<double> dense =
            dense_dirichlet_solve(*index, {{target, 1.0}}, rhs);
        for (std::size_t i = 0; i < index->size(); ++i)
            CHECK(std::abs(h.at_index(i) - dense[i]) <= 1e-8);
    }
}

TEST_CASE("green function positivity, symmetry, and row sum identity") {
    BallDomain domain{3.5, {}};
    auto index = std::make_shared<DomainIndex>(domain);
    ScalarField g0 = green_function(index, {0, 0, 0});
    ScalarField g1 = green_function(index, {1, 1, 0});

    for (std::size_t i = 0; i < index->size(); ++i) CHECK(g0.at_index(i) >= 0.0);
    CHECK(g0.at({1, 1, 0}) == doctest::Approx(g1.at({0, 0, 0})).epsilon(1e-9));

    // visits summed over all sites equal the expected exit time
    double row_sum = 0.0;
    for (std::size_t i = 0; i < index->size(); ++i) row_sum += g0.at_index(i);
    double exit_time = expected_exit_time(domain, {0, 0, 0});
    CHECK(std::abs(row_sum - exit_time) <= 1e-8);
}

TEST_CASE("green function matches the Monte Carlo visit count") {
    BallDomain domain{3.0, {}};
    ScalarField g = green_function(domain, {0, 0, 0});
    double exact = g.at({0, 0, 0});

    const std::uint64_t trials = 1000000;
    std::uint64_t visits = 0;
    for (std::uint64_t t = 0; t < trials; ++t) {
        LatticePath path = srw_until_exit(domain, {0, 0, 0}, SeedSpec{31415, t});
        for (const LatticePoint& p : path.points)
            if (p == LatticePoint{0, 0, 0}) ++visits;
    }
    double mean = static_cast<double>(visits) / static_cast<double>(trials);
    // visit counts have variance below E[N^2] <= 2 G(0,0)^2 for a
    // geometric-tailed count; use a generous 3.5 sigma with that bound
    double se = std::sqrt(2.0 * exact * exact / static_cast<double>(trials));
    CHECK(std::abs(mean - exact) < 3.5 * se);
}

TEST_CASE("expected exit times are exact on small domains and grow with radius") {
    CHECK(expected_exit_time(BallDomain{0.5, {}}, {0, 0, 0}) ==
          doctest::Approx(1.0).epsilon(1e-10));

    BallDomain domain{2.0, {}};
    auto index = std::make_shared<DomainIndex>(domain);
    std::vector<double> rhs(index->size(), 1.0);
    std::vector<double> dense = dense_dirichlet_solve(*index, {}, rhs);
    double exact = dense[static_cast<std::size_t>(index->index_of({0, 0, 0}))];
    CHECK(expected_exit_time(domain, {0, 0, 0}) ==
          doctest::Approx(exact).epsilon(1e-8));

    double t2 = expected_exit_time(BallDomain{2.0, {}}, {0, 0, 0});
    double t4 = expected_exit_time(BallDomain{4.0, {}}, {0, 0, 0});
    double t8 = expected_exit_time(BallDomain{8.0, {}}, {0, 0, 0});
    CHECK(t2 < t4);
    CHECK(t4 < t8);
}

TEST_CASE("exit time field agrees with the dense solve everywhere") {
    for (double radius : {2.5, 4.0}) {
        BallDomain domain{radius, {}};
        auto index = std::make_shared<DomainIndex>(domain);
        ScalarField field = exit_time_field(index);
        std::vector<double> rhs(index->size(), 1.0);
        std::vector<double> dense = dense_dirichlet_solve(*index, {}, rhs);
        for (std::size_t i = 0; i < index->size(); ++i)
            CHECK(std::abs(field.at_index(i) - dense[i]) <= 1e-8);
    }
}

TEST_CASE("field csv export lists every site") {
    BallDomain domain{1.5, {}};
    ScalarField h = hitting_field(domain, {0, 0, 0});
    std::ostringstream os;
    write_field_csv(os, h);
    std::string text = os.str();
    std::size_t lines = static_cast<std::size_t>(
        std::count(text.begin(), text.end(), '\n'));
    CHECK(lines == h.index().size() + 1);  // header + one row per site
    CHECK(text.rfind("x,y,z,value", 0) == 0);
}

TEST_CASE("hitting field cache returns the shared instance") {
    HittingFieldCache cache;
    BallDomain domain{3.0, {}};
    auto a = cache.get(domain, {0, 0, 0});
    auto b = cache.get(domain, {0, 0, 0});
    CHECK(a.get() == b.get());
    auto c = cache.get(domain, {1, 0, 0});
    CHECK(a.get() != c.get());
}

TEST_CASE("one-point decomposition stays within its trivial bounds") {
    BallDomain domain{4.0, {}};
    auto index = std::make_shared<DomainIndex>(domain);
    ScalarField h = hitting_field(index, {0, 0, 0});
    ScalarField g = green_function(index, {0, 0, 0});

    Estimate center_est = decompose_one_point(domain, {0, 0, 0}, h, g, 100, 9, 1);
    CHECK(center_est.mean == 1.0);

    Estimate est = decompose_one_point(domain, {2, 0, 0}, h, g, 20000, 9, 2);
    CHECK(est.mean >= 0.0);
    CHECK(est.mean <= g.at({2, 0, 0}));
}
