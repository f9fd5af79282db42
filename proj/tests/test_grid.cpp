#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numeric>

#include "pampa/grid.hpp"
#include "support.hpp"

using namespace pampa;

TEST_CASE("build_grid spacing and validation") {
    CHECK(build_grid(0.0, 1.0, 100).dx == doctest::Approx(0.01).epsilon(1e-15));
    CHECK(build_grid(-1.0, 1.0, 200).dx == doctest::Approx(0.01).epsilon(1e-15));
    CHECK_THROWS_AS(build_grid(0.0, 1.0, 2), ConfigError);
    CHECK_THROWS_AS(build_grid(1.0, 1.0, 10), ConfigError);

    const Grid1D g = build_grid(-1.0, 1.0, 8);
    CHECK(g.node(0) == -1.0);
    CHECK(g.node(8) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(g.center(0) == doctest::Approx(-1.0 + 0.5 * g.dx));
}

TEST_CASE("padded view indexing") {
    const Grid1D g = build_grid(0.0, 1.0, 5);

    SUBCASE("periodic wraps cells and identifies node n with node 0") {
        auto f = make_field<double>(g, BoundaryCondition::periodic);
        REQUIRE(f.n_points() == 5);
        std::iota(f.averages.begin(), f.averages.end(), 0.0);
        std::iota(f.points.begin(), f.points.end(), 10.0);
        const auto pad = padded_view(f, BoundaryCondition::periodic);
        CHECK(pad.avg(-1) == f.averages[4]);
        CHECK(pad.avg(5) == f.averages[0]);
        CHECK(pad.pt(5) == f.points[0]);
        CHECK(pad.pt(-2) == f.points[3]);
    }

    SUBCASE("outflow clamps to the boundary entry") {
        auto f = make_field<double>(g, BoundaryCondition::outflow);
        REQUIRE(f.n_points() == 6);
        std::iota(f.averages.begin(), f.averages.end(), 0.0);
        std::iota(f.points.begin(), f.points.end(), 10.0);
        const auto pad = padded_view(f, BoundaryCondition::outflow);
        CHECK(pad.pt(6) == f.points[5]);
        CHECK(pad.pt(-1) == f.points[0]);
        CHECK(pad.avg(5) == f.averages[4]);
        CHECK(pad.avg(-2) == f.averages[0]);
    }
}

TEST_CASE("padded view restricted to interior indices is the stored field") {
    const Grid1D g = build_grid(0.0, 1.0, 7);
    testsupport::Rng rng(42);
    for (auto bc : {BoundaryCondition::periodic, BoundaryCondition::outflow}) {
        auto f = make_field<double>(g, bc);
        for (auto& u : f.averages) u = testsupport::uniform(rng, -3.0, 3.0);
        for (auto& u : f.points) u = testsupport::uniform(rng, -3.0, 3.0);
        const auto pad = padded_view(f, bc);
        for (int k = 0; k < f.n_cells(); ++k) CHECK(pad.avg(k) == f.averages[k]);
        for (int j = 0; j < f.n_points(); ++j) CHECK(pad.pt(j) == f.points[j]);
    }
}

TEST_CASE("periodic mass sum is rotation invariant") {
    const Grid1D g = build_grid(0.0, 1.0, 64);
    testsupport::Rng rng(7);
    auto f = make_field<double>(g, BoundaryCondition::periodic);
    for (auto& u : f.averages) u = testsupport::uniform(rng, -1.0, 1.0);

    const auto mass = [&](const std::vector<double>& a) {
        double s = 0.0;
        for (double u : a) s += g.dx * u;
        return s;
    };
    const double m0 = mass(f.averages);
    for (int shift : {1, 13, 40}) {
        auto rotated = f.averages;
        std::rotate(rotated.begin(), rotated.begin() + shift, rotated.end());
        CHECK(mass(rotated) == doctest::Approx(m0).epsilon(1e-13));
    }
}
