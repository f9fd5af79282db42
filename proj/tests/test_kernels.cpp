#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pampa/kernels.hpp"
#include "pampa/quadrature.hpp"
#include "support.hpp"

using namespace pampa;
using testsupport::wrap1;

TEST_CASE("llf flux") {
    ScalarModel burgers{ScalarModel::Kind::burgers};
    CHECK(llf_flux(burgers, 1.3, 1.3, 2.0) == burgers.flux(1.3));
    CHECK(llf_flux(burgers, 2.0, -1.0, 2.0) ==
          doctest::Approx(4.25).epsilon(1e-15));

    ScalarModel adv{ScalarModel::Kind::linear_advection};
    CHECK(llf_flux(adv, 1.0, 0.0, 1.0) == doctest::Approx(1.0).epsilon(1e-15));

    EulerModel euler{1.4};
    const Vec3 u(1.0, 0.4, 2.0);
    const Vec3 same = llf_flux(euler, u, u, 3.0);
    CHECK((same - euler.flux(u)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("local speeds") {
    const Grid1D g = build_grid(0.0, 1.0, 4);

    SUBCASE("burgers cell pair") {
        ScalarModel m{ScalarModel::Kind::burgers};
        auto f = make_field<double>(g, BoundaryCondition::periodic);
        f.averages = {2.0, -1.0, 0.5, 0.0};
        f.points = {0.0, 0.0, 0.0, 0.0};
        std::vector<double> a, bl, br;
        local_speeds(m, f, BoundaryCondition::periodic, a, bl, br);
        CHECK(a[1] == 2.0);  // between cells 0 and 1
    }

    SUBCASE("linear advection is constant") {
        ScalarModel m{ScalarModel::Kind::linear_advection};
        auto f = make_field<double>(g, BoundaryCondition::periodic);
        f.averages = {0.3, -2.0, 5.0, 0.1};
        f.points = {1.0, 2.0, 3.0, 4.0};
        std::vector<double> a, bl, br;
        local_speeds(m, f, BoundaryCondition::periodic, a, bl, br);
        for (int j = 0; j < 4; ++j) {
            CHECK(a[j] == 1.0);
            CHECK(bl[j] == 1.0);
            CHECK(br[j] == 1.0);
        }
    }

    SUBCASE("sod initial interface") {
        EulerModel m{1.4};
        CHECK(pairwise_speed(m, Vec3(1.0, 0.0, 2.5), Vec3(0.125, 0.0, 0.25)) ==
              doctest::Approx(std::sqrt(1.4)).epsilon(1e-15));
    }
}

TEST_CASE("low order residuals") {
    ScalarModel adv{ScalarModel::Kind::linear_advection};
    SUBCASE("constant field vanishes") {
        const auto r = low_order_residuals(adv, 0.7, 0.7, 0.7, 1.0, 1.0);
        CHECK(r.from_left == 0.0);
        CHECK(r.from_right == 0.0);
    }
    SUBCASE("hand-evaluated example") {
        const auto r = low_order_residuals(adv, 0.0, 1.0, 1.0, 1.0, 1.0);
        CHECK(r.from_left == doctest::Approx(-1.0).epsilon(1e-15));
        CHECK(r.from_right == doctest::Approx(0.0).scale(1.0));
    }
    SUBCASE("euler constant state vanishes") {
        EulerModel m{1.4};
        const Vec3 u(1.0, 0.2, 3.0);
        const auto r = low_order_residuals(m, u, u, u, 2.0, 2.0);
        CHECK(r.from_left.cwiseAbs().maxCoeff() == 0.0);
        CHECK(r.from_right.cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("parabolic cell") {
    SUBCASE("derivative formulas") {
        ParabolicCell<double> linear{0.0, 0.5, 1.0, 1.0};
        CHECK(linear.deriv(0.0) == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(linear.deriv(1.0) == doctest::Approx(1.0).epsilon(1e-15));

        ParabolicCell<double> bump{0.0, 1.0, 0.0, 1.0};
        CHECK(bump.deriv(0.0) == doctest::Approx(6.0).epsilon(1e-15));
        CHECK(bump.deriv(1.0) == doctest::Approx(-6.0).epsilon(1e-15));
    }
    SUBCASE("basis values and mean weight") {
        ParabolicCell<double> l0{1.0, 0.0, 0.0, 1.0};
        CHECK(l0.value(0.0) == 1.0);
        CHECK(l0.value(1.0) == 0.0);
        ParabolicCell<double> lhalf{0.0, 1.0, 0.0, 1.0};
        CHECK(lhalf.value(0.5) == doctest::Approx(1.5).epsilon(1e-15));
        const double integral =
            gauss5([&](double x) { return lhalf.value(x); }, 0.0, 1.0);
        CHECK(integral == doctest::Approx(1.0).epsilon(1e-14));
    }
    SUBCASE("reproduces quadratics exactly") {
        testsupport::Rng rng(3);
        for (int trial = 0; trial < 50; ++trial) {
            const double a = testsupport::uniform(rng, -2.0, 2.0);
            const double b = testsupport::uniform(rng, -2.0, 2.0);
            const double c = testsupport::uniform(rng, -2.0, 2.0);
            const auto q = [&](double x) { return a * x * x + b * x + c; };
            const double dx = 0.37;
            ParabolicCell<double> cell{
                q(0.0), cell_average(q, 0.0, dx) , q(dx), dx};
            for (double xi : {0.0, 0.25, 0.5, 0.75, 1.0}) {
                CHECK(cell.value(xi) ==
                      doctest::Approx(q(xi * dx)).epsilon(1e-13));
                CHECK(cell.deriv(xi) ==
                      doctest::Approx(2.0 * a * xi * dx + b).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("high order residuals") {
    SUBCASE("constant field vanishes") {
        ScalarModel m{ScalarModel::Kind::burgers};
        const auto r = high_order_residuals(m, 0.5, 0.5, 0.5, 0.5, 0.5);
        CHECK(r.from_left == 0.0);
        CHECK(r.from_right == 0.0);
    }
    SUBCASE("linear advection upwinds fully to the left") {
        ScalarModel m{ScalarModel::Kind::linear_advection};
        const auto r = high_order_residuals(m, 0.3, 0.9, 0.1, -0.4, 0.8);
        CHECK(r.from_right == 0.0);
        CHECK(r.from_left ==
              doctest::Approx(0.3 - 3.0 * 0.9 + 2.0 * 0.1).epsilon(1e-15));
    }
    SUBCASE("burgers with negative point value upwinds right") {
        ScalarModel m{ScalarModel::Kind::burgers};
        const auto r = high_order_residuals(m, 0.0, 0.0, -1.0, 0.0, 1.0);
        CHECK(r.from_left == 0.0);
        CHECK(r.from_right == doctest::Approx(-1.0).epsilon(1e-15));
    }
}

TEST_CASE("riemann intermediate states") {
    ScalarModel adv{ScalarModel::Kind::linear_advection};
    CHECK(riemann_intermediate(adv, 0.8, 0.8, 1.0) == 0.8);
    CHECK(riemann_intermediate(adv, 1.0, 0.0, 1.0) ==
          doctest::Approx(1.0).epsilon(1e-15));

    SUBCASE("zero speed falls back to the mean") {
        ScalarModel burgers{ScalarModel::Kind::burgers};
        CHECK(riemann_intermediate(burgers, 0.4, -0.4, 0.0) ==
              doctest::Approx(0.0).scale(1.0));
    }

    SUBCASE("scalar bound property over random pairs") {
        testsupport::Rng rng(17);
        for (auto kind : {ScalarModel::Kind::linear_advection,
                          ScalarModel::Kind::burgers,
                          ScalarModel::Kind::buckley_leverett}) {
            ScalarModel m{kind};
            const bool unit_interval =
                kind == ScalarModel::Kind::buckley_leverett;
            for (int i = 0; i < 1000; ++i) {
                const double lo = unit_interval ? 0.0 : -2.0;
                const double hi = unit_interval ? 1.0 : 2.0;
                const double ul = testsupport::uniform(rng, lo, hi);
                const double ur = testsupport::uniform(rng, lo, hi);
                const double alpha = pairwise_speed(m, ul, ur);
                const double us = riemann_intermediate(m, ul, ur, alpha);
                const double slack =
                    1e-13 * std::max(1.0, std::abs(ul) + std::abs(ur));
                CHECK(us >= std::min(ul, ur) - slack);
                CHECK(us <= std::max(ul, ur) + slack);
            }
        }
    }
}

TEST_CASE("frozen 1x1 system reduces to the scalar path bit for bit") {
    testsupport::Rng rng(29);
    for (auto kind : {ScalarModel::Kind::linear_advection,
                      ScalarModel::Kind::burgers,
                      ScalarModel::Kind::buckley_leverett}) {
        ScalarModel scalar{kind};
        testsupport::ScalarAsSystem system{scalar};
        for (int i = 0; i < 300; ++i) {
            const double a = testsupport::uniform(rng, -2.0, 2.0);
            const double b = testsupport::uniform(rng, -2.0, 2.0);
            const double c = testsupport::uniform(rng, -2.0, 2.0);
            const double d = testsupport::uniform(rng, -2.0, 2.0);
            const double e = testsupport::uniform(rng, -2.0, 2.0);
            const double alpha = pairwise_speed(scalar, a, b);
            const double bl = pairwise_speed(scalar, c, a);
            const double br = pairwise_speed(scalar, c, b);

            CHECK(llf_flux(system, wrap1(a), wrap1(b), alpha)[0] ==
                  llf_flux(scalar, a, b, alpha));
            CHECK(riemann_intermediate(system, wrap1(a), wrap1(b), alpha)[0] ==
                  riemann_intermediate(scalar, a, b, alpha));

            const auto rs = low_order_residuals(scalar, c, a, b, bl, br);
            const auto rv =
                low_order_residuals(system, wrap1(c), wrap1(a), wrap1(b), bl, br);
            CHECK(rv.from_left[0] == rs.from_left);
            CHECK(rv.from_right[0] == rs.from_right);

            const auto hs = high_order_residuals(scalar, d, a, c, b, e);
            const auto hv = high_order_residuals(system, wrap1(d), wrap1(a),
                                                 wrap1(c), wrap1(b), wrap1(e));
            CHECK(hv.from_left[0] == hs.from_left);
            CHECK(hv.from_right[0] == hs.from_right);
        }
    }
}
