#pragma once

// Shared test utilities: random state generators, the frozen 1x1 "system"
// wrapper, brute-force oracles, and independent reference steppers. Nothing
// here calls the implementation paths it is used to check.

#include <cmath>
#include <random>
#include <vector>

#include "pampa/grid.hpp"
#include "pampa/integrator.hpp"
#include "pampa/kernels.hpp"
#include "pampa/limiter.hpp"
#include "pampa/models.hpp"

namespace testsupport {

using pampa::BoundaryCondition;
using pampa::DoFField;
using pampa::Grid1D;
using pampa::Vec3;

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

// Random conserved state with rho and pressure bounded away from zero.
inline Vec3 random_admissible_state(Rng& rng, double rho_lo = 0.2,
                                    double rho_hi = 4.0, double v_max = 2.5,
                                    double p_lo = 0.1, double p_hi = 8.0,
                                    double gamma = 1.4) {
    const double rho = uniform(rng, rho_lo, rho_hi);
    const double v = uniform(rng, -v_max, v_max);
    const double p = uniform(rng, p_lo, p_hi);
    return pampa::EulerModel::from_primitive(rho, v, p, gamma);
}

// Scalar law wrapped as a one-component system. Instantiating the shared
// kernels with this model must reproduce the scalar path bit for bit.
struct ScalarAsSystem {
    using State = Eigen::Matrix<double, 1, 1>;
    static constexpr int n_components = 1;
    static constexpr bool is_system = true;

    pampa::ScalarModel inner;

    struct Split {
        State plus_m, minus_m;
        // mimic the matrix product interface of JacobianSplit
        struct Mul {
            double v;
            State operator*(const State& w) const {
                State r;
                r[0] = v * w[0];
                return r;
            }
        };
        Mul plus, minus;
    };

    State flux(const State& u) const {
        State r;
        r[0] = inner.flux(u[0]);
        return r;
    }
    double max_speed(const State& u) const { return inner.max_speed(u[0]); }
    Split jacobian_split(const State& u) const {
        const auto s = inner.jacobian_split(u[0]);
        Split out;
        out.plus = {s.plus};
        out.minus = {s.minus};
        return out;
    }
    bool admissible(const State& u) const { return std::isfinite(u[0]); }
};

inline ScalarAsSystem::State wrap1(double u) {
    ScalarAsSystem::State s;
    s[0] = u;
    return s;
}

// Dense-grid infimum of Q(nu)/|P(nu)| including the stationary points of
// Q/P and the limit at infinity. Independent of the eigenvalue route.
inline double gql_grid_infimum(const pampa::GqlQuadraticPair& q,
                               double span = 1e3, int n_grid = 1000000) {
    const auto Q = [&](double nu) {
        return q.a1 * nu * nu - 2.0 * q.b1 * nu + 2.0 * q.c1;
    };
    const auto P = [&](double nu) {
        return q.a2 * nu * nu - 2.0 * q.b2 * nu + 2.0 * q.c2;
    };
    double best = std::numeric_limits<double>::infinity();
    const auto consider = [&](double nu) {
        const double p = P(nu);
        if (p == 0.0) return;
        best = std::min(best, Q(nu) / std::abs(p));
    };
    const double h = 2.0 * span / n_grid;
    for (int i = 0; i <= n_grid; ++i) consider(-span + i * h);
    // stationary points of Q/P: roots of Q'P - QP', a quadratic in nu
    const double ca = 2.0 * (q.a2 * q.b1 - q.a1 * q.b2);
    const double cb = 4.0 * (q.a1 * q.c2 - q.a2 * q.c1);
    const double cc = 4.0 * (q.b2 * q.c1 - q.b1 * q.c2);
    if (ca != 0.0) {
        const double disc = cb * cb - 4.0 * ca * cc;
        if (disc >= 0.0) {
            const double s = std::sqrt(disc);
            consider((-cb + s) / (2.0 * ca));
            consider((-cb - s) / (2.0 * ca));
        }
    } else if (cb != 0.0) {
        consider(-cc / cb);
    }
    // projective point at infinity
    if (q.a2 != 0.0) best = std::min(best, q.a1 / std::abs(q.a2));
    return best;
}

// ---- independent reference steppers (plain textbook forms) ----

template <class Model, class State>
DoFField<State> plain_first_order_stage(const Model& m, const Grid1D& g,
                                        BoundaryCondition bc,
                                        const DoFField<State>& f, double dt) {
    const auto pad = pampa::padded_view(f, bc, 1);
    const int nc = f.n_cells();
    const int np = f.n_points();
    const double lam = dt / g.dx;
    std::vector<State> flux(np);
    for (int j = 0; j < np; ++j) {
        const State al = pad.avg(j - 1);
        const State ar = pad.avg(j);
        const double a =
            std::max(m.max_speed(al), m.max_speed(ar));
        flux[j] = (m.flux(al) + m.flux(ar)) / 2.0 - (a / 2.0) * (ar - al);
    }
    DoFField<State> out = f;
    for (int k = 0; k < nc; ++k) {
        const int right = (k + 1 == np) ? 0 : k + 1;
        out.averages[k] = f.averages[k] - lam * (flux[right] - flux[k]);
    }
    for (int j = 0; j < np; ++j) {
        const State u = f.points[j];
        const State al = pad.avg(j - 1);
        const State ar = pad.avg(j);
        const double bl = std::max(m.max_speed(u), m.max_speed(al));
        const double br = std::max(m.max_speed(u), m.max_speed(ar));
        const State phi_l =
            (m.flux(u) - m.flux(al)) / 2.0 - (bl / 2.0) * (al - u);
        const State phi_r =
            (m.flux(ar) - m.flux(u)) / 2.0 - (br / 2.0) * (ar - u);
        out.points[j] = u - 2.0 * lam * (phi_l + phi_r);
    }
    return out;
}

template <class Model, class State>
DoFField<State> plain_high_order_stage(const Model& m, const Grid1D& g,
                                       BoundaryCondition bc,
                                       const DoFField<State>& f, double dt) {
    const auto pad = pampa::padded_view(f, bc, 1);
    const int nc = f.n_cells();
    const int np = f.n_points();
    const double lam = dt / g.dx;
    DoFField<State> out = f;
    for (int k = 0; k < nc; ++k) {
        const int right = (k + 1 == np) ? 0 : k + 1;
        out.averages[k] =
            f.averages[k] -
            lam * (m.flux(f.points[right]) - m.flux(f.points[k]));
    }
    for (int j = 0; j < np; ++j) {
        const State u = f.points[j];
        const auto split = m.jacobian_split(u);
        const State wl = pad.pt(j - 1) - 3.0 * pad.avg(j - 1) + 2.0 * u;
        const State wr = -2.0 * u + 3.0 * pad.avg(j) - pad.pt(j + 1);
        out.points[j] = u - 2.0 * lam * (split.plus * wl + split.minus * wr);
    }
    return out;
}

template <class Stage, class State>
DoFField<State> plain_ssprk3(Stage&& stage, const DoFField<State>& f,
                             double dt) {
    auto u1 = stage(f, dt);
    auto u2 = stage(u1, dt);
    pampa::convex_combine(0.75, f, 0.25, u2, u2);
    auto u3 = stage(u2, dt);
    pampa::convex_combine(1.0 / 3.0, f, 2.0 / 3.0, u3, u3);
    return u3;
}

template <class State>
double max_abs_difference(const DoFField<State>& a, const DoFField<State>& b) {
    using Traits = pampa::StateTraits<State>;
    double m = 0.0;
    for (int k = 0; k < a.n_cells(); ++k)
        for (int c = 0; c < Traits::n_components; ++c)
            m = std::max(m, std::abs(Traits::component(a.averages[k], c) -
                                     Traits::component(b.averages[k], c)));
    for (int j = 0; j < a.n_points(); ++j)
        for (int c = 0; c < Traits::n_components; ++c)
            m = std::max(m, std::abs(Traits::component(a.points[j], c) -
                                     Traits::component(b.points[j], c)));
    return m;
}

}  // namespace testsupport
