#pragma once

#include <algorithm>
#include <utility>

#include "pampa/grid.hpp"
#include "pampa/models.hpp"

namespace pampa {

// Per-node residual pair: `from_left` acts across the half-interface to the
// node's left cell, `from_right` across the one to its right cell.
template <class State>
struct NodeResidualPair {
    State from_left;
    State from_right;
};

// Local speed bound shared by both states of an interface or half-interface;
// covers every wave between the two states, not only the endpoint speeds.
template <class Model, class State>
double pairwise_speed(const Model& m, const State& a, const State& b) {
    double s = std::max(m.max_speed(a), m.max_speed(b));
    if constexpr (requires { m.interior_speed_bound(a, b); })
        s = std::max(s, m.interior_speed_bound(a, b));
    return s;
}

// Local Lax-Friedrichs flux.
template <class Model, class State>
State llf_flux(const Model& m, const State& uL, const State& uR, double alpha) {
    return (m.flux(uL) + m.flux(uR)) / 2.0 - (alpha / 2.0) * (uR - uL);
}

// First-order one-sided residuals driving the point value at a node, built
// from the node value and its two neighbor averages.
template <class Model, class State>
NodeResidualPair<State> low_order_residuals(const Model& m, const State& u_pt,
                                            const State& ubar_left,
                                            const State& ubar_right,
                                            double beta_left,
                                            double beta_right) {
    NodeResidualPair<State> r;
    r.from_left = (m.flux(u_pt) - m.flux(ubar_left)) / 2.0 -
                  (beta_left / 2.0) * (ubar_left - u_pt);
    r.from_right = (m.flux(ubar_right) - m.flux(u_pt)) / 2.0 -
                   (beta_right / 2.0) * (ubar_right - u_pt);
    return r;
}

// Parabola on one cell interpreted from its two endpoint values and mean.
// Reproduces all three data: value(0) = left, value(1) = right, and its
// cell average equals mean.
template <class State>
struct ParabolicCell {
    State left;
    State mean;
    State right;
    double dx = 1.0;

    State value(double xi) const {
        const double l0 = (1.0 - xi) * (1.0 - 3.0 * xi);
        const double lhalf = 6.0 * xi * (1.0 - xi);
        const double l1 = xi * (3.0 * xi - 2.0);
        return left * l0 + mean * lhalf + right * l1;
    }
    // d/dx at local coordinate xi = (x - x_left) / dx.
    State deriv(double xi) const {
        return (left * (6.0 * xi - 4.0) + mean * (6.0 - 12.0 * xi) +
                right * (6.0 * xi - 2.0)) /
               dx;
    }
};

// Third-order one-sided residuals at a node: upwind-split derivative of the
// two parabolas meeting there, reduced to pure state algebra.
template <class Model, class State>
NodeResidualPair<State> high_order_residuals(const Model& m,
                                             const State& u_prev,
                                             const State& ubar_left,
                                             const State& u_pt,
                                             const State& ubar_right,
                                             const State& u_next) {
    const auto split = m.jacobian_split(u_pt);
    const State wl = u_prev - 3.0 * ubar_left + 2.0 * u_pt;
    const State wr = -2.0 * u_pt + 3.0 * ubar_right - u_next;
    NodeResidualPair<State> r;
    r.from_left = split.plus * wl;
    r.from_right = split.minus * wr;
    return r;
}

// First-order Riemann intermediate state of two neighbor states. A zero
// speed means both fluxes agree for consistent data; the arithmetic mean
// avoids the 0/0 and the limiter short-circuits to coefficient 1.
template <class Model, class State>
State riemann_intermediate(const Model& m, const State& uL, const State& uR,
                           double speed) {
    if (speed == 0.0) return (uL + uR) / 2.0;
    return (uL + uR) / 2.0 - (m.flux(uR) - m.flux(uL)) / (2.0 * speed);
}

// Interface speeds alpha (one per node) and half-interface speeds
// beta_left/beta_right (two per node).
template <class Model, class State>
void local_speeds(const Model& m, const DoFField<State>& f,
                  BoundaryCondition bc, std::vector<double>& alpha,
                  std::vector<double>& beta_left,
                  std::vector<double>& beta_right) {
    const int np = f.n_points();
    alpha.resize(np);
    beta_left.resize(np);
    beta_right.resize(np);
    const auto pad = padded_view(f, bc, 1);
    for (int j = 0; j < np; ++j) {
        alpha[j] = pairwise_speed(m, pad.avg(j - 1), pad.avg(j));
        beta_left[j] = pairwise_speed(m, f.points[j], pad.avg(j - 1));
        beta_right[j] = pairwise_speed(m, f.points[j], pad.avg(j));
    }
}

}  // namespace pampa
