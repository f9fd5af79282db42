#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Dense>

#include "pampa/grid.hpp"
#include "pampa/models.hpp"

namespace pampa {

enum class BoundMode { strict_gmp, relaxed_gmp };

// Undershoot/overshoot allowance of the relaxed global maximum principle.
inline double relax_margin(double range) {
    return std::max(1e-4, 1e-3 * range);
}

// Global solution bounds, fixed from the initial data. Effective bounds are
// widened by `delta` (zero in strict mode).
struct ScalarBounds {
    double u_min = 0.0;
    double u_max = 0.0;
    double delta = 0.0;

    double lo() const { return u_min - delta; }
    double hi() const { return u_max + delta; }
    double range() const { return u_max - u_min; }
};

inline ScalarBounds bounds_from_field(const DoFField<double>& f,
                                      BoundMode mode) {
    ScalarBounds b;
    b.u_min = std::numeric_limits<double>::infinity();
    b.u_max = -b.u_min;
    for (double u : f.averages) {
        b.u_min = std::min(b.u_min, u);
        b.u_max = std::max(b.u_max, u);
    }
    for (double u : f.points) {
        b.u_min = std::min(b.u_min, u);
        b.u_max = std::max(b.u_max, u);
    }
    b.delta = mode == BoundMode::relaxed_gmp ? relax_margin(b.range()) : 0.0;
    return b;
}

// Per-cell bounds for the local maximum principle.
struct LocalBounds {
    double lo = 0.0;
    double hi = 0.0;
};

inline LocalBounds local_bounds(double ubar, double ustar_left,
                                double ustar_right) {
    return {std::min({ubar, ustar_left, ustar_right}),
            std::max({ubar, ustar_left, ustar_right})};
}

namespace detail {

inline bool correction_negligible(double delta, double flux_scale) {
    return std::abs(delta) < 1e-14 * (1.0 + flux_scale);
}

[[noreturn]] inline void throw_consistency(const char* what, double u_star,
                                           double lo, double hi,
                                           const char* where, int index) {
    std::ostringstream os;
    os << what << ": intermediate state " << u_star << " outside [" << lo
       << ", " << hi << "]";
    if (where && *where) os << " at " << where << " " << index;
    os << " (CFL violation upstream?)";
    throw LimiterConsistencyError(os.str());
}

}  // namespace detail

// Flux blending coefficient from the global maximum principle: the largest
// eta in [0,1] with u* +/- eta*delta_f/alpha inside the effective bounds.
inline double eta_global_scalar(double u_star, double delta_f, double alpha,
                                const ScalarBounds& b, double flux_scale = 0.0,
                                const char* where = "", int index = -1) {
    if (detail::correction_negligible(delta_f, flux_scale)) return 1.0;
    const double lo = b.lo();
    const double hi = b.hi();
    const double tol = 1e-12 * (hi - lo);
    if (u_star < lo - tol || u_star > hi + tol)
        detail::throw_consistency("eta_global_scalar", u_star, lo, hi, where,
                                  index);
    const double head = std::max(std::min(hi - u_star, u_star - lo), 0.0);
    return std::min(1.0, alpha * head / std::abs(delta_f));
}

// Flux blending coefficient from the local maximum principle of the two
// cells meeting at the interface. Sign-split: a positive correction pushes
// the right cell up and the left cell down, and vice versa.
inline double eta_local_scalar(double u_star, double delta_f, double alpha,
                               const LocalBounds& lb_left,
                               const LocalBounds& lb_right,
                               double flux_scale = 0.0, const char* where = "",
                               int index = -1) {
    if (detail::correction_negligible(delta_f, flux_scale)) return 1.0;
    const double tol =
        1e-12 * std::max(lb_left.hi - lb_left.lo, lb_right.hi - lb_right.lo);
    if (u_star < std::max(lb_left.lo, lb_right.lo) - tol ||
        u_star > std::min(lb_left.hi, lb_right.hi) + tol)
        detail::throw_consistency("eta_local_scalar", u_star,
                                  std::max(lb_left.lo, lb_right.lo),
                                  std::min(lb_left.hi, lb_right.hi), where,
                                  index);
    double head;
    if (delta_f > 0.0)
        head = std::min(lb_right.hi - u_star, u_star - lb_left.lo);
    else
        head = std::min(u_star - lb_right.lo, lb_left.hi - u_star);
    head = std::max(head, 0.0);
    return std::min(1.0, alpha * head / std::abs(delta_f));
}

// Residual blending coefficient for one side of a point-value update. The
// two-sided headroom absorbs a wrong-signed residual difference from an
// inaccurate upwind direction estimate.
inline double theta_point_scalar(double u_star_side, double delta_phi,
                                 double beta, const ScalarBounds& b,
                                 double flux_scale = 0.0,
                                 const char* where = "", int index = -1) {
    if (detail::correction_negligible(delta_phi, flux_scale)) return 1.0;
    const double lo = b.lo();
    const double hi = b.hi();
    const double tol = 1e-12 * (hi - lo);
    if (u_star_side < lo - tol || u_star_side > hi + tol)
        detail::throw_consistency("theta_point_scalar", u_star_side, lo, hi,
                                  where, index);
    const double head =
        std::max(std::min(u_star_side - lo, hi - u_star_side), 0.0);
    return std::min(1.0, beta * head / std::abs(delta_phi));
}

// Smooth-extremum test for one cell, from the derivative of its parabola
// against the derivative envelope of the two neighbor parabolas evaluated at
// both cell endpoints (the neighbors are extrapolated past their own cell).
// Arguments: point values p at nodes j-1..j+2 and averages a of cells
// k-1, k, k+1 where cell k spans [x_j, x_{j+1}].
inline bool smooth_extremum(double p_jm1, double a_km1, double p_j, double a_k,
                            double p_jp1, double a_kp1, double p_jp2,
                            double dx) {
    const auto deriv = [dx](double l, double m, double r, double xi) {
        return (l * (6.0 * xi - 4.0) + m * (6.0 - 12.0 * xi) +
                r * (6.0 * xi - 2.0)) /
               dx;
    };
    const double zc = deriv(p_j, a_k, p_jp1, 0.5);
    const double zl = deriv(p_j, a_k, p_jp1, 0.0);
    const double zr = deriv(p_j, a_k, p_jp1, 1.0);
    // Neighbor parabola derivatives at x_j (xi = 1 resp. -1) and x_{j+1}
    // (xi = 2 resp. 0), in this cell's local coordinates.
    const double nb[4] = {deriv(p_jm1, a_km1, p_j, 1.0),
                          deriv(p_jm1, a_km1, p_j, 2.0),
                          deriv(p_jp1, a_kp1, p_jp2, -1.0),
                          deriv(p_jp1, a_kp1, p_jp2, 0.0)};
    const double zmin = std::min({nb[0], nb[1], nb[2], nb[3]});
    const double zmax = std::max({nb[0], nb[1], nb[2], nb[3]});

    // The equality tolerance covers rounding of the stencil values as well
    // as of the derivative magnitudes.
    const double value_scale =
        std::max({std::abs(p_jm1), std::abs(a_km1), std::abs(p_j),
                  std::abs(a_k), std::abs(p_jp1), std::abs(a_kp1),
                  std::abs(p_jp2)}) /
        dx;
    const double scale = std::max({std::abs(zc), std::abs(zl), std::abs(zr),
                                   std::abs(zmin), std::abs(zmax),
                                   value_scale});
    const double tie_tol = 1e-13 * scale;
    const auto detection_passes = [&](double zb) {
        const double d = zb - zc;
        if (std::abs(d) <= tie_tol) return true;  // equality branch
        // min(1, (zmax - zc)/d) = 1 resp. min(1, (zmin - zc)/d) = 1
        return d > 0.0 ? (zmax - zc) >= d : (zmin - zc) <= d;
    };
    return detection_passes(zl) && detection_passes(zr);
}

// Field-level wrapper: smoothness of cell k of a (possibly multi-component)
// field, judged on component `comp`.
template <class State>
bool smooth_extrema_detector(const DoFField<State>& f, BoundaryCondition bc,
                             const Grid1D& g, int k, int comp = 0) {
    using T = StateTraits<State>;
    const auto pad = padded_view(f, bc, 2);
    return smooth_extremum(
        T::component(pad.pt(k - 1), comp), T::component(pad.avg(k - 1), comp),
        T::component(pad.pt(k), comp), T::component(pad.avg(k), comp),
        T::component(pad.pt(k + 1), comp), T::component(pad.avg(k + 1), comp),
        T::component(pad.pt(k + 2), comp), g.dx);
}

// Quadratic pair of the geometric quasi-linearization: Q(nu) from a state
// u = (rho, m, E), P(nu) from a flux or residual difference. Q(nu) > 0 for
// all nu exactly when u is in the invariant domain.
struct GqlQuadraticPair {
    double a1, b1, c1;  // Q(nu) = a1 nu^2 - 2 b1 nu + 2 c1
    double a2, b2, c2;  // P(nu) = a2 nu^2 - 2 b2 nu + 2 c2

    static GqlQuadraticPair from_states(const Vec3& u, const Vec3& delta) {
        return {u[0], u[1], u[2], delta[0], delta[1], delta[2]};
    }
};

// inf over nu (including the projective point at infinity) of Q(nu)/|P(nu)|,
// computed as the reciprocal spectral radius of the 2x2 symmetric pencil
// C = B^{-1/2} A B^{-1/2}. Returns +inf when P vanishes identically.
inline double gql_min_ratio(const GqlQuadraticPair& q) {
    const double det_b = 2.0 * q.a1 * q.c1 - q.b1 * q.b1;
    if (!(q.a1 > 0.0) || !(det_b > 0.0))
        throw InvalidStateError(
            "gql_min_ratio: numerator quadratic is not positive definite");
    if (q.a2 == 0.0 && q.b2 == 0.0 && q.c2 == 0.0)
        return std::numeric_limits<double>::infinity();

    // Eigenvalues of B^{-1} A via trace and determinant; real because the
    // pencil is similar to the symmetric C.
    const double tr = 2.0 * (q.a2 * q.c1 + q.a1 * q.c2 - q.b1 * q.b2) / det_b;
    const double det = (2.0 * q.a2 * q.c2 - q.b2 * q.b2) / det_b;
    const double half_tr = 0.5 * tr;
    const double disc = half_tr * half_tr - det;

    double rho_c;
    if (disc >= 1e-12 * std::max(half_tr * half_tr, std::abs(det))) {
        const double s = std::sqrt(disc);
        rho_c = std::max(std::abs(half_tr + s), std::abs(half_tr - s));
    } else {
        // Near-degenerate discriminant: fall back to the symmetrized form.
        Eigen::Matrix2d A, B;
        A << q.a2, -q.b2, -q.b2, 2.0 * q.c2;
        B << q.a1, -q.b1, -q.b1, 2.0 * q.c1;
        const double s = std::sqrt(det_b);
        const double t = std::sqrt(B.trace() + 2.0 * s);
        const Eigen::Matrix2d b_half =
            (B + s * Eigen::Matrix2d::Identity()) / t;
        const Eigen::Matrix2d b_half_inv = b_half.inverse();
        const Eigen::Matrix2d C = b_half_inv * A * b_half_inv;
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(C);
        rho_c = es.eigenvalues().cwiseAbs().maxCoeff();
    }
    if (rho_c == 0.0) return std::numeric_limits<double>::infinity();
    return 1.0 / rho_c;
}

// Floors realizing the strict inequalities rho > 0, e > 0 in floating point.
struct EulerLimitParams {
    double eps_rho_scale = 1e-13;
    double energy_safety = 1.0 - 1e-12;
};

// Blending coefficient keeping the corrected intermediate states inside the
// Euler invariant domain: min of the density coefficient and the internal
// energy coefficient from the GQL eigenvalue bound.
inline double euler_blending_coefficient(const Vec3& u_star, const Vec3& delta,
                                         double speed,
                                         const EulerLimitParams& prm = {},
                                         double flux_scale = 0.0,
                                         const char* where = "",
                                         int index = -1) {
    if (!(u_star[0] > 0.0) ||
        !(2.0 * u_star[0] * u_star[2] - u_star[1] * u_star[1] > 0.0)) {
        std::ostringstream os;
        os << "euler_blending: intermediate state outside invariant domain, "
              "(rho, m, E) = ("
           << u_star[0] << ", " << u_star[1] << ", " << u_star[2] << ")";
        if (where && *where) os << " at " << where << " " << index;
        os << " (CFL violation upstream?)";
        throw InvalidStateError(os.str());
    }

    double eta_rho = 1.0;
    if (!detail::correction_negligible(delta[0], flux_scale)) {
        const double eps_rho = prm.eps_rho_scale * std::max(1.0, u_star[0]);
        const double head = std::max(u_star[0] - eps_rho, 0.0);
        eta_rho = std::min(1.0, speed * head / std::abs(delta[0]));
    }

    double eta_e = 1.0;
    const double ratio = gql_min_ratio(GqlQuadraticPair::from_states(u_star, delta));
    if (std::isfinite(ratio))
        eta_e = std::min(1.0, speed * ratio) * prm.energy_safety;

    return std::min(eta_rho, eta_e);
}

// Per-family blending coefficients of one stage.
struct BlendingCoefficients {
    std::vector<double> eta;         // one per interface
    std::vector<double> theta_left;  // one per node, left half-interface
    std::vector<double> theta_right;
};

}  // namespace pampa
