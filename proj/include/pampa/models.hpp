#pragma once

#include <cmath>
#include <sstream>
#include <string>

#include <Eigen/Dense>

#include "pampa/errors.hpp"

namespace pampa {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

// Sign-split flux derivative of a scalar law.
struct ScalarSplit {
    double plus;
    double minus;
};

struct ScalarModel {
    enum class Kind { linear_advection, burgers, buckley_leverett };

    Kind kind = Kind::linear_advection;

    using State = double;
    static constexpr int n_components = 1;
    static constexpr bool is_system = false;

    double flux(double u) const {
        switch (kind) {
            case Kind::linear_advection:
                return u;
            case Kind::burgers:
                return 0.5 * u * u;
            case Kind::buckley_leverett: {
                const double a = 4.0 * u * u;
                const double b = (1.0 - u) * (1.0 - u);
                return a / (a + b);
            }
        }
        return 0.0;
    }

    // Exact derivative; the Buckley-Leverett denominator 4u^2 + (1-u)^2 is
    // positive for every real u.
    double flux_derivative(double u) const {
        switch (kind) {
            case Kind::linear_advection:
                return 1.0;
            case Kind::burgers:
                return u;
            case Kind::buckley_leverett: {
                const double den = 4.0 * u * u + (1.0 - u) * (1.0 - u);
                return 8.0 * u * (1.0 - u) / (den * den);
            }
        }
        return 0.0;
    }

    double max_speed(double u) const { return std::abs(flux_derivative(u)); }

    // Largest |f'| strictly between two states. Zero except for the
    // non-convex Buckley-Leverett flux, whose secant slopes are not bounded
    // by the endpoint derivatives; there |f'| is also probed at the interior
    // critical points of f' (roots of 10u^3 - 15u^2 + 1).
    double interior_speed_bound(double a, double b) const {
        if (kind != Kind::buckley_leverett) return 0.0;
        static constexpr double crit[3] = {-0.23974894723879694,
                                           0.28714072541674057,
                                           1.4526082218220564};
        const double lo = std::min(a, b);
        const double hi = std::max(a, b);
        double s = 0.0;
        for (double r : crit)
            if (lo < r && r < hi) s = std::max(s, max_speed(r));
        return s;
    }

    ScalarSplit jacobian_split(double u) const {
        const double a = flux_derivative(u);
        return {std::max(a, 0.0), std::min(a, 0.0)};
    }

    bool admissible(double u) const { return std::isfinite(u); }
};

// Signed Jacobian splitting J = plus + minus with eigenvalues of `plus`
// nonnegative and of `minus` nonpositive.
struct JacobianSplit {
    Mat3 plus;
    Mat3 minus;
};

namespace detail {
[[noreturn]] inline void throw_invalid_state(const Vec3& u, const char* where) {
    std::ostringstream os;
    os << where << ": state outside invariant domain, (rho, m, E) = (" << u[0]
       << ", " << u[1] << ", " << u[2] << ")";
    throw InvalidStateError(os.str());
}
}  // namespace detail

// Ideal-gas Euler equations in conserved variables (rho, m, E),
// p = (gamma - 1) * (E - m^2 / (2 rho)).
struct EulerModel {
    double gamma = 1.4;

    using State = Vec3;
    static constexpr int n_components = 3;
    static constexpr bool is_system = true;

    static double internal_energy(const Vec3& u) {
        return u[2] - 0.5 * u[1] * u[1] / u[0];
    }
    double pressure(const Vec3& u) const {
        return (gamma - 1.0) * internal_energy(u);
    }
    bool admissible(const Vec3& u) const {
        return u.allFinite() && u[0] > 0.0 && internal_energy(u) > 0.0;
    }

    Vec3 flux(const Vec3& u) const {
        if (!(u[0] > 0.0)) detail::throw_invalid_state(u, "euler_flux");
        const double v = u[1] / u[0];
        const double p = pressure(u);
        return Vec3(u[1], u[1] * v + p, v * (u[2] + p));
    }

    double sound_speed(const Vec3& u) const {
        return std::sqrt(gamma * pressure(u) / u[0]);
    }

    // Spectral radius |v| + c of the flux Jacobian.
    double max_speed(const Vec3& u) const {
        if (!admissible(u)) detail::throw_invalid_state(u, "euler_max_speed");
        return std::abs(u[1] / u[0]) + sound_speed(u);
    }

    Mat3 jacobian(const Vec3& u) const {
        const double v = u[1] / u[0];
        const double H = (u[2] + pressure(u)) / u[0];
        Mat3 J;
        J << 0.0, 1.0, 0.0,
            0.5 * (gamma - 3.0) * v * v, (3.0 - gamma) * v, gamma - 1.0,
            v * (0.5 * (gamma - 1.0) * v * v - H), H - (gamma - 1.0) * v * v,
            gamma * v;
        return J;
    }

    JacobianSplit jacobian_split(const Vec3& u) const {
        if (!admissible(u))
            detail::throw_invalid_state(u, "euler_jacobian_split");
        const double v = u[1] / u[0];
        const double p = pressure(u);
        const double c = std::sqrt(gamma * p / u[0]);
        const double H = (u[2] + p) / u[0];

        Mat3 R;
        R << 1.0, 1.0, 1.0,
            v - c, v, v + c,
            H - v * c, 0.5 * v * v, H + v * c;

        const double b1 = (gamma - 1.0) / (c * c);
        const double b2 = 0.5 * b1 * v * v;
        Mat3 L;
        L << 0.5 * (b2 + v / c), -0.5 * (b1 * v + 1.0 / c), 0.5 * b1,
            1.0 - b2, b1 * v, -b1,
            0.5 * (b2 - v / c), -0.5 * (b1 * v - 1.0 / c), 0.5 * b1;

        const Vec3 lambda(v - c, v, v + c);
        JacobianSplit s;
        s.plus = R * lambda.cwiseMax(0.0).asDiagonal() * L;
        s.minus = R * lambda.cwiseMin(0.0).asDiagonal() * L;
        return s;
    }

    static Vec3 from_primitive(double rho, double v, double p, double gamma) {
        return Vec3(rho, rho * v, p / (gamma - 1.0) + 0.5 * rho * v * v);
    }
    Vec3 from_primitive(double rho, double v, double p) const {
        return from_primitive(rho, v, p, gamma);
    }
};

}  // namespace pampa
