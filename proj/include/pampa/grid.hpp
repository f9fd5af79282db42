#pragma once

#include <algorithm>
#include <cassert>
#include <cmath>
#include <vector>

#include <Eigen/Core>

#include "pampa/errors.hpp"

namespace pampa {

enum class BoundaryCondition { periodic, outflow };

// Uniform 1D mesh. Cell k spans [node(k), node(k+1)].
struct Grid1D {
    double x_left = 0.0;
    double x_right = 1.0;
    int n_cells = 0;
    double dx = 0.0;

    double node(int j) const { return x_left + j * dx; }
    double center(int k) const { return x_left + (k + 0.5) * dx; }
};

inline Grid1D build_grid(double x_left, double x_right, int n_cells) {
    if (!(x_right > x_left))
        throw ConfigError("build_grid: domain extent must be positive");
    if (n_cells < 3)
        throw ConfigError("build_grid: need at least 3 cells");
    Grid1D g;
    g.x_left = x_left;
    g.x_right = x_right;
    g.n_cells = n_cells;
    g.dx = (x_right - x_left) / n_cells;
    return g;
}

inline int node_count(int n_cells, BoundaryCondition bc) {
    // Periodic meshes identify node n_cells with node 0.
    return bc == BoundaryCondition::periodic ? n_cells : n_cells + 1;
}

template <class State>
struct StateTraits;

template <>
struct StateTraits<double> {
    static constexpr int n_components = 1;
    static double zero() { return 0.0; }
    static double component(double u, int) { return u; }
    static bool finite(double u) { return std::isfinite(u); }
};

template <int N>
struct StateTraits<Eigen::Matrix<double, N, 1>> {
    using State = Eigen::Matrix<double, N, 1>;
    static constexpr int n_components = N;
    static State zero() { return State::Zero(); }
    static double component(const State& u, int k) { return u[k]; }
    static bool finite(const State& u) { return u.allFinite(); }
};

// Degrees of freedom of one solution snapshot: one average per cell, one
// point value per node. Immutable during a stage evaluation; stages write a
// fresh field.
template <class StateT>
struct DoFField {
    using State = StateT;
    using Traits = StateTraits<StateT>;

    std::vector<State> averages;
    std::vector<State> points;

    int n_cells() const { return static_cast<int>(averages.size()); }
    int n_points() const { return static_cast<int>(points.size()); }
    static constexpr int n_components() { return Traits::n_components; }
};

template <class State>
DoFField<State> make_field(const Grid1D& g, BoundaryCondition bc) {
    DoFField<State> f;
    f.averages.assign(g.n_cells, StateTraits<State>::zero());
    f.points.assign(node_count(g.n_cells, bc), StateTraits<State>::zero());
    return f;
}

namespace detail {
inline int wrap_index(int i, int n) {
    int m = i % n;
    return m < 0 ? m + n : m;
}
inline int clamp_index(int i, int n) { return std::clamp(i, 0, n - 1); }
}  // namespace detail

// Ghost-padded read access. Periodic wraps modulo the entity count; outflow
// clamps to the nearest stored entry (zero-gradient ghosts).
template <class State>
struct PaddedView {
    const DoFField<State>* field = nullptr;
    BoundaryCondition bc = BoundaryCondition::periodic;
    int halo = 2;

    State avg(int i) const {
        const int n = field->n_cells();
        assert(i >= -halo && i <= n - 1 + halo);
        return field->averages[map_cell(i)];
    }
    State pt(int j) const {
        const int n = field->n_points();
        assert(j >= -halo && j <= n - 1 + halo);
        return field->points[map_point(j)];
    }
    int map_cell(int i) const {
        const int n = field->n_cells();
        return bc == BoundaryCondition::periodic ? detail::wrap_index(i, n)
                                                 : detail::clamp_index(i, n);
    }
    int map_point(int j) const {
        const int n = field->n_points();
        return bc == BoundaryCondition::periodic ? detail::wrap_index(j, n)
                                                 : detail::clamp_index(j, n);
    }
};

template <class State>
PaddedView<State> padded_view(const DoFField<State>& f, BoundaryCondition bc,
                              int halo = 2) {
    assert(halo >= 0 && halo <= 2);
    return PaddedView<State>{&f, bc, halo};
}

}  // namespace pampa
