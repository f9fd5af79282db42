#pragma once

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "pampa/grid.hpp"
#include "pampa/integrator.hpp"
#include "pampa/models.hpp"

namespace pampa {

// One benchmark problem: domain, boundary closure, model, and final time.
struct ProblemSpec {
    std::string id;
    double x_left = 0.0;
    double x_right = 1.0;
    BoundaryCondition bc = BoundaryCondition::periodic;
    std::variant<ScalarModel, EulerModel> model;
    double t_final = 1.0;
    int default_cells = 100;
    // Blast-wave layout: the mesh is re-centered so one cell straddles x = 0
    // and that cell carries the initial energy deposit.
    bool energized_cell_layout = false;

    bool is_euler() const { return std::holds_alternative<EulerModel>(model); }
    const EulerModel& euler() const { return std::get<EulerModel>(model); }
    const ScalarModel& scalar() const { return std::get<ScalarModel>(model); }
};

const ProblemSpec& problem_by_id(const std::string& id);
std::vector<std::string> problem_ids();

// Mesh for `n_cells` cells; the energized-cell layout shifts the domain by
// half a cell so that [-dx/2, dx/2] is a cell.
Grid1D problem_grid(const ProblemSpec& spec, int n_cells);

// Point values sampled at nodes (left state at discontinuities); averages by
// per-piece Gauss quadrature, exact for piecewise-constant data.
DoFField<double> initialize_scalar(const ProblemSpec& spec, const Grid1D& g);
DoFField<Vec3> initialize_euler(const ProblemSpec& spec, const Grid1D& g);

bool has_exact_solution(const ProblemSpec& spec);
double exact_scalar(const ProblemSpec& spec, double x, double t);
Vec3 exact_euler(const ProblemSpec& spec, double x, double t);

// First-order reference run on a fine mesh, cached as CSV under
// $PAMPA_REF_DIR (default "refs"), keyed by problem id and cell count.
DoFField<Vec3> reference_solution(const ProblemSpec& spec, int n_fine,
                                  double t_final);

std::string reference_cache_path(const ProblemSpec& spec, int n_fine);

}  // namespace pampa
