#pragma once

#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "pampa/analysis.hpp"
#include "pampa/integrator.hpp"
#include "pampa/problems.hpp"

namespace pampa {

enum class ReferenceKind { none, exact, fine_mesh };

struct RunConfig {
    std::string problem;
    int n_cells = 0;      // 0 = problem default
    double cfl = 0.2;
    BoundMode bounds = BoundMode::relaxed_gmp;
    bool lmp = true;
    LimiterMode limiter = LimiterMode::bp;
    double t_final = -1.0;  // < 0 = problem default
    double dt_cap = std::numeric_limits<double>::infinity();
    std::string out_path;
    ReferenceKind ref = ReferenceKind::none;
    int ref_cells = 40000;
    bool unsafe = false;         // acknowledges that `--limiter off` may crash
    long long progress_every = 0;
    bool refresh_bounds_each_stage = false;
    bool collect_audit = true;
};

struct RunResult {
    const ProblemSpec* spec = nullptr;
    Grid1D grid;
    std::variant<DoFField<double>, DoFField<Vec3>> field;
    AuditReport audit;
    ScalarBounds scalar_bounds;  // scalar problems only
    long long steps = 0;
    double t = 0.0;
    double wall_seconds = 0.0;

    bool is_euler() const {
        return std::holds_alternative<DoFField<Vec3>>(field);
    }
    const DoFField<double>& scalar_field() const {
        return std::get<DoFField<double>>(field);
    }
    const DoFField<Vec3>& euler_field() const {
        return std::get<DoFField<Vec3>>(field);
    }
};

using ProgressFn = std::function<void(const ProgressInfo&)>;

RunResult run_problem(const RunConfig& rc, const ProgressFn& progress = {});

// Runs the configured problem on each mesh of a ratio-2 refinement sequence
// and assembles errors and rates against the configured reference
// (Euler errors are reported for the density component).
ConvergenceTable convergence_study(const RunConfig& base,
                                   const std::vector<int>& meshes,
                                   const ProgressFn& progress = {});

}  // namespace pampa
