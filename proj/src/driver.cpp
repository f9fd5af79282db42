#include "pampa/driver.hpp"

#include <chrono>

#include "pampa/csv.hpp"

namespace pampa {

namespace {

template <class Model, class Audit>
RunResult run_typed(const Model& m, const ProblemSpec& spec,
                    const RunConfig& rc, const Grid1D& g,
                    DoFField<typename Model::State> field0, SchemeConfig cfg,
                    Audit& audit, const ProgressFn& progress) {
    StepControl control;
    control.cfl = rc.cfl;
    control.t_final = rc.t_final >= 0.0 ? rc.t_final : spec.t_final;
    control.dt_cap = rc.dt_cap;

    const TimeScheme scheme = rc.limiter == LimiterMode::first_order
                                  ? TimeScheme::forward_euler
                                  : TimeScheme::ssp_rk3;

    const auto on_stage = [&](const DoFField<typename Model::State>& f,
                              const StageInfo& info) {
        if (rc.collect_audit) audit.observe(f, info);
    };
    const auto on_progress = [&](const ProgressInfo& p) {
        if (progress && rc.progress_every > 0 &&
            p.step % rc.progress_every == 0)
            progress(p);
    };

    const auto start = std::chrono::steady_clock::now();
    auto res = simulate(m, g, spec.bc, std::move(field0), cfg, control, scheme,
                        on_stage, on_progress);
    const auto stop = std::chrono::steady_clock::now();

    RunResult out;
    out.spec = &spec;
    out.grid = g;
    out.audit = audit.report();
    out.steps = res.steps;
    out.t = res.t;
    out.wall_seconds = std::chrono::duration<double>(stop - start).count();
    if (!rc.out_path.empty()) write_solution_csv(rc.out_path, g, res.field);
    out.field = std::move(res.field);
    return out;
}

}  // namespace

RunResult run_problem(const RunConfig& rc, const ProgressFn& progress) {
    const ProblemSpec& spec = problem_by_id(rc.problem);
    if (rc.limiter == LimiterMode::high_order && !rc.unsafe)
        throw ConfigError(
            "--limiter off disables bound preservation and can crash; pass "
            "--unsafe to acknowledge");
    if (!(rc.cfl > 0.0) || rc.cfl > 1.0)
        throw ConfigError("cfl must lie in (0, 1]");

    const Grid1D g = problem_grid(spec, rc.n_cells);

    SchemeConfig cfg;
    cfg.limiter = rc.limiter;
    cfg.lmp = rc.lmp;
    cfg.bound_mode = rc.bounds;
    cfg.refresh_bounds_each_stage = rc.refresh_bounds_each_stage;

    if (spec.is_euler()) {
        auto field0 = initialize_euler(spec, g);
        double rho_min = field0.averages[0][0];
        double rho_max = rho_min;
        for (const auto& u : field0.averages) {
            rho_min = std::min(rho_min, u[0]);
            rho_max = std::max(rho_max, u[0]);
        }
        cfg.lmp_margin = relax_margin(rho_max - rho_min);
        EulerStageAudit audit;
        return run_typed(spec.euler(), spec, rc, g, std::move(field0), cfg,
                         audit, progress);
    }
    auto field0 = initialize_scalar(spec, g);
    cfg.bounds = bounds_from_field(field0, rc.bounds);
    cfg.lmp_margin = relax_margin(cfg.bounds.range());
    ScalarStageAudit audit(cfg.bounds);
    auto out = run_typed(spec.scalar(), spec, rc, g, std::move(field0), cfg,
                         audit, progress);
    out.scalar_bounds = cfg.bounds;
    return out;
}

ConvergenceTable convergence_study(const RunConfig& base,
                                   const std::vector<int>& meshes,
                                   const ProgressFn& progress) {
    if (meshes.size() < 2)
        throw ConfigError("convergence study needs at least two meshes");
    for (size_t i = 1; i < meshes.size(); ++i)
        if (meshes[i] != 2 * meshes[i - 1])
            throw ConfigError("meshes must form a ratio-2 refinement sequence");

    const ProblemSpec& spec = problem_by_id(base.problem);

    ReferenceKind ref = base.ref;
    if (ref == ReferenceKind::none)
        ref = has_exact_solution(spec) ? ReferenceKind::exact
                                       : ReferenceKind::fine_mesh;
    if (ref == ReferenceKind::exact && !has_exact_solution(spec))
        throw ConfigError("problem " + spec.id + " has no exact solution");

    const double t_final = base.t_final >= 0.0 ? base.t_final : spec.t_final;

    DoFField<Vec3> fine_euler;
    DoFField<double> fine_scalar;
    if (ref == ReferenceKind::fine_mesh) {
        for (int n : meshes)
            if (base.ref_cells % n != 0)
                throw ConfigError(
                    "reference cell count must be a multiple of every mesh");
        if (!spec.is_euler())
            throw ConfigError(
                "fine-mesh references are kept for Euler problems");
        fine_euler = reference_solution(spec, base.ref_cells, t_final);
    }

    ConvergenceTable table;
    table.problem = spec.id;
    for (int n : meshes) {
        RunConfig rc = base;
        rc.n_cells = n;
        rc.out_path.clear();
        rc.collect_audit = false;
        RunResult run = run_problem(rc, progress);

        ConvergenceRow row;
        row.n_cells = n;
        row.dx = run.grid.dx;
        if (spec.is_euler()) {
            if (ref == ReferenceKind::exact)
                row.err = error_norms(
                    run.grid, run.euler_field(),
                    [&](double x) { return exact_euler(spec, x, t_final); },
                    0);
            else
                row.err = error_norms_vs_fine(run.grid, run.euler_field(),
                                              fine_euler, 0);
        } else {
            if (ref == ReferenceKind::exact)
                row.err = error_norms(run.grid, run.scalar_field(),
                                      [&](double x) {
                                          return exact_scalar(spec, x, t_final);
                                      });
            else
                row.err = error_norms_vs_fine(run.grid, run.scalar_field(),
                                              fine_scalar);
        }
        if (!table.rows.empty()) {
            const auto& prev = table.rows.back();
            row.has_rate = true;
            const auto rates = [](const NormTriple& c, const NormTriple& f) {
                return NormTriple{convergence_rate(c.l1, f.l1),
                                  convergence_rate(c.l2, f.l2),
                                  convergence_rate(c.linf, f.linf)};
            };
            row.rate.avg = rates(prev.err.avg, row.err.avg);
            row.rate.pt = rates(prev.err.pt, row.err.pt);
        }
        table.rows.push_back(row);
    }
    return table;
}

}  // namespace pampa
