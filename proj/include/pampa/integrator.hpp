#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <utility>
#include <vector>

#include "pampa/grid.hpp"
#include "pampa/kernels.hpp"
#include "pampa/limiter.hpp"
#include "pampa/models.hpp"

namespace pampa {

enum class LimiterMode { bp, high_order, first_order };
enum class TimeScheme { ssp_rk3, forward_euler };

struct SchemeConfig {
    LimiterMode limiter = LimiterMode::bp;
    bool lmp = true;
    // The local maximum principle runs in its relaxed form: local bounds are
    // widened by this margin (the global bounds are not). On noisy data the
    // endpoint-derivative detection factors sit on a knife edge, and without
    // the margin the local principle clips smooth extrema back to second
    // order. Set from the initial data range by the driver.
    double lmp_margin = 1e-4;
    BoundMode bound_mode = BoundMode::relaxed_gmp;
    ScalarBounds bounds;  // scalar models; fixed from initial data
    bool refresh_bounds_each_stage = false;
    EulerLimitParams euler;
};

struct StepControl {
    double cfl = 0.2;
    double t_final = 0.0;
    double dt_cap = std::numeric_limits<double>::infinity();
};

struct StageInfo {
    long long step = 0;
    int stage = 0;  // 0 = initial data
    double t = 0.0;
    double dt = 0.0;
};

struct ProgressInfo {
    long long step = 0;
    double t = 0.0;
    double dt = 0.0;
    // scalar models: (min u, max u); Euler: (min rho, min internal energy)
    double s0 = 0.0;
    double s1 = 0.0;
};

template <class Model>
struct Workspace {
    using State = typename Model::State;

    // per-entity caches
    std::vector<State> f_avg, f_pt;
    std::vector<double> s_avg, s_pt;
    // per interface / per node-side speeds
    std::vector<double> alpha, beta_l, beta_r;
    // per interface
    std::vector<State> flo, dflux, ustar, flux_total;
    std::vector<double> eta;
    // per cell
    std::vector<LocalBounds> lb;
    std::vector<char> smooth;
    // per node
    std::vector<State> phi_sum;
    std::vector<double> theta_l, theta_r;
    // stage buffers
    DoFField<State> stage1, stage2, stage3;

    void resize(int nc, int np) {
        f_avg.resize(nc);
        s_avg.resize(nc);
        f_pt.resize(np);
        s_pt.resize(np);
        alpha.resize(np);
        beta_l.resize(np);
        beta_r.resize(np);
        flo.resize(np);
        dflux.resize(np);
        ustar.resize(np);
        flux_total.resize(np);
        eta.resize(np);
        lb.resize(nc);
        smooth.assign(nc, 1);
        phi_sum.resize(np);
        theta_l.resize(np);
        theta_r.resize(np);
    }
};

namespace detail {

template <class State>
double inf_norm(const State& s) {
    if constexpr (std::is_same_v<State, double>)
        return std::abs(s);
    else
        return s.cwiseAbs().maxCoeff();
}

}  // namespace detail

// Fills flux/speed caches and the interface / half-interface speeds.
template <class Model>
void fill_speeds(const Model& m, const DoFField<typename Model::State>& f,
                 BoundaryCondition bc, Workspace<Model>& ws) {
    const int nc = f.n_cells();
    const int np = f.n_points();
    ws.resize(nc, np);
    for (int i = 0; i < nc; ++i) {
        ws.f_avg[i] = m.flux(f.averages[i]);
        ws.s_avg[i] = m.max_speed(f.averages[i]);
    }
    for (int j = 0; j < np; ++j) {
        ws.f_pt[j] = m.flux(f.points[j]);
        ws.s_pt[j] = m.max_speed(f.points[j]);
    }
    const auto pad = padded_view(f, bc, 1);
    for (int j = 0; j < np; ++j) {
        const double sl = ws.s_avg[pad.map_cell(j - 1)];
        const double sr = ws.s_avg[pad.map_cell(j)];
        ws.alpha[j] = std::max(sl, sr);
        ws.beta_l[j] = std::max(ws.s_pt[j], sl);
        ws.beta_r[j] = std::max(ws.s_pt[j], sr);
        if constexpr (requires { m.interior_speed_bound(f.points[j],
                                                        f.points[j]); }) {
            const auto al = pad.avg(j - 1);
            const auto ar = pad.avg(j);
            const auto& u = f.points[j];
            ws.alpha[j] =
                std::max(ws.alpha[j], m.interior_speed_bound(al, ar));
            ws.beta_l[j] =
                std::max(ws.beta_l[j], m.interior_speed_bound(u, al));
            ws.beta_r[j] =
                std::max(ws.beta_r[j], m.interior_speed_bound(u, ar));
        }
    }
}

// Largest speed sum entering the convex-combination constraints: the cell
// constraint alpha_j + alpha_{j+1} and the point constraint
// 2 (beta_left + beta_right) must both satisfy lambda * S <= 1.
template <class Model>
double speed_bound(const Workspace<Model>& ws, int n_cells,
                   BoundaryCondition bc) {
    const int np = static_cast<int>(ws.alpha.size());
    double s = 0.0;
    for (int k = 0; k < n_cells; ++k) {
        const int right = (k + 1 == np) ? 0 : k + 1;
        s = std::max(s, ws.alpha[k] + ws.alpha[right]);
    }
    for (int j = 0; j < np; ++j)
        s = std::max(s, 2.0 * (ws.beta_l[j] + ws.beta_r[j]));
    (void)bc;
    return s;
}

template <class Model>
double compute_dt(const Model& m, const Grid1D& g, BoundaryCondition bc,
                  const DoFField<typename Model::State>& f,
                  const StepControl& control, double t, Workspace<Model>& ws) {
    const double remaining = control.t_final - t;
    if (remaining < 0.0)
        throw SolverError("compute_dt: negative remaining time");
    fill_speeds(m, f, bc, ws);
    const double s = speed_bound(ws, f.n_cells(), bc);
    double dt = s == 0.0 ? std::numeric_limits<double>::infinity()
                         : control.cfl * g.dx / s;
    dt = std::min(dt, control.dt_cap);
    dt = std::min(dt, remaining);
    return dt;
}

// One forward Euler stage of the blended scheme, writing a fresh field.
// Order: speeds -> intermediate states -> flux coefficients (global bounds,
// then local maximum principle where the extremum detector fires) ->
// residual coefficients -> blended update of averages and points.
template <class Model>
void forward_euler_stage(const Model& m, const Grid1D& g, BoundaryCondition bc,
                         const DoFField<typename Model::State>& f,
                         const SchemeConfig& cfg, double dt,
                         Workspace<Model>& ws,
                         DoFField<typename Model::State>& out) {
    using State = typename Model::State;
    using Traits = StateTraits<State>;
    constexpr bool is_system = Model::is_system;

    const int nc = f.n_cells();
    const int np = f.n_points();
    const double lambda = dt / g.dx;
    const auto pad = padded_view(f, bc, 2);

    fill_speeds(m, f, bc, ws);
    const double s = speed_bound(ws, nc, bc);
    if (dt * s / g.dx > 1.0 + 1e-12)
        throw CflViolation("forward_euler_stage: dt exceeds convexity bound");

    const LimiterMode mode = cfg.limiter;
    const bool blended = mode == LimiterMode::bp;

    ScalarBounds bounds = cfg.bounds;
    if constexpr (!is_system) {
        if (blended && cfg.refresh_bounds_each_stage)
            bounds = bounds_from_field(f, cfg.bound_mode);
    }

    const auto favg = [&](int i) { return ws.f_avg[pad.map_cell(i)]; };
    const auto avg = [&](int i) { return f.averages[pad.map_cell(i)]; };
    const auto pt = [&](int j) { return f.points[pad.map_point(j)]; };

    // Interface quantities. Interface j sits at node j, between cells j-1
    // and j (ghost-mapped at outflow boundaries).
    for (int j = 0; j < np; ++j) {
        const State al = avg(j - 1);
        const State ar = avg(j);
        const State fl = favg(j - 1);
        const State fr = favg(j);
        const double a = ws.alpha[j];
        ws.flo[j] = (fl + fr) / 2.0 - (a / 2.0) * (ar - al);
        if (blended) {
            ws.dflux[j] = ws.f_pt[j] - ws.flo[j];
            if (a == 0.0)
                ws.ustar[j] = (al + ar) / 2.0;
            else
                ws.ustar[j] = (al + ar) / 2.0 - (fr - fl) / (2.0 * a);
        }
    }

    const bool need_lmp = blended && cfg.lmp;
    if (need_lmp) {
        for (int k = 0; k < nc; ++k) {
            const int right = (k + 1 == np) ? 0 : k + 1;
            ws.lb[k] = local_bounds(Traits::component(f.averages[k], 0),
                                    Traits::component(ws.ustar[k], 0),
                                    Traits::component(ws.ustar[right], 0));
            ws.lb[k].lo -= cfg.lmp_margin;
            ws.lb[k].hi += cfg.lmp_margin;
            ws.smooth[k] = smooth_extremum(
                Traits::component(pt(k - 1), 0),
                Traits::component(avg(k - 1), 0),
                Traits::component(pt(k), 0), Traits::component(avg(k), 0),
                Traits::component(pt(k + 1), 0),
                Traits::component(avg(k + 1), 0),
                Traits::component(pt(k + 2), 0), g.dx);
        }
    }

    // Flux blending coefficients and blended fluxes.
    switch (mode) {
        case LimiterMode::first_order:
            for (int j = 0; j < np; ++j) {
                ws.eta[j] = 0.0;
                ws.flux_total[j] = ws.flo[j];
            }
            break;
        case LimiterMode::high_order:
            for (int j = 0; j < np; ++j) {
                ws.eta[j] = 1.0;
                ws.flux_total[j] = ws.f_pt[j];
            }
            break;
        case LimiterMode::bp:
            for (int j = 0; j < np; ++j) {
                double e = 1.0;
                if (ws.alpha[j] != 0.0) {
                    const double fscale = detail::inf_norm(ws.f_pt[j]);
                    if constexpr (is_system)
                        e = euler_blending_coefficient(ws.ustar[j],
                                                       ws.dflux[j], ws.alpha[j],
                                                       cfg.euler, fscale,
                                                       "interface", j);
                    else
                        e = eta_global_scalar(ws.ustar[j], ws.dflux[j],
                                              ws.alpha[j], bounds, fscale,
                                              "interface", j);
                    if (need_lmp) {
                        const int kl = pad.map_cell(j - 1);
                        const int kr = pad.map_cell(j);
                        if (!ws.smooth[kl] || !ws.smooth[kr]) {
                            const double el = eta_local_scalar(
                                Traits::component(ws.ustar[j], 0),
                                Traits::component(ws.dflux[j], 0), ws.alpha[j],
                                ws.lb[kl], ws.lb[kr],
                                std::abs(Traits::component(ws.f_pt[j], 0)),
                                "interface", j);
                            e = std::min(e, el);
                        }
                    }
                }
                ws.eta[j] = e;
                ws.flux_total[j] = ws.flo[j] + e * ws.dflux[j];
            }
            break;
    }

    // Node residuals, residual blending coefficients, and blended residual
    // sums. Point values get no local maximum principle.
    for (int j = 0; j < np; ++j) {
        const State u = f.points[j];
        const State al = avg(j - 1);
        const State ar = avg(j);
        const State fu = ws.f_pt[j];
        const State fal = favg(j - 1);
        const State far = favg(j);
        const double bl = ws.beta_l[j];
        const double br = ws.beta_r[j];

        const State phi_l_lo = (fu - fal) / 2.0 - (bl / 2.0) * (al - u);
        const State phi_r_lo = (far - fu) / 2.0 - (br / 2.0) * (ar - u);

        if (mode == LimiterMode::first_order) {
            ws.theta_l[j] = 0.0;
            ws.theta_r[j] = 0.0;
            ws.phi_sum[j] = phi_l_lo + phi_r_lo;
            continue;
        }

        const auto split = m.jacobian_split(u);
        const State wl = pt(j - 1) - 3.0 * al + 2.0 * u;
        const State wr = -2.0 * u + 3.0 * ar - pt(j + 1);
        const State phi_l_hi = split.plus * wl;
        const State phi_r_hi = split.minus * wr;

        if (mode == LimiterMode::high_order) {
            ws.theta_l[j] = 1.0;
            ws.theta_r[j] = 1.0;
            ws.phi_sum[j] = phi_l_hi + phi_r_hi;
            continue;
        }

        const State dphi_l = phi_l_hi - phi_l_lo;
        const State dphi_r = phi_r_hi - phi_r_lo;
        State ustar_l, ustar_r;
        if (bl == 0.0)
            ustar_l = (al + u) / 2.0;
        else
            ustar_l = (al + u) / 2.0 - (fu - fal) / (2.0 * bl);
        if (br == 0.0)
            ustar_r = (u + ar) / 2.0;
        else
            ustar_r = (u + ar) / 2.0 - (far - fu) / (2.0 * br);
        const double fscale = detail::inf_norm(fu);

        double tl = 1.0;
        double tr = 1.0;
        if (bl != 0.0) {
            if constexpr (is_system)
                tl = euler_blending_coefficient(ustar_l, dphi_l, bl, cfg.euler,
                                                fscale, "node-left", j);
            else
                tl = theta_point_scalar(ustar_l, dphi_l, bl, bounds, fscale,
                                        "node-left", j);
        }
        if (br != 0.0) {
            if constexpr (is_system)
                tr = euler_blending_coefficient(ustar_r, dphi_r, br, cfg.euler,
                                                fscale, "node-right", j);
            else
                tr = theta_point_scalar(ustar_r, dphi_r, br, bounds, fscale,
                                        "node-right", j);
        }
        ws.theta_l[j] = tl;
        ws.theta_r[j] = tr;
        ws.phi_sum[j] = (phi_l_lo + tl * dphi_l) + (phi_r_lo + tr * dphi_r);
    }

    out.averages.resize(nc);
    out.points.resize(np);
    for (int k = 0; k < nc; ++k) {
        const int right = (k + 1 == np) ? 0 : k + 1;
        out.averages[k] =
            f.averages[k] - lambda * (ws.flux_total[right] - ws.flux_total[k]);
    }
    for (int j = 0; j < np; ++j)
        out.points[j] = f.points[j] - 2.0 * lambda * ws.phi_sum[j];
}

template <class State>
void convex_combine(double a, const DoFField<State>& x, double b,
                    const DoFField<State>& y, DoFField<State>& out) {
    const int nc = x.n_cells();
    const int np = x.n_points();
    out.averages.resize(nc);
    out.points.resize(np);
    for (int k = 0; k < nc; ++k)
        out.averages[k] = a * x.averages[k] + b * y.averages[k];
    for (int j = 0; j < np; ++j)
        out.points[j] = a * x.points[j] + b * y.points[j];
}

struct StepOutcome {
    double dt_used = 0.0;
    int retries = 0;
};

// One SSP-RK3 step: three forward Euler stages combined convexly, so every
// bound satisfied stage-wise carries to the full step. On a CFL violation
// inside a stage the whole step restarts with dt halved (at most 10 times).
template <class Model, class StageCb>
StepOutcome ssprk3_step(const Model& m, const Grid1D& g, BoundaryCondition bc,
                        DoFField<typename Model::State>& field,
                        const SchemeConfig& cfg, double dt, Workspace<Model>& ws,
                        StageCb&& on_stage, long long step, double t) {
    constexpr int max_retries = 10;
    for (int attempt = 0; attempt <= max_retries; ++attempt) {
        try {
            forward_euler_stage(m, g, bc, field, cfg, dt, ws, ws.stage1);
            forward_euler_stage(m, g, bc, ws.stage1, cfg, dt, ws, ws.stage2);
            convex_combine(0.75, field, 0.25, ws.stage2, ws.stage2);
            forward_euler_stage(m, g, bc, ws.stage2, cfg, dt, ws, ws.stage3);
            convex_combine(1.0 / 3.0, field, 2.0 / 3.0, ws.stage3, ws.stage3);
            on_stage(ws.stage1, StageInfo{step, 1, t, dt});
            on_stage(ws.stage2, StageInfo{step, 2, t, dt});
            on_stage(ws.stage3, StageInfo{step, 3, t, dt});
            std::swap(field, ws.stage3);
            return {dt, attempt};
        } catch (const CflViolation&) {
            dt *= 0.5;
        }
    }
    throw SolverError("ssprk3_step: CFL retry cap exceeded");
}

template <class Model, class StageCb>
StepOutcome forward_euler_step(const Model& m, const Grid1D& g,
                               BoundaryCondition bc,
                               DoFField<typename Model::State>& field,
                               const SchemeConfig& cfg, double dt,
                               Workspace<Model>& ws, StageCb&& on_stage,
                               long long step, double t) {
    forward_euler_stage(m, g, bc, field, cfg, dt, ws, ws.stage1);
    on_stage(ws.stage1, StageInfo{step, 1, t, dt});
    std::swap(field, ws.stage1);
    return {dt, 0};
}

// (min, max) over all degrees of freedom for scalar models; (min density,
// min internal energy) for Euler.
template <class Model>
std::pair<double, double> field_stats(const Model& m,
                                      const DoFField<typename Model::State>& f) {
    if constexpr (Model::is_system) {
        double min_rho = std::numeric_limits<double>::infinity();
        double min_e = min_rho;
        const auto scan = [&](const auto& v) {
            for (const auto& u : v) {
                min_rho = std::min(min_rho, u[0]);
                min_e = std::min(min_e, EulerModel::internal_energy(u));
            }
        };
        scan(f.averages);
        scan(f.points);
        return {min_rho, min_e};
    } else {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        for (double u : f.averages) {
            lo = std::min(lo, u);
            hi = std::max(hi, u);
        }
        for (double u : f.points) {
            lo = std::min(lo, u);
            hi = std::max(hi, u);
        }
        (void)m;
        return {lo, hi};
    }
}

template <class Model>
struct SimulateResult {
    DoFField<typename Model::State> field;
    long long steps = 0;
    double t = 0.0;
    int max_retries_seen = 0;
};

// Advances the field to control.t_final. `on_stage` sees every accepted
// stage (the initial data counts as stage 0 of step 0); `on_progress` fires
// once per completed step.
template <class Model, class StageCb, class ProgressCb>
SimulateResult<Model> simulate(const Model& m, const Grid1D& g,
                               BoundaryCondition bc,
                               DoFField<typename Model::State> field,
                               const SchemeConfig& cfg,
                               const StepControl& control, TimeScheme scheme,
                               StageCb&& on_stage, ProgressCb&& on_progress,
                               long long max_steps = 200'000'000) {
    Workspace<Model> ws;
    SimulateResult<Model> res;
    double t = 0.0;
    long long step = 0;
    on_stage(field, StageInfo{0, 0, 0.0, 0.0});

    const double t_tol = 1e-12 * std::max(1.0, std::abs(control.t_final));
    while (control.t_final - t > t_tol) {
        const double dt = compute_dt(m, g, bc, field, control, t, ws);
        ++step;
        StepOutcome outcome;
        if (scheme == TimeScheme::ssp_rk3)
            outcome = ssprk3_step(m, g, bc, field, cfg, dt, ws, on_stage, step, t);
        else
            outcome = forward_euler_step(m, g, bc, field, cfg, dt, ws, on_stage,
                                         step, t);
        t += outcome.dt_used;
        res.max_retries_seen = std::max(res.max_retries_seen, outcome.retries);
        if (control.t_final - t <= t_tol) t = control.t_final;
        const auto [s0, s1] = field_stats(m, field);
        on_progress(ProgressInfo{step, t, outcome.dt_used, s0, s1});
        if (step >= max_steps)
            throw SolverError("simulate: step cap exceeded");
    }
    res.field = std::move(field);
    res.steps = step;
    res.t = t;
    return res;
}

struct NoProgress {
    void operator()(const ProgressInfo&) const {}
};

struct NoStageObserver {
    template <class FieldT>
    void operator()(const FieldT&, const StageInfo&) const {}
};

}  // namespace pampa
