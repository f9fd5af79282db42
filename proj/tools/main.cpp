#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pampa/csv.hpp"
#include "pampa/driver.hpp"

namespace {

using pampa::RunConfig;

struct CliOptions {
    RunConfig rc;
    std::string bounds = "relaxed";
    std::string lmp = "on";
    std::string limiter = "bp";
    std::string ref;  // "exact", "fine:<N>", "none"
    std::vector<int> mesh_list;
};

void apply_config_file(const std::string& path, CliOptions& opt) {
    std::ifstream is(path);
    if (!is) throw pampa::ConfigError("cannot read config file " + path);
    nlohmann::json j;
    try {
        is >> j;
    } catch (const nlohmann::json::exception& e) {
        throw pampa::ConfigError("config file " + path + ": " + e.what());
    }
    if (!j.is_object())
        throw pampa::ConfigError("config file must hold a flat object");
    for (const auto& [key, val] : j.items()) {
        if (key == "problem")
            opt.rc.problem = val.get<std::string>();
        else if (key == "cells")
            opt.rc.n_cells = val.get<int>();
        else if (key == "cfl")
            opt.rc.cfl = val.get<double>();
        else if (key == "bounds")
            opt.bounds = val.get<std::string>();
        else if (key == "lmp")
            opt.lmp = val.is_boolean() ? (val.get<bool>() ? "on" : "off")
                                       : val.get<std::string>();
        else if (key == "limiter")
            opt.limiter = val.get<std::string>();
        else if (key == "tfinal")
            opt.rc.t_final = val.get<double>();
        else if (key == "out")
            opt.rc.out_path = val.get<std::string>();
        else if (key == "unsafe")
            opt.rc.unsafe = val.get<bool>();
        else if (key == "progress")
            opt.rc.progress_every = val.get<long long>();
        else if (key == "ref")
            opt.ref = val.get<std::string>();
        else
            throw pampa::ConfigError("config file: unknown key '" + key + "'");
    }
}

void finalize(CliOptions& opt) {
    using pampa::BoundMode;
    using pampa::LimiterMode;
    using pampa::ReferenceKind;

    if (opt.bounds == "strict")
        opt.rc.bounds = BoundMode::strict_gmp;
    else if (opt.bounds == "relaxed")
        opt.rc.bounds = BoundMode::relaxed_gmp;
    else
        throw pampa::ConfigError("--bounds must be strict or relaxed");

    if (opt.lmp == "on")
        opt.rc.lmp = true;
    else if (opt.lmp == "off")
        opt.rc.lmp = false;
    else
        throw pampa::ConfigError("--lmp must be on or off");

    if (opt.limiter == "bp")
        opt.rc.limiter = LimiterMode::bp;
    else if (opt.limiter == "off")
        opt.rc.limiter = LimiterMode::high_order;
    else if (opt.limiter == "first-order")
        opt.rc.limiter = LimiterMode::first_order;
    else
        throw pampa::ConfigError("--limiter must be bp, off, or first-order");

    if (opt.ref.empty() || opt.ref == "none") {
        opt.rc.ref = ReferenceKind::none;
    } else if (opt.ref == "exact") {
        opt.rc.ref = ReferenceKind::exact;
    } else if (opt.ref.rfind("fine:", 0) == 0) {
        opt.rc.ref = ReferenceKind::fine_mesh;
        opt.rc.ref_cells = std::stoi(opt.ref.substr(5));
    } else {
        throw pampa::ConfigError("--ref must be exact, fine:<N>, or none");
    }
}

void add_common_options(CLI::App* cmd, CliOptions& opt, std::string& config) {
    cmd->add_option("--config", config, "JSON config file (flat key-value)");
    cmd->add_option("--problem", opt.rc.problem, "problem id");
    cmd->add_option("--cfl", opt.rc.cfl, "CFL number");
    cmd->add_option("--bounds", opt.bounds, "strict|relaxed");
    cmd->add_option("--lmp", opt.lmp, "on|off");
    cmd->add_option("--limiter", opt.limiter, "bp|off|first-order");
    cmd->add_option("--tfinal", opt.rc.t_final, "final time");
    cmd->add_option("--out", opt.rc.out_path, "output CSV path");
    cmd->add_flag("--unsafe", opt.rc.unsafe,
                  "acknowledge that --limiter off may crash");
    cmd->add_option("--progress", opt.rc.progress_every,
                    "print progress every N steps");
    cmd->add_option("--ref", opt.ref, "reference: exact|fine:<N>|none");
}

void print_progress(const pampa::ProgressInfo& p, bool euler) {
    if (euler)
        std::fprintf(stderr,
                     "step %lld  t=%.6g  dt=%.3e  min_rho=%.3e  min_e=%.3e\n",
                     p.step, p.t, p.dt, p.s0, p.s1);
    else
        std::fprintf(stderr,
                     "step %lld  t=%.6g  dt=%.3e  min=%.6g  max=%.6g\n",
                     p.step, p.t, p.dt, p.s0, p.s1);
}

int do_run(CliOptions& opt, bool audit_only) {
    if (opt.rc.problem.empty())
        throw pampa::ConfigError("--problem is required");
    const auto& spec = pampa::problem_by_id(opt.rc.problem);
    if (opt.rc.out_path.empty() && !audit_only) {
        const pampa::Grid1D g = pampa::problem_grid(spec, opt.rc.n_cells);
        opt.rc.out_path =
            spec.id + "_N" + std::to_string(g.n_cells) + ".csv";
    }
    const bool euler = spec.is_euler();
    auto res = pampa::run_problem(
        opt.rc, [&](const pampa::ProgressInfo& p) { print_progress(p, euler); });

    std::printf("problem %s: %d cells, %lld steps to t=%.6g (%.2fs wall)\n",
                spec.id.c_str(), res.grid.n_cells, res.steps, res.t,
                res.wall_seconds);
    std::printf("%s", pampa::format_audit_report(res.audit, euler).c_str());
    if (!opt.rc.out_path.empty())
        std::printf("solution written to %s\n", opt.rc.out_path.c_str());
    return res.audit.clean() ? 0 : 1;
}

int do_converge(CliOptions& opt) {
    if (opt.rc.problem.empty())
        throw pampa::ConfigError("--problem is required");
    if (opt.mesh_list.empty())
        throw pampa::ConfigError("--cells with a comma-separated list is required");
    const std::string out = opt.rc.out_path;
    opt.rc.out_path.clear();
    const auto table = pampa::convergence_study(opt.rc, opt.mesh_list);
    std::printf("%s", pampa::format_convergence_table(table).c_str());
    if (!out.empty()) {
        pampa::write_convergence_csv(out, table);
        std::printf("table written to %s\n", out.c_str());
    }
    return 0;
}

int do_reference(CliOptions& opt) {
    if (opt.rc.problem.empty())
        throw pampa::ConfigError("--problem is required");
    const auto& spec = pampa::problem_by_id(opt.rc.problem);
    const int n = opt.rc.n_cells > 0 ? opt.rc.n_cells : 40000;
    const double t =
        opt.rc.t_final >= 0.0 ? opt.rc.t_final : spec.t_final;
    auto field = pampa::reference_solution(spec, n, t);
    std::printf("reference %s with %d cells at t=%.6g cached at %s\n",
                spec.id.c_str(), field.n_cells(), t,
                pampa::reference_cache_path(spec, n).c_str());
    if (!opt.rc.out_path.empty()) {
        pampa::write_solution_csv(opt.rc.out_path,
                                  pampa::problem_grid(spec, n), field);
        std::printf("copy written to %s\n", opt.rc.out_path.c_str());
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bound-preserving blended point/average solver for 1D "
                 "conservation laws"};
    app.require_subcommand(1);

    CliOptions opt;
    std::string config;
    int cells = 0;
    std::vector<int> mesh_list;

    auto* run = app.add_subcommand("run", "run one problem and emit CSV");
    add_common_options(run, opt, config);
    run->add_option("--cells", cells, "cell count");

    auto* converge =
        app.add_subcommand("converge", "refinement study with error table");
    add_common_options(converge, opt, config);
    converge
        ->add_option("--cells", mesh_list,
                     "comma-separated ratio-2 mesh list, e.g. 50,100,200")
        ->delimiter(',');

    auto* audit = app.add_subcommand(
        "audit", "run one problem and report the positivity/bounds audit");
    add_common_options(audit, opt, config);
    audit->add_option("--cells", cells, "cell count");

    auto* reference = app.add_subcommand(
        "reference", "generate and cache a first-order fine-mesh reference");
    add_common_options(reference, opt, config);
    reference->add_option("--cells", cells, "fine cell count");

    // The config file supplies defaults; explicit flags win. Apply it before
    // parsing so CLI11 only overwrites options actually given.
    try {
        for (int i = 1; i < argc; ++i) {
            const std::string arg = argv[i];
            if (arg == "--config" && i + 1 < argc)
                apply_config_file(argv[i + 1], opt);
            else if (arg.rfind("--config=", 0) == 0)
                apply_config_file(arg.substr(9), opt);
        }
    } catch (const pampa::ConfigError& e) {
        std::fprintf(stderr, "configuration error: %s\n", e.what());
        return 2;
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 2;
    }

    try {
        opt.rc.n_cells = cells > 0 ? cells : opt.rc.n_cells;
        if (!mesh_list.empty()) opt.mesh_list = mesh_list;
        finalize(opt);
        if (run->parsed()) return do_run(opt, false);
        if (converge->parsed()) return do_converge(opt);
        if (audit->parsed()) return do_run(opt, true);
        if (reference->parsed()) return do_reference(opt);
        return 2;
    } catch (const pampa::ConfigError& e) {
        std::fprintf(stderr, "configuration error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "solver error: %s\n", e.what());
        return 1;
    }
}
