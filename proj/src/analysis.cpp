#include "pampa/analysis.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "pampa/quadrature.hpp"

namespace pampa {

namespace {

struct NormAccum {
    double sum_abs = 0.0;
    double sum_sq = 0.0;
    double max_abs = 0.0;

    void add(double e) {
        const double a = std::abs(e);
        sum_abs += a;
        sum_sq += e * e;
        max_abs = std::max(max_abs, a);
    }
    NormTriple finish(double dx) const {
        return {dx * sum_abs, std::sqrt(dx * sum_sq), max_abs};
    }
};

template <class State, class AvgRef, class PtRef>
ErrorReport norms_impl(const Grid1D& g, const DoFField<State>& num,
                       AvgRef&& avg_ref, PtRef&& pt_ref, int comp) {
    using Traits = StateTraits<State>;
    NormAccum avg, pt;
    for (int k = 0; k < num.n_cells(); ++k)
        avg.add(Traits::component(num.averages[k], comp) - avg_ref(k));
    for (int j = 0; j < num.n_points(); ++j)
        pt.add(Traits::component(num.points[j], comp) - pt_ref(j));
    return {avg.finish(g.dx), pt.finish(g.dx)};
}

template <class State>
void check_fine(const Grid1D& g, const DoFField<State>& num,
                const DoFField<State>& fine) {
    if (fine.n_cells() % num.n_cells() != 0)
        throw ConfigError(
            "reference mesh is not an integer multiple of the run mesh");
    const int r = fine.n_cells() / num.n_cells();
    if ((num.n_points() - 1) * r > fine.n_points() - 1 &&
        num.n_points() * r != fine.n_points())
        throw ConfigError("reference node layout incompatible with run mesh");
    (void)g;
}

}  // namespace

ErrorReport error_norms(const Grid1D& g, const DoFField<double>& num,
                        const std::function<double(double)>& exact) {
    return norms_impl(
        g, num,
        [&](int k) { return cell_average(exact, g.node(k), g.node(k + 1)); },
        [&](int j) { return exact(g.node(j)); }, 0);
}

ErrorReport error_norms(const Grid1D& g, const DoFField<Vec3>& num,
                        const std::function<Vec3(double)>& exact, int comp) {
    const auto exact_comp = [&](double x) { return exact(x)[comp]; };
    return norms_impl(
        g, num,
        [&](int k) {
            return cell_average(exact_comp, g.node(k), g.node(k + 1));
        },
        [&](int j) { return exact_comp(g.node(j)); }, comp);
}

ErrorReport error_norms_vs_fine(const Grid1D& g, const DoFField<double>& num,
                                const DoFField<double>& fine) {
    check_fine(g, num, fine);
    const int r = fine.n_cells() / num.n_cells();
    return norms_impl(
        g, num,
        [&](int k) {
            double s = 0.0;
            for (int i = 0; i < r; ++i) s += fine.averages[k * r + i];
            return s / r;
        },
        [&](int j) { return fine.points[j * r]; }, 0);
}

ErrorReport error_norms_vs_fine(const Grid1D& g, const DoFField<Vec3>& num,
                                const DoFField<Vec3>& fine, int comp) {
    check_fine(g, num, fine);
    const int r = fine.n_cells() / num.n_cells();
    return norms_impl(
        g, num,
        [&](int k) {
            double s = 0.0;
            for (int i = 0; i < r; ++i) s += fine.averages[k * r + i][comp];
            return s / r;
        },
        [&](int j) { return fine.points[j * r][comp]; }, comp);
}

namespace {

void append_row(std::string& out, const char* quantity,
                const ConvergenceRow& row) {
    char buf[256];
    const auto fmt = [&](double err, double rate, bool has_rate) {
        char cell[64];
        if (has_rate)
            std::snprintf(cell, sizeof(cell), "%-11.3e %-6.2f", err, rate);
        else
            std::snprintf(cell, sizeof(cell), "%-11.3e %-6s", err, "-");
        return std::string(cell);
    };
    const NormTriple& e = quantity[0] == 'a' ? row.err.avg : row.err.pt;
    const NormTriple& rt = quantity[0] == 'a' ? row.rate.avg : row.rate.pt;
    std::snprintf(buf, sizeof(buf), "%-8s %8d  %-10.3e  %s %s %s\n", quantity,
                  row.n_cells, row.dx,
                  fmt(e.l1, rt.l1, row.has_rate).c_str(),
                  fmt(e.l2, rt.l2, row.has_rate).c_str(),
                  fmt(e.linf, rt.linf, row.has_rate).c_str());
    out += buf;
}

}  // namespace

std::string format_convergence_table(const ConvergenceTable& t) {
    std::string out;
    char buf[256];
    std::snprintf(buf, sizeof(buf), "problem: %s\n%-8s %8s  %-10s  %-18s %-18s %-18s\n",
                  t.problem.c_str(), "quantity", "cells", "dx",
                  "L1-error    rate", "L2-error    rate", "Linf-error  rate");
    out += buf;
    for (const auto& row : t.rows) append_row(out, "average", row);
    for (const auto& row : t.rows) append_row(out, "point", row);
    return out;
}

void write_convergence_csv(const std::string& path,
                           const ConvergenceTable& t) {
    std::string out =
        "quantity,cells,dx,l1,l1_rate,l2,l2_rate,linf,linf_rate\n";
    char buf[256];
    const auto emit = [&](const char* q, const ConvergenceRow& row,
                          const NormTriple& e, const NormTriple& r) {
        if (row.has_rate)
            std::snprintf(buf, sizeof(buf),
                          "%s,%d,%.17g,%.17g,%.4f,%.17g,%.4f,%.17g,%.4f\n", q,
                          row.n_cells, row.dx, e.l1, r.l1, e.l2, r.l2, e.linf,
                          r.linf);
        else
            std::snprintf(buf, sizeof(buf),
                          "%s,%d,%.17g,%.17g,,%.17g,,%.17g,\n", q, row.n_cells,
                          row.dx, e.l1, e.l2, e.linf);
        out += buf;
    };
    for (const auto& row : t.rows) emit("average", row, row.err.avg, row.rate.avg);
    for (const auto& row : t.rows) emit("point", row, row.err.pt, row.rate.pt);

    namespace fs = std::filesystem;
    const fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    const fs::path tmp = target.string() + ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw ConfigError("cannot write " + tmp.string());
        os << out;
    }
    fs::rename(tmp, target);
}

void ScalarStageAudit::observe(const DoFField<double>& f,
                               const StageInfo& info) {
    ++rep_.stages;
    const auto scan = [&](const std::vector<double>& v, const char* kind) {
        for (int i = 0; i < static_cast<int>(v.size()); ++i) {
            const double u = v[i];
            rep_.min_value = std::min(rep_.min_value, u);
            rep_.max_value = std::max(rep_.max_value, u);
            if (!rep_.first_violation &&
                (!std::isfinite(u) || u < lo_ - tol_ || u > hi_ + tol_)) {
                std::ostringstream os;
                os << "value " << u << " outside [" << lo_ << ", " << hi_
                   << "] + " << tol_;
                rep_.first_violation = ViolationInfo{
                    info.step, info.stage, info.t, kind, i, os.str()};
            }
        }
    };
    scan(f.averages, "avg");
    scan(f.points, "pt");
}

void EulerStageAudit::observe(const DoFField<Vec3>& f, const StageInfo& info) {
    ++rep_.stages;
    const auto scan = [&](const std::vector<Vec3>& v, const char* kind) {
        for (int i = 0; i < static_cast<int>(v.size()); ++i) {
            const Vec3& u = v[i];
            const double e = EulerModel::internal_energy(u);
            rep_.min_density = std::min(rep_.min_density, u[0]);
            rep_.min_internal_energy = std::min(rep_.min_internal_energy, e);
            if (!rep_.first_violation &&
                (!u.allFinite() || !(u[0] > 0.0) || !(e > 0.0))) {
                std::ostringstream os;
                os << "state (" << u[0] << ", " << u[1] << ", " << u[2]
                   << ") outside invariant domain";
                rep_.first_violation = ViolationInfo{
                    info.step, info.stage, info.t, kind, i, os.str()};
            }
        }
    };
    scan(f.averages, "avg");
    scan(f.points, "pt");
}

AuditReport positivity_audit(const std::vector<DoFField<Vec3>>& history) {
    EulerStageAudit audit;
    for (int s = 0; s < static_cast<int>(history.size()); ++s)
        audit.observe(history[s], StageInfo{s, 0, 0.0, 0.0});
    return audit.report();
}

AuditReport bounds_audit(const std::vector<DoFField<double>>& history,
                         const ScalarBounds& bounds) {
    ScalarStageAudit audit(bounds);
    for (int s = 0; s < static_cast<int>(history.size()); ++s)
        audit.observe(history[s], StageInfo{s, 0, 0.0, 0.0});
    return audit.report();
}

std::string format_audit_report(const AuditReport& r, bool euler) {
    std::ostringstream os;
    os << "stages observed: " << r.stages << "\n";
    if (euler)
        os << "min density:         " << r.min_density << "\n"
           << "min internal energy: " << r.min_internal_energy << "\n";
    else
        os << "min value: " << r.min_value << "\n"
           << "max value: " << r.max_value << "\n";
    if (r.first_violation) {
        const auto& v = *r.first_violation;
        os << "FIRST VIOLATION at step " << v.step << " stage " << v.stage
           << " (" << v.kind << " index " << v.index << "): " << v.what
           << "\n";
    } else {
        os << "no violations\n";
    }
    return os.str();
}

}  // namespace pampa
