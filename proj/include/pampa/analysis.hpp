#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "pampa/grid.hpp"
#include "pampa/integrator.hpp"
#include "pampa/limiter.hpp"
#include "pampa/models.hpp"

namespace pampa {

struct NormTriple {
    double l1 = 0.0;
    double l2 = 0.0;
    double linf = 0.0;
};

// Discrete error norms per DoF family: L1 = dx sum|e|, L2 = sqrt(dx sum e^2),
// Linf = max|e|.
struct ErrorReport {
    NormTriple avg;
    NormTriple pt;
};

// Averages compare against the quadrature-averaged exact solution, points
// against exact samples at the nodes.
ErrorReport error_norms(const Grid1D& g, const DoFField<double>& num,
                        const std::function<double(double)>& exact);
ErrorReport error_norms(const Grid1D& g, const DoFField<Vec3>& num,
                        const std::function<Vec3(double)>& exact, int comp);

// Fine-mesh reference restricted by exact cell aggregation / node injection;
// the fine mesh must be an integer multiple of the coarse one.
ErrorReport error_norms_vs_fine(const Grid1D& g, const DoFField<double>& num,
                                const DoFField<double>& fine);
ErrorReport error_norms_vs_fine(const Grid1D& g, const DoFField<Vec3>& num,
                                const DoFField<Vec3>& fine, int comp);

inline double convergence_rate(double e_coarse, double e_fine) {
    return std::log2(e_coarse / e_fine);
}

struct ConvergenceRow {
    int n_cells = 0;
    double dx = 0.0;
    ErrorReport err;
    ErrorReport rate;  // valid when has_rate
    bool has_rate = false;
};

struct ConvergenceTable {
    std::string problem;
    std::vector<ConvergenceRow> rows;
};

std::string format_convergence_table(const ConvergenceTable& t);
void write_convergence_csv(const std::string& path, const ConvergenceTable& t);

// ---- stage audits ----

struct ViolationInfo {
    long long step = 0;
    int stage = 0;
    double t = 0.0;
    std::string kind;  // "avg" or "pt"
    int index = 0;
    std::string what;
};

struct AuditReport {
    long long stages = 0;
    // Euler
    double min_density = std::numeric_limits<double>::infinity();
    double min_internal_energy = std::numeric_limits<double>::infinity();
    // scalar
    double min_value = std::numeric_limits<double>::infinity();
    double max_value = -std::numeric_limits<double>::infinity();
    std::optional<ViolationInfo> first_violation;

    bool clean() const { return !first_violation.has_value(); }
};

std::string format_audit_report(const AuditReport& r, bool euler);

// Streaming accumulator over accepted stages: tracks extrema and the first
// bound violation. Reporting only; never aborts the run.
class ScalarStageAudit {
  public:
    ScalarStageAudit() = default;
    explicit ScalarStageAudit(const ScalarBounds& b)
        : lo_(b.lo()),
          hi_(b.hi()),
          tol_(1e-12 * std::max(1.0, b.range())) {}

    void observe(const DoFField<double>& f, const StageInfo& info);
    const AuditReport& report() const { return rep_; }

  private:
    double lo_ = -std::numeric_limits<double>::infinity();
    double hi_ = std::numeric_limits<double>::infinity();
    double tol_ = 0.0;
    AuditReport rep_;
};

class EulerStageAudit {
  public:
    void observe(const DoFField<Vec3>& f, const StageInfo& info);
    const AuditReport& report() const { return rep_; }

  private:
    AuditReport rep_;
};

// Whole-history forms of the audits.
AuditReport positivity_audit(const std::vector<DoFField<Vec3>>& history);
AuditReport bounds_audit(const std::vector<DoFField<double>>& history,
                         const ScalarBounds& bounds);

}  // namespace pampa
