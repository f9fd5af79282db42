#include "pampa/problems.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <numbers>

#include "pampa/csv.hpp"
#include "pampa/quadrature.hpp"

namespace pampa {

namespace {

constexpr double kPi = std::numbers::pi;

// Piecewise initial data. Piece i is valid on (x_hi[i-1], x_hi[i]]; a value
// exactly at a breakpoint evaluates the piece ending there, i.e. the left
// state at a discontinuity. Constant pieces carry their value so cells that
// lie inside one piece average exactly (plateau data must stay bit-exact, or
// tiny quadrature residue turns zero wave speeds into near-zero ones).
template <class V>
struct Piecewise {
    struct Piece {
        double x_hi;
        std::function<V(double)> f;
        bool constant = false;
    };
    std::vector<Piece> pieces;

    // Grid nodes meant to sit on a breakpoint can land an ulp away; snap
    // them so plateau averages stay exact and discontinuity nodes take the
    // left state.
    double snap(double x) const {
        for (const auto& p : pieces) {
            if (!std::isfinite(p.x_hi)) continue;
            if (std::abs(x - p.x_hi) <= 1e-12 * std::max(1.0, std::abs(p.x_hi)))
                return p.x_hi;
        }
        return x;
    }

    V at(double x_raw) const {
        const double x = snap(x_raw);
        for (const auto& p : pieces)
            if (x <= p.x_hi) return p.f(x);
        return pieces.back().f(x);
    }
    V average(double a_raw, double b_raw) const {
        const double a = snap(a_raw);
        const double b = snap(b_raw);
        // single-piece cells: exact for constants
        for (const auto& p : pieces) {
            if (b <= p.x_hi) {
                if (p.constant) return p.f(a);
                break;
            }
            if (a < p.x_hi) break;
        }
        V acc = StateTraits<V>::zero();
        double lo = a;
        for (const auto& p : pieces) {
            if (lo >= b) break;
            const double hi = std::min(b, p.x_hi);
            if (hi > lo) {
                if (p.constant)
                    acc = acc + (hi - lo) * p.f(lo);
                else
                    acc = acc + gauss5(p.f, lo, hi);
                lo = hi;
            }
        }
        return V(acc / (b - a));
    }
};

const double kInf = std::numeric_limits<double>::infinity();

Piecewise<double> scalar_ic(const ProblemSpec& spec) {
    using P = Piecewise<double>;
    if (spec.id == "advect_cos")
        return P{{{kInf, [](double x) { return std::cos(2.0 * kPi * x); }}}};
    if (spec.id == "jiang_shu") {
        const double a = 0.5, z = -0.7, delta = 0.005, alpha = 10.0;
        const double beta = std::log(2.0) / (36.0 * delta * delta);
        const auto g1 = [beta](double x, double c) {
            return std::exp(-beta * (x - c) * (x - c));
        };
        const auto g2 = [alpha](double x, double c) {
            return std::sqrt(std::max(1.0 - alpha * alpha * (x - c) * (x - c), 0.0));
        };
        const auto zero = [](double) { return 0.0; };
        return P{{{-0.8, zero, true},
                  {-0.6,
                   [=](double x) {
                       return (g1(x, z - delta) + g1(x, z + delta) +
                               4.0 * g1(x, z)) /
                              6.0;
                   }},
                  {-0.4, zero, true},
                  {-0.2, [](double) { return 1.0; }, true},
                  {0.0, zero, true},
                  {0.2,
                   [](double x) { return 1.0 - std::abs(10.0 * (x - 0.1)); }},
                  {0.4, zero, true},
                  {0.6,
                   [=](double x) {
                       return (g2(x, a - delta) + g2(x, a + delta) +
                               4.0 * g2(x, a)) /
                              6.0;
                   }},
                  {kInf, zero, true}}};
    }
    if (spec.id == "burgers_square") {
        const auto lo = [](double) { return -1.0; };
        return P{{{-0.2, lo, true},
                  {0.2, [](double) { return 2.0; }, true},
                  {kInf, lo, true}}};
    }
    if (spec.id == "buckley") {
        const auto zero = [](double) { return 0.0; };
        return P{{{-0.5, zero, true},
                  {0.0, [](double) { return 1.0; }, true},
                  {kInf, zero, true}}};
    }
    throw ConfigError("no scalar initial data for problem " + spec.id);
}

double isentropic_rho0(double x) {
    return 1.0 + 0.999995 * std::sin(kPi * x);
}

Piecewise<Vec3> euler_ic(const ProblemSpec& spec) {
    using P = Piecewise<Vec3>;
    const double g = spec.euler().gamma;
    const auto prim = [g](double rho, double v, double p) {
        return EulerModel::from_primitive(rho, v, p, g);
    };
    if (spec.id == "isentropic")
        return P{{{kInf, [=](double x) {
                       const double rho = isentropic_rho0(x);
                       return prim(rho, 0.0, std::pow(rho, g));
                   }}}};
    if (spec.id == "sod")
        return P{{{0.5, [=](double) { return prim(1.0, 0.0, 1.0); }, true},
                  {kInf, [=](double) { return prim(0.125, 0.0, 0.1); }, true}}};
    if (spec.id == "shu_osher")
        return P{{{-4.0,
                   [=](double) {
                       return prim(3.857143, 2.629369, 10.33333333333);
                   },
                   true},
                  {kInf, [=](double x) {
                       return prim(1.0 + 0.2 * std::sin(5.0 * x), 0.0, 1.0);
                   }}}};
    if (spec.id == "leblanc")
        return P{{{3.0,
                   [=](double) { return prim(1.0, 0.0, 0.1 * (g - 1.0)); },
                   true},
                  {kInf,
                   [=](double) { return prim(0.001, 0.0, 1e-7 * (g - 1.0)); },
                   true}}};
    if (spec.id == "double_rarefaction")
        return P{{{0.5, [=](double) { return prim(1.0, -2.0, 0.4); }, true},
                  {kInf, [=](double) { return prim(1.0, 2.0, 0.4); }, true}}};
    throw ConfigError("no Euler initial data for problem " + spec.id);
}

std::vector<ProblemSpec> make_registry() {
    std::vector<ProblemSpec> reg;
    const auto scalar = [](ScalarModel::Kind k) {
        return std::variant<ScalarModel, EulerModel>(ScalarModel{k});
    };
    const auto euler = [](double gamma) {
        return std::variant<ScalarModel, EulerModel>(EulerModel{gamma});
    };
    using BC = BoundaryCondition;

    reg.push_back({"advect_cos", 0.0, 1.0, BC::periodic,
                   scalar(ScalarModel::Kind::linear_advection), 3.0, 100});
    reg.push_back({"jiang_shu", -1.0, 1.0, BC::periodic,
                   scalar(ScalarModel::Kind::linear_advection), 2.0, 400});
    reg.push_back({"burgers_square", -1.0, 1.0, BC::periodic,
                   scalar(ScalarModel::Kind::burgers), 0.5, 200});
    reg.push_back({"buckley", -1.0, 1.0, BC::periodic,
                   scalar(ScalarModel::Kind::buckley_leverett), 0.4, 200});
    reg.push_back(
        {"isentropic", -1.0, 1.0, BC::periodic, euler(3.0), 0.1, 100});
    reg.push_back({"sod", 0.0, 1.0, BC::outflow, euler(1.4), 0.16, 200});
    reg.push_back(
        {"shu_osher", -5.0, 5.0, BC::outflow, euler(1.4), 1.8, 400});
    reg.push_back({"leblanc", 0.0, 9.0, BC::outflow, euler(5.0 / 3.0), 6.0, 500});
    reg.push_back({"double_rarefaction", 0.0, 1.0, BC::outflow,
                   euler(5.0 / 3.0), 0.15, 400});
    // Blast wave: 802 cells reproduce the reference layout dx = 2/401 with
    // the energized cell straddling x = 0.
    reg.push_back({"sedov", -2.0, 2.0, BC::outflow, euler(5.0 / 3.0), 0.5, 802,
                   true});
    return reg;
}

const std::vector<ProblemSpec>& registry() {
    static const std::vector<ProblemSpec> reg = make_registry();
    return reg;
}

void check_grid(const ProblemSpec& spec, const Grid1D& g) {
    const Grid1D want = problem_grid(spec, g.n_cells);
    const double tol = 1e-12 * (want.x_right - want.x_left);
    if (std::abs(g.x_left - want.x_left) > tol ||
        std::abs(g.x_right - want.x_right) > tol)
        throw ConfigError("grid does not match the domain of problem " +
                          spec.id);
}

}  // namespace

const ProblemSpec& problem_by_id(const std::string& id) {
    for (const auto& p : registry())
        if (p.id == id) return p;
    throw ConfigError("unknown problem: " + id);
}

std::vector<std::string> problem_ids() {
    std::vector<std::string> ids;
    for (const auto& p : registry()) ids.push_back(p.id);
    return ids;
}

Grid1D problem_grid(const ProblemSpec& spec, int n_cells) {
    const int n = n_cells > 0 ? n_cells : spec.default_cells;
    if (!spec.energized_cell_layout)
        return build_grid(spec.x_left, spec.x_right, n);
    if (n % 2 != 0)
        throw ConfigError(spec.id + ": cell count must be even");
    const double dx = (spec.x_right - spec.x_left) / n;
    return build_grid(spec.x_left - 0.5 * dx, spec.x_right - 0.5 * dx, n);
}

DoFField<double> initialize_scalar(const ProblemSpec& spec, const Grid1D& g) {
    if (spec.is_euler())
        throw ConfigError(spec.id + " is not a scalar problem");
    check_grid(spec, g);
    const auto ic = scalar_ic(spec);
    auto f = make_field<double>(g, spec.bc);
    for (int k = 0; k < g.n_cells; ++k)
        f.averages[k] = ic.average(g.node(k), g.node(k + 1));
    for (int j = 0; j < f.n_points(); ++j) f.points[j] = ic.at(g.node(j));
    return f;
}

DoFField<Vec3> initialize_euler(const ProblemSpec& spec, const Grid1D& g) {
    if (!spec.is_euler())
        throw ConfigError(spec.id + " is not an Euler problem");
    check_grid(spec, g);
    auto f = make_field<Vec3>(g, spec.bc);

    if (spec.energized_cell_layout) {
        const double gamma = spec.euler().gamma;
        const double e_min = 1e-12;
        const double e_max = 0.538548 / g.dx;
        for (int k = 0; k < g.n_cells; ++k)
            f.averages[k] = Vec3(1.0, 0.0, e_min);
        const int k0 = g.n_cells / 2;  // the cell [-dx/2, dx/2]
        f.averages[k0] = Vec3(1.0, 0.0, e_max / (gamma - 1.0));
        const Vec3 pt = EulerModel::from_primitive(
            1.0, 0.0, e_min / (gamma - 1.0), gamma);
        for (int j = 0; j < f.n_points(); ++j) f.points[j] = pt;
        return f;
    }

    const auto ic = euler_ic(spec);
    for (int k = 0; k < g.n_cells; ++k)
        f.averages[k] = ic.average(g.node(k), g.node(k + 1));
    for (int j = 0; j < f.n_points(); ++j) f.points[j] = ic.at(g.node(j));
    return f;
}

bool has_exact_solution(const ProblemSpec& spec) {
    return spec.id == "advect_cos" || spec.id == "isentropic";
}

double exact_scalar(const ProblemSpec& spec, double x, double t) {
    if (spec.id == "advect_cos") return std::cos(2.0 * kPi * (x - t));
    throw ConfigError("no exact solution for problem " + spec.id);
}

namespace {

// Root of r(y) = x + sign * sqrt(3) * rho0(y) * t - y by safeguarded Newton.
double solve_characteristic(double x, double t, double sign) {
    if (t == 0.0) return x;
    const double s3 = std::sqrt(3.0);
    const auto r = [&](double y) {
        return x + sign * s3 * isentropic_rho0(y) * t - y;
    };
    double lo = x - 4.0 * t;
    double hi = x + 4.0 * t;
    double y = x;
    for (int it = 0; it < 100; ++it) {
        const double res = r(y);
        if (std::abs(res) <= 1e-13) return y;
        if (res > 0.0)
            lo = std::max(lo, y);
        else
            hi = std::min(hi, y);
        const double drho = 0.999995 * kPi * std::cos(kPi * y);
        const double dr = sign * s3 * drho * t - 1.0;
        double next = y - res / dr;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        y = next;
    }
    throw NumericalError("isentropic characteristics: Newton did not converge");
}

}  // namespace

Vec3 exact_euler(const ProblemSpec& spec, double x, double t) {
    if (spec.id != "isentropic")
        throw ConfigError("no exact solution for problem " + spec.id);
    const double gamma = spec.euler().gamma;
    const double x1 = solve_characteristic(x, t, 1.0);
    const double x2 = solve_characteristic(x, t, -1.0);
    const double rho = 0.5 * (isentropic_rho0(x1) + isentropic_rho0(x2));
    const double v = std::sqrt(3.0) * (rho - isentropic_rho0(x1));
    const double p = std::pow(rho, gamma);
    return EulerModel::from_primitive(rho, v, p, gamma);
}

std::string reference_cache_path(const ProblemSpec& spec, int n_fine) {
    const char* dir = std::getenv("PAMPA_REF_DIR");
    const std::string base = dir && *dir ? dir : "refs";
    return base + "/" + spec.id + "_" + std::to_string(n_fine) + ".csv";
}

DoFField<Vec3> reference_solution(const ProblemSpec& spec, int n_fine,
                                  double t_final) {
    if (!spec.is_euler())
        throw ConfigError("fine-mesh references are kept for Euler problems");
    const bool cacheable = t_final == spec.t_final;
    const std::string path = reference_cache_path(spec, n_fine);

    if (cacheable && std::filesystem::exists(path)) {
        auto csv = read_solution_csv(path);
        if (csv.n_components == 3 &&
            csv.euler().n_cells() == n_fine)
            return csv.euler();
    }

    const Grid1D g = problem_grid(spec, n_fine);
    auto field = initialize_euler(spec, g);
    SchemeConfig cfg;
    cfg.limiter = LimiterMode::first_order;
    StepControl control;
    control.cfl = 0.9;
    control.t_final = t_final;
    auto res = simulate(spec.euler(), g, spec.bc, std::move(field), cfg,
                        control, TimeScheme::forward_euler, NoStageObserver{},
                        NoProgress{});
    if (cacheable) write_solution_csv(path, g, res.field);
    return std::move(res.field);
}

}  // namespace pampa
