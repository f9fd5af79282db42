#include "pampa/csv.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "pampa/errors.hpp"

namespace pampa {

namespace {

void format_value(std::string& out, double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out += buf;
}

template <class State>
void write_rows(std::string& out, const Grid1D& g, const DoFField<State>& f) {
    using Traits = StateTraits<State>;
    const auto row = [&](double x, const char* kind, const State& u) {
        format_value(out, x);
        out += ',';
        out += kind;
        for (int c = 0; c < Traits::n_components; ++c) {
            out += ',';
            format_value(out, Traits::component(u, c));
        }
        out += '\n';
    };
    for (int k = 0; k < f.n_cells(); ++k) row(g.center(k), "avg", f.averages[k]);
    for (int j = 0; j < f.n_points(); ++j) row(g.node(j), "pt", f.points[j]);
}

template <class State>
void write_impl(const std::string& path, const Grid1D& g,
                const DoFField<State>& f) {
    std::string out = "x,kind,comp0";
    for (int c = 1; c < StateTraits<State>::n_components; ++c)
        out += ",comp" + std::to_string(c);
    out += '\n';
    write_rows(out, g, f);

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

}  // namespace

void write_solution_csv(const std::string& path, const Grid1D& g,
                        const DoFField<double>& f) {
    write_impl(path, g, f);
}

void write_solution_csv(const std::string& path, const Grid1D& g,
                        const DoFField<Vec3>& f) {
    write_impl(path, g, f);
}

SolutionCsv read_solution_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot read " + path);
    std::string line;
    if (!std::getline(is, line)) throw ConfigError(path + ": empty file");

    int ncomp = 0;
    {
        std::stringstream hs(line);
        std::string col;
        std::vector<std::string> cols;
        while (std::getline(hs, col, ',')) cols.push_back(col);
        if (cols.size() < 3 || cols[0] != "x" || cols[1] != "kind")
            throw ConfigError(path + ": unexpected header: " + line);
        ncomp = static_cast<int>(cols.size()) - 2;
    }
    if (ncomp != 1 && ncomp != 3)
        throw ConfigError(path + ": unsupported component count");

    SolutionCsv out;
    out.n_components = ncomp;
    std::vector<std::vector<double>> avg_vals, pt_vals;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::stringstream ls(line);
        std::string tok;
        std::getline(ls, tok, ',');
        const double x = std::strtod(tok.c_str(), nullptr);
        std::string kind;
        std::getline(ls, kind, ',');
        std::vector<double> vals;
        while (std::getline(ls, tok, ','))
            vals.push_back(std::strtod(tok.c_str(), nullptr));
        if (static_cast<int>(vals.size()) != ncomp)
            throw ConfigError(path + ": bad row: " + line);
        if (kind == "avg") {
            out.x_avg.push_back(x);
            avg_vals.push_back(std::move(vals));
        } else if (kind == "pt") {
            out.x_pt.push_back(x);
            pt_vals.push_back(std::move(vals));
        } else {
            throw ConfigError(path + ": unknown row kind: " + kind);
        }
    }

    if (ncomp == 1) {
        DoFField<double> f;
        for (const auto& v : avg_vals) f.averages.push_back(v[0]);
        for (const auto& v : pt_vals) f.points.push_back(v[0]);
        out.field = std::move(f);
    } else {
        DoFField<Vec3> f;
        for (const auto& v : avg_vals) f.averages.emplace_back(v[0], v[1], v[2]);
        for (const auto& v : pt_vals) f.points.emplace_back(v[0], v[1], v[2]);
        out.field = std::move(f);
    }
    return out;
}

}  // namespace pampa
