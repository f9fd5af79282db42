#pragma once

#include <string>
#include <variant>
#include <vector>

#include "pampa/grid.hpp"
#include "pampa/models.hpp"

namespace pampa {

// Solution files: header `x,kind,comp0[,comp1,comp2]`, one row per DoF with
// kind in {avg, pt}; x is the cell center for averages and the node
// coordinate for points. Values are printed with 17 significant digits so a
// re-parse is bit-identical. Files are written via create-then-rename.
void write_solution_csv(const std::string& path, const Grid1D& g,
                        const DoFField<double>& f);
void write_solution_csv(const std::string& path, const Grid1D& g,
                        const DoFField<Vec3>& f);

struct SolutionCsv {
    int n_components = 1;
    std::vector<double> x_avg;
    std::vector<double> x_pt;
    std::variant<DoFField<double>, DoFField<Vec3>> field;

    const DoFField<double>& scalar() const {
        return std::get<DoFField<double>>(field);
    }
    const DoFField<Vec3>& euler() const {
        return std::get<DoFField<Vec3>>(field);
    }
};

SolutionCsv read_solution_csv(const std::string& path);

}  // namespace pampa
