#pragma once

#include "seepage/fem.hpp"
#include "seepage/mesh.hpp"
#include "seepage/stokes_darcy.hpp"

#include <fstream>
#include <string>
#include <vector>

namespace seep {

/// Legacy-ASCII VTK snapshot of the bulk: VECTORS velocity, SCALARS
/// pressure and (when wall dofs exist) SCALARS displacement on the
/// wall vertices, zero elsewhere.
void write_vtk_bulk(const Mesh& mesh, const DofMap& dofmap, const CoupledState& state,
                    const std::string& path);

/// Polyline VTK for the layer trace carrying SCALARS porous_pressure.
void write_vtk_trace(const Mesh& mesh, const TraceMesh& trace, const DofMap& dofmap,
                     const CoupledState& state, const std::string& path);

/// Deterministic CSV time-series writer: header once, 17 significant
/// digits, flushed after every row.
class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::vector<std::string>& columns);
    void write_row(const std::vector<double>& values);

private:
    std::ofstream out_;
    size_t n_columns_;
};

} // namespace seep
