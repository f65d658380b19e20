#include "seepage/output.hpp"

#include "seepage/errors.hpp"

#include <cstdio>

namespace seep {

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void vtk_header(std::ofstream& out, const std::string& title) {
    out << "# vtk DataFile Version 3.0\n" << title << "\nASCII\n";
}

} // namespace

void write_vtk_bulk(const Mesh& mesh, const DofMap& dofmap, const CoupledState& state,
                    const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    vtk_header(out, "seepage bulk snapshot t=" + fmt17(state.time));
    out << "DATASET UNSTRUCTURED_GRID\n";
    out << "POINTS " << mesh.n_vertices() << " double\n";
    for (const auto& v : mesh.vertices)
        out << fmt17(v.x) << " " << fmt17(v.y) << " 0\n";
    out << "CELLS " << mesh.n_triangles() << " " << 4 * mesh.n_triangles() << "\n";
    for (const auto& t : mesh.triangles)
        out << "3 " << t[0] << " " << t[1] << " " << t[2] << "\n";
    out << "CELL_TYPES " << mesh.n_triangles() << "\n";
    for (int t = 0; t < mesh.n_triangles(); ++t) out << "5\n";

    const int nf = dofmap.n_fluid_vertices();
    out << "POINT_DATA " << mesh.n_vertices() << "\n";
    out << "VECTORS velocity double\n";
    for (int v = 0; v < mesh.n_vertices(); ++v) {
        const int d = dofmap.dof(Field::vel_x, v);
        if (d < 0) { out << "0 0 0\n"; continue; }
        const int slot = d - dofmap.offset(Field::vel_x);
        out << fmt17(state.u[static_cast<size_t>(slot)]) << " "
            << fmt17(state.u[static_cast<size_t>(nf + slot)]) << " 0\n";
    }
    out << "SCALARS pressure double 1\nLOOKUP_TABLE default\n";
    for (int v = 0; v < mesh.n_vertices(); ++v) {
        const int d = dofmap.dof(Field::pressure, v);
        out << (d < 0 ? "0" : fmt17(state.p[static_cast<size_t>(d - dofmap.offset(Field::pressure))]))
            << "\n";
    }
    if (dofmap.has(Field::wall_disp)) {
        out << "SCALARS displacement double 1\nLOOKUP_TABLE default\n";
        for (int v = 0; v < mesh.n_vertices(); ++v) {
            const int d = dofmap.dof(Field::wall_disp, v);
            out << (d < 0 ? "0" : fmt17(state.eta[static_cast<size_t>(d - dofmap.offset(Field::wall_disp))]))
                << "\n";
        }
    }
}

void write_vtk_trace(const Mesh& mesh, const TraceMesh& trace, const DofMap& dofmap,
                     const CoupledState& state, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    vtk_header(out, "seepage layer trace t=" + fmt17(state.time));
    out << "DATASET POLYDATA\n";
    out << "POINTS " << trace.n_vertices() << " double\n";
    for (int i = 0; i < trace.n_vertices(); ++i) {
        const Vec2 p = mesh.vertex(trace.vertex_ids[static_cast<size_t>(i)]);
        out << fmt17(p.x) << " " << fmt17(p.y) << " 0\n";
    }
    out << "LINES " << trace.n_segments() << " " << 3 * trace.n_segments() << "\n";
    for (int s = 0; s < trace.n_segments(); ++s) out << "2 " << s << " " << s + 1 << "\n";
    out << "POINT_DATA " << trace.n_vertices() << "\n";
    out << "SCALARS porous_pressure double 1\nLOOKUP_TABLE default\n";
    const int off = dofmap.offset(Field::porous_pressure);
    for (int i = 0; i < trace.n_vertices(); ++i) {
        const int d = dofmap.dof(Field::porous_pressure, trace.vertex_ids[static_cast<size_t>(i)]);
        out << (d < 0 ? "0" : fmt17(state.pl[static_cast<size_t>(d - off)])) << "\n";
    }
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& columns)
    : out_(path), n_columns_(columns.size()) {
    if (!out_) throw std::runtime_error("cannot open for writing: " + path);
    for (size_t i = 0; i < columns.size(); ++i)
        out_ << (i ? "," : "") << columns[i];
    out_ << "\n";
    out_.flush();
}

void CsvWriter::write_row(const std::vector<double>& values) {
    if (values.size() != n_columns_)
        throw std::invalid_argument("CsvWriter: row width mismatch");
    for (size_t i = 0; i < values.size(); ++i)
        out_ << (i ? "," : "") << fmt17(values[i]);
    out_ << "\n";
    out_.flush(); // a row persists iff its step completed
}

} // namespace seep
