#pragma once

#include "seepage/mesh.hpp"
#include "seepage/params.hpp"

#include <array>
#include <vector>

namespace seep {

enum class Field : int {
    vel_x = 0,
    vel_y = 1,
    pressure = 2,
    porous_pressure = 3,
    wall_disp = 4,
    wall_vel = 5,
};
constexpr int n_fields = 6;

struct FieldSelection {
    bool velocity = true;
    bool pressure = true;
    bool porous = false;
    bool wall = false;
};

/// Contiguous 0-based dof numbering, blocked by field:
/// [u_x | u_y | p | P_l | eta | eta_dot]. P1 everywhere: fluid dofs at
/// triangle vertices, P_l at layer-trace vertices, wall dofs at wall-trace
/// vertices.
class DofMap {
public:
    int total = 0;

    int dof(Field f, int mesh_vertex) const;
    int offset(Field f) const { return offset_[static_cast<size_t>(f)]; }
    int count(Field f) const { return count_[static_cast<size_t>(f)]; }
    bool has(Field f) const { return count(f) > 0; }

    int n_fluid_vertices() const { return n_fluid_; }
    /// Mesh vertex for fluid slot i (inverse of the u/p numbering).
    int fluid_vertex(int slot) const { return fluid_vertices_[static_cast<size_t>(slot)]; }

private:
    friend DofMap build_dof_map(const Mesh&, const TraceMesh*, const TraceMesh*,
                                FieldSelection);
    std::array<int, n_fields> offset_{};
    std::array<int, n_fields> count_{};
    std::vector<int> fluid_slot_;     // mesh vertex -> fluid slot, -1
    std::vector<int> trace_slot_;     // mesh vertex -> layer-trace slot, -1
    std::vector<int> wall_slot_;      // mesh vertex -> wall-trace slot, -1
    std::vector<int> fluid_vertices_; // fluid slot -> mesh vertex
    int n_fluid_ = 0;
};

DofMap build_dof_map(const Mesh& mesh, const TraceMesh* layer,
                     const TraceMesh* wall, FieldSelection fields);

/// Quadrature rules on the reference triangle (0,0)-(1,0)-(0,1) and the
/// reference segment [0,1]. Triangle rule is exact through degree 4,
/// segment rule through degree 5.
struct Quadrature {
    struct TriPoint { double x, y, w; }; // weights sum to 1/2
    struct SegPoint { double s, w; };    // weights sum to 1
    static const std::array<TriPoint, 6>& triangle();
    static const std::array<SegPoint, 3>& segment();
};

struct Triplet {
    int row;
    int col;
    double value;
};

/// Monolithic sparse linear system. Accumulate entries, then finalize()
/// into CSR (strictly increasing columns per row, duplicates summed).
/// Dirichlet rows are replaced by identity rows at finalize time.
class SparseSystem {
public:
    explicit SparseSystem(int n);

    int size() const { return n_; }
    void add(int row, int col, double value);
    void add_rhs(int row, double value) { rhs_[static_cast<size_t>(row)] += value; }
    void set_dirichlet(int dof, double value);
    bool is_dirichlet(int dof) const;

    void finalize();
    bool finalized() const { return finalized_; }

    const std::vector<int>& row_offsets() const { return row_ptr_; }
    const std::vector<int>& cols() const { return col_; }
    const std::vector<double>& values() const { return val_; }
    const std::vector<double>& rhs() const { return rhs_; }
    std::vector<double>& rhs() { return rhs_; }

    std::vector<double> matvec(const std::vector<double>& x) const;
    /// A x - b
    std::vector<double> residual(const std::vector<double>& x) const;
    bool symmetric_pattern() const;

private:
    int n_;
    bool finalized_ = false;
    std::vector<Triplet> triplets_;
    std::vector<double> rhs_;
    std::vector<char> dirichlet_;
    std::vector<double> dirichlet_value_;
    std::vector<int> row_ptr_, col_;
    std::vector<double> val_;
};

/// Sparse direct solve (LU with partial pivoting). Throws
/// SingularSystemError on empty rows/columns or factorization failure;
/// verifies the residual against 1e-10 * (1 + |b|).
std::vector<double> solve_linear(const SparseSystem& system);

// --- Assembly -------------------------------------------------------------

/// Backward-Euler Stokes block: mass (skipped when dt <= 0, the stationary
/// form), viscous mu(grad u + grad u^T):grad v, pressure coupling -(p,div v)
/// +(q,div u), Brezzi-Pitkaranta stabilization, and Neumann loads
/// -(Pbar n, v) from params.neumann_loads. u_prev feeds the time term.
void assemble_stokes_block(const Mesh& mesh, const DofMap& dofmap,
                           const PhysParams& params, double dt,
                           const std::vector<double>* u_prev,
                           SparseSystem& sys);

/// 1D tangential stiffness eps*K_tau (d_tau P, d_tau q) along the trace,
/// including sealed segments.
void assemble_surface_darcy(const TraceMesh& trace, const DofMap& dofmap,
                            double eps_k_tau, SparseSystem& sys);

/// Interface blocks on fluid-adjacent segments: +(P_l, v.n), the
/// eps/(4 k_n) (u.n, v.n) penalty, and -(u.n, q_l). Sealed segments are
/// skipped. The two coupling blocks are exact transposes up to sign.
void assemble_interface_coupling(const TraceMesh& trace, const DofMap& dofmap,
                                 const PhysParams& params, SparseSystem& sys);

} // namespace seep
