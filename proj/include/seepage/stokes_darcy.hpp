#pragma once

#include "seepage/fem.hpp"
#include "seepage/mesh.hpp"
#include "seepage/params.hpp"

#include <vector>

namespace seep {

/// Time-stamped solution snapshot. Vectors are blocked per field and sized
/// by the DofMap that produced them; eta/eta_dot are empty when the wall
/// fields are absent.
struct CoupledState {
    double time = 0.0;
    std::vector<double> u;       // 2 * n_fluid, [u_x | u_y]
    std::vector<double> p;       // n_fluid
    std::vector<double> pl;      // layer-trace vertices
    std::vector<double> eta;     // wall-trace vertices
    std::vector<double> eta_dot; // wall-trace vertices

    static CoupledState zero(const DofMap& dofmap);
    static CoupledState unpack(const DofMap& dofmap, const std::vector<double>& x,
                               double time);
    std::vector<double> pack(const DofMap& dofmap) const;
};

/// No-slip on rigid and elastic-wall tags, plus the tangential clamp on
/// Neumann boundaries when enabled. Axis-aligned boundaries only.
void apply_fluid_dirichlet(const Mesh& mesh, const DofMap& dofmap,
                           const PhysParams& params, SparseSystem& sys);

/// When eps*K_tau = 0 the porous pressure is a pure multiplier for u.n = 0;
/// pins the P_l dofs whose constraint rows degenerate (sealed-only vertices
/// and vertices whose normal velocity is already strongly fixed). Call
/// after the Dirichlet conditions are set; a no-op when eps*K_tau > 0.
void pin_redundant_porous_dofs(const TraceMesh& trace, const DofMap& dofmap,
                               const PhysParams& params, SparseSystem& sys);

/// One backward-Euler step of the monolithic Stokes + surface-Darcy system.
CoupledState step(const CoupledState& state, double dt, const PhysParams& params,
                  const Mesh& mesh, const TraceMesh& trace, const DofMap& dofmap);

/// Stationary coupled solve (time term dropped).
CoupledState steady_solve(const PhysParams& params, const Mesh& mesh,
                          const TraceMesh& trace, const DofMap& dofmap);

/// Integral of u.n over an arc-length window of the trace. Sealed spans
/// contribute zero. Throws std::out_of_range for windows beyond the trace.
double compute_interface_flux(const CoupledState& state, const TraceMesh& trace,
                              const DofMap& dofmap, double arc_begin,
                              double arc_end);

struct EnergyReport {
    double e_kin = 0.0;    // (rho_f/2) |u|^2
    double d_visc = 0.0;   // mu (grad u + grad u^T) : grad u
    double d_iface = 0.0;  // eps/(4 k_n) |u.n|^2 on the fluid part of Sigma_l
    double d_darcy = 0.0;  // eps K_tau |d_tau P_l|^2
};

EnergyReport energy_report(const CoupledState& state, const PhysParams& params,
                           const Mesh& mesh, const TraceMesh& trace,
                           const DofMap& dofmap);

} // namespace seep
