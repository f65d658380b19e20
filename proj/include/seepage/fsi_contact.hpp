#pragma once

#include "seepage/fem.hpp"
#include "seepage/mesh.hpp"
#include "seepage/params.hpp"
#include "seepage/stokes_darcy.hpp"

#include <vector>

namespace seep {

/// Structured channel with elastic top wall and porous bottom layer.
/// The reference mesh is never mutated; each step works on a column-wise
/// deformed copy. Connectivity (and hence the DofMap) is shared.
struct ChannelGeometry {
    double length = 4.0;
    double height = 1.0;
    int nx = 32;
    int ny = 8;
    Mesh reference;
    TraceMesh layer; // bottom trace, chain index == column index
    TraceMesh wall;  // top trace, chain index == column index
    DofMap dofmap;   // velocity, pressure, porous pressure, wall fields
};

ChannelGeometry make_channel_geometry(double length, double height, int nx, int ny);

enum class CouplingRegime : char {
    nitsche_fsi = 0,   // fluid <-> wall, off the contact zone
    fluid_layer = 1,   // fluid <-> porous layer (sigma_p with u_f.n)
    contact_layer = 2, // wall <-> porous layer (sigma_p with eta_dot)
};

/// Per-quadrature-point contact data on the wall interface. Quadrature
/// points are segment-major, Quadrature::segment().size() per segment.
struct ContactState {
    std::vector<double> p_gamma;
    std::vector<char> active;     // active <=> p_gamma > 0
    std::vector<double> lambda;   // gamma_C [P_gamma]_+, >= 0 as stored
    std::vector<CouplingRegime> regime;
    double gap = 0.0;             // travel budget: height - g_min
    double active_length = 0.0;
    int newton_iters = 0;

    static ContactState rest(const ChannelGeometry& geom, const PhysParams& params);
};

/// Column-wise vertical scaling so the top row follows height + eta,
/// clamped at the g_min floor. Throws GeometryError when a column height
/// is not positive even before clamping.
Mesh deform_channel_mesh(const ChannelGeometry& geom,
                         const std::vector<double>& eta, double g_min);

/// Backward-Euler blocks of the generalized-string wall: inertia
/// rho_s (eta_dot - eta_dot_prev)/dt, tension c1, spring c0, the kinematic
/// relation eta - dt eta_dot = eta_prev, the external wall load, and
/// clamped ends.
void assemble_wall(const ChannelGeometry& geom, const PhysParams& params,
                   double dt, const CoupledState& prev, SparseSystem& sys);

/// Contact contributions for a fixed active set: gamma_C (eta, w) on the
/// matrix and the multiplier/gap offsets on the right-hand side
/// (augmented-multiplier semismooth linearization of gamma_C [P_gamma]_+).
void contact_terms(const ChannelGeometry& geom, const PhysParams& params,
                   const std::vector<char>& active,
                   const std::vector<double>& lambda_old, double gap,
                   SparseSystem& sys);

/// Porous normal stress sigma_p = -P_l + sign * eps/(4 k_n) * v_n; the
/// velocity argument is u_f.n off the contact zone and eta_dot.n on it.
double sigma_p(double pl_value, double normal_velocity, const PhysParams& params,
               bool in_contact);

struct FsiStepResult {
    CoupledState state;
    ContactState contact;
};

/// One implicit step of the coupled fluid / wall / surface-Darcy / contact
/// system, solved by a semismooth active-set iteration. The fluid geometry
/// is frozen at the previous step's wall position; the max() nonlinearity
/// is the only one iterated.
FsiStepResult step_coupled(const CoupledState& state, const ContactState& contact,
                           double dt, const PhysParams& params,
                           const ChannelGeometry& geom);

/// Minimal wall-to-layer distance over the interface quadrature points.
double min_gap(const CoupledState& state, const ChannelGeometry& geom);

/// d_n at a wall quadrature point (downward displacement, positive toward
/// the layer).
double contact_dn(const CoupledState& state, const ChannelGeometry& geom, int qp);

} // namespace seep
