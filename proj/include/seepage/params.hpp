#pragma once

#include <stdexcept>
#include <utility>
#include <vector>

namespace seep {

/// All physical and numerical coefficients. Defaults follow the reference
/// two-reservoir experiment; scenario configs override them.
struct PhysParams {
    // Fluid
    double mu = 0.03;    // dynamic viscosity
    double rho_f = 1.0;  // fluid density

    // Porous layer
    double epsilon = 0.01; // layer thickness
    double k_tau = 1.0;    // tangential permeability
    double k_n = 1.0;      // normal permeability

    // Equal-order pressure stabilization constant
    double delta_stab = 0.1;

    // Reduced elastic wall
    double rho_s = 1.0; // inertia per unit area (rho_s * h_s)
    double c1 = 1.0;    // tension coefficient
    double c0 = 0.0;    // spring coefficient

    // Interface / contact
    double gamma_fsi = 3.0;   // Nitsche FSI penalty (per 1/h); default 100*mu
    // Contact augmentation parameter. Large values sharpen the augmented
    // multiplier fixed point (contraction ~ S/(S + gamma_c), S the contact
    // Schur complement), so the iteration converges in a few steps.
    double gamma_c = 1e7;
    double g_min = 1e-3;      // gap floor as fraction-free absolute value

    // Sign of the velocity term in the porous normal stress. The dissipative
    // choice is -1 (sigma_p = -P_l - eps/(4 k_n) * v_n); +1 flips it for
    // comparison runs.
    double sigma_p_velocity_sign = -1.0;

    // External pressure pushing the elastic wall down (load schedules
    // evaluate into this before each step).
    double wall_load = 0.0;

    // Current Neumann total-stress loads, (boundary tag, Pbar) pairs.
    // sigma_f n = -Pbar n on each listed tag.
    std::vector<std::pair<int, double>> neumann_loads;

    // Constrain the tangential velocity component on Neumann boundaries
    // (makes plane channel flows exact solutions of the discrete system).
    bool clamp_tangential_on_neumann = true;

    double eps_k_tau() const { return epsilon * k_tau; }
    double interface_penalty() const { return epsilon / (4.0 * k_n); }

    void check() const {
        if (mu <= 0.0 || rho_f <= 0.0 || epsilon <= 0.0)
            throw std::invalid_argument("PhysParams: mu, rho_f, epsilon must be positive");
        if (k_tau < 0.0) throw std::invalid_argument("PhysParams: k_tau must be >= 0");
        if (k_n <= 0.0) throw std::invalid_argument("PhysParams: k_n must be positive");
        if (gamma_c <= 0.0) throw std::invalid_argument("PhysParams: gamma_c must be positive");
    }
};

} // namespace seep
