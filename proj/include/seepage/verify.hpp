#pragma once

#include <string>
#include <vector>

namespace seep::verify {

struct ConvergenceRow {
    double h = 0.0;
    double err_l2 = 0.0;
    double err_h1 = 0.0;
    double rate = 0.0; // vs previous row, from the L2 column
};

struct ConvergenceTable {
    std::string title;
    std::vector<ConvergenceRow> rows;

    double final_rate() const;
    std::string format() const;
};

/// Standalone surface Darcy equation on (0,1) with the manufactured
/// solution P(x) = cos(2 pi x) (sealed-end compatible), uniform
/// refinements starting at 16 segments.
ConvergenceTable mms_surface_darcy(int levels, double eps_k_tau = 0.01);

struct ChannelFlowResult {
    ConvergenceTable table;
    double probe_velocity = 0.0;       // centerline (Poiseuille) / slip wall
    double probe_velocity_exact = 0.0;
    double flux = 0.0;                 // cross-section flux at mid-channel
    double flux_exact = 0.0;
    double un_l1 = 0.0;                // integral of |u.n| over the layer
    double tangential_traction = 0.0;  // weak traction residual on the layer
};

/// No-slip channel driven by a pressure drop, against the analytic
/// Poiseuille profile u(y) = G y (H - y) / (2 mu). Coarsest level 32x8.
ChannelFlowResult poiseuille_check(int levels);

/// Channel with an impermeable sealed layer on the bottom (k_n = 1e-8,
/// eps K_tau = 0), against the analytic free-slip profile
/// u(y) = G (H^2 - y^2) / (2 mu).
ChannelFlowResult slip_channel_check(int levels);

} // namespace seep::verify
