#include "seepage/scenario.hpp"

#include "seepage/errors.hpp"
#include "seepage/fsi_contact.hpp"
#include "seepage/output.hpp"
#include "seepage/stokes_darcy.hpp"
#include "seepage/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>

namespace seep {

namespace {

std::string snapshot_name(const std::string& stem, int index) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%s_%05d.vtk", stem.c_str(), index);
    return buf;
}

int run_two_reservoir(const Scenario& s, const std::string& out_dir) {
    const Mesh mesh = build_scenario_mesh(s);
    const TraceMesh trace = extract_trace(mesh, tags::porous_layer);
    FieldSelection fields;
    fields.porous = true;
    const DofMap dm = build_dof_map(mesh, &trace, nullptr, fields);

    const double w1 = s.reservoirs.width1;
    const double w2 = s.reservoirs.width2;
    const double gap = s.reservoirs.gap;

    CsvWriter csv(out_dir + "/timeseries.csv", {"t", "flux_res1", "flux_res2", "max_Pl"});
    CoupledState state = CoupledState::zero(dm);

    const int n_steps = static_cast<int>(std::llround(s.t_end / s.dt));
    int snapshot = 0;
    for (int step_i = 1; step_i <= n_steps; ++step_i) {
        const double t_next = step_i * s.dt;
        PhysParams params = s.params;
        params.neumann_loads = {{tags::neumann_left, s.load_at(t_next)},
                                {tags::neumann_right, 0.0}};
        state = step(state, s.dt, params, mesh, trace, dm);

        const double f1 = compute_interface_flux(state, trace, dm, 0.0, w1);
        const double f2 = compute_interface_flux(state, trace, dm, w1 + gap, w1 + gap + w2);
        const double max_pl =
            state.pl.empty() ? 0.0 : *std::max_element(state.pl.begin(), state.pl.end());
        csv.write_row({state.time, f1, f2, max_pl});

        if (s.output_every > 0 && step_i % s.output_every == 0) {
            write_vtk_bulk(mesh, dm, state, out_dir + "/" + snapshot_name("bulk", snapshot));
            write_vtk_trace(mesh, trace, dm, state,
                            out_dir + "/" + snapshot_name("trace", snapshot));
            ++snapshot;
        }
    }
    return 0;
}

int run_channel_contact(const Scenario& s, const std::string& out_dir) {
    ChannelGeometry geom = make_channel_geometry(s.length, s.height, s.nx, s.ny);

    CsvWriter csv(out_dir + "/timeseries.csv",
                  {"t", "min_gap", "contact_length", "flux_total"});
    CoupledState state = CoupledState::zero(geom.dofmap);
    ContactState contact = ContactState::rest(geom, s.params);

    const int n_steps = static_cast<int>(std::llround(s.t_end / s.dt));
    int snapshot = 0;
    for (int step_i = 1; step_i <= n_steps; ++step_i) {
        const double t_next = step_i * s.dt;
        PhysParams params = s.params;
        params.wall_load = s.load_at(t_next);
        params.neumann_loads = {{tags::neumann_left, 0.0}, {tags::neumann_right, 0.0}};

        FsiStepResult result = step_coupled(state, contact, s.dt, params, geom);
        state = result.state;
        contact = result.contact;

        const double flux = compute_interface_flux(state, geom.layer, geom.dofmap, 0.0,
                                                   geom.layer.total_length());
        csv.write_row({state.time, min_gap(state, geom), contact.active_length, flux});

        if (s.output_every > 0 && step_i % s.output_every == 0) {
            const Mesh deformed = deform_channel_mesh(geom, state.eta, params.g_min);
            write_vtk_bulk(deformed, geom.dofmap, state,
                           out_dir + "/" + snapshot_name("bulk", snapshot));
            write_vtk_trace(deformed, geom.layer, geom.dofmap, state,
                            out_dir + "/" + snapshot_name("trace", snapshot));
            ++snapshot;
        }
    }
    return 0;
}

} // namespace

Mesh build_scenario_mesh(const Scenario& s) {
    if (!s.mesh_file.empty()) {
        Mesh mesh = read_mesh(s.mesh_file);
        mesh.validate();
        return mesh;
    }
    switch (s.kind) {
    case ScenarioKind::channel_contact:
        return generate_channel_mesh(s.length, s.height, s.nx, s.ny);
    case ScenarioKind::two_reservoir:
    default:
        return generate_two_reservoir_mesh(s.reservoirs);
    }
}

int run_scenario(const Scenario& s, const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    try {
        switch (s.kind) {
        case ScenarioKind::verify:
            return run_verify(s.verify_suite);
        case ScenarioKind::two_reservoir:
            return run_two_reservoir(s, out_dir);
        case ScenarioKind::channel_contact:
            return run_channel_contact(s, out_dir);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}

int run_verify(const std::string& suite) {
    bool ok = true;
    auto check = [&ok](bool pass, const std::string& what) {
        std::cout << (pass ? "  [ok] " : "  [FAIL] ") << what << "\n";
        ok = ok && pass;
    };

    if (suite == "mms" || suite == "all") {
        const auto table = verify::mms_surface_darcy(4);
        std::cout << table.format();
        check(table.final_rate() >= 1.9, "L2 rate >= 1.9");
    }
    if (suite == "poiseuille" || suite == "all") {
        const auto r = verify::poiseuille_check(3);
        std::cout << r.table.format();
        check(r.table.final_rate() >= 1.8, "L2 rate >= 1.8");
        check(std::abs(r.probe_velocity - r.probe_velocity_exact) <=
                  0.02 * std::abs(r.probe_velocity_exact),
              "centerline velocity within 2%");
    }
    if (suite == "slip" || suite == "all") {
        const auto r = verify::slip_channel_check(2);
        std::cout << r.table.format();
        check(std::abs(r.probe_velocity - r.probe_velocity_exact) <=
                  0.02 * std::abs(r.probe_velocity_exact),
              "slip-wall velocity within 2%");
        check(r.un_l1 <= 1e-6 * std::abs(r.flux), "normal flux <= 1e-6 of channel flux");
    }
    if (suite != "mms" && suite != "poiseuille" && suite != "slip" && suite != "all")
        throw ConfigError("unknown verify suite '" + suite + "'");
    return ok ? 0 : 1;
}

} // namespace seep
