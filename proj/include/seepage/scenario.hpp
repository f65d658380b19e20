#pragma once

#include "seepage/config.hpp"
#include "seepage/mesh.hpp"

#include <string>

namespace seep {

/// The mesh a scenario runs on: the configured SEEPMESH file when given,
/// otherwise the built-in generator for the scenario kind.
Mesh build_scenario_mesh(const Scenario& scenario);

/// Full scenario time loop with CSV/VTK output. Returns a process exit
/// status (0 on success); solver errors are reported on stderr after
/// flushing partial outputs.
int run_scenario(const Scenario& scenario, const std::string& out_dir);

/// Convergence/oracle suites ("mms", "poiseuille", "slip", "all");
/// prints the tables and returns 0 when all thresholds pass.
int run_verify(const std::string& suite);

} // namespace seep
