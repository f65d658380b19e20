#pragma once

#include "seepage/mesh.hpp"
#include "seepage/params.hpp"

#include <string>
#include <vector>

namespace seep {

enum class ScenarioKind { two_reservoir, channel_contact, verify };

struct LoadBreakpoint {
    double t = 0.0;
    double value = 0.0;
};

/// Fully resolved scenario description: parsed config with defaults
/// filled in and every invariant checked.
struct Scenario {
    ScenarioKind kind = ScenarioKind::two_reservoir;

    // channel geometry (channel_contact)
    double length = 4.0;
    double height = 1.0;
    int nx = 48;
    int ny = 12;

    // two-reservoir geometry
    ReservoirGeometry reservoirs;

    std::string mesh_file; // optional SEEPMESH override, empty = generate

    PhysParams params;

    double dt = 0.01;
    double t_end = 1.0;

    // piecewise-constant schedule for the driving pressure Pbar
    std::vector<LoadBreakpoint> load;

    int output_every = 1;    // snapshot cadence in steps, 0 disables VTK
    std::string verify_suite = "all";

    /// Pbar at time t (value of the last breakpoint with breakpoint.t <= t,
    /// 0 before the first one).
    double load_at(double t) const;

    void validate() const; // throws ConfigError naming "section.key"
};

Scenario default_scenario(ScenarioKind kind);

Scenario parse_config(const std::string& path);

} // namespace seep
