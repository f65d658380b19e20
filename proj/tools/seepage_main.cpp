#include "seepage/config.hpp"
#include "seepage/scenario.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
    CLI::App app{"seepage: Stokes flow coupled to a thin porous boundary layer"};
    app.require_subcommand(1);

    std::string config_path, out_dir = "out", suite = "all", mesh_scenario, mesh_out;

    auto* run = app.add_subcommand("run", "Run a scenario from a config file");
    run->add_option("--config", config_path, "Config file path")->required();
    run->add_option("--out", out_dir, "Output directory");

    auto* verify = app.add_subcommand("verify", "Run the verification suites");
    verify->add_option("--suite", suite, "mms | poiseuille | slip | all");

    auto* mesh = app.add_subcommand("mesh", "Write a built-in scenario mesh");
    mesh->add_option("--scenario", mesh_scenario, "two_reservoir | channel_contact")
        ->required();
    mesh->add_option("--out", mesh_out, "Output SEEPMESH path")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed())
            return seep::run_scenario(seep::parse_config(config_path), out_dir);
        if (verify->parsed())
            return seep::run_verify(suite);
        if (mesh->parsed()) {
            seep::ScenarioKind kind;
            if (mesh_scenario == "two_reservoir")
                kind = seep::ScenarioKind::two_reservoir;
            else if (mesh_scenario == "channel_contact")
                kind = seep::ScenarioKind::channel_contact;
            else {
                std::cerr << "error: unknown scenario '" << mesh_scenario << "'\n";
                return 2;
            }
            const seep::Scenario s = seep::default_scenario(kind);
            seep::write_mesh(seep::build_scenario_mesh(s), mesh_out);
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
