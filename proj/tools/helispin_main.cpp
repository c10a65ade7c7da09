#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "helispin/commands.hpp"
#include "helispin/errors.hpp"
#include "helispin/run_config.hpp"

namespace {

std::string config_dummy;

void add_param_flags(CLI::App* cmd, helispin::RunConfig& cfg) {
    cmd->add_option("--b0", cfg.b0, "field magnitude, tesla");
    cmd->add_option("--phi", cfg.phi, "field cone angle (radians unless --degrees)");
    cmd->add_option("--L,--pitch", cfg.pitch, "winding length, meters");
    cmd->add_option("--v,--velocity", cfg.velocity, "beam velocity, m/s");
    cmd->add_option("--kappa", cfg.kappa, "gyromagnetic ratio magnitude, rad/(s T)");
    cmd->add_option("--turns", cfg.turns, "number of full field rotations");
    cmd->add_option("--steps", cfg.steps_per_turn, "integrator steps per turn");
    cmd->add_option("--tolerance", cfg.tolerance, "refinement tolerance (0 disables)");
    cmd->add_flag("--degrees", cfg.degrees, "interpret angle inputs in degrees");
    // Loaded up front (before flag parsing) so flags override the file; the
    // option is registered here only for help text and argument consumption.
    cmd->add_option("--config", config_dummy, "flat key=value configuration file");
}

void add_grid_flags(CLI::App* cmd, helispin::RunConfig& cfg) {
    cmd->add_option("--phi-min", cfg.phi_min, "sweep grid start (radians unless --degrees)");
    cmd->add_option("--phi-max", cfg.phi_max, "sweep grid end");
    cmd->add_option("--phi-points", cfg.phi_points, "sweep grid size");
    cmd->add_option("--jobs", cfg.jobs, "worker threads (0 = hardware concurrency)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"helical-field spin rotation simulator"};
    app.require_subcommand(1);

    helispin::RunConfig cfg;

    CLI::App* simulate = app.add_subcommand("simulate", "single-point report");
    add_param_flags(simulate, cfg);

    CLI::App* sweep = app.add_subcommand("sweep", "write a sweep CSV");
    add_param_flags(sweep, cfg);
    add_grid_flags(sweep, cfg);
    sweep->add_option("--kind", cfg.sweep_kind, "'phase' or 'polarization'");
    sweep->add_option("--scan", cfg.scan, "polarization scan parameter: phi, b0 or v");
    sweep->add_option("--scan-min", cfg.scan_min, "scan grid start (b0/v scans)");
    sweep->add_option("--scan-max", cfg.scan_max, "scan grid end");
    sweep->add_option("--scan-points", cfg.scan_points, "scan grid size");
    sweep->add_option("--output,-o", cfg.output, "output CSV path");
    sweep->add_flag("!--no-numeric", cfg.numeric_points, "skip the integrator columns");

    CLI::App* verify = app.add_subcommand("verify", "run the cross-module checks");
    add_param_flags(verify, cfg);
    verify->add_flag("--quick", cfg.quick, "reduced grids, runs in seconds");
    verify->add_option("--perturb-field", cfg.perturb_field,
                       "fault-injection hook for the identity check");

    CLI::App* overlay = app.add_subcommand("overlay", "compare a data file against the curves");
    add_param_flags(overlay, cfg);
    add_grid_flags(overlay, cfg);
    overlay->add_option("--data", cfg.data_path, "experimental points CSV")->required();
    overlay->add_option("--scale", cfg.overlay_scale, "curve scale: 1, 0.5 or both");

    // Apply the config file first so that flags parsed below override it.
    for (int i = 1; i + 1 <= argc; ++i) {
        const std::string arg = argv[i];
        std::string path;
        if (arg == "--config" && i + 1 < argc) path = argv[i + 1];
        else if (arg.rfind("--config=", 0) == 0) path = arg.substr(9);
        if (!path.empty()) {
            try {
                helispin::load_config_file(cfg, path);
            } catch (const helispin::DomainError& e) {
                std::cerr << "invalid configuration: " << e.what() << "\n";
                return helispin::exit_code::usage;
            }
        }
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return helispin::exit_code::usage;
    }

    if (simulate->parsed()) return helispin::cmd_simulate(cfg, std::cout, std::cerr);
    if (sweep->parsed()) return helispin::cmd_sweep(cfg, std::cout, std::cerr);
    if (verify->parsed()) return helispin::cmd_verify(cfg, std::cout, std::cerr);
    if (overlay->parsed()) return helispin::cmd_overlay(cfg, std::cout, std::cerr);
    return helispin::exit_code::usage;
}
