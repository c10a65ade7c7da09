#pragma once

#include <string>

#include "helispin/experiment.hpp"
#include "helispin/field.hpp"

namespace helispin {

// Exit codes shared by every subcommand.
namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int verification_failed = 1;
inline constexpr int usage = 2;
inline constexpr int numerical = 3;
}  // namespace exit_code

// Everything the CLI can configure, filled from flags and the optional
// key=value config file. Angles are radians unless `degrees` is set, in which
// case finalize() converts them once.
struct RunConfig {
    // single-point / sweep base parameters (defaults match configs/bd_v500.cfg)
    double b0 = 4.3e-5;       // tesla
    double phi = 1.5707963267948966;  // radians
    double pitch = 0.4;       // meters
    double velocity = 500.0;  // m/s
    double kappa = kNeutronGyromagneticRatio;
    int turns = 1;

    int steps_per_turn = 4096;
    double tolerance = 0.0;  // evolve refinement tolerance; 0 disables

    // sweep grid
    double phi_min = 0.0;
    double phi_max = 3.141592653589793;
    int phi_points = 181;
    bool numeric_points = true;
    std::string sweep_kind = "phase";  // "phase" | "polarization"
    std::string scan = "phi";          // "phi" | "b0" | "v"
    double scan_min = 0.0;
    double scan_max = 0.0;
    int scan_points = 0;
    std::string output = "sweep.csv";
    int jobs = 0;  // 0: hardware concurrency

    bool degrees = false;

    // verify
    bool quick = false;
    double perturb_field = 0.0;  // fault-injection hook for the identity check

    // overlay
    std::string data_path;
    std::string overlay_scale = "both";  // "1" | "0.5" | "both"

    // Converts degree inputs and validates cross-field constraints.
    // Throws DomainError on bad values.
    void finalize();

    HelicalFieldParams params() const;
    SweepConfig sweep_config() const;
};

// Applies a flat key=value file (# comments) on top of the current values.
// Keys mirror the long flag names (b0, phi, L, v, kappa, turns, steps, ...).
// Flags parsed afterwards override the file. Throws DomainError on unknown
// keys or unparsable values.
void load_config_file(RunConfig& config, const std::string& path);

}  // namespace helispin
