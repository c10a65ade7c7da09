#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "helispin/field.hpp"

namespace helispin {

namespace row_flags {
inline constexpr unsigned b_nonpositive = 1u << 0;    // effective field magnitude <= 0
inline constexpr unsigned branch_ambiguous = 1u << 1; // continuity step close to the pi tie
inline constexpr unsigned numeric_failed = 1u << 2;   // integrator error on this row
}  // namespace row_flags

std::string flag_names(unsigned flags);  // semicolon-joined, empty when none

struct SweepConfig {
    HelicalFieldParams base;       // phi is overridden per grid point
    std::vector<double> phi_grid;  // radians, nonempty, strictly increasing, within [0, pi]
    int steps_per_turn = 4096;
    bool numeric_points = true;    // run the integrator at each point
    std::vector<double> scan_values;  // parameter grid for vary_b0 / vary_v scans
    int jobs = 1;                  // worker threads for numeric rows

    void validate() const;

    // Uniform grid of n points spanning [lo, hi].
    static std::vector<double> linspace(double lo, double hi, int n);
};

struct SweepRow {
    double phi = 0.0;                // field cone angle, radians
    double solid_angle_field = 0.0;  // 2*pi*(1 - cos phi), steradians
    double theta = 0.0;              // spin cone angle, radians
    double solid_angle_spin = 0.0;   // 2*pi*(1 - cos theta), steradians
    double gamma_berry = 0.0;        // -turns * solid_angle_field
    double gamma_nonadiabatic = 0.0; // -turns * solid_angle_spin
    std::optional<double> gamma_numeric;  // extracted, branch-resolved along the grid
    double adiabaticity_r = 0.0;
    unsigned flags = 0;
};

// One row per phi: analytic columns always; when config.numeric_points, the
// geometric phases of both substates are extracted numerically and combined
// into the full gamma, with winding branches resolved by continuity along the
// grid. Integrator errors flag the row and the sweep continues.
std::vector<SweepRow> sweep_topological_phase(const SweepConfig& config);

enum class PolarizationScan { vary_b0, vary_phi, vary_v };

struct PolarizationRow {
    double parameter = 0.0;
    double exact = 1.0;
    double adiabatic = 1.0;
    std::optional<double> numeric;
    unsigned flags = 0;
};

// vary_phi scans config.phi_grid; vary_b0 and vary_v scan config.scan_values.
std::vector<PolarizationRow> sweep_polarization(const SweepConfig& config, PolarizationScan scan);

struct ExperimentalPoint {
    double solid_angle = 0.0;  // steradians, in [0, 4*pi]
    double gamma = 0.0;        // radians
    std::optional<double> gamma_uncertainty;
};

// CSV with header `solid_angle_sr,gamma_rad[,gamma_err_rad]`; `#` starts a
// comment. Throws ParseError (with line number) on malformed content and
// UnitError when a header column declares unrecognized units.
std::vector<ExperimentalPoint> load_experimental_points(const std::filesystem::path& path);
std::vector<ExperimentalPoint> parse_experimental_points(std::istream& in);

enum class OverlayScale { full, half, both };

struct CurveResiduals {
    double scale = 1.0;  // factor applied to the predicted curves
    std::vector<double> berry_residuals;
    std::vector<double> nonadiabatic_residuals;
    double rms_berry = 0.0;
    double rms_nonadiabatic = 0.0;
};

struct OverlaySummary {
    std::vector<CurveResiduals> by_scale;
};

// Residual of each point against both curves, linearly interpolated in the
// field solid angle. Throws DomainError when a point lies outside the sweep
// range. OverlayScale::both reports factors 1 and 1/2, covering the open
// question of whether a dataset tabulates the full or per-substate phase.
OverlaySummary compare_overlay(std::span<const SweepRow> rows,
                               std::span<const ExperimentalPoint> points,
                               OverlayScale scale = OverlayScale::both);

// Deterministic CSV serializations: 17-significant-digit shortest form,
// byte-identical across runs for identical inputs.
std::string sweep_csv(std::span<const SweepRow> rows);
std::string polarization_csv(std::span<const PolarizationRow> rows);

void write_text_file(const std::filesystem::path& path, const std::string& content);

}  // namespace helispin
