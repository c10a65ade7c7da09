#include <doctest.h>

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "helispin/analytic.hpp"
#include "helispin/errors.hpp"
#include "helispin/experiment.hpp"

using namespace helispin;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

HelicalFieldParams params_for_ratio(double r, double phi, int turns = 1) {
    return HelicalFieldParams{1.0, phi, 1.0, 1.0, kTwoPi / r, turns};
}

SweepConfig config_for_ratio(double r, int points, bool numeric) {
    SweepConfig config;
    config.base = params_for_ratio(r, 0.0);
    config.phi_grid = SweepConfig::linspace(0.0, kPi, points);
    config.steps_per_turn = 4096;
    config.numeric_points = numeric;
    return config;
}

}  // namespace

TEST_CASE("sweep row at phi = 0 is all zeros") {
    const auto rows = sweep_topological_phase(config_for_ratio(1.0, 19, false));
    const SweepRow& row = rows.front();
    CHECK(row.phi == 0.0);
    CHECK(row.theta == 0.0);
    CHECK(row.solid_angle_field == 0.0);
    CHECK(row.solid_angle_spin == 0.0);
    CHECK(row.gamma_berry == 0.0);
    CHECK(row.gamma_nonadiabatic == 0.0);
    CHECK(row.flags == 0);
}

TEST_CASE("nearly adiabatic sweep pins the two curves together") {
    const auto rows = sweep_topological_phase(config_for_ratio(1e-4, 37, false));
    double worst = 0.0;
    for (const SweepRow& row : rows)
        worst = std::max(worst, std::abs(row.gamma_nonadiabatic - row.gamma_berry));
    CHECK(worst < 1e-3 * kTwoPi);
}

TEST_CASE("r = 1 sweep hits the hand-derived anchor at phi = pi/2") {
    const auto rows = sweep_topological_phase(config_for_ratio(1.0, 181, false));
    const SweepRow& row = rows[90];
    REQUIRE(row.phi == doctest::Approx(kPi / 2.0).epsilon(1e-15));
    CHECK(row.theta == doctest::Approx(kPi / 4.0).epsilon(1e-12));
    CHECK(row.gamma_nonadiabatic ==
          doctest::Approx(-kTwoPi * (1.0 - std::sqrt(0.5))).epsilon(1e-12));
    CHECK(row.gamma_berry == doctest::Approx(-kTwoPi).epsilon(1e-12));
}

TEST_CASE("gamma is monotone for moderate ratios and ordered below the equator") {
    for (const double r : {0.2, 1.0}) {
        const auto rows = sweep_topological_phase(config_for_ratio(r, 61, false));
        for (size_t i = 1; i < rows.size(); ++i) {
            // r = 1 at phi = pi is the degenerate corner; that row is flagged.
            if (std::isnan(rows[i].gamma_nonadiabatic)) {
                CHECK((rows[i].flags & row_flags::b_nonpositive) != 0);
                continue;
            }
            CHECK(rows[i].gamma_nonadiabatic <= rows[i - 1].gamma_nonadiabatic + 1e-15);
            if (rows[i].phi > 0.0 && rows[i].phi <= kPi / 2.0 + 1e-12) {
                CHECK(rows[i].gamma_nonadiabatic < 0.0);
                CHECK(std::abs(rows[i].gamma_nonadiabatic) < std::abs(rows[i].gamma_berry));
            }
        }
    }
}

TEST_CASE("fast-transit sweep flags the reversed-field region") {
    const auto rows = sweep_topological_phase(config_for_ratio(2.0, 37, false));
    bool saw_flag = false;
    for (const SweepRow& row : rows) {
        const bool expected = (std::cos(row.phi) < -0.5);
        if (expected) {
            CHECK((row.flags & row_flags::b_nonpositive) != 0);
            saw_flag = true;
        }
    }
    CHECK(saw_flag);
}

TEST_CASE("numeric sweep column tracks the analytic curve") {
    const auto rows = sweep_topological_phase(config_for_ratio(0.8, 13, true));
    for (const SweepRow& row : rows) {
        if (row.flags & row_flags::numeric_failed) continue;
        REQUIRE(row.gamma_numeric.has_value());
        CHECK(std::abs(std::remainder(*row.gamma_numeric - row.gamma_nonadiabatic, kTwoPi)) <
              1e-5);
        // branch-resolved values should track the curve closely too
        CHECK(std::abs(*row.gamma_numeric - row.gamma_nonadiabatic) < 1e-4);
    }
}

TEST_CASE("sweep csv is deterministic with the documented header") {
    const SweepConfig config = config_for_ratio(0.9, 13, true);
    const std::string a = sweep_csv(sweep_topological_phase(config));
    const std::string b = sweep_csv(sweep_topological_phase(config));
    CHECK(a == b);
    CHECK(a.rfind("phi_rad,omega_field_sr,theta_rad,omega_spin_sr,gamma_berry_rad,"
                  "gamma_nonadiabatic_rad,gamma_numeric_rad,adiabaticity_r,flags\n",
                  0) == 0);

    // parallel execution must not change a single byte
    SweepConfig threaded = config;
    threaded.jobs = 4;
    CHECK(sweep_csv(sweep_topological_phase(threaded)) == a);
}

TEST_CASE("sweep validates its grid") {
    SweepConfig config = config_for_ratio(1.0, 5, false);
    config.phi_grid.clear();
    CHECK_THROWS_AS(sweep_topological_phase(config), DomainError);
    config.phi_grid = {0.5, 0.5};
    CHECK_THROWS_AS(sweep_topological_phase(config), DomainError);
    config.phi_grid = {0.5, 4.0};
    CHECK_THROWS_AS(sweep_topological_phase(config), DomainError);
}

TEST_CASE("polarization sweep over phi starts at full polarization") {
    SweepConfig config = config_for_ratio(0.7, 9, true);
    const auto rows = sweep_polarization(config, PolarizationScan::vary_phi);
    REQUIRE(rows.size() == 9);
    CHECK(rows.front().exact == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(rows.front().adiabatic == doctest::Approx(1.0).epsilon(1e-14));
    REQUIRE(rows.front().numeric.has_value());
    CHECK(*rows.front().numeric == doctest::Approx(1.0).epsilon(1e-12));
    for (const PolarizationRow& row : rows) {
        REQUIRE(row.numeric.has_value());
        CHECK(std::abs(row.exact - *row.numeric) < 1e-8);
    }
}

TEST_CASE("field-magnitude scan stays inside and reaches its envelope") {
    SweepConfig config = config_for_ratio(1.0, 2, false);
    config.scan_values = SweepConfig::linspace(0.3, 3.0, 2000);
    const auto rows = sweep_polarization(config, PolarizationScan::vary_b0);
    double lowest_gap = 2.0;
    for (const PolarizationRow& row : rows) {
        HelicalFieldParams p = config.base;
        p.b0 = row.parameter;
        const double envelope = 1.0 - 2.0 * std::pow(std::sin(rotating_frame_params(p).theta), 2);
        CHECK(row.exact >= envelope - 1e-12);
        CHECK(row.exact <= 1.0 + 1e-12);
        lowest_gap = std::min(lowest_gap, row.exact - envelope);
    }
    CHECK(lowest_gap < 0.02);  // the bound is attained up to grid resolution
}

TEST_CASE("polarization scan demands a grid for b0 and v") {
    SweepConfig config = config_for_ratio(1.0, 2, false);
    config.scan_values.clear();
    CHECK_THROWS_AS(sweep_polarization(config, PolarizationScan::vary_b0), DomainError);
}

TEST_CASE("an unusable scan value fails only its own row") {
    SweepConfig config = config_for_ratio(1.0, 2, false);
    config.scan_values = {0.5, -1.0, 2.0};  // negative field magnitude is invalid
    config.jobs = 3;
    const auto rows = sweep_polarization(config, PolarizationScan::vary_b0);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].flags == 0);
    CHECK((rows[1].flags & row_flags::numeric_failed) != 0);
    CHECK(std::isnan(rows[1].exact));
    CHECK(std::isnan(rows[1].adiabatic));
    CHECK(rows[2].flags == 0);
}

TEST_CASE("polarization rows degrade column by column at the degenerate corner") {
    // r = 1 at phi = pi: the closed form has no rotating frame there, but the
    // adiabatic formula and the integrator still produce values.
    SweepConfig config = config_for_ratio(1.0, 5, true);
    const auto rows = sweep_polarization(config, PolarizationScan::vary_phi);
    const PolarizationRow& corner = rows.back();
    CHECK((corner.flags & row_flags::numeric_failed) != 0);
    CHECK(std::isnan(corner.exact));
    CHECK_FALSE(std::isnan(corner.adiabatic));
    REQUIRE(corner.numeric.has_value());
    CHECK(std::abs(*corner.numeric) <= 1.0 + 1e-10);
    CHECK(rows.front().flags == 0);
}

TEST_CASE("experimental points parse the documented schema") {
    std::istringstream in(
        "# comment before the header\n"
        "solid_angle_sr,gamma_rad,gamma_err_rad\n"
        "6.2832, -6.2832, 0.3\n"
        "1.0, -0.5\n"  // trailing uncertainty omitted
        "\n"
        "3.5, -3.0, 0.1  # inline comment\n");
    const auto points = parse_experimental_points(in);
    REQUIRE(points.size() == 3);
    CHECK(points[0].solid_angle == doctest::Approx(6.2832));
    CHECK(points[0].gamma == doctest::Approx(-6.2832));
    REQUIRE(points[0].gamma_uncertainty.has_value());
    CHECK(*points[0].gamma_uncertainty == doctest::Approx(0.3));
    CHECK_FALSE(points[1].gamma_uncertainty.has_value());
}

TEST_CASE("empty body with a valid header is an empty list") {
    std::istringstream in("solid_angle_sr,gamma_rad\n# nothing else\n");
    CHECK(parse_experimental_points(in).empty());
}

TEST_CASE("parser rejects bad inputs with line numbers") {
    {
        std::istringstream in("solid_angle_sr,gamma_rad\n15.0, -1.0\n");
        CHECK_THROWS_AS(parse_experimental_points(in), ParseError);  // beyond 4*pi
    }
    {
        std::istringstream in("solid_angle_sr,gamma_rad\n1.0\n");
        try {
            parse_experimental_points(in);
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.line == 2);
        }
    }
    {
        std::istringstream in("solid_angle_sr,gamma_rad\nabc, -1.0\n");
        CHECK_THROWS_AS(parse_experimental_points(in), ParseError);
    }
    {
        std::istringstream in("solid_angle_deg,gamma_rad\n");
        CHECK_THROWS_AS(parse_experimental_points(in), UnitError);
    }
    {
        std::istringstream in("strange,header\n");
        CHECK_THROWS_AS(parse_experimental_points(in), ParseError);
    }
    {
        std::istringstream in("# only comments\n");
        CHECK_THROWS_AS(parse_experimental_points(in), ParseError);
    }
}

TEST_CASE("overlay round-trips points sampled from each curve") {
    const auto rows = sweep_topological_phase(config_for_ratio(0.9, 61, false));
    std::vector<ExperimentalPoint> from_berry, from_nonad;
    for (size_t i = 0; i < rows.size(); i += 6) {
        from_berry.push_back({rows[i].solid_angle_field, rows[i].gamma_berry, {}});
        from_nonad.push_back({rows[i].solid_angle_field, rows[i].gamma_nonadiabatic, {}});
    }
    const OverlaySummary on_berry = compare_overlay(rows, from_berry, OverlayScale::full);
    CHECK(on_berry.by_scale.size() == 1);
    CHECK(on_berry.by_scale[0].rms_berry < 1e-12);
    const OverlaySummary on_nonad = compare_overlay(rows, from_nonad, OverlayScale::full);
    CHECK(on_nonad.by_scale[0].rms_nonadiabatic < 1e-12);
    CHECK(on_nonad.by_scale[0].rms_berry > 0.1);

    const OverlaySummary both = compare_overlay(rows, from_berry, OverlayScale::both);
    REQUIRE(both.by_scale.size() == 2);
    CHECK(both.by_scale[0].scale == 1.0);
    CHECK(both.by_scale[1].scale == 0.5);
}

TEST_CASE("overlay residuals at the r = 1 anchor") {
    const auto rows = sweep_topological_phase(config_for_ratio(1.0, 181, false));
    const double gamma_anchor = -kTwoPi * (1.0 - std::sqrt(0.5));
    const std::vector<ExperimentalPoint> pts{{kTwoPi, gamma_anchor, {}}};
    const OverlaySummary summary = compare_overlay(rows, pts, OverlayScale::full);
    CHECK(std::abs(summary.by_scale[0].nonadiabatic_residuals[0]) < 1e-9);
    CHECK(summary.by_scale[0].berry_residuals[0] ==
          doctest::Approx(kTwoPi + gamma_anchor).epsilon(1e-9));
}

TEST_CASE("overlay rejects out-of-range points and empty inputs") {
    const auto rows = sweep_topological_phase(config_for_ratio(1.0, 11, false));
    const std::vector<ExperimentalPoint> outside{{4.0 * kPi, -1.0, {}}};
    // the grid covers [0, 4*pi] fully, so shrink it first
    const auto partial = sweep_topological_phase(config_for_ratio(1.0, 11, false));
    std::vector<SweepRow> clipped(partial.begin(), partial.begin() + 5);
    CHECK_THROWS_AS(compare_overlay(clipped, outside, OverlayScale::full), DomainError);
    CHECK_THROWS_AS(compare_overlay(rows, std::vector<ExperimentalPoint>{}, OverlayScale::full),
                    DomainError);
}

TEST_CASE("text files round-trip through the writer") {
    const auto path = std::filesystem::temp_directory_path() / "helispin_writer_test.csv";
    write_text_file(path, "a,b\n1,2\n");
    std::ifstream in(path);
    std::stringstream buf;
    buf << in.rdbuf();
    CHECK(buf.str() == "a,b\n1,2\n");
    std::filesystem::remove(path);
}
