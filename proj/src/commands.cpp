#include "helispin/commands.hpp"

#include <charconv>
#include <cmath>
#include <functional>
#include <numbers>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "helispin/analytic.hpp"
#include "helispin/detail/format.hpp"
#include "helispin/dynamics.hpp"
#include "helispin/errors.hpp"
#include "helispin/phases.hpp"

namespace helispin {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

int run_guarded(std::ostream& err, const std::function<int()>& body) {
    try {
        return body();
    } catch (const NonConvergedError& e) {
        err << "numerical failure: " << e.what() << "\n";
        return exit_code::numerical;
    } catch (const NotCyclicError& e) {
        err << "numerical failure: " << e.what() << "\n";
        return exit_code::numerical;
    } catch (const AmbiguousUnwrapError& e) {
        err << "numerical failure: " << e.what() << "\n";
        return exit_code::numerical;
    } catch (const ParseError& e) {
        err << "input error: " << e.what() << "\n";
        return exit_code::usage;
    } catch (const UnitError& e) {
        err << "input error: " << e.what() << "\n";
        return exit_code::usage;
    } catch (const DomainError& e) {
        err << "invalid configuration: " << e.what() << "\n";
        return exit_code::usage;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return exit_code::numerical;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return exit_code::numerical;
    }
}

struct CheckReport {
    bool all_passed = true;

    void row(std::ostream& out, const std::string& name, double measured, double tol,
             bool pass) {
        out << (pass ? "[PASS] " : "[FAIL] ") << name << ": measured " << detail::format17(measured)
            << " vs tolerance " << detail::format17(tol) << "\n";
        all_passed = all_passed && pass;
    }

    void row_range(std::ostream& out, const std::string& name, double measured, double lo,
                   double hi) {
        const bool pass = measured >= lo && measured <= hi;
        out << (pass ? "[PASS] " : "[FAIL] ") << name << ": measured " << detail::format17(measured)
            << " vs range [" << detail::format17(lo) << ", " << detail::format17(hi) << "]\n";
        all_passed = all_passed && pass;
    }
};

HelicalFieldParams params_for_ratio(double r, double phi, int turns) {
    // b0 = 1 T, L = v = 1 => omega = 2*pi and kappa = 2*pi/r gives the
    // requested adiabaticity ratio exactly.
    return HelicalFieldParams{1.0, phi, 1.0, 1.0, kTwoPi / r, turns};
}

}  // namespace

int cmd_simulate(RunConfig config, std::ostream& out, std::ostream& err) {
    return run_guarded(err, [&]() {
        config.finalize();
        const HelicalFieldParams p = config.params();
        const RotatingFrameParams frame = rotating_frame_params(p);
        const double t_total = p.transit_time();
        const double gamma_full = topological_phase(frame.theta, p.turns);

        EvolveOptions opt;
        opt.tolerance = config.tolerance;
        const EvolutionResult ev = evolve(p, Spinor::spin_up(), config.steps_per_turn, opt);
        const PhaseExtraction up = extract_phases(p, Substate::up_along_s, config.steps_per_turn);
        const PhaseExtraction down =
            extract_phases(p, Substate::down_along_s, config.steps_per_turn);
        // The eigenbasis-overlap winding adds 4*pi*turns to the substate
        // difference once the cone opens past the equator.
        const double winding = frame.theta > 0.5 * kPi ? 2.0 * kTwoPi * p.turns : 0.0;
        const double gamma_numeric = up.phases.geometric - down.phases.geometric - winding;

        auto line = [&](const char* key, double v) { out << key << ": " << detail::format17(v) << "\n"; };
        line("b0_tesla", p.b0);
        line("phi_rad", p.phi);
        line("pitch_m", p.pitch);
        line("velocity_m_s", p.velocity);
        line("kappa_rad_s_T", p.kappa);
        out << "turns: " << p.turns << "\n";
        line("omega_rad_s", p.omega());
        line("transit_time_s", t_total);
        line("adiabaticity_r", adiabaticity_ratio(p));
        line("b_eff_tesla", frame.b_eff);
        line("theta_rad", frame.theta);
        line("epsilon_rad", dynamical_phase(frame, p.kappa, t_total));
        line("gamma_rad", gamma_full);
        line("gamma_per_substate_rad", 0.5 * gamma_full);
        line("gamma_berry_rad", berry_phase(p.phi, p.turns));
        line("gamma_numeric_rad", gamma_numeric);
        line("geometric_up_raw_rad", up.phases.geometric);
        line("geometric_up_wrapped_rad", wrap_geometric(up.phases.geometric, p.turns));
        line("geometric_down_raw_rad", down.phases.geometric);
        line("geometric_down_wrapped_rad", wrap_geometric(down.phases.geometric, p.turns));
        line("P_z_exact", polarization_exact(p));
        line("P_z_adiabatic", polarization_adiabatic(p));
        line("P_z_numeric", ev.polarization_z_refined);
        line("richardson_error", ev.richardson_error);
        out << "steps: " << ev.steps << "\n";
        out << "flags: " << (frame.b_eff <= 0.0 ? "B_nonpositive" : "") << "\n";
        return exit_code::ok;
    });
}

int cmd_sweep(RunConfig config, std::ostream& out, std::ostream& err) {
    return run_guarded(err, [&]() {
        config.finalize();
        const SweepConfig sweep = config.sweep_config();
        std::string csv;
        size_t rows_total = 0;
        size_t rows_failed = 0;
        if (config.sweep_kind == "phase") {
            const std::vector<SweepRow> rows = sweep_topological_phase(sweep);
            rows_total = rows.size();
            for (const SweepRow& row : rows)
                if (row.flags & row_flags::numeric_failed) ++rows_failed;
            csv = sweep_csv(rows);
        } else {
            PolarizationScan scan = PolarizationScan::vary_phi;
            if (config.scan == "b0") scan = PolarizationScan::vary_b0;
            else if (config.scan == "v") scan = PolarizationScan::vary_v;
            const std::vector<PolarizationRow> rows = sweep_polarization(sweep, scan);
            rows_total = rows.size();
            for (const PolarizationRow& row : rows)
                if (row.flags & row_flags::numeric_failed) ++rows_failed;
            csv = polarization_csv(rows);
        }
        write_text_file(config.output, csv);
        out << "wrote " << rows_total << " rows to " << config.output << "\n";
        if (rows_failed > 0) out << "rows flagged numeric_failed: " << rows_failed << "\n";
        if (rows_total > 0 && rows_failed == rows_total) {
            err << "numerical failure: every sweep row failed\n";
            return exit_code::numerical;
        }
        return exit_code::ok;
    });
}

int cmd_overlay(RunConfig config, std::ostream& out, std::ostream& err) {
    return run_guarded(err, [&]() {
        config.finalize();
        if (config.data_path.empty()) throw DomainError("overlay requires --data");
        SweepConfig sweep = config.sweep_config();
        sweep.numeric_points = false;  // the overlay compares the analytic curves
        const std::vector<SweepRow> rows = sweep_topological_phase(sweep);
        const std::vector<ExperimentalPoint> points = load_experimental_points(config.data_path);

        OverlayScale scale = OverlayScale::both;
        if (config.overlay_scale == "1") scale = OverlayScale::full;
        else if (config.overlay_scale == "0.5") scale = OverlayScale::half;
        const OverlaySummary summary = compare_overlay(rows, points, scale);

        out << "points: " << points.size() << "\n";
        for (const CurveResiduals& res : summary.by_scale) {
            out << "scale " << detail::format17(res.scale) << " rms_berry " << detail::format17(res.rms_berry)
                << " rms_nonadiabatic " << detail::format17(res.rms_nonadiabatic) << "\n";
            for (size_t i = 0; i < points.size(); ++i) {
                out << "  point " << i << " omega_sr " << detail::format17(points[i].solid_angle)
                    << " residual_berry " << detail::format17(res.berry_residuals[i])
                    << " residual_nonadiabatic " << detail::format17(res.nonadiabatic_residuals[i])
                    << "\n";
            }
        }
        return exit_code::ok;
    });
}

int cmd_verify(RunConfig config, std::ostream& out, std::ostream& err) {
    return run_guarded(err, [&]() {
        config.finalize();
        CheckReport report;
        const bool quick = config.quick;

        {  // field decomposition identity, randomized
            const int samples = quick ? 200 : 1000;
            std::mt19937_64 rng(12345);
            std::uniform_real_distribution<double> u01(0.0, 1.0);
            double worst = 0.0;
            for (int i = 0; i < samples; ++i) {
                const double r = std::pow(10.0, -2.0 + 3.0 * u01(rng));  // log-uniform [0.01, 10]
                const double phi = kPi * u01(rng);
                const HelicalFieldParams p = params_for_ratio(r, phi, 1);
                const double t = p.transit_time() * u01(rng);
                const RotatingFrameParams frame = rotating_frame_params(p);
                Vec3 rebuilt = reconstruct_field(frame, p.kappa, p.omega(), t);
                rebuilt.z += config.perturb_field * p.b0;  // fault-injection hook
                const Vec3 direct = helical_field(p, t);
                const Vec3 d = rebuilt - direct;
                const double sample = std::max({std::abs(d.x), std::abs(d.y), std::abs(d.z)});
                worst = std::max(worst, sample / p.b0);
            }
            report.row(out, "decomposition identity (max |dB|/B0)", worst, 1e-12, worst < 1e-12);
        }

        {  // propagator unitarity
            const int samples = quick ? 100 : 500;
            std::mt19937_64 rng(777);
            std::uniform_real_distribution<double> u(-1.0, 1.0);
            double worst = 0.0;
            for (int i = 0; i < samples; ++i) {
                const Vec3 b{u(rng), u(rng), u(rng)};
                const Mat2 h = hamiltonian_matrix(b, 1.0 + std::abs(u(rng)));
                const Propagator2 prop = Propagator2::from_hamiltonian(h, 0.1 + std::abs(u(rng)));
                worst = std::max(worst, prop.unitarity_defect());
            }
            report.row(out, "propagator unitarity (max |U^dag U - I|)", worst, 1e-12,
                       worst < 1e-12);
        }

        {  // norm preservation over a long run
            const int steps = quick ? (1 << 16) : (1 << 20);
            const HelicalFieldParams p = params_for_ratio(0.5, 1.0, 1);
            const EvolutionResult ev = evolve(p, Spinor::spin_up(), steps);
            report.row(out, "norm drift after " + std::to_string(steps) + " steps", ev.norm_drift,
                       1e-10, ev.norm_drift < 1e-10);
        }

        {  // observed convergence order via state error against the closed form
            const HelicalFieldParams p = params_for_ratio(0.7, 1.1, 1);
            const Spinor target = exact_state(p, p.transit_time());
            std::vector<double> errs;
            for (int n : {512, 1024, 2048, 4096}) {
                const EvolutionResult ev = evolve(p, Spinor::spin_up(), n);
                errs.push_back(std::max(std::abs(ev.final_state.up() - target.up()),
                                        std::abs(ev.final_state.down() - target.down())));
            }
            for (size_t i = 0; i + 1 < errs.size(); ++i) {
                const double order = std::log2(errs[i] / errs[i + 1]);
                report.row_range(out, "convergence order (halving " + std::to_string(i + 1) + ")",
                                 order, 1.7, 2.3);
            }
        }

        {  // closed form vs integrator
            const std::vector<double> phis =
                quick ? std::vector<double>{30.0, 90.0, 150.0}
                      : std::vector<double>{10.0, 50.0, 90.0, 130.0, 170.0};
            const std::vector<double> ratios =
                quick ? std::vector<double>{0.1, 1.0} : std::vector<double>{0.01, 0.1, 1.0, 2.0};
            double worst = 0.0;
            for (const double phid : phis) {
                for (const double r : ratios) {
                    const HelicalFieldParams p = params_for_ratio(r, phid * kPi / 180.0, 1);
                    const EvolutionResult ev =
                        evolve(p, Spinor::spin_up(), quick ? 4096 : 16384);
                    worst = std::max(worst,
                                     std::abs(ev.polarization_z_refined - polarization_exact(p)));
                }
            }
            report.row(out, "analytic vs numeric P_z (max |dP_z|)", worst, 1e-8, worst < 1e-8);
        }

        {  // phase extraction vs closed form, modulo 2*pi
            const std::vector<double> phis = quick ? std::vector<double>{40.0, 110.0}
                                                   : std::vector<double>{20.0, 70.0, 120.0, 160.0};
            double worst = 0.0;
            for (const double phid : phis) {
                for (const double r : {0.1, 1.0}) {
                    const HelicalFieldParams p = params_for_ratio(r, phid * kPi / 180.0, 1);
                    const RotatingFrameParams frame = rotating_frame_params(p);
                    const PhaseExtraction up =
                        extract_phases(p, Substate::up_along_s, config.steps_per_turn);
                    const double expected = 0.5 * topological_phase(frame.theta, p.turns);
                    worst = std::max(
                        worst, std::abs(std::remainder(up.phases.geometric - expected, kTwoPi)));
                }
            }
            report.row(out, "geometric phase vs -Omega/2 (mod 2*pi)", worst, 1e-5, worst < 1e-5);
        }

        {  // phase scaling: doubling b_eff at fixed cone geometry
            const ConeDrive drive{0.8, 0.9, kTwoPi, kTwoPi, 1};
            ConeDrive doubled = drive;
            doubled.b_eff *= 2.0;
            const PhaseExtraction a =
                extract_phases(drive, Substate::up_along_s, config.steps_per_turn);
            const PhaseExtraction b =
                extract_phases(doubled, Substate::up_along_s, config.steps_per_turn);
            const double geo_shift =
                std::abs(std::remainder(a.phases.geometric - b.phases.geometric, kTwoPi));
            const double dyn_ratio_err = std::abs(b.phases.dynamical / a.phases.dynamical - 2.0);
            report.row(out, "geometric invariance under B scaling", geo_shift, 1e-6,
                       geo_shift < 1e-6);
            report.row(out, "dynamical linearity under B scaling (relative)", dyn_ratio_err, 1e-6,
                       dyn_ratio_err < 1e-6);
        }

        {  // adiabatic limit and its linear approach
            const std::vector<double> grid = SweepConfig::linspace(kPi / 18.0, 17.0 * kPi / 18.0,
                                                                   quick ? 9 : 17);
            auto deviations = [&](double r) {
                double worst_theta = 0.0, worst_gamma = 0.0;
                for (const double phi : grid) {
                    const HelicalFieldParams p = params_for_ratio(r, phi, 1);
                    const RotatingFrameParams frame = rotating_frame_params(p);
                    worst_theta = std::max(worst_theta, std::abs(frame.theta - phi));
                    worst_gamma = std::max(worst_gamma,
                                           std::abs(topological_phase(frame.theta, 1) -
                                                    berry_phase(phi, 1)));
                }
                return std::pair{worst_theta, worst_gamma};
            };
            const auto [theta3, gamma3] = deviations(1e-3);
            const auto [theta4, gamma4] = deviations(1e-4);
            report.row(out, "adiabatic limit max |theta - phi| at r=1e-3", theta3, 2e-3,
                       theta3 < 2e-3);
            report.row(out, "adiabatic limit max |gamma - gamma_Berry| at r=1e-3", gamma3, 1.3e-2,
                       gamma3 < 1.3e-2);
            report.row_range(out, "adiabatic deviation scaling (r/10 ratio)", theta3 / theta4, 8.0,
                             12.0);
        }

        out << (report.all_passed ? "verification passed\n" : "verification FAILED\n");
        return report.all_passed ? exit_code::ok : exit_code::verification_failed;
    });
}

}  // namespace helispin
