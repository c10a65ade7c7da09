#include "helispin/analytic.hpp"

#include <cmath>
#include <numbers>

#include "helispin/errors.hpp"

namespace helispin {

namespace {
constexpr double kPi = std::numbers::pi;
}

std::pair<Spinor, Spinor> eigenbasis_along_s(double theta, double omega, double t) {
    if (!(theta >= 0.0 && theta <= kPi)) throw DomainError("theta must lie in [0, pi]");
    if (!std::isfinite(omega) || !std::isfinite(t)) throw DomainError("omega and t must be finite");
    const double ch = std::cos(0.5 * theta);
    const double sh = std::sin(0.5 * theta);
    const cplx winding = std::exp(cplx(0.0, omega * t));
    return {Spinor(ch, winding * sh), Spinor(-sh, winding * ch)};
}

Spinor exact_state(const HelicalFieldParams& params, double t) {
    params.validate();
    const double t_total = params.transit_time();
    if (!(t >= 0.0) || t > t_total * (1.0 + 1e-12)) throw DomainError("t must lie in [0, T]");

    const RotatingFrameParams frame = rotating_frame_params(params);
    const double w = params.omega();
    const double th = frame.theta;
    // Branch phases: chi on s1 and -(chi + w t) on s2. The extra winding on
    // the s2 branch compensates the single-valued gauge of eigenbasis_along_s
    // so that the two branches recombine to |up> at t = 0; it vanishes
    // (mod 2*pi) at t = T.
    const double chi = 0.5 * (params.kappa * frame.b_eff - w * (1.0 - std::cos(th))) * t;
    const auto [s1, s2] = eigenbasis_along_s(th, w, t);
    const cplx c1 = std::cos(0.5 * th) * std::exp(cplx(0.0, chi));
    const cplx c2 = -std::sin(0.5 * th) * std::exp(cplx(0.0, -(chi + w * t)));
    return Spinor(c1 * s1.up() + c2 * s2.up(), c1 * s1.down() + c2 * s2.down());
}

double polarization_from_cone(double theta, double kappa_b_t, int turns) {
    if (!(theta >= 0.0 && theta <= kPi)) throw DomainError("theta must lie in [0, pi]");
    if (!std::isfinite(kappa_b_t)) throw DomainError("kappa_b_t must be finite");
    if (turns < 1) throw DomainError("turns must be >= 1");
    const double st = std::sin(theta);
    const double half = 0.5 * (kappa_b_t - 2.0 * kPi * turns * (1.0 - std::cos(theta)));
    const double s = std::sin(half);
    return 1.0 - 2.0 * st * st * s * s;
}

double polarization_exact(const HelicalFieldParams& params) {
    params.validate();
    const RotatingFrameParams frame = rotating_frame_params(params);
    return polarization_from_cone(frame.theta, params.kappa * frame.b_eff * params.transit_time(),
                                  params.turns);
}

double polarization_adiabatic(const HelicalFieldParams& params) {
    params.validate();
    return polarization_from_cone(params.phi, params.kappa * params.b0 * params.transit_time(),
                                  params.turns);
}

double solid_angle(double theta) {
    if (!(theta >= 0.0 && theta <= kPi)) throw DomainError("theta must lie in [0, pi]");
    return 2.0 * kPi * (1.0 - std::cos(theta));
}

double topological_phase(double theta, int turns) {
    if (turns < 1) throw DomainError("turns must be >= 1");
    return -static_cast<double>(turns) * solid_angle(theta);
}

double dynamical_phase(const RotatingFrameParams& frame, double kappa, double t_total) {
    if (!(kappa > 0.0) || !std::isfinite(kappa))
        throw DomainError("kappa must be positive and finite");
    if (!(t_total > 0.0) || !std::isfinite(t_total))
        throw DomainError("t_total must be positive and finite");
    return kappa * frame.b_eff * t_total;
}

double berry_phase(double phi, int turns) { return topological_phase(phi, turns); }

}  // namespace helispin
