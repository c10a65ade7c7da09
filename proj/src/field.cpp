#include "helispin/field.hpp"

#include <cmath>
#include <numbers>

#include "helispin/errors.hpp"

namespace helispin {

namespace {
constexpr double kPi = std::numbers::pi;
}

double HelicalFieldParams::omega() const { return 2.0 * kPi * velocity / pitch; }

double HelicalFieldParams::transit_time() const { return turns * pitch / velocity; }

void HelicalFieldParams::validate() const {
    if (!(b0 > 0.0) || !std::isfinite(b0)) throw DomainError("b0 must be positive and finite");
    if (!(pitch > 0.0) || !std::isfinite(pitch))
        throw DomainError("pitch must be positive and finite");
    if (!(velocity > 0.0) || !std::isfinite(velocity))
        throw DomainError("velocity must be positive and finite");
    if (!(kappa > 0.0) || !std::isfinite(kappa))
        throw DomainError("kappa must be positive and finite");
    if (turns < 1) throw DomainError("turns must be >= 1");
    if (!(phi >= 0.0 && phi <= kPi)) throw DomainError("phi must lie in [0, pi]");
}

Vec3 helical_field(const HelicalFieldParams& params, double t) {
    params.validate();
    if (!(t >= 0.0)) throw DomainError("t must be >= 0");
    const double wt = params.omega() * t;
    const double transverse = params.b0 * std::sin(params.phi);
    return {transverse * std::cos(wt), transverse * std::sin(wt), params.b0 * std::cos(params.phi)};
}

Vec3 spin_axis(double theta, double omega, double t) {
    if (!(theta >= 0.0 && theta <= kPi)) throw DomainError("theta must lie in [0, pi]");
    if (!std::isfinite(omega) || !std::isfinite(t)) throw DomainError("omega and t must be finite");
    const double wt = omega * t;
    const double st = std::sin(theta);
    return {st * std::cos(wt), st * std::sin(wt), std::cos(theta)};
}

RotatingFrameParams rotating_frame_params(const HelicalFieldParams& params) {
    params.validate();
    const double c = params.omega() / params.kappa;
    const double cos_phi = std::cos(params.phi);
    const double sin_phi = std::sin(params.phi);
    const double d = std::sqrt(params.b0 * params.b0 + c * c + 2.0 * params.b0 * c * cos_phi);
    if (d < 1e-14 * (params.b0 + c))
        throw DegenerateConfigError("effective axis undefined: phi = pi with offset field = b0");
    const double b_eff = params.b0 * (params.b0 + c * cos_phi) / d;
    const double theta = std::atan2(params.b0 * sin_phi, params.b0 * cos_phi + c);
    return {b_eff, theta};
}

Vec3 reconstruct_field(const RotatingFrameParams& frame, double kappa, double omega, double t) {
    if (!(kappa > 0.0) || !std::isfinite(kappa))
        throw DomainError("kappa must be positive and finite");
    if (!(frame.theta >= 0.0 && frame.theta <= kPi)) throw DomainError("theta must lie in [0, pi]");
    if (!std::isfinite(frame.b_eff) || !std::isfinite(omega) || !std::isfinite(t))
        throw DomainError("inputs must be finite");
    const double c = omega / kappa;
    const double st = std::sin(frame.theta);
    const double ct = std::cos(frame.theta);
    const double transverse = (frame.b_eff + c * ct) * st;
    const double wt = omega * t;
    return {transverse * std::cos(wt), transverse * std::sin(wt), frame.b_eff * ct - c * st * st};
}

double adiabaticity_ratio(const HelicalFieldParams& params) {
    params.validate();
    return params.omega() / (params.kappa * params.b0);
}

}  // namespace helispin
