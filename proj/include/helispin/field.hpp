#pragma once

#include "helispin/vec3.hpp"

namespace helispin {

// Magnitude of the neutron gyromagnetic ratio, rad s^-1 T^-1.
// CODATA 2018 recommended value (external provenance; not derived here).
inline constexpr double kNeutronGyromagneticRatio = 1.83247171e8;

// Physical configuration of a beam traversing a transverse field that winds
// once around the beam axis per pitch length. The co-moving particle sees the
// field direction rotate at omega = 2*pi*v/L about z on a cone of half-angle
// phi. The rotation sense (+omega about z, a right-handed helix) is a fixed
// convention.
struct HelicalFieldParams {
    double b0;                                 // field magnitude, tesla
    double phi;                                // field cone angle, radians, in [0, pi]
    double pitch;                              // winding length L, meters
    double velocity;                           // beam velocity v, m/s
    double kappa = kNeutronGyromagneticRatio;  // gyromagnetic ratio magnitude, rad s^-1 T^-1
    int turns = 1;                             // number of full field rotations

    double omega() const;         // angular frequency seen by the particle, 2*pi*v/L
    double transit_time() const;  // T = turns * L / v

    // Throws DomainError unless b0, pitch, velocity, kappa > 0, turns >= 1,
    // phi in [0, pi], and everything is finite.
    void validate() const;
};

// Effective static parameters in the frame co-rotating with the field:
// field magnitude b_eff along an axis tilted by theta from z.
// b_eff can be negative in strongly nonadiabatic configurations
// (phi > pi/2 with a large frame offset); theta is always in [0, pi].
struct RotatingFrameParams {
    double b_eff;  // tesla
    double theta;  // radians, in [0, pi]
};

// Field vector seen by the particle at time t (periodic; t past T is allowed):
// B0 * [sin(phi) (cos wt, sin wt, 0) + cos(phi) (0, 0, 1)].
Vec3 helical_field(const HelicalFieldParams& params, double t);

// Unit spin-axis direction on a cone of half-angle theta rotating at omega:
// (sin(theta) cos wt, sin(theta) sin wt, cos(theta)).
Vec3 spin_axis(double theta, double omega, double t);

// Solves for the cone (b_eff, theta) whose uniformly rotating axis, together
// with the kinematic offset field omega/kappa, reproduces the helical field
// exactly:
//   b_eff = B0 (B0 + c cos phi) / sqrt(B0^2 + c^2 + 2 B0 c cos phi)
//   theta = atan2(B0 sin phi, B0 cos phi + c),     c = omega/kappa.
// Throws DegenerateConfigError when the denominator vanishes (phi = pi with
// c = B0), where the effective axis is undefined.
RotatingFrameParams rotating_frame_params(const HelicalFieldParams& params);

// Rebuilds the lab field from cone parameters:
//   ( (b_eff + (w/k) cos th) sin th cos wt,
//     (b_eff + (w/k) cos th) sin th sin wt,
//      b_eff cos th - (w/k) sin^2 th ).
// Equals b_eff*S(t) - (1/kappa) S(t) x dS/dt for S = spin_axis(theta, omega, .).
Vec3 reconstruct_field(const RotatingFrameParams& frame, double kappa, double omega, double t);

// r = omega/(kappa*B0) = 2*pi*v/(kappa*L*B0). r << 1 is the adiabatic regime
// (slow transit, strong field); r >~ 1 is strongly nonadiabatic.
double adiabaticity_ratio(const HelicalFieldParams& params);

}  // namespace helispin
