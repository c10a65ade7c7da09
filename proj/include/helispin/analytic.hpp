#pragma once

#include <utility>

#include "helispin/field.hpp"
#include "helispin/spinor.hpp"

namespace helispin {

// Which instantaneous eigenstate of S(t).sigma a quantity refers to.
enum class Substate {
    up_along_s,    // eigenvalue +1, spin projection s = +1/2
    down_along_s,  // eigenvalue -1, spin projection s = -1/2
};

// Total phase split into its energy-driven and geometry-driven parts.
// total = dynamical + geometric holds exactly by construction; the physics
// claim tested elsewhere is that geometric matches s * gamma modulo 2*pi.
struct PhaseDecomposition {
    double total = 0.0;      // radians
    double dynamical = 0.0;  // radians
    double geometric = 0.0;  // radians
    Substate substate = Substate::up_along_s;
};

// Single-valued instantaneous eigenbasis of S(t).sigma for the rotating cone
// axis S(t) = (sin th cos wt, sin th sin wt, cos th):
//   |s1(t)> = (cos(th/2), e^{i w t} sin(th/2))     eigenvalue +1
//   |s2(t)> = (-sin(th/2), e^{i w t} cos(th/2))    eigenvalue -1
std::pair<Spinor, Spinor> eigenbasis_along_s(double theta, double omega, double t);

// Exact state at time t for the initial state |up>, evaluated from the
// rotating-frame solution. At t = T it carries the phase
// [kappa*B*T - 2*pi*turns*(1 - cos th)]/2 on the s1 branch.
Spinor exact_state(const HelicalFieldParams& params, double t);

// P_z as a function of the cone parameters alone:
// 1 - 2 sin^2(th) sin^2([kappa_b_t - 2*pi*turns*(1 - cos th)]/2),
// where kappa_b_t = kappa*B*T.
double polarization_from_cone(double theta, double kappa_b_t, int turns);

// Exact closed-form P_z at t = T for the initial state |up>.
double polarization_exact(const HelicalFieldParams& params);

// Adiabatic-limit formula: the exact expression with theta -> phi, B -> B0.
double polarization_adiabatic(const HelicalFieldParams& params);

// Solid angle subtended by a cone of half-angle theta traced once about z.
double solid_angle(double theta);

// gamma = -2*pi*turns*(1 - cos th): minus the swept solid angle per winding.
// Valid without any adiabaticity assumption. The per-substate phase factor is
// exp(i s gamma) with s = +-1/2.
double topological_phase(double theta, int turns);

// epsilon = kappa*B*T: the energy-driven phase (B is constant in time here).
double dynamical_phase(const RotatingFrameParams& frame, double kappa, double t_total);

// Adiabatic limit of the topological phase: -2*pi*turns*(1 - cos phi),
// a function of the field cone angle instead of the spin cone angle.
double berry_phase(double phi, int turns);

}  // namespace helispin
