#pragma once

#include <functional>
#include <span>
#include <vector>

#include "helispin/analytic.hpp"
#include "helispin/field.hpp"
#include "helispin/spinor.hpp"

namespace helispin {

// Per-node record of the quantities entering the phase split.
struct PhaseTrace {
    std::vector<double> times;                // node times, strictly increasing over [0, T]
    std::vector<double> dynamical_integrand;  // -<psi(t)|H(t)|psi(t)>, rad/s
    std::vector<double> wrapped_total;        // arg<psi0|psi(t)>, radians in (-pi, pi]
};

// Reference cone for a phase extraction: the axis S(t) precesses at omega on
// a cone of half-angle theta, with effective field magnitude b_eff along it.
// field(t) is the closed-form lab field that drives eigenstates of S(t).sigma
// exactly along the cone; b_eff only rescales the energy splitting, so two
// drives sharing (theta, omega) accumulate identical geometric phase.
struct ConeDrive {
    double b_eff;  // tesla, may be any real value
    double theta;  // radians, in [0, pi]
    double omega;  // rad/s, > 0
    double kappa;  // rad s^-1 T^-1, > 0
    int turns = 1;

    double transit_time() const;  // turns * 2*pi / omega
    Vec3 field(double t) const;
    void validate() const;
};

struct PhaseExtraction {
    // Refined (step-halving Richardson) values. total is the
    // continuity-unwrapped arg<psi0|psi(T)>; its value modulo 2*pi is exact up
    // to discretization, while the 2*pi branch relies on the unwrap along the
    // trace. geometric = total - dynamical.
    PhaseDecomposition phases;
    double cyclicity = 0.0;  // |<psi0|psi(T)>| of the base run
    long steps = 0;          // base-run step count
    PhaseTrace trace;        // base-run trace
};

// Continuous branch of a wrapped phase sequence: each output differs from its
// predecessor by the raw difference mapped into (-pi, pi]; the first element
// is preserved. Throws AmbiguousUnwrapError when a successive difference sits
// within 1e-9 of pi, where the branch choice is a tie.
std::vector<double> unwrap_phase(std::span<const double> wrapped);

// Reporting window for geometric phases: the value shifted by a multiple of
// 2*pi*turns into (-2*pi*turns, 0].
double wrap_geometric(double geometric, int turns);

// Evolves the chosen instantaneous eigenstate of S(0).sigma through one full
// cycle under the true helical field (no closed-form input), then splits the
// acquired phase:
//   total     = arg<psi0|psi(T)>, unwrapped by continuity along the trace
//   dynamical = -integral of <psi|H0|psi> dt (trapezoid on the step grid)
//   geometric = total - dynamical
// Throws NotCyclicError when |<psi0|psi(T)>| < 0.999999 and propagates
// integrator errors.
PhaseExtraction extract_phases(const HelicalFieldParams& params, Substate substate,
                               int steps_per_turn);

// Same extraction for a directly specified cone drive (used to vary b_eff or
// omega at fixed geometry).
PhaseExtraction extract_phases(const ConeDrive& drive, Substate substate, int steps_per_turn);

// Extraction of an arbitrary field against a claimed reference cone. The
// cyclicity guard fires when the field does not actually drive the cone.
PhaseExtraction extract_phases_with_field(const std::function<Vec3(double)>& field,
                                          const ConeDrive& reference, Substate substate,
                                          int steps_per_turn);

}  // namespace helispin
