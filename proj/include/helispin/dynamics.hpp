#pragma once

#include <vector>

#include "helispin/field.hpp"
#include "helispin/spinor.hpp"

namespace helispin {

// Complex 2x2 matrix, row-major.
struct Mat2 {
    cplx m00, m01, m10, m11;
};

Mat2 operator*(const Mat2& a, const Mat2& b);
Mat2 operator-(const Mat2& a, const Mat2& b);
Mat2 adjoint(const Mat2& m);
Mat2 mat2_identity();
double max_abs(const Mat2& m);

// H = -kappa B.S with S = sigma/2, i.e. -(kappa/2) B.sigma.
// Hermitian and traceless by construction.
Mat2 hamiltonian_matrix(const Vec3& field, double kappa);

// Unitary evolution operator for one step of a two-level system.
class Propagator2 {
  public:
    static Propagator2 identity();

    // exp(-i H dt) in closed form for Hermitian H. The traceless part becomes
    // an axis-angle rotation; any trace contributes a scalar phase.
    static Propagator2 from_hamiltonian(const Mat2& hamiltonian, double dt);

    const Mat2& matrix() const noexcept { return u_; }
    Spinor apply(const Spinor& psi) const;
    Propagator2 dagger() const;

    // max entry of |U^dag U - I|
    double unitarity_defect() const;
    cplx determinant() const;

    friend Propagator2 operator*(const Propagator2& a, const Propagator2& b);

  private:
    explicit Propagator2(const Mat2& u) : u_(u) {}
    Mat2 u_;
};

// |up|^2 - |down|^2, in [-1, 1] for normalized input.
double polarization_z(const Spinor& psi);

struct EvolveOptions {
    // Refine (doubling the step count) until the step-halving error estimate
    // drops to this value. 0 disables refinement; the estimate is still
    // computed and reported.
    double tolerance = 0.0;
    // Cap on the step count of the returned run. Exceeding it during
    // refinement raises NonConvergedError.
    long max_total_steps = 1L << 20;
};

struct EvolutionResult {
    Spinor final_state;                  // state of the run at `steps` resolution
    double polarization_z = 1.0;         // P_z of final_state
    long steps = 0;                      // step count of the returned run
    double norm_drift = 0.0;             // | ||final_state|| - 1 |
    double richardson_error = 0.0;       // max amplitude gap to the half-step run
    Spinor final_state_refined;          // step-halving Richardson extrapolant
    double polarization_z_refined = 1.0; // extrapolated P_z (best numeric value)
};

// Integrates the Schrodinger equation for psi0 under the helical field over
// [0, T] with turns*steps_per_turn uniform midpoint-exponential steps, plus a
// run at half the step size for the Richardson error estimate.
// Requires steps_per_turn >= 16.
EvolutionResult evolve(const HelicalFieldParams& params, const Spinor& psi0, int steps_per_turn,
                       const EvolveOptions& opt = {});

struct TrajectorySample {
    double t = 0.0;
    Spinor state;
    Spinor state_refined;
};

// States at `samples` evenly spaced node times (t = j*T/samples, j = 1..samples).
// turns*steps_per_turn must be divisible by samples.
std::vector<TrajectorySample> evolve_trajectory(const HelicalFieldParams& params,
                                                const Spinor& psi0, int steps_per_turn,
                                                int samples);

}  // namespace helispin
