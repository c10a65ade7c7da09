#include "helispin/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "helispin/detail/integrate.hpp"
#include "helispin/errors.hpp"

namespace helispin {

Mat2 operator*(const Mat2& a, const Mat2& b) {
    return {a.m00 * b.m00 + a.m01 * b.m10, a.m00 * b.m01 + a.m01 * b.m11,
            a.m10 * b.m00 + a.m11 * b.m10, a.m10 * b.m01 + a.m11 * b.m11};
}

Mat2 operator-(const Mat2& a, const Mat2& b) {
    return {a.m00 - b.m00, a.m01 - b.m01, a.m10 - b.m10, a.m11 - b.m11};
}

Mat2 adjoint(const Mat2& m) {
    return {std::conj(m.m00), std::conj(m.m10), std::conj(m.m01), std::conj(m.m11)};
}

Mat2 mat2_identity() { return {{1.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}, {1.0, 0.0}}; }

double max_abs(const Mat2& m) {
    return std::max({std::abs(m.m00), std::abs(m.m01), std::abs(m.m10), std::abs(m.m11)});
}

Mat2 hamiltonian_matrix(const Vec3& field, double kappa) {
    if (!(kappa > 0.0) || !std::isfinite(kappa))
        throw DomainError("kappa must be positive and finite");
    if (!std::isfinite(field.x) || !std::isfinite(field.y) || !std::isfinite(field.z))
        throw DomainError("field must be finite");
    const double h = -0.5 * kappa;
    return {cplx(h * field.z, 0.0), cplx(h * field.x, -h * field.y),
            cplx(h * field.x, h * field.y), cplx(-h * field.z, 0.0)};
}

Propagator2 Propagator2::identity() { return Propagator2(mat2_identity()); }

Propagator2 Propagator2::from_hamiltonian(const Mat2& hamiltonian, double dt) {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw DomainError("dt must be positive and finite");
    // Split H = a.sigma + tau*I; the Hermitian part determines a real a.
    const double ax = hamiltonian.m10.real();
    const double ay = hamiltonian.m10.imag();
    const double az = 0.5 * (hamiltonian.m00.real() - hamiltonian.m11.real());
    const double tau = 0.5 * (hamiltonian.m00.real() + hamiltonian.m11.real());
    const detail::Su2 u = detail::su2_exp(ax, ay, az, dt);
    Mat2 m{u.m00, u.m01, u.m10, u.m11};
    if (tau != 0.0) {
        const cplx phase = std::exp(cplx(0.0, -tau * dt));
        m = {phase * m.m00, phase * m.m01, phase * m.m10, phase * m.m11};
    }
    return Propagator2(m);
}

Spinor Propagator2::apply(const Spinor& psi) const {
    return Spinor::unchecked(u_.m00 * psi.up() + u_.m01 * psi.down(),
                             u_.m10 * psi.up() + u_.m11 * psi.down());
}

Propagator2 Propagator2::dagger() const { return Propagator2(adjoint(u_)); }

double Propagator2::unitarity_defect() const { return max_abs(adjoint(u_) * u_ - mat2_identity()); }

cplx Propagator2::determinant() const { return u_.m00 * u_.m11 - u_.m01 * u_.m10; }

Propagator2 operator*(const Propagator2& a, const Propagator2& b) {
    return Propagator2(a.u_ * b.u_);
}

double polarization_z(const Spinor& psi) { return std::norm(psi.up()) - std::norm(psi.down()); }

namespace {

detail::RawState run_helical(const HelicalFieldParams& p, const detail::RawState& s0, long nsteps) {
    const double w = p.omega();
    const double transverse = p.b0 * std::sin(p.phi);
    const double axial = p.b0 * std::cos(p.phi);
    auto field = [&](double t) {
        const double wt = w * t;
        return Vec3{transverse * std::cos(wt), transverse * std::sin(wt), axial};
    };
    return detail::integrate(field, p.kappa, p.transit_time(), nsteps, s0,
                             [](long, double, const detail::RawState&) {});
}

double max_amp_diff(const detail::RawState& a, const detail::RawState& b) {
    return std::max(std::abs(a.up - b.up), std::abs(a.down - b.down));
}

}  // namespace

EvolutionResult evolve(const HelicalFieldParams& params, const Spinor& psi0, int steps_per_turn,
                       const EvolveOptions& opt) {
    params.validate();
    if (steps_per_turn < 16) throw DomainError("steps_per_turn must be >= 16");
    long nsteps = static_cast<long>(steps_per_turn) * params.turns;
    if (nsteps > opt.max_total_steps)
        throw DomainError("requested step count exceeds max_total_steps");

    const detail::RawState s0{psi0.up(), psi0.down()};
    detail::RawState coarse = run_helical(params, s0, nsteps);
    detail::RawState fine = run_helical(params, s0, 2 * nsteps);
    double estimate = max_amp_diff(coarse, fine);
    while (opt.tolerance > 0.0 && estimate > opt.tolerance) {
        if (2 * nsteps > opt.max_total_steps)
            throw NonConvergedError(estimate, opt.tolerance, nsteps);
        nsteps *= 2;
        coarse = fine;
        fine = run_helical(params, s0, 2 * nsteps);
        estimate = max_amp_diff(coarse, fine);
    }

    EvolutionResult result;
    result.final_state = Spinor::unchecked(coarse.up, coarse.down);
    result.polarization_z = std::norm(coarse.up) - std::norm(coarse.down);
    result.steps = nsteps;
    result.norm_drift = std::abs(result.final_state.norm() - 1.0);
    result.richardson_error = estimate;
    result.final_state_refined = Spinor::unchecked((4.0 * fine.up - coarse.up) / 3.0,
                                                   (4.0 * fine.down - coarse.down) / 3.0);
    const double pz_fine = std::norm(fine.up) - std::norm(fine.down);
    result.polarization_z_refined = (4.0 * pz_fine - result.polarization_z) / 3.0;
    if (result.norm_drift >= 1e-10) throw Error("unitary stepping lost normalization");
    return result;
}

std::vector<TrajectorySample> evolve_trajectory(const HelicalFieldParams& params,
                                                const Spinor& psi0, int steps_per_turn,
                                                int samples) {
    params.validate();
    if (steps_per_turn < 16) throw DomainError("steps_per_turn must be >= 16");
    if (samples < 1) throw DomainError("samples must be >= 1");
    const long nsteps = static_cast<long>(steps_per_turn) * params.turns;
    if (nsteps % samples != 0) throw DomainError("turns*steps_per_turn must be divisible by samples");
    const long every = nsteps / samples;

    const detail::RawState s0{psi0.up(), psi0.down()};
    const double w = params.omega();
    const double transverse = params.b0 * std::sin(params.phi);
    const double axial = params.b0 * std::cos(params.phi);
    auto field = [&](double t) {
        const double wt = w * t;
        return Vec3{transverse * std::cos(wt), transverse * std::sin(wt), axial};
    };

    std::vector<detail::RawState> coarse_samples, fine_samples;
    coarse_samples.reserve(samples);
    fine_samples.reserve(samples);
    detail::integrate(field, params.kappa, params.transit_time(), nsteps, s0,
                      [&](long k, double, const detail::RawState& st) {
                          if (k > 0 && k % every == 0) coarse_samples.push_back(st);
                      });
    detail::integrate(field, params.kappa, params.transit_time(), 2 * nsteps, s0,
                      [&](long k, double, const detail::RawState& st) {
                          if (k > 0 && k % (2 * every) == 0) fine_samples.push_back(st);
                      });

    std::vector<TrajectorySample> out(samples);
    const double t_total = params.transit_time();
    for (int j = 0; j < samples; ++j) {
        const detail::RawState& c = coarse_samples[j];
        const detail::RawState& f = fine_samples[j];
        out[j].t = t_total * static_cast<double>(j + 1) / static_cast<double>(samples);
        out[j].state = Spinor::unchecked(c.up, c.down);
        out[j].state_refined =
            Spinor::unchecked((4.0 * f.up - c.up) / 3.0, (4.0 * f.down - c.down) / 3.0);
    }
    return out;
}

}  // namespace helispin
