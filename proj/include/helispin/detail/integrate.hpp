#pragma once

#include <cmath>
#include <complex>

#include "helispin/vec3.hpp"

namespace helispin::detail {

using cplx = std::complex<double>;

struct RawState {
    cplx up{1.0, 0.0};
    cplx down{0.0, 0.0};
};

struct Su2 {
    cplx m00, m01, m10, m11;
};

// exp(-i dt a.sigma) = cos(|a| dt) I - i sin(|a| dt) (a_hat . sigma).
// Exactly unitary up to floating-point rounding.
inline Su2 su2_exp(double ax, double ay, double az, double dt) {
    const double lam = std::sqrt(ax * ax + ay * ay + az * az);
    const double ang = lam * dt;
    const double c = std::cos(ang);
    const double s = std::sin(ang);
    double nx = 0.0, ny = 0.0, nz = 0.0;
    if (lam > 0.0) {
        nx = ax / lam;
        ny = ay / lam;
        nz = az / lam;
    }
    return {cplx(c, -s * nz), cplx(-s * ny, -s * nx), cplx(s * ny, -s * nx), cplx(c, s * nz)};
}

inline void apply(const Su2& u, RawState& p) {
    const cplx nu = u.m00 * p.up + u.m01 * p.down;
    const cplx nd = u.m10 * p.up + u.m11 * p.down;
    p.up = nu;
    p.down = nd;
}

// Midpoint-exponential stepping of i dpsi/dt = -(kappa/2) B(t).sigma psi over
// nsteps uniform steps on [0, t_total]. Each step applies the exact
// exponential of the midpoint Hamiltonian, so the scheme is unitary by
// construction and second-order accurate. at_node(k, t_k, state) fires at
// every node including k = 0.
template <class FieldFn, class NodeFn>
inline RawState integrate(FieldFn&& field, double kappa, double t_total, long nsteps,
                          RawState psi, NodeFn&& at_node) {
    const double dt = t_total / static_cast<double>(nsteps);
    at_node(0L, 0.0, psi);
    const double half_kappa = -0.5 * kappa;
    for (long k = 0; k < nsteps; ++k) {
        const Vec3 b = field((static_cast<double>(k) + 0.5) * dt);
        apply(su2_exp(half_kappa * b.x, half_kappa * b.y, half_kappa * b.z, dt), psi);
        at_node(k + 1, static_cast<double>(k + 1) * dt, psi);
    }
    return psi;
}

// <psi| -(kappa/2) B.sigma |psi> for a raw state.
inline double field_energy_expectation(const Vec3& b, double kappa, const RawState& p) {
    const cplx ud = std::conj(p.up) * p.down;
    const double sx = 2.0 * ud.real();
    const double sy = 2.0 * ud.imag();
    const double sz = std::norm(p.up) - std::norm(p.down);
    return -0.5 * kappa * (b.x * sx + b.y * sy + b.z * sz);
}

}  // namespace helispin::detail
