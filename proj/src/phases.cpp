#include "helispin/phases.hpp"

#include <cmath>
#include <numbers>

#include "helispin/detail/integrate.hpp"
#include "helispin/errors.hpp"

namespace helispin {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kCyclicityFloor = 0.999999;

// Streaming continuity unwrap with the exact-tie guard.
class Unwrapper {
  public:
    double push(double wrapped) {
        if (!has_prev_) {
            has_prev_ = true;
            prev_ = wrapped;
            acc_ = wrapped;
            return acc_;
        }
        const double pd = std::remainder(wrapped - prev_, kTwoPi);
        if (std::abs(std::abs(pd) - kPi) < 1e-9)
            throw AmbiguousUnwrapError("successive phase difference ties at pi");
        prev_ = wrapped;
        acc_ += pd;
        return acc_;
    }

  private:
    bool has_prev_ = false;
    double prev_ = 0.0;
    double acc_ = 0.0;
};

struct ExtractionRun {
    double total = 0.0;      // continuity-unwrapped arg<psi0|psi(T)>
    double dynamical = 0.0;  // -trapz <H>
    double cyclicity = 0.0;
};

ExtractionRun run_extraction(const std::function<Vec3(double)>& field, double kappa,
                             double t_total, long nsteps, const detail::RawState& s0,
                             PhaseTrace* trace) {
    const double dt = t_total / static_cast<double>(nsteps);
    Unwrapper unwrapper;
    ExtractionRun run;
    double energy_sum = 0.0;
    if (trace) {
        trace->times.reserve(nsteps + 1);
        trace->dynamical_integrand.reserve(nsteps + 1);
        trace->wrapped_total.reserve(nsteps + 1);
    }
    detail::integrate(field, kappa, t_total, nsteps, s0,
                      [&](long k, double t, const detail::RawState& st) {
                          const double energy = detail::field_energy_expectation(field(t), kappa, st);
                          energy_sum += (k == 0 || k == nsteps) ? 0.5 * energy : energy;
                          const cplx ov =
                              std::conj(s0.up) * st.up + std::conj(s0.down) * st.down;
                          const double wrapped = std::arg(ov);
                          run.total = unwrapper.push(wrapped);
                          if (trace) {
                              trace->times.push_back(t);
                              trace->dynamical_integrand.push_back(-energy);
                              trace->wrapped_total.push_back(wrapped);
                          }
                          if (k == nsteps) run.cyclicity = std::abs(ov);
                      });
    run.dynamical = -energy_sum * dt;
    return run;
}

PhaseExtraction extract_cyclic(const std::function<Vec3(double)>& field, double theta,
                               double omega, double kappa, int turns, Substate substate,
                               int steps_per_turn) {
    if (steps_per_turn < 16) throw DomainError("steps_per_turn must be >= 16");
    const double t_total = turns * kTwoPi / omega;
    const auto [s1, s2] = eigenbasis_along_s(theta, omega, 0.0);
    const Spinor& psi0 = (substate == Substate::up_along_s) ? s1 : s2;
    const detail::RawState s0{psi0.up(), psi0.down()};
    const long nsteps = static_cast<long>(steps_per_turn) * turns;

    PhaseExtraction out;
    const ExtractionRun base = run_extraction(field, kappa, t_total, nsteps, s0, &out.trace);
    if (base.cyclicity < kCyclicityFloor) throw NotCyclicError(base.cyclicity);
    ExtractionRun fine = run_extraction(field, kappa, t_total, 2 * nsteps, s0, nullptr);

    // The two runs agree on the total up to discretization; re-align the fine
    // run's 2*pi branch to the base run before extrapolating.
    fine.total += kTwoPi * std::round((base.total - fine.total) / kTwoPi);
    const double total = (4.0 * fine.total - base.total) / 3.0;
    const double dynamical = (4.0 * fine.dynamical - base.dynamical) / 3.0;

    out.phases.total = total;
    out.phases.dynamical = dynamical;
    out.phases.geometric = total - dynamical;
    out.phases.substate = substate;
    out.cyclicity = base.cyclicity;
    out.steps = nsteps;
    return out;
}

}  // namespace

double ConeDrive::transit_time() const { return turns * kTwoPi / omega; }

Vec3 ConeDrive::field(double t) const {
    return reconstruct_field(RotatingFrameParams{b_eff, theta}, kappa, omega, t);
}

void ConeDrive::validate() const {
    if (!(theta >= 0.0 && theta <= kPi)) throw DomainError("theta must lie in [0, pi]");
    if (!(omega > 0.0) || !std::isfinite(omega))
        throw DomainError("omega must be positive and finite");
    if (!(kappa > 0.0) || !std::isfinite(kappa))
        throw DomainError("kappa must be positive and finite");
    if (!std::isfinite(b_eff)) throw DomainError("b_eff must be finite");
    if (turns < 1) throw DomainError("turns must be >= 1");
}

std::vector<double> unwrap_phase(std::span<const double> wrapped) {
    std::vector<double> out;
    out.reserve(wrapped.size());
    Unwrapper unwrapper;
    for (const double w : wrapped) out.push_back(unwrapper.push(w));
    return out;
}

double wrap_geometric(double geometric, int turns) {
    if (turns < 1) throw DomainError("turns must be >= 1");
    const double window = kTwoPi * static_cast<double>(turns);
    double w = std::fmod(geometric, window);
    if (w > 0.0) w -= window;
    if (w == -window) w = 0.0;
    return w == 0.0 ? 0.0 : w;  // normalize -0
}

PhaseExtraction extract_phases(const HelicalFieldParams& params, Substate substate,
                               int steps_per_turn) {
    params.validate();
    const RotatingFrameParams frame = rotating_frame_params(params);
    const double w = params.omega();
    const double transverse = params.b0 * std::sin(params.phi);
    const double axial = params.b0 * std::cos(params.phi);
    auto field = [=](double t) {
        const double wt = w * t;
        return Vec3{transverse * std::cos(wt), transverse * std::sin(wt), axial};
    };
    return extract_cyclic(field, frame.theta, w, params.kappa, params.turns, substate,
                          steps_per_turn);
}

PhaseExtraction extract_phases(const ConeDrive& drive, Substate substate, int steps_per_turn) {
    drive.validate();
    auto field = [drive](double t) { return drive.field(t); };
    return extract_cyclic(field, drive.theta, drive.omega, drive.kappa, drive.turns, substate,
                          steps_per_turn);
}

PhaseExtraction extract_phases_with_field(const std::function<Vec3(double)>& field,
                                          const ConeDrive& reference, Substate substate,
                                          int steps_per_turn) {
    reference.validate();
    return extract_cyclic(field, reference.theta, reference.omega, reference.kappa,
                          reference.turns, substate, steps_per_turn);
}

}  // namespace helispin
