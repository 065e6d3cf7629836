#ifndef DWQ_INTEGRATOR_HPP
#define DWQ_INTEGRATOR_HPP

/*
 * Adaptive Dormand-Prince 5(4) integration of the oscillator systems, plus
 * residual-based certification of candidate solutions.
 *
 * Two system forms:
 *
 *   damped_pair   state (u, u', v, v'):  u'' + L u' + omega_n^2(t) u = 0
 *                                        v'' - L v' + omega_n^2(t) v = 0
 *   parametric_r  state (r, r'):         r'' + Omega_n^2(t) r = 0
 *
 * The amplified v component grows like e^{Lt}; integration aborts with an
 * integration_failure (carrying the last accepted state) once any component
 * exceeds 1e150 in magnitude, and likewise on step-size underflow.
 */

#include <array>
#include <cstddef>
#include <utility>
#include <vector>

#include "dwq/model.hpp"

namespace dwq {

/// Overflow guard: integration aborts when any |state component| exceeds this.
inline constexpr double kStateOverflowGuard = 1e150;

enum class SystemForm { damped_pair, parametric_r };

/// Which equation a candidate solution is certified against.
enum class Equation { damped, amplified, parametric };

struct OscillatorSystem {
    SystemForm form = SystemForm::damped_pair;
    Mode mode;
    ModelParams params;

    std::size_t dimension() const { return form == SystemForm::damped_pair ? 4 : 2; }
    void validate() const;

    /// Right-hand side of the first-order system; only the first dimension()
    /// entries of y and dydt are meaningful.
    void rhs(double t, const std::array<double, 4>& y, std::array<double, 4>& dydt) const;
};

struct IntegratorConfig {
    double rel_tol = 1e-9;
    double abs_tol = 1e-12;
    double max_step = 0.0;      ///< upper bound on step size; 0 means span-limited only
    bool dense_output = false;  ///< required when sampling at caller-chosen times

    void validate() const;  // tolerances must lie in (1e-15, 1e-2)
};

struct IntegrationStats {
    std::size_t steps_accepted = 0;
    std::size_t steps_rejected = 0;
    std::size_t rhs_evaluations = 0;
    double max_local_error = 0.0;  ///< largest accepted scaled error estimate
};

/// Immutable sampled solution. times are strictly increasing and start at t0
/// with the supplied initial state; only the first `dimension` entries of each
/// state are meaningful.
struct Trajectory {
    std::vector<double> times;
    std::vector<std::array<double, 4>> states;
    std::size_t dimension = 0;
    IntegrationStats stats;
};

/// Integrate over [t0, t1], sampling at every accepted step. When t_eval is
/// non-empty the trajectory is instead sampled at those times (strictly
/// increasing, inside (t0, t1]) through the 5th-order dense interpolant; this
/// requires cfg.dense_output. The initial sample (t0, init) is always first.
Trajectory integrate(const OscillatorSystem& system, const std::array<double, 4>& init,
                     double t0, double t1, const IntegratorConfig& cfg = {},
                     const std::vector<double>& t_eval = {});

/// Normalized equation residual of a candidate jet (value, d1, d2) at time t:
/// |x'' +/- L x' + omega_n^2(t) x| over max(|omega^2 x|, |L x'|, |x''|, floor)
/// for the damped/amplified equations, and |r'' + Omega^2 r| over
/// max(|Omega^2 r|, |r''|, floor) for the parametric one. Zero candidates
/// give zero residual.
double residual(Equation eq, double t, const Jet& candidate, const Mode& mode,
                const ModelParams& params);

/// Same, with the equation checked for consistency against the system form.
double residual(const OscillatorSystem& system, Equation eq, double t, const Jet& candidate);

/// E(t) = r'^2/2 + Omega^2(t) r^2/2 per trajectory sample. Only meaningful
/// for parametric_r trajectories; anything else is a usage error.
std::vector<double> energy_like_diagnostic(const Trajectory& traj, const OscillatorSystem& system);

}  // namespace dwq

#endif  // DWQ_INTEGRATOR_HPP
