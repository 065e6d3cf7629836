#include "dwq/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "dwq/errors.hpp"
#include "dwq/formulas.hpp"

namespace dwq {

namespace {

using State = std::array<double, 4>;

// Dormand-Prince 5(4) tableau. b coincides with the last stage row (FSAL).
constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                 a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                 a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0, a74 = 125.0 / 192.0,
                 a75 = -2187.0 / 6784.0, a76 = 11.0 / 84.0;
// Difference between the 5th- and embedded 4th-order weights.
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                 e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
// Dense-output quartic coefficients.
constexpr double d1 = -12715105075.0 / 11282082432.0;
constexpr double d3 = 87487479700.0 / 32700410799.0;
constexpr double d4 = -10690763975.0 / 1880347072.0;
constexpr double d5 = 701980252875.0 / 199316789632.0;
constexpr double d6 = -1453857185.0 / 822651844.0;
constexpr double d7 = 69997945.0 / 29380423.0;

// PI step-size controller constants (standard dopri5 settings).
constexpr double kBeta = 0.04;
constexpr double kExpo1 = 0.2 - kBeta * 0.75;
constexpr double kSafe = 0.9;
constexpr double kFacc1 = 5.0;   // 1 / min-scale
constexpr double kFacc2 = 0.1;   // 1 / max-scale
constexpr std::size_t kMaxSteps = 5'000'000;

constexpr double kResidualFloor = std::numeric_limits<double>::min();

struct DenseSegment {
    double t = 0.0;
    double h = 0.0;
    State r1{}, r2{}, r3{}, r4{}, r5{};
};

State interpolate(const DenseSegment& seg, double t, std::size_t dim) {
    const double theta = (t - seg.t) / seg.h;
    const double theta1 = 1.0 - theta;
    State out{};
    for (std::size_t i = 0; i < dim; ++i) {
        out[i] = seg.r1[i] +
                 theta * (seg.r2[i] + theta1 * (seg.r3[i] + theta * (seg.r4[i] + theta1 * seg.r5[i])));
    }
    return out;
}

bool finite_and_bounded(const State& y, std::size_t dim) {
    for (std::size_t i = 0; i < dim; ++i)
        if (!std::isfinite(y[i]) || std::abs(y[i]) > kStateOverflowGuard) return false;
    return true;
}

[[noreturn]] void fail(const std::string& what, double t_last, const State& y_last,
                       std::size_t dim) {
    throw integration_failure("integrate: " + what + " at t = " + std::to_string(t_last), t_last,
                              y_last, dim);
}

// Hairer-style starting step size from the scaled magnitudes of y0, f0 and an
// Euler probe of the second derivative.
double initial_step(const OscillatorSystem& sys, double t0, const State& y0, const State& f0,
                    double hmax, const IntegratorConfig& cfg, IntegrationStats& stats) {
    const std::size_t dim = sys.dimension();
    double dnf = 0.0, dny = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
        const double sk = cfg.abs_tol + cfg.rel_tol * std::abs(y0[i]);
        dnf += (f0[i] / sk) * (f0[i] / sk);
        dny += (y0[i] / sk) * (y0[i] / sk);
    }
    double h = (dnf <= 1e-10 || dny <= 1e-10) ? 1e-6 : std::sqrt(dny / dnf) * 0.01;
    h = std::min(h, hmax);
    State y1{}, f1{};
    for (std::size_t i = 0; i < dim; ++i) y1[i] = y0[i] + h * f0[i];
    sys.rhs(t0 + h, y1, f1);
    ++stats.rhs_evaluations;
    double der2 = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
        const double sk = cfg.abs_tol + cfg.rel_tol * std::abs(y0[i]);
        der2 += ((f1[i] - f0[i]) / sk) * ((f1[i] - f0[i]) / sk);
    }
    der2 = std::sqrt(der2) / h;
    const double der12 = std::max(der2, std::sqrt(dnf));
    const double h1 =
        (der12 <= 1e-15) ? std::max(1e-6, h * 1e-3) : std::pow(0.01 / der12, 0.2);
    return std::min({100.0 * h, h1, hmax});
}

}  // namespace

void OscillatorSystem::validate() const {
    mode.validate();
    params.validate();
}

void OscillatorSystem::rhs(double t, const std::array<double, 4>& y,
                           std::array<double, 4>& dydt) const {
    if (form == SystemForm::damped_pair) {
        const double w = omega_n(t, mode, params);
        const double w2 = w * w;
        const double L = params.damping;
        dydt[0] = y[1];
        dydt[1] = -L * y[1] - w2 * y[0];
        dydt[2] = y[3];
        dydt[3] = L * y[3] - w2 * y[2];
    } else {
        const double W2 = capital_omega_sq(t, mode, params);
        dydt[0] = y[1];
        dydt[1] = -W2 * y[0];
        dydt[2] = 0.0;
        dydt[3] = 0.0;
    }
}

void IntegratorConfig::validate() const {
    const auto in_range = [](double tol) { return tol > 1e-15 && tol < 1e-2; };
    if (!in_range(rel_tol) || !in_range(abs_tol))
        throw std::invalid_argument("IntegratorConfig: tolerances must lie in (1e-15, 1e-2)");
    if (max_step < 0.0 || !std::isfinite(max_step))
        throw std::invalid_argument("IntegratorConfig: max_step must be finite and >= 0");
}

Trajectory integrate(const OscillatorSystem& system, const std::array<double, 4>& init,
                     double t0, double t1, const IntegratorConfig& cfg,
                     const std::vector<double>& t_eval) {
    system.validate();
    cfg.validate();
    if (!std::isfinite(t0) || !std::isfinite(t1) || !(t0 >= 0.0) || !(t1 > t0))
        throw std::invalid_argument("integrate: need finite 0 <= t0 < t1");
    const std::size_t dim = system.dimension();
    for (std::size_t i = 0; i < dim; ++i)
        if (!std::isfinite(init[i]))
            throw std::invalid_argument("integrate: initial state must be finite");
    if (!t_eval.empty()) {
        if (!cfg.dense_output)
            throw std::invalid_argument("integrate: t_eval sampling requires dense_output");
        double prev = t0;
        for (double te : t_eval) {
            if (!(te > prev) || !(te <= t1))
                throw std::invalid_argument(
                    "integrate: t_eval must be strictly increasing inside (t0, t1]");
            prev = te;
        }
    }

    Trajectory traj;
    traj.dimension = dim;
    traj.times.push_back(t0);
    traj.states.push_back(init);

    const double hmax = (cfg.max_step > 0.0) ? std::min(cfg.max_step, t1 - t0) : (t1 - t0);

    double t = t0;
    State y = init;
    State k1{}, k2{}, k3{}, k4{}, k5{}, k6{}, k7{};
    system.rhs(t, y, k1);
    ++traj.stats.rhs_evaluations;

    double h = initial_step(system, t, y, k1, hmax, cfg, traj.stats);
    double facold = 1e-4;
    bool last = false;
    bool reject = false;
    std::size_t next_eval = 0;
    const double uround = std::numeric_limits<double>::epsilon();

    for (std::size_t nstep = 0;; ++nstep) {
        if (nstep >= kMaxSteps) fail("step budget exhausted", t, y, dim);
        if (0.1 * std::abs(h) <= std::abs(t) * uround) fail("step size underflow", t, y, dim);
        if (t + 1.01 * h - t1 > 0.0) {
            h = t1 - t;
            last = true;
        }

        State ys{}, y1{};
        for (std::size_t i = 0; i < dim; ++i) ys[i] = y[i] + h * (a21 * k1[i]);
        system.rhs(t + c2 * h, ys, k2);
        for (std::size_t i = 0; i < dim; ++i) ys[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        system.rhs(t + c3 * h, ys, k3);
        for (std::size_t i = 0; i < dim; ++i)
            ys[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        system.rhs(t + c4 * h, ys, k4);
        for (std::size_t i = 0; i < dim; ++i)
            ys[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        system.rhs(t + c5 * h, ys, k5);
        for (std::size_t i = 0; i < dim; ++i)
            ys[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
        system.rhs(t + h, ys, k6);
        for (std::size_t i = 0; i < dim; ++i)
            y1[i] = y[i] + h * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
        system.rhs(t + h, y1, k7);
        traj.stats.rhs_evaluations += 6;

        double err = 0.0;
        for (std::size_t i = 0; i < dim; ++i) {
            const double ei =
                h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
            const double sk = cfg.abs_tol + cfg.rel_tol * std::max(std::abs(y[i]), std::abs(y1[i]));
            err += (ei / sk) * (ei / sk);
        }
        err = std::sqrt(err / static_cast<double>(dim));
        if (!std::isfinite(err)) fail("non-finite error estimate", t, y, dim);

        const double fac11 = std::pow(err, kExpo1);
        if (err <= 1.0) {
            facold = std::max(err, 1e-4);
            traj.stats.steps_accepted += 1;
            traj.stats.max_local_error = std::max(traj.stats.max_local_error, err);

            if (!finite_and_bounded(y1, dim)) fail("state overflow guard tripped", t, y, dim);

            // On the final step roundoff may leave t + h one ulp short of t1.
            const double t_end = last ? t1 : t + h;
            if (!t_eval.empty() && next_eval < t_eval.size() && t_eval[next_eval] <= t_end) {
                DenseSegment seg;
                seg.t = t;
                seg.h = h;
                for (std::size_t i = 0; i < dim; ++i) {
                    const double ydiff = y1[i] - y[i];
                    const double bspl = h * k1[i] - ydiff;
                    seg.r1[i] = y[i];
                    seg.r2[i] = ydiff;
                    seg.r3[i] = bspl;
                    seg.r4[i] = ydiff - h * k7[i] - bspl;
                    seg.r5[i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] +
                                     d6 * k6[i] + d7 * k7[i]);
                }
                while (next_eval < t_eval.size() && t_eval[next_eval] <= t_end) {
                    traj.times.push_back(t_eval[next_eval]);
                    traj.states.push_back(interpolate(seg, t_eval[next_eval], dim));
                    ++next_eval;
                }
            }

            k1 = k7;  // FSAL
            t += h;
            y = y1;
            if (t_eval.empty()) {
                traj.times.push_back(t);
                traj.states.push_back(y);
            }
            if (last) break;

            double fac = fac11 / std::pow(facold, kBeta);
            fac = std::max(kFacc2, std::min(kFacc1, fac / kSafe));
            double hnew = h / fac;
            if (reject) hnew = std::min(hnew, h);
            reject = false;
            h = std::min(hnew, hmax);
        } else {
            traj.stats.steps_rejected += 1;
            h = h / std::min(kFacc1, fac11 / kSafe);
            reject = true;
            last = false;
        }
    }

    if (!t_eval.empty() && next_eval < t_eval.size())
        fail("dense sampling incomplete", t, y, dim);  // unreachable: t reaches t1
    return traj;
}

double residual(Equation eq, double t, const Jet& candidate, const Mode& mode,
                const ModelParams& params) {
    mode.validate();
    params.validate();
    if (!std::isfinite(t)) throw std::invalid_argument("residual: t must be finite");
    const double L = params.damping;
    double num, den;
    if (eq == Equation::parametric) {
        const double W2 = capital_omega_sq(t, mode, params);
        num = std::abs(candidate.d2 + W2 * candidate.value);
        den = std::max({std::abs(W2 * candidate.value), std::abs(candidate.d2), kResidualFloor});
    } else {
        const double w = omega_n(t, mode, params);
        const double w2 = w * w;
        const double sign = (eq == Equation::damped) ? 1.0 : -1.0;
        num = std::abs(candidate.d2 + sign * L * candidate.d1 + w2 * candidate.value);
        den = std::max({std::abs(w2 * candidate.value), std::abs(L * candidate.d1),
                        std::abs(candidate.d2), kResidualFloor});
    }
    return num / den;
}

double residual(const OscillatorSystem& system, Equation eq, double t, const Jet& candidate) {
    const bool pair_eq = (eq == Equation::damped || eq == Equation::amplified);
    if ((system.form == SystemForm::damped_pair) != pair_eq)
        throw std::invalid_argument("residual: equation does not belong to the system form");
    return residual(eq, t, candidate, system.mode, system.params);
}

std::vector<double> energy_like_diagnostic(const Trajectory& traj,
                                           const OscillatorSystem& system) {
    if (system.form != SystemForm::parametric_r)
        throw std::invalid_argument("energy_like_diagnostic: requires a parametric_r trajectory");
    if (traj.dimension != 2)
        throw std::invalid_argument("energy_like_diagnostic: trajectory dimension mismatch");
    std::vector<double> out;
    out.reserve(traj.times.size());
    for (std::size_t s = 0; s < traj.times.size(); ++s) {
        const double W2 = capital_omega_sq(traj.times[s], system.mode, system.params);
        const double r = traj.states[s][0];
        const double rdot = traj.states[s][1];
        out.push_back(0.5 * rdot * rdot + 0.5 * W2 * r * r);
    }
    return out;
}

}  // namespace dwq
