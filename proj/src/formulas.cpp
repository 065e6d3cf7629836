#include "dwq/formulas.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "dwq/errors.hpp"

namespace dwq {

namespace {

// 2n+1 as double; exact for all admissible n (|2n+1| < 2^53).
double two_n_plus_one(std::int64_t n) { return 2.0 * static_cast<double>(n) + 1.0; }

void check_omega0(double omega0) {
    if (!(omega0 > 0.0) || !std::isfinite(omega0))
        throw std::invalid_argument("omega0 must be positive and finite");
}

void check_n(std::int64_t n) {
    if (n < 0) throw std::invalid_argument("openness n must be non-negative");
}

void check_time_finite(double t) {
    if (!std::isfinite(t)) throw std::invalid_argument("time t must be finite");
}

}  // namespace

double log_sinh(double x) {
    // sinh(x) = e^x (1 - e^{-2x}) / 2; the expm1 form is accurate for both
    // x -> 0 and large x, where sinh itself would overflow.
    if (!(x > 0.0)) throw std::domain_error("log_sinh: argument must be positive");
    return x - std::numbers::ln2 + std::log(-std::expm1(-2.0 * x));
}

double frequency_decay_rate(std::int64_t n, const ModelParams& params) {
    params.validate();
    check_n(n);
    return params.damping / two_n_plus_one(n);
}

double omega_n(double t, std::int64_t n, double omega0, const ModelParams& params) {
    check_time_finite(t);
    check_omega0(omega0);
    return omega0 * std::exp(-frequency_decay_rate(n, params) * t);
}

double omega_n(double t, const Mode& mode, const ModelParams& params) {
    mode.validate();
    return omega_n(t, mode.n, mode.omega0(params), params);
}

double capital_omega_sq(double t, std::int64_t n, double omega0, const ModelParams& params) {
    const double w = omega_n(t, n, omega0, params);
    return w * w - 0.25 * params.damping * params.damping;
}

double capital_omega_sq(double t, const Mode& mode, const ModelParams& params) {
    mode.validate();
    return capital_omega_sq(t, mode.n, mode.omega0(params), params);
}

std::optional<double> capital_omega(double t, const Mode& mode, const ModelParams& params) {
    const double sq = capital_omega_sq(t, mode, params);
    if (sq < 0.0) return std::nullopt;
    return std::sqrt(sq);
}

RecordingWindow recording_deadline(std::int64_t n, double omega0, const ModelParams& params) {
    params.validate();
    check_n(n);
    check_omega0(omega0);
    const double ratio = 2.0 * omega0 / params.damping;
    RecordingWindow w;
    if (ratio > 1.0) {
        w.recordable = true;
        w.deadline = two_n_plus_one(n) / params.damping * std::log(ratio);
    }
    return w;
}

RecordingWindow recording_deadline(const Mode& mode, const ModelParams& params) {
    mode.validate();
    return recording_deadline(mode.n, mode.omega0(params), params);
}

double k_threshold(std::int64_t n, double t, const ModelParams& params) {
    params.validate();
    check_n(n);
    if (!(t >= 0.0))
        throw std::domain_error("k_threshold: t must be >= 0 (threshold evolves from the recording origin)");
    const double k0 = params.damping / (2.0 * params.wave_speed);
    return k0 * std::exp(frequency_decay_rate(n, params) * t);
}

double domain_size(std::int64_t n, double t, const ModelParams& params, double wavelength_factor) {
    if (!(wavelength_factor > 0.0))
        throw std::invalid_argument("domain_size: wavelength_factor must be positive");
    return wavelength_factor / k_threshold(n, t, params);
}

DomainSnapshot domain_snapshot(std::int64_t n, double t, const ModelParams& params,
                               double wavelength_factor) {
    DomainSnapshot s;
    s.t = t;
    s.k_threshold = k_threshold(n, t, params);
    s.domain_size = wavelength_factor / s.k_threshold;
    return s;
}

double lifetime_lambda(double t, std::int64_t n, double omega0, const ModelParams& params) {
    const RecordingWindow w = recording_deadline(n, omega0, params);
    if (!w.recordable)
        throw not_recordable_error("lifetime_lambda: mode is not recordable (2*omega0/L <= 1)");
    if (!(t >= 0.0)) throw std::domain_error("lifetime_lambda: t must be >= 0");
    const double T = *w.deadline;
    if (t >= T)
        throw past_deadline_error("lifetime_lambda: t >= deadline T=" + std::to_string(T) +
                                  " (Lambda diverges at the deadline)");
    if (t == 0.0) return 0.0;
    const double a = frequency_decay_rate(n, params);
    // -2 Lambda = -a t + log sinh(a (T-t)) - log sinh(a T)
    return 0.5 * (a * t + log_sinh(a * T) - log_sinh(a * (T - t)));
}

double lifetime_lambda(double t, const Mode& mode, const ModelParams& params) {
    mode.validate();
    return lifetime_lambda(t, mode.n, mode.omega0(params), params);
}

double omega_via_lambda(double t, const Mode& mode, const ModelParams& params) {
    mode.validate();
    const double omega0 = mode.omega0(params);
    const double lam = lifetime_lambda(t, mode.n, omega0, params);
    const double om0_sq = omega0 * omega0 - 0.25 * params.damping * params.damping;
    return std::sqrt(om0_sq) * std::exp(-lam);
}

}  // namespace dwq
