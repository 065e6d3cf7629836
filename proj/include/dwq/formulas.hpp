#ifndef DWQ_FORMULAS_HPP
#define DWQ_FORMULAS_HPP

/*
 * Closed-form mode dynamics of the parametric dissipative model.
 *
 * Each mode (k, n) carries a time-dependent frequency
 *
 *     omega_n(t) = omega0 * exp(-L t / (2n+1)),        omega0 = k c,
 *
 * and the reduced (parametric-oscillator) frequency
 *
 *     Omega_n(t)^2 = omega_n(t)^2 - L^2/4.
 *
 * Reality of Omega bounds the recording window: with a = L/(2n+1),
 *
 *     T_{k,n} = (1/a) * ln(2 omega0 / L)               (when 2 omega0/L > 1),
 *     k >= k_tilde(n,t) = (L/(2c)) * e^{a t}           (equivalent condition),
 *
 * and the mode lifetime parameter obeys
 *
 *     e^{-2 Lambda(t)} = e^{-a t} sinh(a (T - t)) / sinh(a T),
 *     Omega(t) = Omega(0) * e^{-Lambda(t)}             (exact identity).
 *
 * The infrared cutoff k_tilde fixes the coherence-domain size
 * lambda_tilde = 2*pi / k_tilde (the 2*pi is conventional; overridable).
 *
 * All functions here are pure and safe for concurrent evaluation.
 */

#include <optional>

#include "dwq/model.hpp"

namespace dwq {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

/// Window in which a mode can record: present deadline iff 2*omega0/L > 1.
/// The boundary 2*omega0/L == 1 counts as not recordable (zero-measure window).
struct RecordingWindow {
    bool recordable = false;
    std::optional<double> deadline;  ///< T_{k,n}, present iff recordable
};

/// Infrared cutoff and coherence-domain size at one instant.
struct DomainSnapshot {
    double t = 0.0;
    double k_threshold = 0.0;  ///< k_tilde(n, t)
    double domain_size = 0.0;  ///< lambda_tilde = 2*pi / k_tilde
};

/// Frequency decay rate a = L/(2n+1); the inverse of the transform time alpha_n.
double frequency_decay_rate(std::int64_t n, const ModelParams& params);

/// omega_n(t) = omega0 * exp(-L t / (2n+1)). Total in t (negative t allowed).
double omega_n(double t, std::int64_t n, double omega0, const ModelParams& params);
double omega_n(double t, const Mode& mode, const ModelParams& params);

/// Signed squared parametric frequency Omega^2 = omega_n(t)^2 - L^2/4.
double capital_omega_sq(double t, std::int64_t n, double omega0, const ModelParams& params);
double capital_omega_sq(double t, const Mode& mode, const ModelParams& params);

/// Real root of Omega^2 when non-negative; absent once the mode has decayed.
std::optional<double> capital_omega(double t, const Mode& mode, const ModelParams& params);

/// Recording deadline T_{k,n} = ((2n+1)/L) ln(2 omega0/L); affine in n.
RecordingWindow recording_deadline(const Mode& mode, const ModelParams& params);
RecordingWindow recording_deadline(std::int64_t n, double omega0, const ModelParams& params);

/// Infrared threshold k_tilde(n,t) = (L/(2c)) e^{L t/(2n+1)}; requires t >= 0.
double k_threshold(std::int64_t n, double t, const ModelParams& params);

/// Coherence-domain size lambda_tilde = wavelength_factor / k_tilde(n,t).
double domain_size(std::int64_t n, double t, const ModelParams& params,
                   double wavelength_factor = kTwoPi);

DomainSnapshot domain_snapshot(std::int64_t n, double t, const ModelParams& params,
                               double wavelength_factor = kTwoPi);

/// Lifetime parameter Lambda_{k,n}(t) >= 0 on [0, T); Lambda(0) = 0 exactly and
/// Lambda -> infinity as t -> T. Evaluated in log-sinh form to stay accurate
/// near the deadline. Throws not_recordable_error / past_deadline_error.
double lifetime_lambda(double t, const Mode& mode, const ModelParams& params);
double lifetime_lambda(double t, std::int64_t n, double omega0, const ModelParams& params);

/// Omega reconstructed through the lifetime: Omega(0) * exp(-Lambda(t)).
/// Agrees with capital_omega(t) to floating-point identity tolerance.
double omega_via_lambda(double t, const Mode& mode, const ModelParams& params);

/// log(sinh(x)) for x > 0 without overflow or underflow of sinh itself.
double log_sinh(double x);

}  // namespace dwq

#endif  // DWQ_FORMULAS_HPP
