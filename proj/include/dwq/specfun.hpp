#ifndef DWQ_SPECFUN_HPP
#define DWQ_SPECFUN_HPP

/*
 * Spherical Bessel functions of integer order and the substitution chain
 * that turns them into exact analytic solutions of the damped/amplified
 * oscillator pair.
 *
 * Any solution M_n of  z^2 M'' + 2z M' + (z^2 - n(n+1)) M = 0  yields, via
 *
 *     x(t) = e^{-t/alpha_n},  z(t) = epsilon_n x(t),
 *     alpha_n = (2n+1)/L,     epsilon_n = omega0 (2n+1)/L,
 *
 * the pair
 *
 *     u(t) = M_n(z) x^{n+1}   (damped:    u'' + L u' + omega_n^2(t) u = 0)
 *     v(t) = M_n(z) x^{-n}    (amplified: v'' - L v' + omega_n^2(t) v = 0)
 *
 * with v/u = e^{Lt} identically, and the harmonically conjugate amplitude
 *
 *     r(t) = sqrt(2) u e^{Lt/2} = sqrt(2) v e^{-Lt/2} = sqrt(2) M_n(z) sqrt(x)
 *
 * satisfying  r'' + Omega_n^2(t) r = 0.
 *
 * j_n uses upward recurrence for z >= n and Miller downward normalization
 * (anchor j_0 = sin z / z) otherwise; y_n always recurs upward (it is the
 * growing solution, so upward is stable). Derivatives come from the order
 * identity f_n' = f_{n-1} - ((n+1)/z) f_n, never from finite differences.
 */

#include <cstdint>

#include "dwq/model.hpp"

namespace dwq {

/// Largest supported order; beyond this a capability_error is thrown.
inline constexpr int kMaxBesselOrder = 200;

/// y_n is rejected below this argument (it diverges at the origin and the
/// transform only drives z -> 0 as t -> infinity).
inline constexpr double kMinYArgument = 1e-6;

enum class BesselKind { first, second };

/// Value with a crude absolute-error estimate (recurrence-length scaled ulps).
struct BesselValue {
    double value = 0.0;
    double abs_error = 0.0;
};

BesselValue sph_bessel(BesselKind kind, int n, double z);
inline BesselValue sph_bessel_j(int n, double z) { return sph_bessel(BesselKind::first, n, z); }
inline BesselValue sph_bessel_y(int n, double z) { return sph_bessel(BesselKind::second, n, z); }

/// f_n(z), f_n'(z), f_n''(z) from neighbouring orders.
struct BesselJet {
    double f = 0.0;
    double df = 0.0;
    double d2f = 0.0;
};

BesselJet sph_bessel_jet(BesselKind kind, int n, double z);

/// Coefficients of the mode function M_n = a * j_n + b * y_n.
struct BesselCoeffs {
    double a = 1.0;  ///< regular (first-kind) weight
    double b = 0.0;  ///< second-kind weight

    void validate() const {
        if (a == 0.0 && b == 0.0)
            throw std::invalid_argument("BesselCoeffs: (a, b) must not both be zero");
    }
};

BesselJet mode_function_jet(const BesselCoeffs& coeffs, int n, double z);

/// Substitution bookkeeping for one (n, omega0, L) triple. L and omega0 are
/// stored directly, so (2n+1)/alpha_n == L and epsilon_n/alpha_n == omega0
/// hold by construction.
class TransformParams {
public:
    TransformParams(std::int64_t n, double omega0, const ModelParams& params);

    std::int64_t n() const { return n_; }
    double damping() const { return damping_; }
    double omega0() const { return omega0_; }

    double alpha() const { return (2.0 * static_cast<double>(n_) + 1.0) / damping_; }
    double epsilon() const { return omega0_ * alpha(); }

    double x(double t) const;  ///< e^{-t/alpha}, x(0) = 1, strictly decreasing
    double z(double t) const { return epsilon() * x(t); }

private:
    std::int64_t n_;
    double damping_;
    double omega0_;
};

/// The analytic (u, v) pair at time t.
struct PairState {
    double u = 0.0;
    double v = 0.0;
};

/// (u, v) with first and second time derivatives, for residual certification.
struct PairJets {
    Jet u;
    Jet v;
};

PairState analytic_pair(double t, const TransformParams& tp, const BesselCoeffs& coeffs = {});
PairState analytic_pair(double t, const Mode& mode, const ModelParams& params,
                        const BesselCoeffs& coeffs = {});

PairJets analytic_pair_jets(double t, const TransformParams& tp, const BesselCoeffs& coeffs = {});

/// Harmonically conjugate amplitude r(t) = sqrt(2) M_n(z) sqrt(x), the
/// parametric-oscillator solution matching the pair built from the same M_n.
double conjugate_r(double t, const TransformParams& tp, const BesselCoeffs& coeffs = {});
Jet conjugate_r_jet(double t, const TransformParams& tp, const BesselCoeffs& coeffs = {});

}  // namespace dwq

#endif  // DWQ_SPECFUN_HPP
