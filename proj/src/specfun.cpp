#include "dwq/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "dwq/errors.hpp"

namespace dwq {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kRescaleLimit = 1e250;
constexpr double kRescale = 1e-250;

void check_argument(BesselKind kind, int n, double z) {
    if (n < 0) throw std::domain_error("sph_bessel: order n must be >= 0");
    if (n > kMaxBesselOrder)
        throw capability_error("sph_bessel: order n=" + std::to_string(n) +
                               " exceeds supported maximum " + std::to_string(kMaxBesselOrder));
    if (!(z > 0.0) || !std::isfinite(z))
        throw std::domain_error("sph_bessel: argument z must be positive and finite");
    if (kind == BesselKind::second && z < kMinYArgument)
        throw std::domain_error("sph_bessel_y: argument below supported minimum 1e-6");
}

// Closed-form seeds. Negative orders extend the recurrence downward:
// f_{-1} and f_{-2} follow from f_{m-1} = ((2m+1)/z) f_m - f_{m+1}.
double seed(BesselKind kind, int m, double z) {
    const double s = std::sin(z), c = std::cos(z);
    if (kind == BesselKind::first) {
        switch (m) {
            case -2: return -s / z - c / (z * z);
            case -1: return c / z;
            case 0: return s / z;
            case 1: return s / (z * z) - c / z;
        }
    } else {
        switch (m) {
            case -2: return c / z - s / (z * z);
            case -1: return s / z;
            case 0: return -c / z;
            case 1: return -c / (z * z) - s / z;
        }
    }
    throw std::logic_error("sph_bessel: seed order out of range");
}

// Upward recurrence f_{m+1} = ((2m+1)/z) f_m - f_{m-1} from the closed-form
// seeds. Stable for y everywhere and for j when z >= n.
double recur_upward(BesselKind kind, int n, double z) {
    if (n <= 1) return seed(kind, n, z);
    double fm1 = seed(kind, 0, z);
    double f = seed(kind, 1, z);
    for (int m = 1; m < n; ++m) {
        const double fp1 = (2.0 * m + 1.0) / z * f - fm1;
        fm1 = f;
        f = fp1;
    }
    return f;
}

// Miller downward recurrence for j_n when z < n, normalized by j_0 = sin z/z.
// `targets` receives f at orders n, n-1, ..., n-count+1 (unnormalized scale
// tracked through rescaling); the function returns the normalization factor.
struct MillerResult {
    double f_n = 0.0;      // j_n
    double f_nm1 = 0.0;    // j_{n-1} (valid when requested)
    int start_order = 0;   // recurrence length, for the error model
};

MillerResult recur_downward_j(int n, double z, bool want_nm1) {
    const int buffer = std::max(16, static_cast<int>(std::sqrt(40.0 * (n + 1))) + 10);
    const int m_start = n + buffer;
    double fp1 = 0.0;
    double fp = std::numeric_limits<double>::min();  // arbitrary tiny seed
    double t_n = 0.0, t_nm1 = 0.0;
    bool have_n = false, have_nm1 = false;
    for (int m = m_start; m >= 1; --m) {
        const double fm1 = (2.0 * m + 1.0) / z * fp - fp1;
        fp1 = fp;
        fp = fm1;
        if (m - 1 == n) {
            t_n = fm1;
            have_n = true;
        } else if (m - 1 == n - 1) {
            t_nm1 = fm1;
            have_nm1 = true;
        }
        if (std::abs(fp) > kRescaleLimit) {
            fp *= kRescale;
            fp1 *= kRescale;
            if (have_n) t_n *= kRescale;
            if (have_nm1) t_nm1 *= kRescale;
        }
    }
    // fp now holds the unnormalized f_0; anchor against j_0.
    const double norm = (std::sin(z) / z) / fp;
    MillerResult r;
    r.f_n = t_n * norm;
    r.f_nm1 = want_nm1 ? t_nm1 * norm : 0.0;
    r.start_order = m_start;
    return r;
}

double eval(BesselKind kind, int n, double z, int* recurrence_length) {
    if (kind == BesselKind::first && n >= 1 && z < static_cast<double>(n)) {
        const MillerResult r = recur_downward_j(n, z, false);
        if (recurrence_length) *recurrence_length = r.start_order;
        return r.f_n;
    }
    if (recurrence_length) *recurrence_length = n;
    return recur_upward(kind, n, z);
}

// f at orders n, n-1, n-2 mutually consistent (one recurrence pass).
void eval_triplet(BesselKind kind, int n, double z, double out[3]) {
    if (kind == BesselKind::first && n >= 1 && z < static_cast<double>(n)) {
        const MillerResult r = recur_downward_j(n, z, true);
        out[0] = r.f_n;
        out[1] = r.f_nm1;
        // One more downward step; this is the stable direction here.
        out[2] = (2.0 * (n - 1) + 1.0) / z * r.f_nm1 - r.f_n;
        return;
    }
    for (int i = 0; i < 3; ++i) {
        const int m = n - i;
        out[i] = (m >= -2) ? (m <= 1 ? seed(kind, m, z) : recur_upward(kind, m, z))
                           : 0.0;  // unreachable: n >= 0 keeps m >= -2
    }
}

}  // namespace

BesselValue sph_bessel(BesselKind kind, int n, double z) {
    check_argument(kind, n, z);
    int len = 0;
    BesselValue out;
    out.value = eval(kind, n, z, &len);
    out.abs_error = kEps * (2.0 * len + 10.0) * std::abs(out.value) +
                    4.0 * std::numeric_limits<double>::denorm_min();
    return out;
}

BesselJet sph_bessel_jet(BesselKind kind, int n, double z) {
    check_argument(kind, n, z);
    double f[3];
    eval_triplet(kind, n, z, f);
    BesselJet jet;
    jet.f = f[0];
    // f_n'  = f_{n-1} - ((n+1)/z) f_n
    jet.df = f[1] - (n + 1.0) / z * f[0];
    // f_n'' = f_{n-1}' + ((n+1)/z^2) f_n - ((n+1)/z) f_n'
    const double df_nm1 = f[2] - static_cast<double>(n) / z * f[1];
    jet.d2f = df_nm1 + (n + 1.0) / (z * z) * f[0] - (n + 1.0) / z * jet.df;
    return jet;
}

BesselJet mode_function_jet(const BesselCoeffs& coeffs, int n, double z) {
    coeffs.validate();
    BesselJet out;
    if (coeffs.a != 0.0) {
        const BesselJet j = sph_bessel_jet(BesselKind::first, n, z);
        out.f += coeffs.a * j.f;
        out.df += coeffs.a * j.df;
        out.d2f += coeffs.a * j.d2f;
    }
    if (coeffs.b != 0.0) {
        const BesselJet y = sph_bessel_jet(BesselKind::second, n, z);
        out.f += coeffs.b * y.f;
        out.df += coeffs.b * y.df;
        out.d2f += coeffs.b * y.d2f;
    }
    return out;
}

TransformParams::TransformParams(std::int64_t n, double omega0, const ModelParams& params)
    : n_(n), damping_(params.damping), omega0_(omega0) {
    params.validate();
    if (n < 0) throw std::invalid_argument("TransformParams: n must be >= 0");
    if (!(omega0 > 0.0) || !std::isfinite(omega0))
        throw std::invalid_argument("TransformParams: omega0 must be positive and finite");
}

double TransformParams::x(double t) const {
    if (!std::isfinite(t)) throw std::invalid_argument("TransformParams::x: t must be finite");
    return std::exp(-t / alpha());
}

namespace {

int bessel_order(const TransformParams& tp) {
    if (tp.n() > kMaxBesselOrder)
        throw capability_error("analytic solution: openness n exceeds supported Bessel order " +
                               std::to_string(kMaxBesselOrder));
    return static_cast<int>(tp.n());
}

}  // namespace

PairState analytic_pair(double t, const TransformParams& tp, const BesselCoeffs& coeffs) {
    coeffs.validate();
    if (!(t >= 0.0)) throw std::domain_error("analytic_pair: t must be >= 0");
    const int n = bessel_order(tp);
    const double x = tp.x(t);
    const double z = tp.z(t);
    double m = 0.0;
    if (coeffs.a != 0.0) m += coeffs.a * sph_bessel(BesselKind::first, n, z).value;
    if (coeffs.b != 0.0) m += coeffs.b * sph_bessel(BesselKind::second, n, z).value;
    PairState s;
    s.u = m * std::pow(x, static_cast<double>(n) + 1.0);
    s.v = m * std::pow(x, -static_cast<double>(n));
    return s;
}

PairState analytic_pair(double t, const Mode& mode, const ModelParams& params,
                        const BesselCoeffs& coeffs) {
    mode.validate();
    return analytic_pair(t, TransformParams(mode.n, mode.omega0(params), params), coeffs);
}

PairJets analytic_pair_jets(double t, const TransformParams& tp, const BesselCoeffs& coeffs) {
    if (!(t >= 0.0)) throw std::domain_error("analytic_pair_jets: t must be >= 0");
    const int n = bessel_order(tp);
    const double alpha = tp.alpha();
    const double x = tp.x(t);
    const double z = tp.z(t);
    const BesselJet m = mode_function_jet(coeffs, n, z);
    const double zdf = z * m.df;
    const double z2d2f = z * z * m.d2f;
    const double nn = static_cast<double>(n);

    PairJets out;
    const double g = std::pow(x, nn + 1.0);
    out.u.value = m.f * g;
    out.u.d1 = -(g / alpha) * (zdf + (nn + 1.0) * m.f);
    out.u.d2 = (g / (alpha * alpha)) * (z2d2f + (2.0 * nn + 3.0) * zdf + (nn + 1.0) * (nn + 1.0) * m.f);

    const double gi = std::pow(x, -nn);
    out.v.value = m.f * gi;
    out.v.d1 = (gi / alpha) * (-zdf + nn * m.f);
    out.v.d2 = (gi / (alpha * alpha)) * (z2d2f + (1.0 - 2.0 * nn) * zdf + nn * nn * m.f);
    return out;
}

double conjugate_r(double t, const TransformParams& tp, const BesselCoeffs& coeffs) {
    coeffs.validate();
    if (!(t >= 0.0)) throw std::domain_error("conjugate_r: t must be >= 0");
    const int n = bessel_order(tp);
    const double z = tp.z(t);
    double m = 0.0;
    if (coeffs.a != 0.0) m += coeffs.a * sph_bessel(BesselKind::first, n, z).value;
    if (coeffs.b != 0.0) m += coeffs.b * sph_bessel(BesselKind::second, n, z).value;
    return std::numbers::sqrt2 * m * std::sqrt(tp.x(t));
}

Jet conjugate_r_jet(double t, const TransformParams& tp, const BesselCoeffs& coeffs) {
    if (!(t >= 0.0)) throw std::domain_error("conjugate_r_jet: t must be >= 0");
    const int n = bessel_order(tp);
    const double alpha = tp.alpha();
    const double z = tp.z(t);
    const BesselJet m = mode_function_jet(coeffs, n, z);
    const double h = std::sqrt(tp.x(t));
    Jet r;
    r.value = std::numbers::sqrt2 * m.f * h;
    r.d1 = -(std::numbers::sqrt2 * h / alpha) * (z * m.df + 0.5 * m.f);
    r.d2 = (std::numbers::sqrt2 * h / (alpha * alpha)) * (z * z * m.d2f + 2.0 * z * m.df + 0.25 * m.f);
    return r;
}

}  // namespace dwq
