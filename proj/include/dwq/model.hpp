#ifndef DWQ_MODEL_HPP
#define DWQ_MODEL_HPP

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace dwq {

/// Global physical parameters of the dissipative mode model.
///
/// All quantities are dimensionless multiples of user-chosen base units;
/// there is no unit-conversion layer.
struct ModelParams {
    double damping = 1.0;     ///< L, the environment coupling rate [1/time]
    double wave_speed = 1.0;  ///< c, propagation speed [length/time]; omega0 = k*c

    void validate() const {
        if (!(damping > 0.0) || !std::isfinite(damping))
            throw std::invalid_argument("ModelParams: damping L must be positive and finite");
        if (!(wave_speed > 0.0) || !std::isfinite(wave_speed))
            throw std::invalid_argument("ModelParams: wave_speed c must be positive and finite");
    }
};

/// One correlation mode: wavenumber k together with the openness level n
/// (the integer number of links the system has with its environment).
struct Mode {
    double k = 1.0;         ///< wavenumber [1/length], k > 0
    std::int64_t n = 0;     ///< openness, n >= 0

    double omega0(const ModelParams& p) const { return k * p.wave_speed; }

    void validate() const {
        if (!(k > 0.0) || !std::isfinite(k))
            throw std::invalid_argument("Mode: wavenumber k must be positive and finite");
        if (n < 0)
            throw std::invalid_argument("Mode: openness n must be non-negative");
    }
};

/// A scalar signal value with its first two time derivatives.
struct Jet {
    double value = 0.0;
    double d1 = 0.0;
    double d2 = 0.0;
};

}  // namespace dwq

#endif  // DWQ_MODEL_HPP
