#ifndef DWQ_ERRORS_HPP
#define DWQ_ERRORS_HPP

#include <array>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace dwq {

/// Mode cannot record at all: 2*omega0/L <= 1, so no real-frequency window exists.
class not_recordable_error : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Evaluation requested at or past the recording deadline T_{k,n}.
class past_deadline_error : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Requested special-function order exceeds the supported maximum.
class capability_error : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Registry clock regression (events must be fed in non-decreasing time order).
class clock_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Adaptive integration aborted (step underflow or state overflow guard).
/// Carries the last accepted time and state so callers can diagnose.
class integration_failure : public std::runtime_error {
public:
    integration_failure(const std::string& what, double t_last,
                        const std::array<double, 4>& state_last, std::size_t dim)
        : std::runtime_error(what), t_last_(t_last), state_last_(state_last), dim_(dim) {}

    double t_last() const { return t_last_; }
    const std::array<double, 4>& state_last() const { return state_last_; }
    std::size_t dimension() const { return dim_; }

private:
    double t_last_;
    std::array<double, 4> state_last_;
    std::size_t dim_;
};

}  // namespace dwq

#endif  // DWQ_ERRORS_HPP
