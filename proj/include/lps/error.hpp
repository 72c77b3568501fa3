#pragma once

#include <stdexcept>
#include <string>

namespace lps {

/// Thrown when an argument violates an operation's precondition.
class precondition_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Thrown when a quadrature, series or truncation fails to reach its
/// tolerance. `estimate` carries the error estimate that tripped it.
class convergence_error : public std::runtime_error {
public:
    convergence_error(const std::string& what, double estimate = 0.0)
        : std::runtime_error(what), estimate_(estimate) {}

    double estimate() const noexcept { return estimate_; }

private:
    double estimate_;
};

namespace detail {

inline void require(bool cond, const char* what) {
    if (!cond) throw precondition_error(what);
}

}  // namespace detail
}  // namespace lps
