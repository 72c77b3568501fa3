#pragma once

// Weyl fractional derivatives
//   d^alpha phi(t) = 1/Gamma(m - alpha) int_t^inf phi^(m)(u) (u - t)^{m - alpha - 1} du,
// m - 1 <= alpha < m, of scalar/vector time profiles and of semigroup actions.

#include "lps/field.hpp"
#include "lps/kernels.hpp"
#include "lps/parallel.hpp"

#include <functional>
#include <span>
#include <vector>

namespace lps {

class FractionalOrder {
public:
    explicit FractionalOrder(double alpha);
    double alpha() const noexcept { return alpha_; }
    /// floor(alpha) + 1, so m - 1 <= alpha < m.
    int m() const noexcept { return m_; }
    /// (-1)^m, the sign of d^alpha e^{-lambda t} / (lambda^alpha e^{-lambda t}).
    double sign() const noexcept { return m_ % 2 == 0 ? 1.0 : -1.0; }
    /// (-1)^m lambda^alpha e^{-lambda t}; zero at lambda = 0.
    double multiplier(double lambda, double t) const;

private:
    double alpha_;
    int m_;
};

/// How a profile's m-th derivative decays at infinity; bounds the
/// truncated tail of the Weyl integral.
struct DecayHint {
    enum class Kind { exponential, power };
    Kind kind = Kind::exponential;
    /// lambda for ~e^{-lambda u}; p for ~u^{-p} of the profile itself.
    double rate = 1.0;

    static DecayHint exponential(double lambda) { return {Kind::exponential, lambda}; }
    static DecayHint power(double p) { return {Kind::power, p}; }
};

/// phi(u) with optional analytic derivatives d^j phi / du^j.
struct TimeProfile {
    std::function<double(double)> value;
    /// (u, j) -> phi^(j)(u). Empty: Richardson central differences.
    std::function<double(double, int)> derivative;
    DecayHint decay;

    double nth_derivative(double u, int j) const;

    static TimeProfile exponential(double lambda);
    /// (shift + u)^{-p}
    static TimeProfile power(double shift, double p);
};

struct WeylOptions {
    /// Relative tail tolerance for the far-field truncation.
    double tolerance = 1e-13;
    int max_far_panels = 400;
};

struct WeylResult {
    double value = 0.0;
    double error_estimate = 0.0;
};

/// Near u = t the substitution u = t + v^{1/(m - alpha)} removes the
/// endpoint singularity; the far part uses doubling panels until the
/// decay hint bounds the remainder.
WeylResult weyl_derivative_fn(const TimeProfile& phi, const FractionalOrder& ord, double t, WeylOptions options = {});

/// Vector-valued profile: deriv(u, out) fills phi^(m)(u) for every
/// component. Returns the Weyl derivative per component; the error estimate
/// is the max over components.
WeylResult weyl_derivative_vec(const std::function<void(double, std::span<double>)>& deriv_m, std::size_t components,
                               const DecayHint& decay, const FractionalOrder& ord, double t, std::span<double> out,
                               WeylOptions options = {});

/// Central-difference derivative of order j in [1, 3] with one Richardson
/// step; h defaults to 1e-2 * |u|.
double finite_difference_derivative(const std::function<double(double)>& f, double u, int j, double h = 0.0);

/// t^0 d^alpha T_t f through the eigenbasis: (-1)^m lambda^alpha e^{-lambda t}
/// per mode. Classical semigroups use the periodic box of f's grid, so f
/// should be zero-padded (pad_symmetric) well beyond its support.
SampledField frac_semigroup_apply(const SemigroupId& id, const SampledField& f, const FractionalOrder& ord, double t);

/// Same quantity at the given points by the defining integral applied to
/// u -> T_u f(x), with T_u f(x) = sum_j w_j d^m_u K_u(x, y_j) f(y_j) over f's grid.
std::vector<double> frac_semigroup_apply_kernel(const SemigroupId& id, const SampledField& f, const FractionalOrder& ord,
                                                double t, const std::vector<std::vector<double>>& points,
                                                std::size_t component = 0, Execution exec = Execution::parallel);

}  // namespace lps
