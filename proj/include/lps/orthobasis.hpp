#pragma once

// Normalized Hermite and Laguerre functions, the modified Bessel function
// I_beta, and the coefficients of its large-argument expansion.

#include <span>

namespace lps {

/// Order of a Laguerre system / Bessel function, beta > -1/2.
class BesselOrder {
public:
    explicit BesselOrder(double beta);
    double value() const noexcept { return beta_; }

private:
    double beta_;
};

/// Normalized Hermite function
///   h_l(z) = (sqrt(pi) 2^l l!)^{-1/2} e^{-z^2/2} H_l(z)
/// through the normalized three-term recurrence.
double hermite_fn(int l, double z);

/// h_0(z), ..., h_{max_l}(z) into out[0..max_l].
void hermite_fns(int max_l, double z, std::span<double> out);

/// Laguerre function
///   phi_k(x) = (2 k!/Gamma(k+1+beta))^{1/2} e^{-x^2/2} x^{beta+1/2} L_k^beta(x^2),
/// orthonormal on (0, inf) with respect to dx. Requires x > 0.
double laguerre_fn(int k, BesselOrder beta, double x);

/// phi_0(x), ..., phi_{max_k}(x) into out[0..max_k].
void laguerre_fns(int max_k, BesselOrder beta, double x, std::span<double> out);

enum class BesselScaling { unscaled, scaled };

/// I_beta(z) for z > 0, or e^{-z} I_beta(z) with BesselScaling::scaled.
/// Power series below bessel_crossover(beta), asymptotic expansion above.
double bessel_i(BesselOrder beta, double z, BesselScaling scaling = BesselScaling::unscaled);

/// Branches, exposed so the overlap agreement can be tested.
double bessel_i_series_scaled(double beta, double z);
double bessel_i_asymptotic_scaled(double beta, double z);

/// Crossover argument between the two branches.
double bessel_crossover(double beta);

/// [beta, l] = (4b^2 - 1)(4b^2 - 9)...(4b^2 - (2l-1)^2) / (2^{2l} l!), [beta, 0] = 1.
double bessel_asymptotic_coefficient(double beta, int l);

}  // namespace lps
