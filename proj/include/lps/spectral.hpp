#pragma once

// Eigenbasis expansions on a sampled grid: Hermite functions (tensor box on
// uniform axes), Laguerre functions (half-line axis) and the discrete
// Fourier basis of a periodic box (classical heat semigroup).

#include "lps/field.hpp"
#include "lps/frac.hpp"
#include "lps/kernels.hpp"

#include <complex>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace lps {



/// Per-mode, per-component coefficients, component-major. Real bases
/// store zero imaginary parts.
struct CoefficientVector {
    std::size_t modes = 0;
    std::size_t components = 0;
    std::vector<std::complex<double>> values;
    /// Grid quadrature of ||f||^2 summed over components.
    double norm_squared = 0.0;
    /// Energy not captured by the truncation: ||f||^2 - sum |c|^2 for
    /// Hermite/Laguerre; for the Fourier basis, energy in the outer eighth
    /// of the frequency box (an aliasing indicator).
    double tail_energy = 0.0;

    std::complex<double>& at(std::size_t mode, std::size_t c = 0) { return values[c * modes + mode]; }
    std::complex<double> at(std::size_t mode, std::size_t c = 0) const { return values[c * modes + mode]; }
};

struct ExpandOptions {
    /// Relative to ||f||^2; +inf disables the check.
    double tail_tolerance = 1e-8;
};

struct ApplyOptions {
    /// Bound on sqrt(tail energy) * sup_{lambda >= lambda_max} |w(lambda)|,
    /// relative to ||f||; +inf disables the check.
    double tail_tolerance = 1e-6;
};

class SpectralBasis {
public:
    /// K modes per axis (K = 0 picks the largest K the grid resolves).
    static SpectralBasis hermite(const Grid& grid, int K = 0,
                                 HermiteEigenvalues convention = HermiteEigenvalues::two_k_plus_n);
    static SpectralBasis laguerre(BesselOrder beta, const Grid& grid, int K = 0);
    /// DFT modes of the periodic box spanned by a uniform grid;
    /// lambda = |xi|^2 with the zero mode at lambda = 0.
    static SpectralBasis fourier(const Grid& grid);
    static SpectralBasis for_semigroup(const SemigroupId& id, const Grid& grid, int K = 0);

    const SemigroupId& semigroup() const;
    const Grid& grid() const;
    std::size_t modes() const;
    /// Modes per axis (Hermite/Laguerre); grid shape for Fourier.
    std::vector<std::size_t> mode_shape() const;
    std::span<const double> eigenvalues() const;
    double max_eigenvalue() const;
    /// Smallest nonzero eigenvalue.
    double min_positive_eigenvalue() const;

    CoefficientVector expand(const SampledField& f, ExpandOptions options = {}) const;
    SampledField synthesize(const CoefficientVector& c) const;

    /// Synthesizes sum_k w(lambda_k) c_k e_k.
    SampledField apply_multiplier(const CoefficientVector& c, const std::function<double(double)>& w,
                                  ApplyOptions options = {}) const;
    /// e_k(x) for every mode, at an arbitrary point (not only grid nodes).
    std::vector<std::complex<double>> evaluate_modes(std::span<const double> x) const;
    /// Same with precomputed per-mode weights (length modes()).
    SampledField apply_weights(const CoefficientVector& c, std::span<const double> weights) const;

    struct Impl;  // opaque

private:
    explicit SpectralBasis(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
    std::shared_ptr<const Impl> impl_;
};

CoefficientVector expand(const SampledField& f, const SpectralBasis& basis, ExpandOptions options = {});

/// Synthesizes sum_k w(lambda_k) c_k e_k with w = e^{-lambda t}, or
/// (-1)^m lambda^alpha e^{-lambda t} when an order is given.
SampledField spectral_apply(const CoefficientVector& c, const SpectralBasis& basis, double t,
                            const std::optional<FractionalOrder>& ord, ApplyOptions options = {});

/// Fixed-point projection onto {f : T_t f = f for all t}. Zero for the
/// classical, Hermite and Laguerre semigroups.
SampledField fixed_point_projection(const SemigroupId& id, const SampledField& f);

struct PairingResult {
    double lhs = 0.0;   // int_0^inf <t^a d^a T_t f, t^a d^a T_t g> dt/t
    double rhs = 0.0;   // Gamma(2a)/2^{2a} <f - Ff, g - Fg>
    double gap = 0.0;   // |lhs - rhs| / max(|rhs|, constant * ||f|| ||g||)
    double constant = 0.0;
    std::size_t time_nodes = 0;
};

struct PairingOptions {
    /// Log-time window; zeros pick it from the extreme eigenvalues.
    double t_min = 0.0;
    double t_max = 0.0;
    double panels_per_unit = 2.0;
    int order = 16;
};

PairingResult polarization_pairing(const SampledField& f, const SampledField& g, const SpectralBasis& basis,
                                   const FractionalOrder& ord, PairingOptions options = {});

}  // namespace lps
