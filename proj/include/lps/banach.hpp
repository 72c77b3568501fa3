#pragma once

// Finite-dimensional Banach geometry: moduli of convexity and smoothness,
// dyadic martingales and their q-square functions, and the Lusin ratio
// probe comparing ||g_{q,B}(f)||_p with ||f||_{L^p(B)}.

#include "lps/lpfun.hpp"
#include "lps/normed_space.hpp"
#include "lps/parallel.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace lps {

struct ModulusOptions {
    int restarts = 64;
    std::uint64_t seed = 1;
    /// Compass-search step floor.
    double min_step = 1e-9;
    int max_iterations = 6000;
    Execution exec = Execution::parallel;
};

struct ModulusResult {
    double value = 0.0;
    std::vector<double> a;
    std::vector<double> b;
    /// | ||a - b|| - eps | for convexity; 0 for smoothness.
    double residual = 0.0;
};

/// delta_B(eps) = inf{1 - ||(a + b)/2|| : ||a|| = ||b|| = 1, ||a - b|| = eps}.
/// b is retracted onto the constraint along the plane through a and a free
/// direction u: b(theta) = normalize(cos(theta) a + sin(theta) u), theta by bracketed root finding.
ModulusResult modulus_convexity(const NormedSpace& space, double eps, ModulusOptions options = {});

/// rho_B(t) = sup{(||a + t b|| + ||a - t b||)/2 - 1 : ||a|| = ||b|| = 1}.
ModulusResult modulus_smoothness(const NormedSpace& space, double t, ModulusOptions options = {});

/// Random-pair estimates used as independent checks of the optimizers.
double modulus_convexity_sampled(const NormedSpace& space, double eps, std::size_t samples, std::uint64_t seed);
double modulus_smoothness_sampled(const NormedSpace& space, double t, std::size_t samples, std::uint64_t seed);

/// Martingale on 2^N equally likely atoms; M_n is constant on the dyadic
/// blocks of size 2^{N-n}.
class FiniteMartingale {
public:
    /// values[n][atom * dim + c] for n = 0..N. Throws precondition_error if
    /// M_n is not adapted or the conditional-mean property fails (1e-12).
    FiniteMartingale(std::size_t depth, std::size_t dim, std::vector<std::vector<double>> values);

    /// M_0 and each split d, -d drawn from N(0, scale^2).
    static FiniteMartingale random(std::size_t depth, std::size_t dim, std::mt19937_64& rng, double scale = 1.0);

    std::size_t depth() const { return depth_; }
    std::size_t dim() const { return dim_; }
    std::size_t atoms() const { return std::size_t{1} << depth_; }
    std::span<const double> value(std::size_t n, std::size_t atom) const;

    /// max over blocks of |E[M_n | F_{n-1}] - M_{n-1}|.
    double martingale_residual() const;

private:
    std::size_t depth_, dim_;
    std::vector<std::vector<double>> values_;
};

/// S_q(M) = (||M_0||^q + sum_{n>=1} ||M_n - M_{n-1}||^q)^{1/q} per atom.
std::vector<double> martingale_square_fn(const FiniteMartingale& mart, const NormedSpace& space, double q);

struct RatioSummary {
    double min = 0.0;
    double median = 0.0;
    double max = 0.0;
};

struct LusinReport {
    RatioSummary cotype;  // ||g||_p / ||f||_p
    RatioSummary type;    // ||f||_p / ||g||_p
    std::vector<double> cotype_samples;
    std::size_t trials = 0;
};

struct LusinProbeOptions {
    double half_width = 8.0;
    std::size_t points = 256;
    /// Classical: Fourier modes k_min..k_max of the box; Hermite: h_k, k < k_max.
    int k_min = 1;
    int k_max = 8;
    std::uint64_t seed = 1;
};

/// Random band-limited B-valued fields (independent coordinates); classical
/// or Hermite semigroups on a 1-D grid.
LusinReport lusin_ratio_probe(const SemigroupId& id, const GFunctionSpec& spec, double p, std::size_t trials,
                              LusinProbeOptions options = {});

}  // namespace lps
