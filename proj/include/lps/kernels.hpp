#pragma once

// Heat kernels of the classical, Hermite and Laguerre semigroups, the
// classical Poisson kernel, T_t(1), and Gaussian-bound certification.

#include "lps/orthobasis.hpp"
#include "lps/parallel.hpp"

#include <span>
#include <string>
#include <vector>

namespace lps {

enum class SemigroupKind { classical, hermite, laguerre };

class SemigroupId {
public:
    static SemigroupId classical(int n);
    static SemigroupId hermite(int n);
    static SemigroupId laguerre(BesselOrder beta);

    SemigroupKind kind() const { return kind_; }
    int dim() const { return dim_; }
    /// Laguerre order; 0 for the other kinds.
    double beta() const { return beta_; }
    std::string label() const;
    /// Laguerre kernels live on (0, inf); the others on R^n.
    bool in_domain(std::span<const double> x) const;

private:
    SemigroupId(SemigroupKind kind, int dim, double beta) : kind_(kind), dim_(dim), beta_(beta) {}
    SemigroupKind kind_;
    int dim_;
    double beta_;
};

/// Which eigenvalue formula a Hermite spectral sum uses for h_k.
enum class HermiteEigenvalues {
    two_k_plus_n,    // lambda_k = 2|k| + n
    two_k_plus_two_n // lambda_k = 2(|k| + n)
};

double hermite_eigenvalue(std::span<const int> k, HermiteEigenvalues convention = HermiteEigenvalues::two_k_plus_n);

double heat_kernel(const SemigroupId& id, double t, std::span<const double> x, std::span<const double> y);

/// log K_t(x, y), finite even where K underflows.
double log_heat_kernel(const SemigroupId& id, double t, std::span<const double> x, std::span<const double> y);

/// k-th time derivative, k in [0, 3]. Analytic for classical and Hermite;
/// Richardson-extrapolated central differences of log K for Laguerre.
double heat_kernel_dt(const SemigroupId& id, int k, double t, std::span<const double> x, std::span<const double> y);

/// Truncated eigenfunction expansion of the Hermite (per-axis modes 0..K)
/// or Laguerre (modes 0..K) heat kernel.
double kernel_series(const SemigroupId& id, int K, double t, std::span<const double> x, std::span<const double> y,
                     HermiteEigenvalues convention = HermiteEigenvalues::two_k_plus_n);

/// Gamma((n+1)/2) / pi^{(n+1)/2} * t / (t^2 + |z|^2)^{(n+1)/2}.
double poisson_kernel_classical(int n, double t, std::span<const double> z);

/// W_t^H(1)(x) obtained by integrating the Mehler kernel in closed form:
/// (cosh 2t)^{-n/2} exp(-tanh(2t) |x|^2 / 2).
double hermite_heat_of_one(int n, double t, std::span<const double> x);

struct MarkovOptions {
    double tail_tolerance = 1e-13;
};

/// T_t(1)(x) by quadrature of the kernel over the spatial domain.
/// Throws convergence_error if the truncated tail exceeds the tolerance.
double markov_defect(const SemigroupId& id, double t, std::span<const double> x, MarkovOptions options = {});

struct BoundGrid {
    std::vector<std::vector<double>> xs;
    std::vector<std::vector<double>> ys;
    std::vector<double> ts;

    /// count equispaced points on [lo, hi] along the first coordinate axis
    /// of R^dim for both x and y.
    static BoundGrid line(double lo, double hi, int count, std::vector<double> ts, int dim = 1);
    static std::vector<double> log_times(double t_min, double t_max, int count);
};

/// Fitted constant C = sup |d^k/dt^k K_t(x,y)| t^{n/2+k} e^{c|x-y|^2/t}
/// over the grid, with the location of the supremum.
struct BoundCertificate {
    int order = 0;
    double decay = 0.0;
    double constant = 0.0;
    std::size_t samples = 0;
    std::vector<double> argmax_x;
    std::vector<double> argmax_y;
    double argmax_t = 0.0;
    std::string semigroup;
};

BoundCertificate certify_bound(const SemigroupId& id, int k, double c, const BoundGrid& grid,
                               Execution exec = Execution::parallel);

}  // namespace lps
