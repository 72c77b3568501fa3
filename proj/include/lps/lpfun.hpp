#pragma once

// Littlewood-Paley g-functions and area integrals, Poisson subordination,
// Hardy operators, the centered maximal function, the critical radius and
// its coverings, and the local/global split of t d_t T_t.

#include "lps/field.hpp"
#include "lps/frac.hpp"
#include "lps/kernels.hpp"
#include "lps/normed_space.hpp"
#include "lps/parallel.hpp"
#include "lps/quadrature.hpp"
#include "lps/spectral.hpp"

#include <functional>
#include <span>
#include <vector>

namespace lps {

enum class TimeFlavor { heat, poisson };

struct GFunctionSpec {
    FractionalOrder ord{1.0};
    double q = 2.0;
    NormedSpace space = NormedSpace::real_line();
    double t_min = 1e-4;
    double t_max = 50.0;
    int panels = 48;
    int order = 8;
    TimeFlavor flavor = TimeFlavor::heat;
    /// Truncated-window tail, relative to sup_x of the integral, above
    /// which g_function_field / area_integral_field throw.
    double tail_tolerance = 1e-3;

    void validate() const;
    /// dt/t rule on [t_min, t_max].
    QuadratureRule time_rule() const;
};

struct GFunctionResult {
    SampledField value;          // scalar
    double tail_estimate = 0.0;  // relative, in g^q
    std::size_t time_nodes = 0;
};

/// Per-mode weight of t^alpha d^alpha T_t (heat) or t^alpha d^alpha P_t (poisson).
std::vector<double> lp_time_weights(const SpectralBasis& basis, const GFunctionSpec& spec, double t);

/// g(x) = (int ||t^a d^a T_t f(x)||_B^q dt/t)^{1/q}.
GFunctionResult g_function_field(const SemigroupId& id, const SampledField& f, const GFunctionSpec& spec,
                                 Execution exec = Execution::parallel);

/// A(x) = (int_{|y-x|<t} ||s^a d^a T_s f(y)|_{s=t^2}||_B^q dy dt / t^{n+1})^{1/q},
/// evaluated as sum_j w_j / (2 s_j^{n/2}) int_{|y-x|<sqrt(s_j)} G_j(y) dy on the
/// dt/t lattice in s. The per-s slices G_j are computed once for all apexes.
/// 1-D: exact integration of a cubic interpolant of the cumulative integral;
/// uniform grids are treated as periodic for the Fourier engine and as
/// zero outside otherwise. n-D: cell-centre indicator sums.
GFunctionResult area_integral_field(const SemigroupId& id, const SampledField& f, const GFunctionSpec& spec,
                                    Execution exec = Execution::parallel);

/// ||h||_{L^q}^q of a scalar field by grid quadrature.
double lq_norm_q(const SampledField& h, double q);

/// Gauss-Legendre rule in w = log v for
///   (1/sqrt(pi)) int_0^inf e^{-v} v^{-1/2} F(v) dv,
/// weights include e^{-v} v^{-1/2} / sqrt(pi) and the Jacobian v.
struct SubordinationRule {
    std::vector<double> v;
    std::vector<double> weight;
    static const SubordinationRule& standard();
};

/// (1/sqrt(pi)) int e^{-v} v^{-1/2} e^{-lambda t^2 / 4v} dv (equals e^{-t sqrt(lambda)}).
double subordinated_multiplier(double lambda, double t);

/// (1/sqrt(pi)) int e^{-v} v^{-1/2} K_{t^2/4v}(x, y) dv.
double subordinated_kernel(const SemigroupId& id, double t, std::span<const double> x, std::span<const double> y);

/// P_t f through per-mode subordinated multipliers.
SampledField subordinate_poisson_apply(const SemigroupId& id, const SampledField& f, double t);

/// Piecewise-constant function, values[k] on (edges[k], edges[k+1]), zero outside.
class StepFunction {
public:
    StepFunction(std::vector<double> edges, std::vector<double> values);
    /// Cells between midpoints of consecutive nodes (+- half a spacing at
    /// the ends) of a 1-D field.
    static StepFunction from_field(const SampledField& f, std::size_t component = 0);

    const std::vector<double>& edges() const { return edges_; }
    const std::vector<double>& values() const { return values_; }
    double operator()(double x) const;
    /// int_{edges.front()}^x, exact.
    double antiderivative(double x) const;
    double integral(double a, double b) const { return antiderivative(b) - antiderivative(a); }

private:
    std::vector<double> edges_;
    std::vector<double> values_;
    std::vector<double> prefix_;
};

enum class HardyDirection { from_zero, to_infinity };

/// H_0 g(x) = x^{-1} int_0^x g, H_inf g(x) = int_x^inf g(y) / y dy; exact for step functions.
std::vector<double> hardy_transform(const StepFunction& g, HardyDirection dir, std::span<const double> xs);
/// Field overload on a positive 1-D grid, through StepFunction::from_field.
SampledField hardy_transform(const SampledField& g, HardyDirection dir);

struct HardyRatio {
    double ratio = 0.0;
    double norm_g = 0.0;
    double norm_h0g = 0.0;
};

/// ||H_0 g||_p / ||g||_p for g supported on [breaks.front(), breaks.back()]
/// (smooth between breaks). Log-spaced Gauss-Legendre panels, and the exact
/// tail C^p X^{1-p} / (p-1) of H_0 g = C/x beyond the support.
HardyRatio hardy_lp_ratio(const std::function<double(double)>& g, std::vector<double> breaks, double p,
                          int panels_per_decade = 24);

/// Centered Hardy-Littlewood maximal function of |f| (component 0; the
/// B-norm for vector fields). 1-D: f as a step function and an exact sweep
/// over the radii where a ball edge meets a cell edge, plus the r -> 0 limit.
/// n-D: radii on a log grid from one step to the domain width.
SampledField maximal_fn(const SampledField& f, const NormedSpace& space = NormedSpace::real_line(),
                        Execution exec = Execution::parallel, int radii_per_octave = 8);

/// rho(x) = 1/2 for |x| <= 1, 1/(1 + |x|) otherwise.
double critical_radius(std::span<const double> x);
double critical_radius(double x);

struct CoveringFamily {
    double lo = 0.0, hi = 0.0;
    double M = 1.0;
    std::vector<double> centers;
    std::vector<double> radii;
    /// max_j card{k : B(x_k, M rho_k) meets B(x_j, M rho_j)}
    std::size_t multiplicity = 0;
    /// sup / inf of rho(x)/rho(y) over sampled y in B(x, M rho(x)).
    double ratio_sup = 0.0;
    double ratio_inf = 0.0;
};

/// Greedy left-to-right cover of [lo, hi] by B(x_k, rho(x_k)); consecutive
/// balls overlap by a fraction `overlap` of the radius.
CoveringFamily covering(double lo, double hi, double M, double overlap = 0.05);

std::size_t covering_multiplicity(const std::vector<double>& centers, const std::vector<double>& radii, double M);

/// True when every point of the lattice lo, lo + step, ..., hi lies in some B(x_k, rho(x_k)).
bool covers_window(const CoveringFamily& fam, double step);

struct RatioBound {
    double sup = 0.0;
    double inf = 0.0;
    std::size_t pairs = 0;
};

/// sup/inf of rho(x)/rho(y), x on [lo, hi] with spacing step, y on `inner`
/// points across B(x, M rho(x)).
RatioBound critical_radius_ratio(double lo, double hi, double M, double step, int inner = 64,
                                 Execution exec = Execution::parallel);

struct LocalGlobalSplit {
    std::vector<double> times;
    std::vector<double> local;   // ||G_loc(x, t)||_B
    std::vector<double> global;  // ||G_glob(x, t)||_B
    double local_norm = 0.0;     // L^q(dt/t)
    double global_norm = 0.0;
    double radius = 0.0;
};

/// G_loc(x, t) = t d_t T_t(f chi_{B(x, rho(x))})(x), G_glob with the
/// complement, by kernel quadrature over f's grid. Requires alpha = 1.
LocalGlobalSplit local_global_split(const SemigroupId& id, const SampledField& f, const GFunctionSpec& spec,
                                    std::span<const double> x);

namespace reference {

/// Area integral recomputing every s-slice for every apex.
GFunctionResult area_integral_field(const SemigroupId& id, const SampledField& f, const GFunctionSpec& spec);

/// Pairwise-intersection count.
std::size_t covering_multiplicity(const std::vector<double>& centers, const std::vector<double>& radii, double M);

}  // namespace reference

}  // namespace lps
