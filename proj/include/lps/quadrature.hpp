#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace lps {

enum class QuadratureDomain {
    finite_interval,
    real_line,
    half_line_exp,  // (0, inf) through x = e^u, weights include the Jacobian
    log_time,       // (0, inf) against dt/t through t = e^s
};

/// Nodes and positive weights; `integrate` returns sum_i w_i f(x_i).
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
    QuadratureDomain domain = QuadratureDomain::finite_interval;

    std::size_t size() const { return nodes.size(); }

    template <typename F>
    double integrate(F&& f) const {
        double s = 0.0;
        for (std::size_t i = 0; i < nodes.size(); ++i) s += weights[i] * f(nodes[i]);
        return s;
    }

    /// Throws precondition_error unless weights are positive and there are
    /// at least two nodes.
    void validate() const;
};

/// Gauss-Legendre rule with n nodes on [a, b] (Newton on the three-term
/// recurrence).
QuadratureRule gauss_legendre(int n, double a = -1.0, double b = 1.0);

/// Cached n-point Gauss-Legendre rule on [-1, 1], n in [1, 64].
const QuadratureRule& gauss_legendre_reference(int n);

/// One Gauss-Legendre panel of the given order between consecutive breaks.
QuadratureRule composite_gauss_legendre(std::span<const double> breaks, int order);

/// Gauss-Hermite nodes for n points. Weights are for *unweighted*
/// integrals over the real line: sum_i W_i f(x_i) is exact for
/// f = e^{-x^2} p(x), deg p <= 2n - 1. W_i = 1 / sum_{k<n} h_k(x_i)^2.
QuadratureRule gauss_hermite(int n);

/// Half-line rule through x = e^u, u in [u_min, u_max], Gauss-Legendre
/// panels in u. Weights include the Jacobian x.
QuadratureRule half_line_rule(double u_min, double u_max, int panels, int order);

/// Rule for integrals against dt/t on [t_min, t_max] through t = e^s.
QuadratureRule log_time_rule(double t_min, double t_max, int panels, int order);

}  // namespace lps
