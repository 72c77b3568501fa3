#include "lps/quadrature.hpp"

#include "lps/error.hpp"
#include "lps/orthobasis.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace lps {

void QuadratureRule::validate() const {
    if (nodes.size() < 2 || nodes.size() != weights.size())
        throw precondition_error("quadrature rule needs at least two nodes and matching weights");
    for (double w : weights)
        if (!(w > 0.0)) throw precondition_error("quadrature weights must be positive");
}

QuadratureRule gauss_legendre(int n, double a, double b) {
    detail::require(n >= 1, "gauss_legendre: n >= 1");
    detail::require(b > a, "gauss_legendre: b > a");
    QuadratureRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    rule.domain = QuadratureDomain::finite_interval;
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    if (n == 1) {
        rule.nodes[0] = mid;
        rule.weights[0] = b - a;
        return rule;
    }
    // P_n(x) and P_{n-1}(x)
    auto legendre = [n](double x, double& pn, double& pn1) {
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
            const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        pn = p1;
        pn1 = p0;
    };
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double pn = 0.0, pn1 = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            legendre(x, pn, pn1);
            const double dp = n * (x * pn - pn1) / (x * x - 1.0);
            const double dx = pn / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        legendre(x, pn, pn1);
        const double dp = n * (x * pn - pn1) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = mid - half * x;
        rule.nodes[n - 1 - i] = mid + half * x;
        rule.weights[i] = half * w;
        rule.weights[n - 1 - i] = half * w;
    }
    return rule;
}

const QuadratureRule& gauss_legendre_reference(int n) {
    static const std::vector<QuadratureRule> table = [] {
        std::vector<QuadratureRule> t;
        t.reserve(65);
        t.emplace_back();
        for (int k = 1; k <= 64; ++k) t.push_back(gauss_legendre(k));
        return t;
    }();
    detail::require(n >= 1 && n <= 64, "gauss_legendre_reference: 1 <= n <= 64");
    return table[n];
}

QuadratureRule composite_gauss_legendre(std::span<const double> breaks, int order) {
    detail::require(breaks.size() >= 2, "composite_gauss_legendre: at least one panel");
    const QuadratureRule& ref = gauss_legendre_reference(order);
    QuadratureRule rule;
    rule.nodes.reserve((breaks.size() - 1) * order);
    rule.weights.reserve((breaks.size() - 1) * order);
    for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
        const double a = breaks[p], b = breaks[p + 1];
        detail::require(b > a, "composite_gauss_legendre: increasing breaks");
        const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        for (int i = 0; i < order; ++i) {
            rule.nodes.push_back(mid + half * ref.nodes[i]);
            rule.weights.push_back(half * ref.weights[i]);
        }
    }
    rule.domain = QuadratureDomain::finite_interval;
    return rule;
}

QuadratureRule gauss_hermite(int n) {
    detail::require(n >= 2 && n <= 400, "gauss_hermite: 2 <= n <= 400");
    // Jacobi matrix for the weight e^{-x^2} gives starting nodes.
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd sub(n - 1);
    for (int k = 1; k < n; ++k) sub[k - 1] = std::sqrt(0.5 * k);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
    const Eigen::VectorXd& guess = solver.eigenvalues();

    std::vector<double> h(n + 1);
    QuadratureRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        double x = guess[i];
        // Newton polish on h_n; h_n' = sqrt(2n) h_{n-1} - x h_n.
        for (int iter = 0; iter < 8; ++iter) {
            hermite_fns(n, x, h);
            const double d = std::sqrt(2.0 * n) * h[n - 1] - x * h[n];
            if (d == 0.0) break;
            const double dx = h[n] / d;
            x -= dx;
            if (std::abs(dx) < 1e-15 * std::max(1.0, std::abs(x))) break;
        }
        hermite_fns(n - 1, x, h);
        double s = 0.0;
        for (int k = 0; k < n; ++k) s += h[k] * h[k];
        rule.nodes[i] = x;
        rule.weights[i] = 1.0 / s;
    }
    rule.domain = QuadratureDomain::real_line;
    return rule;
}

QuadratureRule half_line_rule(double u_min, double u_max, int panels, int order) {
    detail::require(u_max > u_min && panels >= 1, "half_line_rule: u_max > u_min, panels >= 1");
    std::vector<double> breaks(panels + 1);
    for (int p = 0; p <= panels; ++p) breaks[p] = u_min + (u_max - u_min) * p / panels;
    QuadratureRule rule = composite_gauss_legendre(breaks, order);
    for (std::size_t i = 0; i < rule.size(); ++i) {
        const double x = std::exp(rule.nodes[i]);
        rule.nodes[i] = x;
        rule.weights[i] *= x;
    }
    rule.domain = QuadratureDomain::half_line_exp;
    return rule;
}

QuadratureRule log_time_rule(double t_min, double t_max, int panels, int order) {
    detail::require(t_min > 0.0 && t_max > t_min, "log_time_rule: 0 < t_min < t_max");
    detail::require(panels >= 1, "log_time_rule: panels >= 1");
    const double s0 = std::log(t_min), s1 = std::log(t_max);
    std::vector<double> breaks(panels + 1);
    for (int p = 0; p <= panels; ++p) breaks[p] = s0 + (s1 - s0) * p / panels;
    QuadratureRule rule = composite_gauss_legendre(breaks, order);
    for (double& s : rule.nodes) s = std::exp(s);
    rule.domain = QuadratureDomain::log_time;
    return rule;
}

}  // namespace lps
