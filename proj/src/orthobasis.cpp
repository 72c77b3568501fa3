#include "lps/orthobasis.hpp"

#include "lps/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace lps {

BesselOrder::BesselOrder(double beta) : beta_(beta) {
    if (!(beta > -0.5) || !std::isfinite(beta))
        throw precondition_error("BesselOrder: beta must be finite and > -1/2");
}

void hermite_fns(int max_l, double z, std::span<double> out) {
    detail::require(max_l >= 0, "hermite_fns: l >= 0");
    detail::require(std::isfinite(z), "hermite_fns: z must be finite");
    detail::require(out.size() >= static_cast<std::size_t>(max_l) + 1, "hermite_fns: output too small");
    out[0] = std::exp(-0.25 * std::log(std::numbers::pi) - 0.5 * z * z);
    if (max_l == 0) return;
    out[1] = std::numbers::sqrt2 * z * out[0];
    for (int l = 1; l < max_l; ++l) {
        out[l + 1] = std::sqrt(2.0 / (l + 1)) * z * out[l] - std::sqrt(static_cast<double>(l) / (l + 1)) * out[l - 1];
    }
}

double hermite_fn(int l, double z) {
    std::vector<double> h(static_cast<std::size_t>(std::max(l, 0)) + 1);
    hermite_fns(l, z, h);
    return h[l];
}

void laguerre_fns(int max_k, BesselOrder beta, double x, std::span<double> out) {
    detail::require(max_k >= 0, "laguerre_fns: k >= 0");
    detail::require(std::isfinite(x) && x > 0.0, "laguerre_fns: x must be > 0");
    detail::require(out.size() >= static_cast<std::size_t>(max_k) + 1, "laguerre_fns: output too small");
    const double b = beta.value();
    const double X = x * x;
    out[0] = std::exp(0.5 * std::numbers::ln2 - 0.5 * std::lgamma(b + 1.0) - 0.5 * X + (b + 0.5) * std::log(x));
    double prev = 0.0;
    for (int k = 0; k < max_k; ++k) {
        const double next = ((2.0 * k + 1.0 + b - X) * out[k] - std::sqrt(k * (k + b)) * prev) /
                            std::sqrt((k + 1.0) * (k + 1.0 + b));
        prev = out[k];
        out[k + 1] = next;
    }
}

double laguerre_fn(int k, BesselOrder beta, double x) {
    std::vector<double> phi(static_cast<std::size_t>(std::max(k, 0)) + 1);
    laguerre_fns(k, beta, x, phi);
    return phi[k];
}

double bessel_asymptotic_coefficient(double beta, int l) {
    detail::require(l >= 0, "bessel_asymptotic_coefficient: l >= 0");
    const double b2 = 4.0 * beta * beta;
    double c = 1.0;
    for (int j = 1; j <= l; ++j) {
        const double odd = 2.0 * j - 1.0;
        c *= (b2 - odd * odd) / (4.0 * j);
    }
    return c;
}

double bessel_crossover(double beta) { return std::max(15.0, 2.0 * beta * beta); }

double bessel_i_series_scaled(double beta, double z) {
    detail::require(z > 0.0 && std::isfinite(z), "bessel_i: z must be finite and > 0");
    const double q = 0.25 * z * z;
    double term = std::exp(beta * std::log(0.5 * z) - std::lgamma(beta + 1.0) - z);
    double sum = 0.0;
    const double peak = std::sqrt(q);
    const int max_terms = 100000;
    for (int j = 0; j < max_terms; ++j) {
        sum += term;
        if (j > peak && term <= 1e-17 * sum) return sum;
        term *= q / ((j + 1.0) * (j + 1.0 + beta));
        if (term == 0.0) return sum;
    }
    throw convergence_error("bessel_i: power series did not converge", term / sum);
}

namespace {

// Returns the partial sum of sum_l (-1)^l [beta,l] / (2z)^l, truncated at
// the smallest term; `last` receives that term's magnitude relative to the sum.
double asymptotic_sum(double beta, double z, double& last) {
    const double b2 = 4.0 * beta * beta;
    double term = 1.0, sum = 1.0;
    last = 1.0;
    for (int l = 0; l < 400; ++l) {
        const double odd = 2.0 * l + 1.0;
        const double next = term * (odd * odd - b2) / (8.0 * z * (l + 1.0));
        if (next == 0.0) {
            last = 0.0;
            break;
        }
        if (std::abs(next) >= std::abs(term)) break;  // divergent tail starts
        term = next;
        sum += term;
        last = std::abs(term / sum);
        if (last < 1e-17) break;
    }
    return sum;
}

}  // namespace

double bessel_i_asymptotic_scaled(double beta, double z) {
    detail::require(z > 0.0 && std::isfinite(z), "bessel_i: z must be finite and > 0");
    double last = 0.0;
    const double s = asymptotic_sum(beta, z, last);
    if (last > 1e-13)
        throw convergence_error("bessel_i: asymptotic expansion not accurate at this argument", last);
    return s / std::sqrt(2.0 * std::numbers::pi * z);
}

double bessel_i(BesselOrder beta, double z, BesselScaling scaling) {
    detail::require(std::isfinite(z) && z > 0.0, "bessel_i: z must be finite and > 0");
    const double b = beta.value();
    double scaled = 0.0;
    if (z < bessel_crossover(b)) {
        scaled = bessel_i_series_scaled(b, z);
    } else {
        try {
            scaled = bessel_i_asymptotic_scaled(b, z);
        } catch (const convergence_error&) {
            scaled = bessel_i_series_scaled(b, z);
        }
    }
    return scaling == BesselScaling::scaled ? scaled : scaled * std::exp(z);
}

}  // namespace lps
