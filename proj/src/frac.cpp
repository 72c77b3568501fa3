#include "lps/frac.hpp"

#include "lps/error.hpp"
#include "lps/quadrature.hpp"
#include "lps/spectral.hpp"

#include <algorithm>
#include <cmath>

namespace lps {

FractionalOrder::FractionalOrder(double alpha) : alpha_(alpha) {
    detail::require(std::isfinite(alpha) && alpha > 0.0, "FractionalOrder: alpha must be positive");
    m_ = static_cast<int>(std::floor(alpha)) + 1;
}

double FractionalOrder::multiplier(double lambda, double t) const {
    if (lambda == 0.0) return 0.0;
    return sign() * std::pow(lambda, alpha_) * std::exp(-lambda * t);
}

double TimeProfile::nth_derivative(double u, int j) const {
    if (derivative) return derivative(u, j);
    if (j == 0) return value(u);
    return finite_difference_derivative(value, u, j);
}

TimeProfile TimeProfile::exponential(double lambda) {
    detail::require(lambda > 0.0, "TimeProfile::exponential: lambda > 0");
    TimeProfile p;
    p.value = [lambda](double u) { return std::exp(-lambda * u); };
    p.derivative = [lambda](double u, int j) { return std::pow(-lambda, j) * std::exp(-lambda * u); };
    p.decay = DecayHint::exponential(lambda);
    return p;
}

TimeProfile TimeProfile::power(double shift, double p) {
    detail::require(shift >= 0.0 && p > 0.0, "TimeProfile::power: shift >= 0 and p > 0");
    TimeProfile tp;
    tp.value = [shift, p](double u) { return std::pow(shift + u, -p); };
    tp.derivative = [shift, p](double u, int j) {
        double c = 1.0;
        for (int i = 0; i < j; ++i) c *= -(p + i);
        return c * std::pow(shift + u, -p - j);
    };
    tp.decay = DecayHint::power(p);
    return tp;
}

double finite_difference_derivative(const std::function<double(double)>& f, double u, int j, double h) {
    detail::require(j >= 1 && j <= 3, "finite_difference_derivative: order in [1, 3]");
    if (h <= 0.0) h = 1e-2 * std::max(std::abs(u), 1e-3);
    auto stencil = [&](double s) {
        switch (j) {
            case 1: return (f(u + s) - f(u - s)) / (2.0 * s);
            case 2: return (f(u + s) - 2.0 * f(u) + f(u - s)) / (s * s);
            default: return (f(u + 2.0 * s) - 2.0 * f(u + s) + 2.0 * f(u - s) - f(u - 2.0 * s)) / (2.0 * s * s * s);
        }
    };
    return (4.0 * stencil(0.5 * h) - stencil(h)) / 3.0;
}

WeylResult weyl_derivative_vec(const std::function<void(double, std::span<double>)>& deriv_m, std::size_t components,
                               const DecayHint& decay, const FractionalOrder& ord, double t, std::span<double> out,
                               WeylOptions options) {
    detail::require(std::isfinite(t) && t > 0.0, "weyl_derivative: t must be positive");
    detail::require(out.size() == components && components > 0, "weyl_derivative: output size mismatch");
    detail::require(decay.rate > 0.0, "weyl_derivative: decay rate must be positive");
    const double s = ord.m() - ord.alpha();  // in (0, 1]
    const int m = ord.m();

    const QuadratureRule& g16 = gauss_legendre_reference(16);
    const QuadratureRule& g8 = gauss_legendre_reference(8);
    std::vector<double> buf(components), acc_hi(components), acc_lo(components);
    std::vector<double> near(components, 0.0), far(components, 0.0);
    double err = 0.0;

    // Integrates h over [a, b] with both rules into hi/lo accumulators.
    auto panel = [&](double a, double b, const std::function<double(double)>& jac, const std::function<double(double)>& arg,
                     std::vector<double>& into) {
        std::fill(acc_hi.begin(), acc_hi.end(), 0.0);
        std::fill(acc_lo.begin(), acc_lo.end(), 0.0);
        const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
        for (std::size_t i = 0; i < g16.size(); ++i) {
            const double x = mid + half * g16.nodes[i];
            deriv_m(t + arg(x), buf);
            const double wgt = half * g16.weights[i] * jac(x);
            for (std::size_t c = 0; c < components; ++c) acc_hi[c] += wgt * buf[c];
        }
        for (std::size_t i = 0; i < g8.size(); ++i) {
            const double x = mid + half * g8.nodes[i];
            deriv_m(t + arg(x), buf);
            const double wgt = half * g8.weights[i] * jac(x);
            for (std::size_t c = 0; c < components; ++c) acc_lo[c] += wgt * buf[c];
        }
        double e = 0.0;
        for (std::size_t c = 0; c < components; ++c) {
            into[c] += acc_hi[c];
            e = std::max(e, std::abs(acc_hi[c] - acc_lo[c]));
        }
        return e;
    };

    const double scale = decay.kind == DecayHint::Kind::exponential ? std::min(t, 1.0 / decay.rate) : t;
    const double w1 = 0.5 * scale;

    // Near part: w = v^{1/s}, dw w^{s-1} = dv / s, geometric grading toward v = 0.
    const double V = std::pow(w1, s);
    constexpr int levels = 50;
    auto ident_jac = [](double) { return 1.0; };
    auto v_to_w = [s](double v) { return std::pow(v, 1.0 / s); };
    double lo = V * std::ldexp(1.0, -levels);
    err += panel(0.0, lo, ident_jac, v_to_w, near);
    for (int j = levels; j-- > 0;) {
        const double a = V * std::ldexp(1.0, -(j + 1)), b = V * std::ldexp(1.0, -j);
        err += panel(a, b, ident_jac, v_to_w, near);
    }
    const double near_scale = 1.0 / std::tgamma(s + 1.0);

    // Far part: doubling panels in w with weight w^{s-1}.
    auto w_jac = [s](double w) { return std::pow(w, s - 1.0); };
    auto ident = [](double w) { return w; };
    const double far_scale = 1.0 / std::tgamma(s);
    double W = w1, tail = INFINITY;
    int quiet = 0;
    for (int j = 0; j < options.max_far_panels; ++j) {
        err += panel(W, 2.0 * W, w_jac, ident, far) * far_scale;
        W *= 2.0;
        deriv_m(t + W, buf);
        double gmax = 0.0, total = 0.0;
        for (std::size_t c = 0; c < components; ++c) {
            gmax = std::max(gmax, std::abs(buf[c]));
            total = std::max(total, std::abs(near_scale * near[c] + far_scale * far[c]));
        }
        if (decay.kind == DecayHint::Kind::exponential)
            tail = gmax * std::pow(W, s - 1.0) / decay.rate;
        else
            tail = gmax * (t + W) * std::pow(W, s - 1.0) / (decay.rate + m - 1.0);
        tail *= far_scale;
        // two consecutive quiet panel ends, so a sign change of phi^(m) at W
        // cannot fake convergence
        quiet = tail <= options.tolerance * std::max(total, 1e-300) ? quiet + 1 : 0;
        if (quiet >= 2) break;
    }
    if (quiet < 2) throw convergence_error("weyl_derivative: tail bound not met", tail);

    for (std::size_t c = 0; c < components; ++c) out[c] = near_scale * near[c] + far_scale * far[c];
    return {out[0], err * std::max(near_scale, 1.0) + tail};
}

WeylResult weyl_derivative_fn(const TimeProfile& phi, const FractionalOrder& ord, double t, WeylOptions options) {
    const int m = ord.m();
    double out = 0.0;
    return weyl_derivative_vec([&](double u, std::span<double> o) { o[0] = phi.nth_derivative(u, m); }, 1, phi.decay, ord,
                               t, std::span(&out, 1), options);
}

SampledField frac_semigroup_apply(const SemigroupId& id, const SampledField& f, const FractionalOrder& ord, double t) {
    detail::require(std::isfinite(t) && t > 0.0, "frac_semigroup_apply: t must be positive");
    const SpectralBasis basis = SpectralBasis::for_semigroup(id, f.grid());
    const CoefficientVector c = basis.expand(f);
    return spectral_apply(c, basis, t, ord);
}

std::vector<double> frac_semigroup_apply_kernel(const SemigroupId& id, const SampledField& f, const FractionalOrder& ord,
                                                double t, const std::vector<std::vector<double>>& points,
                                                std::size_t component, Execution exec) {
    detail::require(component < f.components(), "frac_semigroup_apply_kernel: component out of range");
    detail::require(ord.m() <= 3, "frac_semigroup_apply_kernel: alpha < 3 (kernel derivatives up to order 3)");
    const Grid& grid = f.grid();
    detail::require(grid.dim() == static_cast<std::size_t>(id.dim()), "frac_semigroup_apply_kernel: dimension mismatch");

    DecayHint decay;
    switch (id.kind()) {
        case SemigroupKind::classical: decay = DecayHint::power(0.5 * id.dim()); break;
        case SemigroupKind::hermite: decay = DecayHint::exponential(id.dim()); break;
        case SemigroupKind::laguerre: decay = DecayHint::exponential(id.beta() + 1.0); break;
    }

    std::vector<std::vector<double>> ys(grid.size());
    std::vector<double> fw(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) {
        ys[j] = grid.point(j);
        fw[j] = grid.weight(j) * f.at(j, component);
    }

    std::vector<double> out(points.size());
    const int m = ord.m();
    for_each_index(exec, static_cast<std::ptrdiff_t>(points.size()), [&](std::ptrdiff_t p) {
        auto deriv = [&](double u, std::span<double> o) {
            double s = 0.0;
            for (std::size_t j = 0; j < ys.size(); ++j)
                if (fw[j] != 0.0) s += fw[j] * heat_kernel_dt(id, m, u, points[p], ys[j]);
            o[0] = s;
        };
        WeylOptions opt;
        opt.tolerance = 1e-10;
        weyl_derivative_vec(deriv, 1, decay, ord, t, std::span(&out[p], 1), opt);
    });
    return out;
}

}  // namespace lps
