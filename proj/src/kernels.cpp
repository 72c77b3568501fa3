#include "lps/kernels.hpp"

#include "lps/error.hpp"
#include "lps/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>

namespace lps {
namespace {

constexpr double pi = std::numbers::pi;

// log K and the first three t-derivatives of log K.
struct LogJet {
    double a0 = 0.0, a1 = 0.0, a2 = 0.0, a3 = 0.0;
};

double sq_dist(std::span<const double> x, std::span<const double> y) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += (x[i] - y[i]) * (x[i] - y[i]);
    return s;
}

double sq_sum(std::span<const double> x, std::span<const double> y) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += (x[i] + y[i]) * (x[i] + y[i]);
    return s;
}

// log(sinh u), stable for large u.
double log_sinh(double u) {
    if (u > 20.0) return u - std::numbers::ln2 + std::log1p(-std::exp(-2.0 * u));
    return std::log(std::sinh(u));
}

LogJet classical_jet(int n, double t, double r2) {
    const double nn = n;
    LogJet j;
    j.a0 = -0.5 * nn * std::log(4.0 * pi * t) - r2 / (4.0 * t);
    j.a1 = -nn / (2.0 * t) + r2 / (4.0 * t * t);
    j.a2 = nn / (2.0 * t * t) - r2 / (2.0 * t * t * t);
    j.a3 = -nn / (t * t * t) + 1.5 * r2 / (t * t * t * t);
    return j;
}

// Mehler kernel pi^{-n/2} (2 sinh 2t)^{-n/2} exp(-(A coth t + B tanh t)/4),
// A = |x-y|^2, B = |x+y|^2.
LogJet hermite_jet(int n, double t, double A, double B) {
    const double nn = n;
    const double ct = 1.0 / std::tanh(t), tt = std::tanh(t);
    const double c2 = 1.0 / std::tanh(2.0 * t);
    const double csch = 1.0 / std::sinh(t), sech = 1.0 / std::cosh(t);
    const double csch2 = csch * csch, sech2 = sech * sech;
    const double csch_2t = 1.0 / std::sinh(2.0 * t);
    const double csch2_2t = csch_2t * csch_2t;
    LogJet j;
    j.a0 = -0.5 * nn * std::log(pi) - 0.5 * nn * (std::numbers::ln2 + log_sinh(2.0 * t)) - 0.25 * (A * ct + B * tt);
    j.a1 = -nn * c2 + 0.25 * (A * csch2 - B * sech2);
    j.a2 = 2.0 * nn * csch2_2t - 0.5 * A * csch2 * ct + 0.5 * B * sech2 * tt;
    j.a3 = -8.0 * nn * csch2_2t * c2 + A * (csch2 * ct * ct + 0.5 * csch2 * csch2) +
           B * (-sech2 * tt * tt + 0.5 * sech2 * sech2);
    return j;
}

// log K for Laguerre:
//   -log sinh t + log(xy)/2 + log(e^{-z} I_beta(z)) - E,  z = xy / sinh t,
//   E = [(x-y)^2 cosh t / 2 + 2xy sinh^2(t/2)] / sinh t.
double laguerre_log(double beta, double t, double x, double y) {
    const double ls = log_sinh(t);
    const double z = std::exp(std::log(x * y) - ls);
    double e;
    if (t > 20.0) {
        // cosh t / sinh t -> coth t, sinh^2(t/2)/sinh t -> (coth t - csch t)/2
        e = 0.5 * (x - y) * (x - y) / std::tanh(t) + x * y * (1.0 / std::tanh(t) - std::exp(-ls));
    } else {
        const double s = std::sinh(t), sh = std::sinh(0.5 * t);
        e = (0.5 * (x - y) * (x - y) * std::cosh(t) + 2.0 * x * y * sh * sh) / s;
    }
    return -ls + 0.5 * std::log(x * y) + std::log(bessel_i(BesselOrder(beta), z, BesselScaling::scaled)) - e;
}

// Richardson-extrapolated central differences of a(t) = log K.
LogJet laguerre_jet(double beta, double t, double x, double y, int order) {
    LogJet j;
    j.a0 = laguerre_log(beta, t, x, y);
    if (order == 0) return j;
    auto a = [&](double s) { return laguerre_log(beta, s, x, y); };
    auto stencil = [&](double h) {
        const double fp = a(t + h), fm = a(t - h), fp2 = a(t + 2.0 * h), fm2 = a(t - 2.0 * h);
        LogJet d;
        d.a1 = (fp - fm) / (2.0 * h);
        d.a2 = (fp - 2.0 * j.a0 + fm) / (h * h);
        d.a3 = (fp2 - 2.0 * fp + 2.0 * fm - fm2) / (2.0 * h * h * h);
        return d;
    };
    const double h = 0.02 * t;
    const LogJet d1 = stencil(h), d2 = stencil(0.5 * h);
    j.a1 = (4.0 * d2.a1 - d1.a1) / 3.0;
    j.a2 = (4.0 * d2.a2 - d1.a2) / 3.0;
    j.a3 = (4.0 * d2.a3 - d1.a3) / 3.0;
    return j;
}

void check_args(const SemigroupId& id, double t, std::span<const double> x, std::span<const double> y) {
    detail::require(std::isfinite(t) && t > 0.0, "heat kernel: t must be positive");
    const auto n = static_cast<std::size_t>(id.dim());
    detail::require(x.size() == n && y.size() == n, "heat kernel: point dimension mismatch");
    detail::require(id.in_domain(x) && id.in_domain(y), "heat kernel: point outside the semigroup's domain");
}

LogJet jet(const SemigroupId& id, double t, std::span<const double> x, std::span<const double> y, int order) {
    check_args(id, t, x, y);
    switch (id.kind()) {
        case SemigroupKind::classical: return classical_jet(id.dim(), t, sq_dist(x, y));
        case SemigroupKind::hermite: return hermite_jet(id.dim(), t, sq_dist(x, y), sq_sum(x, y));
        case SemigroupKind::laguerre: return laguerre_jet(id.beta(), t, x[0], y[0], order);
    }
    return {};
}

// d^k/dt^k K / K as a polynomial in the log-derivatives.
double derivative_factor(const LogJet& j, int k) {
    switch (k) {
        case 0: return 1.0;
        case 1: return j.a1;
        case 2: return j.a2 + j.a1 * j.a1;
        case 3: return j.a3 + 3.0 * j.a1 * j.a2 + j.a1 * j.a1 * j.a1;
    }
    throw precondition_error("heat_kernel_dt: derivative order must be in [0, 3]");
}

}  // namespace

SemigroupId SemigroupId::classical(int n) {
    detail::require(n >= 1, "SemigroupId::classical: n >= 1");
    return {SemigroupKind::classical, n, 0.0};
}

SemigroupId SemigroupId::hermite(int n) {
    detail::require(n >= 1, "SemigroupId::hermite: n >= 1");
    return {SemigroupKind::hermite, n, 0.0};
}

SemigroupId SemigroupId::laguerre(BesselOrder beta) { return {SemigroupKind::laguerre, 1, beta.value()}; }

std::string SemigroupId::label() const {
    std::ostringstream os;
    switch (kind_) {
        case SemigroupKind::classical: os << "classical(" << dim_ << ")"; break;
        case SemigroupKind::hermite: os << "hermite(" << dim_ << ")"; break;
        case SemigroupKind::laguerre: os << "laguerre(" << beta_ << ")"; break;
    }
    return os.str();
}

bool SemigroupId::in_domain(std::span<const double> x) const {
    for (double v : x) {
        if (!std::isfinite(v)) return false;
        if (kind_ == SemigroupKind::laguerre && v <= 0.0) return false;
    }
    return true;
}

double hermite_eigenvalue(std::span<const int> k, HermiteEigenvalues convention) {
    double s = 0.0;
    for (int ki : k) {
        detail::require(ki >= 0, "hermite_eigenvalue: negative multi-index entry");
        s += ki;
    }
    const double n = static_cast<double>(k.size());
    return convention == HermiteEigenvalues::two_k_plus_n ? 2.0 * s + n : 2.0 * (s + n);
}

double log_heat_kernel(const SemigroupId& id, double t, std::span<const double> x, std::span<const double> y) {
    return jet(id, t, x, y, 0).a0;
}

double heat_kernel(const SemigroupId& id, double t, std::span<const double> x, std::span<const double> y) {
    return std::exp(log_heat_kernel(id, t, x, y));
}

double heat_kernel_dt(const SemigroupId& id, int k, double t, std::span<const double> x, std::span<const double> y) {
    detail::require(k >= 0 && k <= 3, "heat_kernel_dt: derivative order must be in [0, 3]");
    const LogJet j = jet(id, t, x, y, k);
    return std::exp(j.a0) * derivative_factor(j, k);
}

double kernel_series(const SemigroupId& id, int K, double t, std::span<const double> x, std::span<const double> y,
                     HermiteEigenvalues convention) {
    check_args(id, t, x, y);
    detail::require(K >= 0, "kernel_series: K >= 0");
    std::vector<double> a(K + 1), b(K + 1);
    if (id.kind() == SemigroupKind::hermite) {
        // lambda_k splits per axis, so the n-dim sum over the box k_i <= K
        // is a product of 1-D sums.
        const double shift = convention == HermiteEigenvalues::two_k_plus_n ? 1.0 : 2.0;
        double prod = 1.0;
        for (std::size_t d = 0; d < x.size(); ++d) {
            hermite_fns(K, x[d], a);
            hermite_fns(K, y[d], b);
            double s = 0.0;
            for (int k = K; k >= 0; --k) s += std::exp(-(2.0 * k + shift) * t) * a[k] * b[k];
            prod *= s;
        }
        return prod;
    }
    detail::require(id.kind() == SemigroupKind::laguerre, "kernel_series: the classical kernel has no discrete expansion");
    const BesselOrder beta(id.beta());
    laguerre_fns(K, beta, x[0], a);
    laguerre_fns(K, beta, y[0], b);
    double s = 0.0;
    for (int k = K; k >= 0; --k) s += std::exp(-(2.0 * k + id.beta() + 1.0) * t) * a[k] * b[k];
    return s;
}

double poisson_kernel_classical(int n, double t, std::span<const double> z) {
    detail::require(n >= 1 && static_cast<std::size_t>(n) == z.size(), "poisson_kernel_classical: dimension mismatch");
    detail::require(std::isfinite(t) && t > 0.0, "poisson_kernel_classical: t must be positive");
    const double h = 0.5 * (n + 1);
    double r2 = 0.0;
    for (double v : z) r2 += v * v;
    return std::exp(std::lgamma(h) - h * std::log(pi) - h * std::log(t * t + r2)) * t;
}

double hermite_heat_of_one(int n, double t, std::span<const double> x) {
    detail::require(n >= 1 && static_cast<std::size_t>(n) == x.size(), "hermite_heat_of_one: dimension mismatch");
    detail::require(t > 0.0, "hermite_heat_of_one: t must be positive");
    double r2 = 0.0;
    for (double v : x) r2 += v * v;
    return std::pow(std::cosh(2.0 * t), -0.5 * n) * std::exp(-0.5 * std::tanh(2.0 * t) * r2);
}

namespace {

// Integral of y -> K(y) over the window [lo, hi] by Gauss-Legendre panels of
// width about sigma/2; the window is [c - 14 sigma, c + 14 sigma] clipped.
double gaussian_window_integral(const std::function<double(double)>& k, double lo, double hi, double sigma) {
    const int panels = std::max(4, static_cast<int>(std::ceil((hi - lo) / (0.5 * sigma))));
    std::vector<double> breaks(panels + 1);
    for (int i = 0; i <= panels; ++i) breaks[i] = lo + (hi - lo) * i / panels;
    return composite_gauss_legendre(breaks, 16).integrate(k);
}

}  // namespace

double markov_defect(const SemigroupId& id, double t, std::span<const double> x, MarkovOptions options) {
    detail::require(std::isfinite(t) && t > 0.0, "markov_defect: t must be positive");
    detail::require(x.size() == static_cast<std::size_t>(id.dim()) && id.in_domain(x), "markov_defect: bad point");
    constexpr double width = 14.0;

    if (id.kind() != SemigroupKind::laguerre) {
        // Both kernels factor over coordinates; integrate each 1-D factor.
        const SemigroupId one = id.kind() == SemigroupKind::classical ? SemigroupId::classical(1) : SemigroupId::hermite(1);
        double prod = 1.0;
        for (double xi : x) {
            double c, sigma;
            if (id.kind() == SemigroupKind::classical) {
                c = xi;
                sigma = std::sqrt(2.0 * t);
            } else {
                c = xi / std::cosh(2.0 * t);
                sigma = std::sqrt(std::tanh(2.0 * t));
            }
            auto k = [&](double y) { return heat_kernel(one, t, std::span(&xi, 1), std::span(&y, 1)); };
            const double lo = c - width * sigma, hi = c + width * sigma;
            const double value = gaussian_window_integral(k, lo, hi, sigma);
            const double tail = (k(lo) + k(hi)) * sigma;
            if (!(tail <= options.tail_tolerance * std::max(value, 1e-300)))
                throw convergence_error("markov_defect: truncated tail above tolerance", tail);
            prod *= value;
        }
        return prod;
    }

    // Laguerre: roughly Gaussian in y around x sech t with variance tanh t,
    // with a y^{beta + 1/2} endpoint behaviour at 0.
    const double xi = x[0];
    const double c = xi / std::cosh(t);
    const double sigma = std::sqrt(std::tanh(t));
    auto k = [&](double y) { return heat_kernel(id, t, std::span(&xi, 1), std::span(&y, 1)); };
    const double hi = c + width * sigma;
    double lo = c - width * sigma;
    double value = 0.0;
    if (lo <= 0.0) {
        lo = hi / 8.0;
        const QuadratureRule near = half_line_rule(std::log(lo) - 46.0, std::log(lo), 46, 16);
        value += near.integrate(k);
    }
    value += gaussian_window_integral(k, lo, hi, sigma);
    const double tail = k(hi) * sigma + (c - width * sigma > 0.0 ? k(lo) * sigma : 0.0);
    if (!(tail <= options.tail_tolerance * std::max(value, 1e-300)))
        throw convergence_error("markov_defect: truncated tail above tolerance", tail);
    return value;
}

BoundGrid BoundGrid::line(double lo, double hi, int count, std::vector<double> ts, int dim) {
    detail::require(count >= 1 && dim >= 1 && hi >= lo, "BoundGrid::line: bad range");
    BoundGrid g;
    for (int i = 0; i < count; ++i) {
        std::vector<double> p(dim, 0.0);
        p[0] = count == 1 ? lo : lo + (hi - lo) * i / (count - 1);
        g.xs.push_back(p);
    }
    g.ys = g.xs;
    g.ts = std::move(ts);
    return g;
}

std::vector<double> BoundGrid::log_times(double t_min, double t_max, int count) {
    detail::require(t_min > 0.0 && t_max >= t_min && count >= 1, "BoundGrid::log_times: bad range");
    std::vector<double> ts(count);
    for (int i = 0; i < count; ++i)
        ts[i] = count == 1 ? t_min : t_min * std::pow(t_max / t_min, static_cast<double>(i) / (count - 1));
    return ts;
}

BoundCertificate certify_bound(const SemigroupId& id, int k, double c, const BoundGrid& grid, Execution exec) {
    detail::require(k >= 0 && k <= 3, "certify_bound: derivative order must be in [0, 3]");
    detail::require(c > 0.0, "certify_bound: decay rate must be positive");
    detail::require(!grid.xs.empty() && !grid.ys.empty() && !grid.ts.empty(), "certify_bound: empty grid");

    const std::size_t nx = grid.xs.size(), ny = grid.ys.size();
    const double scale = 0.5 * id.dim() + k;
    std::vector<double> best(grid.ts.size() * nx, -INFINITY);
    std::vector<std::size_t> best_y(best.size(), 0);
    std::vector<int> bad(best.size(), 0);

    // log of |d^k K| t^{n/2+k} e^{c|x-y|^2/t}, so the Gaussian factors cancel
    // without overflow.
    for_each_index(exec, static_cast<std::ptrdiff_t>(best.size()), [&](std::ptrdiff_t idx) {
        const std::size_t ti = static_cast<std::size_t>(idx) / nx, xi = static_cast<std::size_t>(idx) % nx;
        const double t = grid.ts[ti];
        for (std::size_t yi = 0; yi < ny; ++yi) {
            const LogJet j = jet(id, t, grid.xs[xi], grid.ys[yi], k);
            const double f = std::abs(derivative_factor(j, k));
            const double lr = j.a0 + std::log(f) + scale * std::log(t) + c * sq_dist(grid.xs[xi], grid.ys[yi]) / t;
            if (std::isnan(lr) || lr == INFINITY) {
                bad[idx] = 1;
                continue;
            }
            if (lr > best[idx]) {
                best[idx] = lr;
                best_y[idx] = yi;
            }
        }
    });

    BoundCertificate cert;
    cert.order = k;
    cert.decay = c;
    cert.semigroup = id.label();
    cert.samples = best.size() * ny;
    double top = -INFINITY;
    std::size_t arg = 0;
    for (std::size_t i = 0; i < best.size(); ++i) {
        if (bad[i]) throw convergence_error("certify_bound: non-finite ratio on the grid", INFINITY);
        if (best[i] > top) {
            top = best[i];
            arg = i;
        }
    }
    cert.constant = std::exp(top);
    if (!std::isfinite(cert.constant)) throw convergence_error("certify_bound: fitted constant overflows", top);
    cert.argmax_t = grid.ts[arg / nx];
    cert.argmax_x = grid.xs[arg % nx];
    cert.argmax_y = grid.ys[best_y[arg]];
    return cert;
}

}  // namespace lps
