#include "lps/lpfun.hpp"

#include "lps/error.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

namespace lps {

void GFunctionSpec::validate() const {
    detail::require(std::isfinite(q) && q > 1.0, "GFunctionSpec: q must exceed 1");
    detail::require(t_min > 0.0 && t_max > t_min, "GFunctionSpec: need 0 < t_min < t_max");
    detail::require(panels >= 1 && order >= 2 && order <= 64, "GFunctionSpec: panels >= 1, order in [2, 64]");
    detail::require(tail_tolerance > 0.0, "GFunctionSpec: tail tolerance must be positive");
}

QuadratureRule GFunctionSpec::time_rule() const { return log_time_rule(t_min, t_max, panels, order); }

const SubordinationRule& SubordinationRule::standard() {
    static const SubordinationRule rule = [] {
        SubordinationRule r;
        constexpr double w_lo = -64.0, w_hi = 4.0, width = 0.5;
        const int panels = static_cast<int>((w_hi - w_lo) / width);
        std::vector<double> breaks(panels + 1);
        for (int i = 0; i <= panels; ++i) breaks[i] = w_lo + width * i;
        const QuadratureRule gl = composite_gauss_legendre(breaks, 16);
        for (std::size_t i = 0; i < gl.size(); ++i) {
            const double v = std::exp(gl.nodes[i]);
            r.v.push_back(v);
            r.weight.push_back(gl.weights[i] * std::exp(-v) * std::sqrt(v) / std::sqrt(std::numbers::pi));
        }
        return r;
    }();
    return rule;
}

double subordinated_multiplier(double lambda, double t) {
    detail::require(lambda >= 0.0 && t > 0.0, "subordinated_multiplier: lambda >= 0, t > 0");
    const SubordinationRule& r = SubordinationRule::standard();
    const double a = 0.25 * lambda * t * t;
    // e^{-v - a/v} is within e^{-40} of its peak e^{-2 sqrt(a)} only on a
    // contiguous run of nodes around v = sqrt(a) (convex in log v)
    const double peak = 2.0 * std::sqrt(a);
    auto far = [a, peak](double v) { return v + a / v - peak > 40.0; };
    const auto mid = std::lower_bound(r.v.begin(), r.v.end(), std::sqrt(a));
    const auto first = std::partition_point(r.v.begin(), mid, far);
    const auto last = std::partition_point(mid, r.v.end(), [&](double v) { return !far(v); });
    double s = 0.0;
    for (auto it = first; it != last; ++it) {
        const std::size_t i = static_cast<std::size_t>(it - r.v.begin());
        s += r.weight[i] * std::exp(-a / r.v[i]);
    }
    return s;
}

double subordinated_kernel(const SemigroupId& id, double t, std::span<const double> x, std::span<const double> y) {
    detail::require(t > 0.0, "subordinated_kernel: t must be positive");
    const SubordinationRule& r = SubordinationRule::standard();
    double s = 0.0;
    for (std::size_t i = 0; i < r.v.size(); ++i) s += r.weight[i] * heat_kernel(id, t * t / (4.0 * r.v[i]), x, y);
    return s;
}

namespace {

// Per-mode subordinated multipliers, computed once per distinct eigenvalue.
std::vector<double> subordinated_weights(std::span<const double> lambda, double t,
                                         const std::function<double(double, double)>& shape) {
    std::map<double, double> cache;
    std::vector<double> w(lambda.size());
    for (std::size_t m = 0; m < lambda.size(); ++m) {
        auto it = cache.find(lambda[m]);
        if (it == cache.end()) it = cache.emplace(lambda[m], shape(lambda[m], subordinated_multiplier(lambda[m], t))).first;
        w[m] = it->second;
    }
    return w;
}

double point_norm(const SampledField& F, std::size_t i, const NormedSpace& space, std::vector<double>& buf) {
    if (F.components() == 1) return std::abs(F.at(i));
    for (std::size_t c = 0; c < F.components(); ++c) buf[c] = F.at(i, c);
    return space.norm(buf);
}

void check_space(const SampledField& f, const GFunctionSpec& spec) {
    detail::require(spec.space.dim() == f.components(), "GFunctionSpec: space dimension must match field components");
}

// Divisors turning the integrand at the window ends into tail estimates.
struct TailModel {
    double low = 1.0;
    double high = 1.0;
};

TailModel tail_model(const SemigroupId& id, const SpectralBasis& basis, const GFunctionSpec& spec) {
    TailModel m;
    const double a = spec.ord.alpha(), q = spec.q;
    m.low = a * q;
    if (id.kind() == SemigroupKind::classical) {
        const double decay = spec.flavor == TimeFlavor::heat ? 0.5 * id.dim() : 1.0 * id.dim();
        m.high = decay * q;
    } else {
        double lam = basis.min_positive_eigenvalue();
        if (spec.flavor == TimeFlavor::poisson) lam = std::sqrt(lam);
        const double r = q * lam * spec.t_max - a * q;
        m.high = r > 0.0 ? r : 1e-300;
    }
    return m;
}

}  // namespace

std::vector<double> lp_time_weights(const SpectralBasis& basis, const GFunctionSpec& spec, double t) {
    const auto lambda = basis.eigenvalues();
    const double a = spec.ord.alpha(), sign = spec.ord.sign();
    if (spec.flavor == TimeFlavor::poisson) {
        // t^a d^a P_t has per-mode weight (-1)^m (t sqrt(lambda))^a e^{-t sqrt(lambda)},
        // with the exponential taken from the subordination quadrature.
        return subordinated_weights(lambda, t, [a, sign, t](double lam, double sub) {
            return lam == 0.0 ? 0.0 : sign * std::pow(t * std::sqrt(lam), a) * sub;
        });
    }
    std::vector<double> w(lambda.size());
    for (std::size_t m = 0; m < w.size(); ++m) {
        const double x = lambda[m] * t;
        w[m] = x == 0.0 || x > 745.0 ? 0.0 : sign * std::exp(a * std::log(x) - x);
    }
    return w;
}

double lq_norm_q(const SampledField& h, double q) {
    double s = 0.0;
    for (std::size_t i = 0; i < h.size(); ++i) s += h.grid().weight(i) * std::pow(std::abs(h.at(i)), q);
    return s;
}

GFunctionResult g_function_field(const SemigroupId& id, const SampledField& f, const GFunctionSpec& spec, Execution exec) {
    spec.validate();
    check_space(f, spec);
    const SpectralBasis basis = SpectralBasis::for_semigroup(id, f.grid());
    const CoefficientVector c = basis.expand(f);
    const QuadratureRule rule = spec.time_rule();
    const std::size_t N = f.size();

    auto slice = [&](double t, std::vector<double>& out) {
        const SampledField F = basis.apply_weights(c, lp_time_weights(basis, spec, t));
        out.resize(N);
        for_each_index_static(exec, static_cast<std::ptrdiff_t>(N), [&](std::ptrdiff_t i) {
            std::vector<double> buf(F.components());
            out[i] = std::pow(point_norm(F, static_cast<std::size_t>(i), spec.space, buf), spec.q);
        });
    };

    std::vector<double> acc(N, 0.0), G;
    for (std::size_t j = 0; j < rule.size(); ++j) {
        slice(rule.nodes[j], G);
        for (std::size_t i = 0; i < N; ++i) acc[i] += rule.weights[j] * G[i];
    }

    std::vector<double> lo, hi;
    slice(spec.t_min, lo);
    slice(spec.t_max, hi);
    const TailModel tm = tail_model(id, basis, spec);
    double tail = 0.0, top = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
        tail = std::max(tail, lo[i] / tm.low + hi[i] / tm.high);
        top = std::max(top, acc[i]);
    }

    GFunctionResult r;
    r.value = SampledField(f.grid(), 1);
    for (std::size_t i = 0; i < N; ++i) r.value.at(i) = std::pow(acc[i], 1.0 / spec.q);
    r.tail_estimate = top > 0.0 ? tail / top : 0.0;
    r.time_nodes = rule.size();
    if (r.tail_estimate > spec.tail_tolerance)
        throw convergence_error("g_function_field: time-window tail above tolerance", r.tail_estimate);
    return r;
}

namespace {

// Cumulative integral of nodal values on a uniform 1-D axis; cell integrals
// from the 4-point cubic through G_{k-1..k+2}, C(y) between nodes by cubic
// interpolation. Periodic or zero outside.
class Cumulative1D {
public:
    Cumulative1D(const Axis& axis, std::span<const double> G, bool periodic)
        : y0_(axis.nodes.front()), h_(axis.step()), n_(G.size()), periodic_(periodic), C_(G.size() + 1, 0.0) {
        const auto n = static_cast<long long>(n_);
        auto g = [&](long long k) {
            if (periodic_) return G[static_cast<std::size_t>(((k % n) + n) % n)];
            return k < 0 || k >= n ? 0.0 : G[static_cast<std::size_t>(k)];
        };
        const long long cells = periodic_ ? n : n - 1;
        for (long long k = 0; k < cells; ++k)
            C_[k + 1] = C_[k] + h_ * (-g(k - 1) + 13.0 * g(k) + 13.0 * g(k + 1) - g(k + 2)) / 24.0;
        if (!periodic_) C_[n_] = C_[n_ - 1];
        total_ = periodic_ ? C_[n_] : C_[n_ - 1];
    }

    double operator()(double y) const {
        const auto n = static_cast<long long>(n_);
        double u = (y - y0_) / h_;
        double base = 0.0;
        if (periodic_) {
            const double wraps = std::floor(u / static_cast<double>(n));
            u -= wraps * static_cast<double>(n);
            base = wraps * total_;
        } else {
            if (u <= 0.0) return 0.0;
            if (u >= static_cast<double>(n - 1)) return total_;
        }
        long long k = static_cast<long long>(std::floor(u));
        if (k >= n) k = n - 1;
        const double s = u - static_cast<double>(k);
        // Lagrange cubic on nodes k-1, k, k+1, k+2
        const double c0 = node(k - 1), c1 = node(k), c2 = node(k + 1), c3 = node(k + 2);
        const double l0 = -s * (s - 1.0) * (s - 2.0) / 6.0;
        const double l1 = (s + 1.0) * (s - 1.0) * (s - 2.0) / 2.0;
        const double l2 = -(s + 1.0) * s * (s - 2.0) / 2.0;
        const double l3 = (s + 1.0) * s * (s - 1.0) / 6.0;
        return base + l0 * c0 + l1 * c1 + l2 * c2 + l3 * c3;
    }

private:
    double node(long long k) const {
        const auto n = static_cast<long long>(n_);
        if (periodic_) {
            long long w = 0;
            while (k < 0) { k += n; --w; }
            while (k > n) { k -= n; ++w; }
            return C_[static_cast<std::size_t>(k)] + static_cast<double>(w) * total_;
        }
        if (k <= 0) return 0.0;
        if (k >= n - 1) return total_;
        return C_[static_cast<std::size_t>(k)];
    }

    double y0_, h_;
    std::size_t n_;
    bool periodic_;
    std::vector<double> C_;
    double total_ = 0.0;
};

// sum over grid points within distance r of point i of G * cell volume.
double ball_sum(const Grid& grid, std::span<const double> G, std::size_t i, double r, bool periodic) {
    const std::size_t n = grid.dim();
    std::vector<long long> centre(n), lo(n), hi(n), N(n);
    std::vector<double> h(n);
    std::size_t rest = i;
    for (std::size_t d = n; d-- > 0;) {
        N[d] = static_cast<long long>(grid.axis(d).size());
        centre[d] = static_cast<long long>(rest % grid.axis(d).size());
        rest /= grid.axis(d).size();
        h[d] = grid.axis(d).step();
        const auto reach = static_cast<long long>(std::floor(r / h[d]));
        lo[d] = centre[d] - reach;
        hi[d] = centre[d] + reach;
    }
    double vol = 1.0;
    for (double s : h) vol *= s;
    std::vector<long long> k = lo;
    double sum = 0.0;
    while (true) {
        double d2 = 0.0;
        std::size_t flat = 0;
        bool inside = true;
        for (std::size_t d = 0; d < n; ++d) {
            const double dx = static_cast<double>(k[d] - centre[d]) * h[d];
            d2 += dx * dx;
            long long kk = k[d];
            if (periodic) kk = ((kk % N[d]) + N[d]) % N[d];
            else if (kk < 0 || kk >= N[d]) inside = false;
            flat = flat * static_cast<std::size_t>(N[d]) + static_cast<std::size_t>(std::max(kk, 0LL));
        }
        if (inside && d2 < r * r) sum += G[flat] * vol;
        std::size_t d = n;
        while (d-- > 0) {
            if (++k[d] <= hi[d]) break;
            k[d] = lo[d];
        }
        if (d == static_cast<std::size_t>(-1)) break;
    }
    return sum;
}

// Area-integral slice contribution w / (2 s^{n/2}) int_{|y - x_i| < sqrt s} G.
struct AreaSlicer {
    const Grid& grid;
    bool periodic;

    void accumulate(std::span<const double> G, double s, double w, std::vector<double>& acc, Execution exec) const {
        const double r = std::sqrt(s);
        const double factor = w / (2.0 * std::pow(s, 0.5 * static_cast<double>(grid.dim())));
        if (grid.dim() == 1) {
            const Cumulative1D C(grid.axis(0), G, periodic);
            const auto& x = grid.axis(0).nodes;
            for_each_index_static(exec, static_cast<std::ptrdiff_t>(x.size()), [&](std::ptrdiff_t i) {
                acc[i] += factor * (C(x[i] + r) - C(x[i] - r));
            });
        } else {
            for_each_index(exec, static_cast<std::ptrdiff_t>(grid.size()), [&](std::ptrdiff_t i) {
                acc[i] += factor * ball_sum(grid, G, static_cast<std::size_t>(i), r, periodic);
            });
        }
    }

    double single(std::span<const double> G, double s, double w, std::size_t i) const {
        const double r = std::sqrt(s);
        const double factor = w / (2.0 * std::pow(s, 0.5 * static_cast<double>(grid.dim())));
        if (grid.dim() == 1) {
            const Cumulative1D C(grid.axis(0), G, periodic);
            const double x = grid.axis(0).nodes[i];
            return factor * (C(x + r) - C(x - r));
        }
        return factor * ball_sum(grid, G, i, r, periodic);
    }
};

void require_area_grid(const SemigroupId& id, const SampledField& f) {
    detail::require(id.kind() != SemigroupKind::laguerre, "area_integral_field: cones need a uniform grid in R^n");
    detail::require(f.grid().all_uniform(), "area_integral_field: uniform grid required");
}

std::vector<double> norm_q_slice(const SampledField& F, const GFunctionSpec& spec, Execution exec) {
    std::vector<double> G(F.size());
    for_each_index_static(exec, static_cast<std::ptrdiff_t>(F.size()), [&](std::ptrdiff_t i) {
        std::vector<double> buf(F.components());
        G[i] = std::pow(point_norm(F, static_cast<std::size_t>(i), spec.space, buf), spec.q);
    });
    return G;
}

}  // namespace

GFunctionResult area_integral_field(const SemigroupId& id, const SampledField& f, const GFunctionSpec& spec,
                                    Execution exec) {
    spec.validate();
    check_space(f, spec);
    require_area_grid(id, f);
    const SpectralBasis basis = SpectralBasis::for_semigroup(id, f.grid());
    const CoefficientVector c = basis.expand(f);
    const QuadratureRule rule = spec.time_rule();
    const AreaSlicer slicer{f.grid(), id.kind() == SemigroupKind::classical};
    const std::size_t N = f.size();

    // One s-slice at a time: G_j is shared by every apex.
    std::vector<double> acc(N, 0.0);
    for (std::size_t j = 0; j < rule.size(); ++j) {
        const SampledField F = basis.apply_weights(c, lp_time_weights(basis, spec, rule.nodes[j]));
        slicer.accumulate(norm_q_slice(F, spec, exec), rule.nodes[j], rule.weights[j], acc, exec);
    }

    std::vector<double> lo(N, 0.0), hi(N, 0.0);
    slicer.accumulate(norm_q_slice(basis.apply_weights(c, lp_time_weights(basis, spec, spec.t_min)), spec, exec),
                      spec.t_min, 1.0, lo, exec);
    slicer.accumulate(norm_q_slice(basis.apply_weights(c, lp_time_weights(basis, spec, spec.t_max)), spec, exec),
                      spec.t_max, 1.0, hi, exec);
    const TailModel tm = tail_model(id, basis, spec);
    double tail = 0.0, top = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
        tail = std::max(tail, lo[i] / tm.low + hi[i] / tm.high);
        top = std::max(top, acc[i]);
    }

    GFunctionResult r;
    r.value = SampledField(f.grid(), 1);
    for (std::size_t i = 0; i < N; ++i) r.value.at(i) = std::pow(std::max(acc[i], 0.0), 1.0 / spec.q);
    r.tail_estimate = top > 0.0 ? tail / top : 0.0;
    r.time_nodes = rule.size();
    if (r.tail_estimate > spec.tail_tolerance)
        throw convergence_error("area_integral_field: time-window tail above tolerance", r.tail_estimate);
    return r;
}

SampledField subordinate_poisson_apply(const SemigroupId& id, const SampledField& f, double t) {
    detail::require(std::isfinite(t) && t > 0.0, "subordinate_poisson_apply: t must be positive");
    const SpectralBasis basis = SpectralBasis::for_semigroup(id, f.grid());
    const CoefficientVector c = basis.expand(f);
    const auto w = subordinated_weights(basis.eigenvalues(), t, [](double, double sub) { return sub; });
    return basis.apply_weights(c, w);
}

// ---------------------------------------------------------------- Hardy

StepFunction::StepFunction(std::vector<double> edges, std::vector<double> values)
    : edges_(std::move(edges)), values_(std::move(values)) {
    detail::require(edges_.size() >= 2 && values_.size() + 1 == edges_.size(), "StepFunction: need n + 1 edges for n values");
    for (std::size_t k = 0; k + 1 < edges_.size(); ++k)
        detail::require(edges_[k] < edges_[k + 1], "StepFunction: edges must increase");
    prefix_.assign(edges_.size(), 0.0);
    for (std::size_t k = 0; k < values_.size(); ++k) prefix_[k + 1] = prefix_[k] + values_[k] * (edges_[k + 1] - edges_[k]);
}

StepFunction StepFunction::from_field(const SampledField& f, std::size_t component) {
    detail::require(f.grid().dim() == 1, "StepFunction::from_field: one-dimensional field");
    const auto& x = f.grid().axis(0).nodes;
    const std::size_t n = x.size();
    std::vector<double> edges(n + 1), values(n);
    edges[0] = x[0] - 0.5 * (x[1] - x[0]);
    for (std::size_t i = 1; i < n; ++i) edges[i] = 0.5 * (x[i - 1] + x[i]);
    edges[n] = x[n - 1] + 0.5 * (x[n - 1] - x[n - 2]);
    for (std::size_t i = 0; i < n; ++i) values[i] = f.at(i, component);
    return StepFunction(std::move(edges), std::move(values));
}

double StepFunction::operator()(double x) const {
    if (x <= edges_.front() || x >= edges_.back()) return 0.0;
    const auto it = std::upper_bound(edges_.begin(), edges_.end(), x);
    return values_[static_cast<std::size_t>(it - edges_.begin()) - 1];
}

double StepFunction::antiderivative(double x) const {
    if (x <= edges_.front()) return 0.0;
    if (x >= edges_.back()) return prefix_.back();
    const auto k = static_cast<std::size_t>(std::upper_bound(edges_.begin(), edges_.end(), x) - edges_.begin()) - 1;
    return prefix_[k] + values_[k] * (x - edges_[k]);
}

std::vector<double> hardy_transform(const StepFunction& g, HardyDirection dir, std::span<const double> xs) {
    const auto& e = g.edges();
    const auto& v = g.values();
    detail::require(e.front() >= 0.0, "hardy_transform: support must lie in [0, inf)");
    std::vector<double> out(xs.size());
    if (dir == HardyDirection::from_zero) {
        for (std::size_t i = 0; i < xs.size(); ++i) {
            detail::require(xs[i] > 0.0, "hardy_transform: points must be positive");
            out[i] = g.antiderivative(xs[i]) / xs[i];
        }
        return out;
    }
    // suffix[k] = sum_{j >= k} v_j log(e_{j+1} / e_j)
    std::vector<double> suffix(v.size() + 1, 0.0);
    for (std::size_t k = v.size(); k-- > 0;) {
        const double piece = e[k] > 0.0 ? v[k] * std::log(e[k + 1] / e[k]) : (v[k] == 0.0 ? 0.0 : INFINITY);
        suffix[k] = suffix[k + 1] + piece;
    }
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double x = xs[i];
        detail::require(x > 0.0, "hardy_transform: points must be positive");
        if (x >= e.back()) {
            out[i] = 0.0;
        } else if (x <= e.front()) {
            out[i] = suffix[0];
        } else {
            const auto k = static_cast<std::size_t>(std::upper_bound(e.begin(), e.end(), x) - e.begin()) - 1;
            out[i] = v[k] * std::log(e[k + 1] / x) + suffix[k + 1];
        }
    }
    return out;
}

SampledField hardy_transform(const SampledField& g, HardyDirection dir) {
    detail::require(g.grid().dim() == 1 && g.grid().axis(0).nodes.front() > 0.0, "hardy_transform: positive 1-D grid");
    const StepFunction s = StepFunction::from_field(g);
    StepFunction clipped = s;
    if (s.edges().front() < 0.0) {
        auto edges = s.edges();
        edges.front() = 0.0;
        clipped = StepFunction(edges, s.values());
    }
    const auto vals = hardy_transform(clipped, dir, g.grid().axis(0).nodes);
    SampledField out(g.grid(), 1);
    std::copy(vals.begin(), vals.end(), out.data().begin());
    return out;
}

HardyRatio hardy_lp_ratio(const std::function<double(double)>& g, std::vector<double> breaks, double p,
                          int panels_per_decade) {
    detail::require(p > 1.0 && breaks.size() >= 2 && breaks.front() > 0.0, "hardy_lp_ratio: p > 1 and positive breaks");
    std::sort(breaks.begin(), breaks.end());
    const QuadratureRule& gl = gauss_legendre_reference(16);

    std::vector<double> panel_edges;
    for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
        const double a = breaks[k], b = breaks[k + 1];
        const int n = std::max(1, static_cast<int>(std::ceil(panels_per_decade * std::log10(b / a))));
        for (int i = 0; i < n; ++i) panel_edges.push_back(a * std::pow(b / a, static_cast<double>(i) / n));
    }
    panel_edges.push_back(breaks.back());

    auto integrate = [&](double a, double b, auto&& fn) {
        const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
        double s = 0.0;
        for (std::size_t i = 0; i < gl.size(); ++i) s += gl.weights[i] * fn(mid + half * gl.nodes[i]);
        return half * s;
    };

    double gp = 0.0, hp = 0.0, running = 0.0;
    for (std::size_t k = 0; k + 1 < panel_edges.size(); ++k) {
        const double a = panel_edges[k], b = panel_edges[k + 1];
        gp += integrate(a, b, [&](double y) { return std::pow(std::abs(g(y)), p); });
        hp += integrate(a, b, [&](double x) {
            const double c = running + integrate(a, x, g);
            return std::pow(std::abs(c / x), p);
        });
        running += integrate(a, b, g);
    }
    // beyond the support H_0 g = running / x
    const double X = breaks.back();
    hp += std::pow(std::abs(running), p) * std::pow(X, 1.0 - p) / (p - 1.0);

    HardyRatio r;
    r.norm_g = std::pow(gp, 1.0 / p);
    r.norm_h0g = std::pow(hp, 1.0 / p);
    r.ratio = r.norm_h0g / r.norm_g;
    return r;
}

// ---------------------------------------------------------------- maximal

SampledField maximal_fn(const SampledField& f, const NormedSpace& space, Execution exec, int radii_per_octave) {
    detail::require(space.dim() == f.components(), "maximal_fn: space dimension must match field components");
    const Grid& grid = f.grid();
    SampledField absf(grid, 1);
    {
        std::vector<double> buf(f.components());
        for (std::size_t i = 0; i < f.size(); ++i) absf.at(i) = point_norm(f, i, space, buf);
    }
    SampledField out(grid, 1);

    if (grid.dim() == 1) {
        const StepFunction s = StepFunction::from_field(absf);
        const auto& e = s.edges();
        const auto& x = grid.axis(0).nodes;
        for_each_index(exec, static_cast<std::ptrdiff_t>(x.size()), [&](std::ptrdiff_t i) {
            const double xi = x[i];
            // r -> 0 limit: the node sits inside its own cell
            double best = absf.at(static_cast<std::size_t>(i));
            for (double ek : e) {
                const double r = std::abs(xi - ek);
                if (r <= 0.0) continue;
                best = std::max(best, (s.antiderivative(xi + r) - s.antiderivative(xi - r)) / (2.0 * r));
            }
            out.at(static_cast<std::size_t>(i)) = best;
        });
        return out;
    }

    // n-D: log-spaced radii, cell-centre indicator averages.
    double h = INFINITY, width = 0.0;
    for (const Axis& a : grid.axes()) {
        detail::require(a.kind == AxisKind::uniform, "maximal_fn: uniform axes required in n-D");
        h = std::min(h, a.step());
        width = std::max(width, a.nodes.back() - a.nodes.front());
    }
    std::vector<double> radii;
    for (double r = h; r <= width * (1.0 + 1e-12); r *= std::pow(2.0, 1.0 / radii_per_octave)) radii.push_back(r);
    SampledField ones(grid, 1);
    std::fill(ones.data().begin(), ones.data().end(), 1.0);
    for_each_index(exec, static_cast<std::ptrdiff_t>(grid.size()), [&](std::ptrdiff_t i) {
        double best = absf.at(static_cast<std::size_t>(i));
        for (double r : radii) {
            const double num = ball_sum(grid, absf.data(), static_cast<std::size_t>(i), r, false);
            // ball measure counted on the infinite lattice
            const double den = ball_sum(grid, ones.data(), static_cast<std::size_t>(i), r, true);
            if (den > 0.0) best = std::max(best, num / den);
        }
        out.at(static_cast<std::size_t>(i)) = best;
    });
    return out;
}

// ---------------------------------------------------------------- critical radius

double critical_radius(double x) { return std::abs(x) <= 1.0 ? 0.5 : 1.0 / (1.0 + std::abs(x)); }

double critical_radius(std::span<const double> x) {
    double r2 = 0.0;
    for (double v : x) r2 += v * v;
    return critical_radius(std::sqrt(r2));
}

std::size_t covering_multiplicity(const std::vector<double>& centers, const std::vector<double>& radii, double M) {
    detail::require(centers.size() == radii.size(), "covering_multiplicity: size mismatch");
    const std::size_t n = centers.size();
    std::vector<double> L(n), R(n);
    for (std::size_t k = 0; k < n; ++k) {
        L[k] = centers[k] - M * radii[k];
        R[k] = centers[k] + M * radii[k];
    }
    std::vector<double> Ls = L, Rs = R;
    std::sort(Ls.begin(), Ls.end());
    std::sort(Rs.begin(), Rs.end());
    std::size_t best = 0;
    for (std::size_t j = 0; j < n; ++j) {
        // open intervals meet iff L_k < R_j and R_k > L_j
        const auto starts = static_cast<std::size_t>(std::lower_bound(Ls.begin(), Ls.end(), R[j]) - Ls.begin());
        const auto ended = static_cast<std::size_t>(std::upper_bound(Rs.begin(), Rs.end(), L[j]) - Rs.begin());
        best = std::max(best, starts - ended);
    }
    return best;
}

RatioBound critical_radius_ratio(double lo, double hi, double M, double step, int inner, Execution exec) {
    detail::require(hi >= lo && step > 0.0 && inner >= 2 && M > 0.0, "critical_radius_ratio: bad arguments");
    const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
    std::vector<double> sup(count), inf(count);
    for_each_index_static(exec, static_cast<std::ptrdiff_t>(count), [&](std::ptrdiff_t i) {
        const double x = lo + step * static_cast<double>(i);
        const double rx = critical_radius(x), reach = M * rx * (1.0 - 1e-12);
        double s = 0.0, m = INFINITY;
        for (int k = 0; k < inner; ++k) {
            const double y = x - reach + 2.0 * reach * k / (inner - 1);
            const double ratio = rx / critical_radius(y);
            s = std::max(s, ratio);
            m = std::min(m, ratio);
        }
        sup[i] = s;
        inf[i] = m;
    });
    RatioBound b;
    b.inf = INFINITY;
    for (std::size_t i = 0; i < count; ++i) {
        b.sup = std::max(b.sup, sup[i]);
        b.inf = std::min(b.inf, inf[i]);
    }
    b.pairs = count * static_cast<std::size_t>(inner);
    return b;
}

CoveringFamily covering(double lo, double hi, double M, double overlap) {
    detail::require(std::isfinite(lo) && std::isfinite(hi) && hi > lo, "covering: bounded window with hi > lo");
    detail::require(M > 0.0 && overlap > 0.0 && overlap < 1.0, "covering: M > 0, overlap in (0, 1)");
    CoveringFamily fam;
    fam.lo = lo;
    fam.hi = hi;
    fam.M = M;
    const double keep = 1.0 - overlap;
    // c - keep * rho(c) is strictly increasing (|rho'| <= 1/4), so bisection
    // finds the next centre whose ball starts at the covered frontier a.
    double a = lo;
    while (true) {
        double l = a, r = a + 2.0;
        for (int it = 0; it < 200; ++it) {
            const double m = 0.5 * (l + r);
            (m - keep * critical_radius(m) < a ? l : r) = m;
        }
        const double c = 0.5 * (l + r);
        fam.centers.push_back(c);
        fam.radii.push_back(critical_radius(c));
        a = c + keep * critical_radius(c);
        if (a >= hi) break;
    }
    fam.multiplicity = covering_multiplicity(fam.centers, fam.radii, M);
    const double step = std::min(0.01, (hi - lo) / 64.0);
    const RatioBound rb = critical_radius_ratio(lo, hi, M, step);
    fam.ratio_sup = rb.sup;
    fam.ratio_inf = rb.inf;
    return fam;
}

bool covers_window(const CoveringFamily& fam, double step) {
    detail::require(step > 0.0, "covers_window: step > 0");
    // centres are increasing; sweep the lattice with a moving ball index
    std::size_t k = 0;
    const auto count = static_cast<std::size_t>(std::floor((fam.hi - fam.lo) / step + 1e-9)) + 1;
    for (std::size_t i = 0; i < count; ++i) {
        const double x = std::min(fam.lo + step * static_cast<double>(i), fam.hi);
        while (k < fam.centers.size() && fam.centers[k] + fam.radii[k] <= x) ++k;
        bool hit = false;
        for (std::size_t j = k; j < fam.centers.size() && fam.centers[j] - fam.radii[j] < x; ++j)
            if (std::abs(x - fam.centers[j]) < fam.radii[j]) {
                hit = true;
                break;
            }
        if (!hit) return false;
    }
    return true;
}

// ---------------------------------------------------------------- local / global

LocalGlobalSplit local_global_split(const SemigroupId& id, const SampledField& f, const GFunctionSpec& spec,
                                    std::span<const double> x) {
    spec.validate();
    check_space(f, spec);
    detail::require(spec.ord.alpha() == 1.0, "local_global_split: the decomposition is for alpha = 1");
    const Grid& grid = f.grid();
    detail::require(x.size() == grid.dim(), "local_global_split: point dimension mismatch");

    LocalGlobalSplit out;
    out.radius = critical_radius(x);
    const QuadratureRule rule = spec.time_rule();
    out.times = rule.nodes;
    out.local.resize(rule.size());
    out.global.resize(rule.size());

    std::vector<std::vector<double>> ys(grid.size());
    std::vector<char> near(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) {
        ys[j] = grid.point(j);
        double d2 = 0.0;
        for (std::size_t d = 0; d < x.size(); ++d) d2 += (ys[j][d] - x[d]) * (ys[j][d] - x[d]);
        near[j] = d2 < out.radius * out.radius ? 1 : 0;
    }

    for_each_index(Execution::parallel, static_cast<std::ptrdiff_t>(rule.size()), [&](std::ptrdiff_t k) {
        const double t = rule.nodes[k];
        std::vector<double> loc(f.components(), 0.0), glob(f.components(), 0.0);
        for (std::size_t j = 0; j < grid.size(); ++j) {
            const double kt = t * heat_kernel_dt(id, 1, t, x, ys[j]) * grid.weight(j);
            auto& dst = near[j] ? loc : glob;
            for (std::size_t c = 0; c < f.components(); ++c) dst[c] += kt * f.at(j, c);
        }
        out.local[k] = spec.space.norm(loc);
        out.global[k] = spec.space.norm(glob);
    });
    for (std::size_t k = 0; k < rule.size(); ++k) {
        out.local_norm += rule.weights[k] * std::pow(out.local[k], spec.q);
        out.global_norm += rule.weights[k] * std::pow(out.global[k], spec.q);
    }
    out.local_norm = std::pow(out.local_norm, 1.0 / spec.q);
    out.global_norm = std::pow(out.global_norm, 1.0 / spec.q);
    return out;
}

// ---------------------------------------------------------------- references

namespace reference {

GFunctionResult area_integral_field(const SemigroupId& id, const SampledField& f, const GFunctionSpec& spec) {
    spec.validate();
    check_space(f, spec);
    require_area_grid(id, f);
    const SpectralBasis basis = SpectralBasis::for_semigroup(id, f.grid());
    const CoefficientVector c = basis.expand(f);
    const QuadratureRule rule = spec.time_rule();
    const AreaSlicer slicer{f.grid(), id.kind() == SemigroupKind::classical};

    GFunctionResult r;
    r.value = SampledField(f.grid(), 1);
    r.time_nodes = rule.size();
    for (std::size_t i = 0; i < f.size(); ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < rule.size(); ++j) {
            const SampledField F = basis.apply_weights(c, lp_time_weights(basis, spec, rule.nodes[j]));
            acc += slicer.single(norm_q_slice(F, spec, Execution::serial), rule.nodes[j], rule.weights[j], i);
        }
        r.value.at(i) = std::pow(std::max(acc, 0.0), 1.0 / spec.q);
    }
    return r;
}

std::size_t covering_multiplicity(const std::vector<double>& centers, const std::vector<double>& radii, double M) {
    std::size_t best = 0;
    for (std::size_t j = 0; j < centers.size(); ++j) {
        std::size_t count = 0;
        for (std::size_t k = 0; k < centers.size(); ++k)
            if (std::abs(centers[j] - centers[k]) < M * (radii[j] + radii[k])) ++count;
        best = std::max(best, count);
    }
    return best;
}

}  // namespace reference
}  // namespace lps
