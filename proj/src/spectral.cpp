#include "lps/spectral.hpp"

#include "lps/error.hpp"
#include "lps/quadrature.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>

namespace lps {
namespace {

// FFTW's planner is not thread-safe; execution with new arrays is.
std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

// out[o, r, i] = sum_j M[r, j] in[o, j, i] for the axis with extent cols.
void apply_along_axis(std::span<const double> in, const std::vector<std::size_t>& shape, std::size_t axis,
                      const std::vector<double>& M, std::size_t rows, std::vector<double>& out) {
    std::size_t outer = 1, inner = 1;
    for (std::size_t d = 0; d < axis; ++d) outer *= shape[d];
    for (std::size_t d = axis + 1; d < shape.size(); ++d) inner *= shape[d];
    const std::size_t cols = shape[axis];
    out.assign(outer * rows * inner, 0.0);
    for_each_index_static(Execution::parallel, static_cast<std::ptrdiff_t>(outer * rows), [&](std::ptrdiff_t idx) {
        const std::size_t o = static_cast<std::size_t>(idx) / rows, r = static_cast<std::size_t>(idx) % rows;
        double* dst = out.data() + (o * rows + r) * inner;
        const double* row = M.data() + r * cols;
        for (std::size_t j = 0; j < cols; ++j) {
            const double m = row[j];
            if (m == 0.0) continue;
            const double* src = in.data() + (o * cols + j) * inner;
            for (std::size_t i = 0; i < inner; ++i) dst[i] += m * src[i];
        }
    });
}

int auto_hermite_modes(const Axis& a) {
    const double lo = a.nodes.front(), hi = a.nodes.back();
    double h = (hi - lo) / static_cast<double>(a.size() - 1);
    const double reach = std::min(std::abs(lo), std::abs(hi)) - 6.0;
    const double s = std::min(0.8 * std::numbers::pi / h, reach);
    if (s < 1.0) return 1;
    return std::min(400, static_cast<int>(std::floor((s * s - 1.0) / 2.0)) + 1);
}

int auto_laguerre_modes(const Axis& a, double beta) {
    const double s = a.nodes.back() - 5.0;
    if (s * s < 2.0 * beta + 2.0) return 1;
    return std::min(400, static_cast<int>(std::floor((s * s - 2.0 * beta - 2.0) / 4.0)) + 1);
}

}  // namespace

struct SpectralBasis::Impl {
    enum class Kind { hermite, laguerre, fourier };
    Kind kind = Kind::hermite;
    SemigroupId id = SemigroupId::classical(1);
    Grid grid;
    std::vector<std::size_t> grid_shape;
    std::vector<std::size_t> modes_shape;
    std::size_t total_modes = 0;
    std::vector<double> lambda;

    // Hermite / Laguerre: per-axis analysis (K x N, weights folded in) and
    // synthesis (N x K) matrices.
    std::vector<std::vector<double>> analysis;
    std::vector<std::vector<double>> synthesis;

    // Fourier
    fftw_plan forward = nullptr;
    fftw_plan backward = nullptr;
    std::vector<std::complex<double>> phase;  // e^{-i xi . x0}
    double scale = 1.0;                       // sqrt(V) / N
    std::vector<char> outer_band;

    Impl() = default;
    Impl(const Impl&) = delete;
    Impl& operator=(const Impl&) = delete;
    ~Impl() {
        std::lock_guard lock(fftw_planner_mutex());
        if (forward) fftw_destroy_plan(forward);
        if (backward) fftw_destroy_plan(backward);
    }
};

namespace {

std::shared_ptr<SpectralBasis::Impl> tensor_basis(const Grid& grid, const std::vector<int>& K,
                                                  const std::function<void(std::size_t, int, double, std::span<double>)>& eval) {
    auto impl = std::make_shared<SpectralBasis::Impl>();
    impl->grid = grid;
    impl->grid_shape = grid.shape();
    impl->total_modes = 1;
    for (std::size_t d = 0; d < grid.dim(); ++d) {
        const Axis& a = grid.axis(d);
        const std::size_t k = static_cast<std::size_t>(K[d]), n = a.size();
        impl->modes_shape.push_back(k);
        impl->total_modes *= k;
        std::vector<double> an(k * n), sy(n * k), vals(k);
        for (std::size_t i = 0; i < n; ++i) {
            eval(d, K[d] - 1, a.nodes[i], vals);
            for (std::size_t m = 0; m < k; ++m) {
                an[m * n + i] = vals[m] * a.weights[i];
                sy[i * k + m] = vals[m];
            }
        }
        impl->analysis.push_back(std::move(an));
        impl->synthesis.push_back(std::move(sy));
    }
    return impl;
}

}  // namespace

SpectralBasis SpectralBasis::hermite(const Grid& grid, int K, HermiteEigenvalues convention) {
    std::vector<int> ks;
    for (const Axis& a : grid.axes()) ks.push_back(K > 0 ? K : auto_hermite_modes(a));
    auto impl = tensor_basis(grid, ks, [](std::size_t, int kmax, double x, std::span<double> out) {
        hermite_fns(kmax, x, out);
    });
    impl->kind = Impl::Kind::hermite;
    impl->id = SemigroupId::hermite(static_cast<int>(grid.dim()));
    impl->lambda.resize(impl->total_modes);
    std::vector<int> idx(grid.dim());
    for (std::size_t m = 0; m < impl->total_modes; ++m) {
        std::size_t r = m;
        for (std::size_t d = grid.dim(); d-- > 0;) {
            idx[d] = static_cast<int>(r % impl->modes_shape[d]);
            r /= impl->modes_shape[d];
        }
        impl->lambda[m] = hermite_eigenvalue(idx, convention);
    }
    return SpectralBasis(impl);
}

SpectralBasis SpectralBasis::laguerre(BesselOrder beta, const Grid& grid, int K) {
    detail::require(grid.dim() == 1, "SpectralBasis::laguerre: one-dimensional grid");
    detail::require(grid.axis(0).nodes.front() > 0.0, "SpectralBasis::laguerre: grid must lie in (0, inf)");
    const int k = K > 0 ? K : auto_laguerre_modes(grid.axis(0), beta.value());
    auto impl = tensor_basis(grid, {k}, [beta](std::size_t, int kmax, double x, std::span<double> out) {
        laguerre_fns(kmax, beta, x, out);
    });
    impl->kind = Impl::Kind::laguerre;
    impl->id = SemigroupId::laguerre(beta);
    impl->lambda.resize(impl->total_modes);
    for (std::size_t m = 0; m < impl->total_modes; ++m) impl->lambda[m] = 2.0 * m + beta.value() + 1.0;
    return SpectralBasis(impl);
}

SpectralBasis SpectralBasis::fourier(const Grid& grid) {
    detail::require(grid.all_uniform(), "SpectralBasis::fourier: uniform axes required");
    auto impl = std::make_shared<Impl>();
    impl->kind = Impl::Kind::fourier;
    impl->id = SemigroupId::classical(static_cast<int>(grid.dim()));
    impl->grid = grid;
    impl->grid_shape = grid.shape();
    impl->modes_shape = impl->grid_shape;
    impl->total_modes = grid.size();
    const std::size_t n = grid.dim();

    double volume = 1.0;
    for (const Axis& a : grid.axes()) volume *= a.period();
    impl->scale = std::sqrt(volume) / static_cast<double>(grid.size());

    impl->lambda.resize(grid.size());
    impl->phase.resize(grid.size());
    impl->outer_band.assign(grid.size(), 0);
    std::vector<double> xi(n);
    for (std::size_t m = 0; m < grid.size(); ++m) {
        std::size_t r = m;
        double lam = 0.0, arg = 0.0;
        bool outer = false;
        for (std::size_t d = n; d-- > 0;) {
            const Axis& a = grid.axis(d);
            const auto N = static_cast<long long>(a.size());
            const auto i = static_cast<long long>(r % a.size());
            r /= a.size();
            const long long kk = 2 * i < N ? i : i - N;
            const double x = 2.0 * std::numbers::pi * static_cast<double>(kk) / a.period();
            lam += x * x;
            arg += x * a.nodes.front();
            if (8 * std::llabs(kk) > 3 * N) outer = true;
        }
        impl->lambda[m] = lam;
        impl->phase[m] = std::polar(1.0, -arg);
        impl->outer_band[m] = outer ? 1 : 0;
    }

    std::vector<int> dims;
    for (std::size_t s : impl->grid_shape) dims.push_back(static_cast<int>(s));
    {
        std::lock_guard lock(fftw_planner_mutex());
        fftw_complex* buf = fftw_alloc_complex(grid.size());
        impl->forward = fftw_plan_dft(static_cast<int>(n), dims.data(), buf, buf, FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
        impl->backward = fftw_plan_dft(static_cast<int>(n), dims.data(), buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
        fftw_free(buf);
    }
    if (!impl->forward || !impl->backward) throw convergence_error("SpectralBasis::fourier: FFTW planning failed");
    return SpectralBasis(impl);
}

SpectralBasis SpectralBasis::for_semigroup(const SemigroupId& id, const Grid& grid, int K) {
    switch (id.kind()) {
        case SemigroupKind::classical: {
            detail::require(grid.dim() == static_cast<std::size_t>(id.dim()), "for_semigroup: grid dimension mismatch");
            return fourier(grid);
        }
        case SemigroupKind::hermite: {
            detail::require(grid.dim() == static_cast<std::size_t>(id.dim()), "for_semigroup: grid dimension mismatch");
            return hermite(grid, K);
        }
        case SemigroupKind::laguerre: return laguerre(BesselOrder(id.beta()), grid, K);
    }
    throw precondition_error("for_semigroup: unknown semigroup");
}

const SemigroupId& SpectralBasis::semigroup() const { return impl_->id; }
const Grid& SpectralBasis::grid() const { return impl_->grid; }
std::size_t SpectralBasis::modes() const { return impl_->total_modes; }
std::vector<std::size_t> SpectralBasis::mode_shape() const { return impl_->modes_shape; }
std::span<const double> SpectralBasis::eigenvalues() const { return impl_->lambda; }

double SpectralBasis::max_eigenvalue() const {
    return *std::max_element(impl_->lambda.begin(), impl_->lambda.end());
}

double SpectralBasis::min_positive_eigenvalue() const {
    double m = INFINITY;
    for (double l : impl_->lambda)
        if (l > 0.0) m = std::min(m, l);
    return m;
}

std::vector<std::complex<double>> SpectralBasis::evaluate_modes(std::span<const double> x) const {
    const Impl& b = *impl_;
    detail::require(x.size() == b.grid.dim(), "evaluate_modes: point dimension mismatch");
    const std::size_t n = b.grid.dim();
    std::vector<std::complex<double>> out(b.total_modes, {1.0, 0.0});
    if (b.kind == Impl::Kind::fourier) {
        double volume = 1.0;
        for (const Axis& a : b.grid.axes()) volume *= a.period();
        const double norm = 1.0 / std::sqrt(volume);
        for (std::size_t m = 0; m < b.total_modes; ++m) {
            std::size_t r = m;
            double arg = 0.0;
            for (std::size_t d = n; d-- > 0;) {
                const Axis& a = b.grid.axis(d);
                const auto N = static_cast<long long>(a.size());
                const auto i = static_cast<long long>(r % a.size());
                r /= a.size();
                const long long kk = 2 * i < N ? i : i - N;
                arg += 2.0 * std::numbers::pi * static_cast<double>(kk) / a.period() * x[d];
            }
            out[m] = std::polar(norm, arg);
        }
        return out;
    }
    std::vector<std::vector<double>> per_axis(n);
    for (std::size_t d = 0; d < n; ++d) {
        per_axis[d].resize(b.modes_shape[d]);
        const int kmax = static_cast<int>(b.modes_shape[d]) - 1;
        if (b.kind == Impl::Kind::hermite)
            hermite_fns(kmax, x[d], per_axis[d]);
        else
            laguerre_fns(kmax, BesselOrder(b.id.beta()), x[d], per_axis[d]);
    }
    for (std::size_t m = 0; m < b.total_modes; ++m) {
        std::size_t r = m;
        double v = 1.0;
        for (std::size_t d = n; d-- > 0;) {
            v *= per_axis[d][r % b.modes_shape[d]];
            r /= b.modes_shape[d];
        }
        out[m] = v;
    }
    return out;
}

CoefficientVector SpectralBasis::expand(const SampledField& f, ExpandOptions options) const {
    const Impl& b = *impl_;
    detail::require(f.grid().shape() == b.grid_shape, "expand: field grid does not match the basis grid");
    CoefficientVector c;
    c.modes = b.total_modes;
    c.components = f.components();
    c.values.assign(c.modes * c.components, {0.0, 0.0});
    c.norm_squared = f.inner(f);

    double captured = 0.0, outer = 0.0;
    for (std::size_t comp = 0; comp < f.components(); ++comp) {
        if (b.kind == Impl::Kind::fourier) {
            std::vector<std::complex<double>> buf(f.size());
            const auto src = f.component(comp);
            for (std::size_t i = 0; i < f.size(); ++i) buf[i] = src[i];
            auto* p = reinterpret_cast<fftw_complex*>(buf.data());
            fftw_execute_dft(b.forward, p, p);
            for (std::size_t m = 0; m < c.modes; ++m) {
                const std::complex<double> v = b.scale * buf[m] * b.phase[m];
                c.at(m, comp) = v;
                captured += std::norm(v);
                if (b.outer_band[m]) outer += std::norm(v);
            }
        } else {
            std::vector<double> cur(f.component(comp).begin(), f.component(comp).end()), next;
            std::vector<std::size_t> shape = b.grid_shape;
            for (std::size_t d = 0; d < shape.size(); ++d) {
                apply_along_axis(cur, shape, d, b.analysis[d], b.modes_shape[d], next);
                shape[d] = b.modes_shape[d];
                cur.swap(next);
            }
            for (std::size_t m = 0; m < c.modes; ++m) {
                c.at(m, comp) = cur[m];
                captured += cur[m] * cur[m];
            }
        }
    }
    c.tail_energy = b.kind == Impl::Kind::fourier ? outer : std::max(0.0, c.norm_squared - captured);
    if (c.tail_energy > options.tail_tolerance * c.norm_squared)
        throw convergence_error("expand: field not resolved by the basis truncation", c.tail_energy / c.norm_squared);
    return c;
}

SampledField SpectralBasis::synthesize(const CoefficientVector& c) const {
    std::vector<double> ones(modes(), 1.0);
    return apply_weights(c, ones);
}

SampledField SpectralBasis::apply_weights(const CoefficientVector& c, std::span<const double> weights) const {
    const Impl& b = *impl_;
    detail::require(c.modes == b.total_modes && weights.size() == b.total_modes, "apply: coefficient/basis size mismatch");
    SampledField out(b.grid, c.components);
    for (std::size_t comp = 0; comp < c.components; ++comp) {
        auto dst = out.component(comp);
        if (b.kind == Impl::Kind::fourier) {
            std::vector<std::complex<double>> buf(c.modes);
            for (std::size_t m = 0; m < c.modes; ++m)
                buf[m] = weights[m] == 0.0 ? std::complex<double>{} : weights[m] * c.at(m, comp) * std::conj(b.phase[m]) / b.scale;
            auto* p = reinterpret_cast<fftw_complex*>(buf.data());
            fftw_execute_dft(b.backward, p, p);
            const double inv = 1.0 / static_cast<double>(c.modes);
            for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = buf[i].real() * inv;
        } else {
            std::vector<double> cur(c.modes), next;
            for (std::size_t m = 0; m < c.modes; ++m) cur[m] = weights[m] * c.at(m, comp).real();
            std::vector<std::size_t> shape = b.modes_shape;
            for (std::size_t d = 0; d < shape.size(); ++d) {
                apply_along_axis(cur, shape, d, b.synthesis[d], b.grid_shape[d], next);
                shape[d] = b.grid_shape[d];
                cur.swap(next);
            }
            std::copy(cur.begin(), cur.end(), dst.begin());
        }
    }
    return out;
}

SampledField SpectralBasis::apply_multiplier(const CoefficientVector& c, const std::function<double(double)>& w,
                                             ApplyOptions options) const {
    const Impl& b = *impl_;
    std::vector<double> weights(b.total_modes);
    for (std::size_t m = 0; m < weights.size(); ++m) weights[m] = w(b.lambda[m]);
    if (std::isfinite(options.tail_tolerance) && c.tail_energy > 0.0) {
        // sup of |w| beyond the largest retained eigenvalue, sampled on a log grid
        const double top = max_eigenvalue();
        double sup = 0.0;
        for (int i = 0; i <= 64; ++i) sup = std::max(sup, std::abs(w(top * std::pow(1e3, i / 64.0))));
        const double est = std::sqrt(c.tail_energy) * sup;
        if (est > options.tail_tolerance * std::sqrt(c.norm_squared))
            throw convergence_error("spectral apply: truncated tail above tolerance", est);
    }
    return apply_weights(c, weights);
}

CoefficientVector expand(const SampledField& f, const SpectralBasis& basis, ExpandOptions options) {
    return basis.expand(f, options);
}

SampledField spectral_apply(const CoefficientVector& c, const SpectralBasis& basis, double t,
                            const std::optional<FractionalOrder>& ord, ApplyOptions options) {
    detail::require(std::isfinite(t) && t > 0.0, "spectral_apply: t must be positive");
    if (ord) {
        const FractionalOrder o = *ord;
        return basis.apply_multiplier(c, [o, t](double lam) { return o.multiplier(lam, t); }, options);
    }
    return basis.apply_multiplier(c, [t](double lam) { return std::exp(-lam * t); }, options);
}

SampledField fixed_point_projection(const SemigroupId&, const SampledField& f) {
    return SampledField(f.grid(), f.components());
}

PairingResult polarization_pairing(const SampledField& f, const SampledField& g, const SpectralBasis& basis,
                                   const FractionalOrder& ord, PairingOptions options) {
    detail::require(f.components() == g.components(), "polarization_pairing: component mismatch");
    const SemigroupId& id = basis.semigroup();
    const double a = ord.alpha();

    // Fixed-point parts (zero here) are removed before pairing.
    SampledField f0 = f, g0 = g;
    const SampledField pf = fixed_point_projection(id, f), pg = fixed_point_projection(id, g);
    for (std::size_t i = 0; i < f0.data().size(); ++i) {
        f0.data()[i] -= pf.data()[i];
        g0.data()[i] -= pg.data()[i];
    }

    ExpandOptions loose;
    loose.tail_tolerance = INFINITY;
    const CoefficientVector cf = basis.expand(f0, loose), cg = basis.expand(g0, loose);

    // Per-mode Re <c_f, c_g> summed over components.
    const auto lam = basis.eigenvalues();
    std::vector<double> lk, pk;
    for (std::size_t m = 0; m < cf.modes; ++m) {
        double p = 0.0;
        for (std::size_t c = 0; c < cf.components; ++c) p += (cf.at(m, c) * std::conj(cg.at(m, c))).real();
        if (p != 0.0 && lam[m] > 0.0) {
            lk.push_back(lam[m]);
            pk.push_back(p);
        }
    }

    double t_min = options.t_min, t_max = options.t_max;
    if (t_min <= 0.0) t_min = std::pow(1e-14, 1.0 / (2.0 * a)) / basis.max_eigenvalue();
    if (t_max <= 0.0) t_max = 40.0 / basis.min_positive_eigenvalue();
    const int panels = std::max(4, static_cast<int>(std::ceil(options.panels_per_unit * std::log(t_max / t_min))));
    const QuadratureRule rule = log_time_rule(t_min, t_max, panels, options.order);

    std::vector<double> per_node(rule.size(), 0.0);
    for_each_index(Execution::parallel, static_cast<std::ptrdiff_t>(rule.size()), [&](std::ptrdiff_t j) {
        const double t = rule.nodes[j];
        double s = 0.0;
        for (std::size_t m = 0; m < lk.size(); ++m) {
            const double x = lk[m] * t;
            if (2.0 * x > 745.0) continue;
            s += std::exp(2.0 * a * std::log(x) - 2.0 * x) * pk[m];
        }
        per_node[j] = s;
    });

    PairingResult r;
    for (std::size_t j = 0; j < rule.size(); ++j) r.lhs += rule.weights[j] * per_node[j];
    r.constant = std::tgamma(2.0 * a) / std::pow(2.0, 2.0 * a);
    r.rhs = r.constant * f0.inner(g0);
    const double scale = std::max(std::abs(r.rhs), r.constant * std::sqrt(f0.inner(f0) * g0.inner(g0)));
    r.gap = scale > 0.0 ? std::abs(r.lhs - r.rhs) / scale : 0.0;
    r.time_nodes = rule.size();
    return r;
}

}  // namespace lps
