#include "lps/banach.hpp"

#include "lps/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace lps {
namespace {

using Vec = std::vector<double>;

bool normalize(const NormedSpace& space, Vec& v) {
    const double n = space.norm(v);
    if (!(n > 0.0) || !std::isfinite(n)) return false;
    for (double& x : v) x /= n;
    return true;
}

// b on the unit sphere with ||a - b|| = eps, along normalize(cos t a + sin t u).
bool retract(const NormedSpace& space, const Vec& a, const Vec& u, double eps, Vec& b, double& residual) {
    const std::size_t M = a.size();
    Vec tmp(M), diff(M);
    auto gap = [&](double theta, Vec& out) -> double {
        for (std::size_t i = 0; i < M; ++i) out[i] = std::cos(theta) * a[i] + std::sin(theta) * u[i];
        if (!normalize(space, out)) return NAN;
        for (std::size_t i = 0; i < M; ++i) diff[i] = a[i] - out[i];
        return space.norm(diff) - eps;
    };
    // Illinois regula falsi on the bracket [0, pi]: gap(0) = -eps, gap(pi) = 2 - eps.
    double lo = 0.0, hi = std::numbers::pi, glo = -eps, ghi = 2.0 - eps;
    int side = 0;
    for (int it = 0; it < 100 && hi - lo > 1e-15; ++it) {
        double mid = (lo * ghi - hi * glo) / (ghi - glo);
        if (!(mid > lo && mid < hi)) mid = 0.5 * (lo + hi);
        const double g = gap(mid, tmp);
        if (std::isnan(g)) return false;
        if (g == 0.0) {
            lo = hi = mid;
            break;
        }
        if (g < 0.0) {
            lo = mid;
            glo = g;
            if (side == -1) ghi *= 0.5;
            side = -1;
        } else {
            hi = mid;
            ghi = g;
            if (side == 1) glo *= 0.5;
            side = 1;
        }
        if (std::abs(g) < 1e-15) break;
    }
    b.resize(M);
    const double g = gap(std::abs(glo) < std::abs(ghi) ? lo : hi, b);
    if (std::isnan(g)) return false;
    residual = std::abs(g);
    return true;
}

struct Eval {
    double value;
    Vec a, b;
    double residual;
};

Eval convexity_objective(const NormedSpace& space, double eps, const Vec& z) {
    const std::size_t M = space.dim();
    Vec a(z.begin(), z.begin() + static_cast<std::ptrdiff_t>(M)), u(z.begin() + static_cast<std::ptrdiff_t>(M), z.end()), b;
    double res = INFINITY;
    if (!normalize(space, a) || !retract(space, a, u, eps, b, res) || res > 1e-9) return {INFINITY, {}, {}, res};
    Vec mid(M);
    for (std::size_t i = 0; i < M; ++i) mid[i] = 0.5 * (a[i] + b[i]);
    return {1.0 - space.norm(mid), a, b, res};
}

Eval smoothness_objective(const NormedSpace& space, double t, const Vec& z) {
    const std::size_t M = space.dim();
    Vec a(z.begin(), z.begin() + static_cast<std::ptrdiff_t>(M)), b(z.begin() + static_cast<std::ptrdiff_t>(M), z.end());
    if (!normalize(space, a) || !normalize(space, b)) return {INFINITY, {}, {}, 0.0};
    Vec p(M), m(M);
    for (std::size_t i = 0; i < M; ++i) {
        p[i] = a[i] + t * b[i];
        m[i] = a[i] - t * b[i];
    }
    // minimized, so negated
    return {-(0.5 * (space.norm(p) + space.norm(m)) - 1.0), a, b, 0.0};
}

// Compass search from z0; returns the best evaluation.
template <typename F>
Eval compass_search(F&& objective, Vec z, const ModulusOptions& opt) {
    Eval best = objective(z);
    double step = 0.5;
    int iter = 0;
    while (step > opt.min_step && iter < opt.max_iterations) {
        bool improved = false;
        for (std::size_t i = 0; i < z.size() && !improved; ++i) {
            for (double dir : {1.0, -1.0}) {
                Vec trial = z;
                trial[i] += dir * step;
                ++iter;
                Eval e = objective(trial);
                if (e.value < best.value) {
                    best = std::move(e);
                    z = std::move(trial);
                    improved = true;
                    break;
                }
            }
        }
        if (!improved) step *= 0.5;
    }
    return best;
}

Vec gaussian_vector(std::size_t n, std::mt19937_64& rng) {
    std::normal_distribution<double> nd;
    Vec v(n);
    for (double& x : v) x = nd(rng);
    return v;
}

template <typename F>
Eval multistart(const NormedSpace& space, F&& objective, const ModulusOptions& opt) {
    detail::require(opt.restarts >= 1, "modulus: restarts >= 1");
    std::vector<Eval> results(static_cast<std::size_t>(opt.restarts), Eval{INFINITY, {}, {}, INFINITY});
    for_each_index(opt.exec, opt.restarts, [&](std::ptrdiff_t r) {
        std::seed_seq seq{opt.seed, static_cast<std::uint64_t>(r)};
        std::mt19937_64 rng(seq);
        results[r] = compass_search(objective, gaussian_vector(2 * space.dim(), rng), opt);
    });
    std::size_t arg = 0;
    for (std::size_t r = 1; r < results.size(); ++r)
        if (results[r].value < results[arg].value) arg = r;
    return results[arg];
}

}  // namespace

ModulusResult modulus_convexity(const NormedSpace& space, double eps, ModulusOptions options) {
    detail::require(eps > 0.0 && eps < 2.0, "modulus_convexity: eps in (0, 2)");
    const Eval e = multistart(space, [&](const Vec& z) { return convexity_objective(space, eps, z); }, options);
    if (!std::isfinite(e.value) || e.residual > 1e-8)
        throw convergence_error("modulus_convexity: constraint residual above 1e-8", e.residual);
    return {e.value, e.a, e.b, e.residual};
}

ModulusResult modulus_smoothness(const NormedSpace& space, double t, ModulusOptions options) {
    detail::require(t > 0.0 && std::isfinite(t), "modulus_smoothness: t > 0");
    const Eval e = multistart(space, [&](const Vec& z) { return smoothness_objective(space, t, z); }, options);
    if (!std::isfinite(e.value)) throw convergence_error("modulus_smoothness: no finite evaluation");
    return {-e.value, e.a, e.b, 0.0};
}

double modulus_convexity_sampled(const NormedSpace& space, double eps, std::size_t samples, std::uint64_t seed) {
    detail::require(eps > 0.0 && eps < 2.0, "modulus_convexity_sampled: eps in (0, 2)");
    std::mt19937_64 rng(seed);
    double best = INFINITY;
    for (std::size_t s = 0; s < samples; ++s) {
        Vec z = gaussian_vector(2 * space.dim(), rng);
        best = std::min(best, convexity_objective(space, eps, z).value);
    }
    return best;
}

double modulus_smoothness_sampled(const NormedSpace& space, double t, std::size_t samples, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    double best = -INFINITY;
    for (std::size_t s = 0; s < samples; ++s) {
        Vec z = gaussian_vector(2 * space.dim(), rng);
        best = std::max(best, -smoothness_objective(space, t, z).value);
    }
    return best;
}

// ---------------------------------------------------------------- martingales

FiniteMartingale::FiniteMartingale(std::size_t depth, std::size_t dim, std::vector<std::vector<double>> values)
    : depth_(depth), dim_(dim), values_(std::move(values)) {
    detail::require(depth <= 24 && dim >= 1, "FiniteMartingale: depth <= 24, dim >= 1");
    detail::require(values_.size() == depth + 1, "FiniteMartingale: need M_0..M_N");
    for (const auto& v : values_) detail::require(v.size() == atoms() * dim, "FiniteMartingale: wrong value count");
    double scale = 0.0;
    for (const auto& v : values_)
        for (double x : v) scale = std::max(scale, std::abs(x));
    const double tol = 1e-12 * std::max(scale, 1.0);
    for (std::size_t n = 0; n <= depth_; ++n) {
        const std::size_t block = std::size_t{1} << (depth_ - n);
        for (std::size_t a = 0; a < atoms(); ++a)
            for (std::size_t c = 0; c < dim_; ++c)
                if (std::abs(values_[n][a * dim_ + c] - values_[n][(a / block) * block * dim_ + c]) > tol)
                    throw precondition_error("FiniteMartingale: M_n is not adapted to the dyadic filtration");
    }
    if (martingale_residual() > tol) throw precondition_error("FiniteMartingale: E[M_n | F_{n-1}] != M_{n-1}");
}

FiniteMartingale FiniteMartingale::random(std::size_t depth, std::size_t dim, std::mt19937_64& rng, double scale) {
    std::normal_distribution<double> nd(0.0, scale);
    const std::size_t atoms = std::size_t{1} << depth;
    std::vector<std::vector<double>> v(depth + 1, std::vector<double>(atoms * dim));
    Vec m0(dim);
    for (double& x : m0) x = nd(rng);
    for (std::size_t a = 0; a < atoms; ++a)
        for (std::size_t c = 0; c < dim; ++c) v[0][a * dim + c] = m0[c];
    for (std::size_t n = 1; n <= depth; ++n) {
        const std::size_t parent = std::size_t{1} << (depth - n + 1), half = parent / 2;
        for (std::size_t start = 0; start < atoms; start += parent) {
            Vec d(dim);
            for (double& x : d) x = nd(rng);
            for (std::size_t a = start; a < start + parent; ++a) {
                const double s = a < start + half ? 1.0 : -1.0;
                for (std::size_t c = 0; c < dim; ++c) v[n][a * dim + c] = v[n - 1][a * dim + c] + s * d[c];
            }
        }
    }
    return FiniteMartingale(depth, dim, std::move(v));
}

std::span<const double> FiniteMartingale::value(std::size_t n, std::size_t atom) const {
    return std::span<const double>(values_.at(n)).subspan(atom * dim_, dim_);
}

double FiniteMartingale::martingale_residual() const {
    double worst = 0.0;
    for (std::size_t n = 1; n <= depth_; ++n) {
        const std::size_t parent = std::size_t{1} << (depth_ - n + 1);
        for (std::size_t start = 0; start < atoms(); start += parent)
            for (std::size_t c = 0; c < dim_; ++c) {
                double mean = 0.0;
                for (std::size_t a = start; a < start + parent; ++a) mean += values_[n][a * dim_ + c];
                mean /= static_cast<double>(parent);
                worst = std::max(worst, std::abs(mean - values_[n - 1][start * dim_ + c]));
            }
    }
    return worst;
}

std::vector<double> martingale_square_fn(const FiniteMartingale& mart, const NormedSpace& space, double q) {
    detail::require(q > 1.0, "martingale_square_fn: q > 1");
    detail::require(space.dim() == mart.dim(), "martingale_square_fn: space dimension mismatch");
    std::vector<double> out(mart.atoms());
    Vec d(mart.dim());
    for (std::size_t a = 0; a < mart.atoms(); ++a) {
        double s = std::pow(space.norm(mart.value(0, a)), q);
        for (std::size_t n = 1; n <= mart.depth(); ++n) {
            const auto cur = mart.value(n, a), prev = mart.value(n - 1, a);
            for (std::size_t c = 0; c < d.size(); ++c) d[c] = cur[c] - prev[c];
            s += std::pow(space.norm(d), q);
        }
        out[a] = std::pow(s, 1.0 / q);
    }
    return out;
}

// ---------------------------------------------------------------- Lusin probe

namespace {

RatioSummary summarize(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    RatioSummary s;
    s.min = v.front();
    s.max = v.back();
    const std::size_t n = v.size();
    s.median = n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
    return s;
}

}  // namespace

LusinReport lusin_ratio_probe(const SemigroupId& id, const GFunctionSpec& spec, double p, std::size_t trials,
                              LusinProbeOptions options) {
    detail::require(p > 1.0 && std::isfinite(p), "lusin_ratio_probe: p in (1, inf)");
    detail::require(trials >= 1, "lusin_ratio_probe: trials >= 1");
    detail::require(id.dim() == 1 && id.kind() != SemigroupKind::laguerre, "lusin_ratio_probe: classical(1) or hermite(1)");
    detail::require(options.k_max >= options.k_min && options.k_min >= (id.kind() == SemigroupKind::classical ? 1 : 0),
                    "lusin_ratio_probe: band must be nonempty and exclude the classical zero mode");
    const std::size_t B = spec.space.dim();
    const double L = options.half_width;
    const Grid grid({Axis::uniform(-L, 2.0 * L / static_cast<double>(options.points), options.points)});
    const double period = 2.0 * L;

    std::vector<double> cot(trials), typ(trials);
    for (std::size_t trial = 0; trial < trials; ++trial) {
        std::seed_seq seq{options.seed, static_cast<std::uint64_t>(trial)};
        std::mt19937_64 rng(seq);
        std::normal_distribution<double> nd;
        const int nk = options.k_max - options.k_min + 1;
        std::vector<double> a(static_cast<std::size_t>(nk) * B), b(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            a[i] = nd(rng);
            b[i] = nd(rng);
        }
        const SampledField f = SampledField::from_function(grid, B, [&](std::span<const double> x, std::span<double> out) {
            for (std::size_t c = 0; c < B; ++c) {
                double s = 0.0;
                for (int k = options.k_min; k <= options.k_max; ++k) {
                    const std::size_t idx = c * static_cast<std::size_t>(nk) + static_cast<std::size_t>(k - options.k_min);
                    if (id.kind() == SemigroupKind::classical) {
                        const double arg = 2.0 * std::numbers::pi * k * (x[0] + L) / period;
                        s += a[idx] * std::cos(arg) + b[idx] * std::sin(arg);
                    } else {
                        s += a[idx] * hermite_fn(k, x[0]);
                    }
                }
                out[c] = s;
            }
        });
        const GFunctionResult g = g_function_field(id, f, spec);
        double fp = 0.0;
        std::vector<double> buf(B);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            for (std::size_t c = 0; c < B; ++c) buf[c] = f.at(i, c);
            fp += grid.weight(i) * std::pow(spec.space.norm(buf), p);
        }
        const double gn = std::pow(lq_norm_q(g.value, p), 1.0 / p), fn = std::pow(fp, 1.0 / p);
        cot[trial] = gn / fn;
        typ[trial] = fn / gn;
    }
    LusinReport r;
    r.cotype = summarize(cot);
    r.type = summarize(typ);
    r.cotype_samples = cot;
    r.trials = trials;
    return r;
}

}  // namespace lps
