#include "common.hpp"

#include "lps/field.hpp"
#include "lps/frac.hpp"
#include "lps/orthobasis.hpp"
#include "lps/spectral.hpp"

#include <cmath>
#include <complex>

namespace lps::cli::detail {
namespace {

void weyl_eigen(const Params& p, std::uint64_t, Report& r) {
    const auto alphas = p.numbers("weyl.alpha");
    const auto lambdas = p.numbers("weyl.lambda");
    const auto ts = p.numbers("weyl.t");
    const double tol = p.positive("tolerance.max_rel_err");
    for (double l : lambdas)
        if (!(l > 0.0)) throw config_error("weyl.lambda", "eigenvalues must be positive");
    for (double t : ts)
        if (!(t > 0.0)) throw config_error("weyl.t", "times must be positive");

    r.csv_header({"alpha", "lambda", "t", "quadrature", "closed_form", "rel_err", "error_estimate"});
    double worst = 0.0;
    for (double a : alphas) {
        if (!(a > 0.0)) throw config_error("weyl.alpha", "orders must be positive");
        const FractionalOrder ord(a);
        for (double l : lambdas)
            for (double t : ts) {
                const auto w = weyl_derivative_fn(TimeProfile::exponential(l), ord, t);
                const double exact = ord.multiplier(l, t);
                const double e = std::abs(w.value - exact) / std::abs(exact);
                worst = std::max(worst, e);
                r.csv_row({a, l, t, w.value, exact, e, w.error_estimate});
            }
    }
    // integer orders: Weyl and classical derivatives agree up to sign
    double worst_int = 0.0;
    for (int k : {1, 2, 3})
        for (double t : ts) {
            const auto prof = TimeProfile::power(1.0, 2.5);
            const double w = weyl_derivative_fn(prof, FractionalOrder(k), t).value;
            const double d = prof.nth_derivative(t, k);
            worst_int = std::max(worst_int, std::abs(std::abs(w) - std::abs(d)) / std::abs(d));
        }
    r.metric("max_rel_err", worst);
    r.metric("integer_order_max_rel_err", worst_int);
    r.at_most("max_rel_err", worst, tol);
    r.at_most("integer_order_max_rel_err", worst_int, tol);
}

struct PointExpansion {
    std::vector<double> lambda;
    std::vector<double> amp;  // Re(c_k e_k(x)) merged over modes sharing lambda
};

PointExpansion expansion_at(const SpectralBasis& basis, const CoefficientVector& c, double x) {
    const auto e = basis.evaluate_modes({&x, 1});
    const auto lam = basis.eigenvalues();
    PointExpansion out;
    for (std::size_t k = 0; k < basis.modes(); ++k) {
        if (lam[k] == 0.0) continue;  // killed by lambda^beta
        const double a = (c.at(k) * e[k]).real();
        if (a == 0.0) continue;
        out.lambda.push_back(lam[k]);
        out.amp.push_back(a);
    }
    return out;
}

double sum_modes(const PointExpansion& pe, const std::function<double(double)>& w) {
    double s = 0.0;
    for (std::size_t k = 0; k < pe.lambda.size(); ++k) s += pe.amp[k] * w(pe.lambda[k]);
    return s;
}

// d^gamma_t (d^beta T_t f)(x) by Weyl quadrature of the profile
// u -> d^beta T_u f(x), against d^{gamma+beta} T_t f(x) in closed form.
struct CompositionRow {
    double lhs, rhs;
};

CompositionRow composition_at(const PointExpansion& pe, double gamma, double beta, double t) {
    const FractionalOrder ob(beta), og(gamma), os(gamma + beta);
    double lmin = INFINITY;
    for (double l : pe.lambda) lmin = std::min(lmin, l);
    TimeProfile prof;
    prof.value = [&](double u) { return sum_modes(pe, [&](double l) { return ob.multiplier(l, u); }); };
    prof.derivative = [&](double u, int j) {
        return sum_modes(pe, [&](double l) { return ob.multiplier(l, u) * std::pow(-l, j); });
    };
    prof.decay = DecayHint::exponential(lmin);
    const double lhs = weyl_derivative_fn(prof, og, t).value;
    const double rhs = sum_modes(pe, [&](double l) { return os.multiplier(l, t); });
    return {lhs, rhs};
}

void composition(const Params& p, std::uint64_t, Report& r) {
    const auto orders = p.numbers("composition.orders");
    const auto xs = p.numbers("composition.x");
    const double t = p.positive("composition.t");
    const double step = p.positive("field.step");
    const double hw_h = p.positive("field.hermite_half_width");
    const double hw_c = p.positive("field.classical_half_width");
    const double tol = p.positive("tolerance.max_rel_err");
    for (double o : orders)
        if (!(o > 0.0)) throw config_error("composition.orders", "orders must be positive");

    struct Case {
        std::string name;
        SpectralBasis basis;
        CoefficientVector coeffs;
    };
    std::vector<Case> cases;
    {
        Grid g({Axis::symmetric(hw_h, step)});
        auto f = SampledField::from_function(g, [](std::span<const double> x) {
            return std::exp(-(x[0] - 0.5) * (x[0] - 0.5)) * (1.0 + 0.5 * x[0]);
        });
        auto b = SpectralBasis::hermite(g);
        cases.push_back({"hermite", b, b.expand(f)});
    }
    {
        Grid g({Axis::symmetric(hw_c, step)});
        auto f = SampledField::from_function(g, [](std::span<const double> x) {
            return std::exp(-x[0] * x[0] / 2.0) + 0.5 * std::exp(-(x[0] - 1.0) * (x[0] - 1.0) * 2.0);
        });
        auto b = SpectralBasis::fourier(g);
        cases.push_back({"classical", b, b.expand(f, {INFINITY})});
    }

    r.csv_header({"semigroup", "gamma", "beta", "x", "composed", "direct", "rel_err", "rel_err_magnitude"});
    double worst = 0.0, worst_mag = 0.0;
    nlohmann::json pairs = nlohmann::json::array();
    for (const Case& c : cases) {
        std::vector<PointExpansion> pes;
        for (double x : xs) pes.push_back(expansion_at(c.basis, c.coeffs, x));
        for (double gamma : orders)
            for (double beta : orders) {
                std::vector<CompositionRow> rows;
                double scale = 0.0, diff = 0.0, diff_mag = 0.0;
                for (const auto& pe : pes) {
                    rows.push_back(composition_at(pe, gamma, beta, t));
                    scale = std::max(scale, std::abs(rows.back().rhs));
                }
                for (std::size_t i = 0; i < rows.size(); ++i) {
                    diff = std::max(diff, std::abs(rows[i].lhs - rows[i].rhs));
                    diff_mag = std::max(diff_mag, std::abs(std::abs(rows[i].lhs) - std::abs(rows[i].rhs)));
                }
                const double e = diff / scale, em = diff_mag / scale;
                for (std::size_t i = 0; i < rows.size(); ++i)
                    r.csv_row_text({c.name, join({gamma}), join({beta}), join({xs[i]}), join({rows[i].lhs}),
                                    join({rows[i].rhs}), join({std::abs(rows[i].lhs - rows[i].rhs) / scale}),
                                    join({std::abs(std::abs(rows[i].lhs) - std::abs(rows[i].rhs)) / scale})});
                worst = std::max(worst, e);
                worst_mag = std::max(worst_mag, em);
                const double sign_ratio = FractionalOrder(gamma).sign() * FractionalOrder(beta).sign() *
                                          FractionalOrder(gamma + beta).sign();
                pairs.push_back({{"semigroup", c.name}, {"gamma", gamma}, {"beta", beta}, {"rel_err", e},
                                 {"rel_err_magnitude", em}, {"sign_ratio", sign_ratio}});
            }
    }
    r.metric("pairs", pairs);
    r.metric("max_rel_err", worst);
    r.metric("max_rel_err_magnitude", worst_mag);
    r.at_most("max_rel_err", worst, tol);
    r.at_most("max_rel_err_magnitude", worst_mag, tol);
}

void frac_routes(const Params& p, std::uint64_t, Report& r) {
    const double alpha = p.positive("frac.alpha");
    const double t = p.positive("frac.t");
    const auto xs = p.numbers("frac.x");
    const double step = p.positive("field.step");
    const double hw = p.positive("field.half_width");
    const double box = p.positive("field.box");
    const double tol = p.positive("tolerance.max_abs_err");

    const auto C = SemigroupId::classical(1);
    Grid g({Axis::symmetric(hw, step)});
    auto f = SampledField::from_function(g, [](std::span<const double> x) { return std::exp(-x[0] * x[0] / 2.0); });
    // periodization error of the spectral route decays like box^{-2 alpha}
    const auto padded = pad_symmetric(f, box);
    const auto spec = frac_semigroup_apply(C, padded, FractionalOrder(alpha), t);
    std::vector<std::vector<double>> pts;
    for (double x : xs) pts.push_back({x});
    const auto kern = frac_semigroup_apply_kernel(C, f, FractionalOrder(alpha), t, pts);
    r.csv_header({"x", "spectral", "kernel", "abs_err"});
    double worst = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const std::size_t idx = nearest_node(spec.grid().axis(0).nodes, xs[i]);
        if (std::abs(spec.grid().axis(0).nodes[idx] - xs[i]) > 1e-9)
            throw config_error("frac.x", "sample points must be grid nodes");
        const double e = std::abs(spec.at(idx) - kern[i]);
        worst = std::max(worst, e);
        r.csv_row({xs[i], spec.at(idx), kern[i], e});
    }
    r.metric("max_abs_err", worst);
    r.at_most("max_abs_err", worst, tol);
}

void polarization_hermite(const Params& p, std::uint64_t, Report& r) {
    const auto alphas = p.numbers("pairing.alpha");
    const double step = p.positive("field.step");
    const double hw = p.positive("field.half_width");
    const double tol = p.positive("tolerance.relative_gap");
    const double ctol = p.positive("tolerance.constant");

    Grid g({Axis::symmetric(hw, step)});
    auto f = SampledField::from_function(g, [](std::span<const double> x) {
        return hermite_fn(0, x[0]) + 0.3 * hermite_fn(2, x[0]);
    });
    auto gg = SampledField::from_function(g, [](std::span<const double> x) {
        return hermite_fn(0, x[0]) - hermite_fn(1, x[0]);
    });
    const auto basis = SpectralBasis::hermite(g);
    r.csv_header({"alpha", "case", "lhs", "rhs", "gap", "constant"});
    double worst = 0.0, worst_const = 0.0;
    for (double a : alphas) {
        if (!(a > 0.0)) throw config_error("pairing.alpha", "orders must be positive");
        const FractionalOrder ord(a);
        const auto pr = polarization_pairing(f, gg, basis, ord);
        worst = std::max(worst, pr.gap);
        r.csv_row_text({join({a}), "f,g", join({pr.lhs}), join({pr.rhs}), join({pr.gap}), join({pr.constant})});
        const double expected = std::tgamma(2.0 * a) / std::pow(2.0, 2.0 * a);
        worst_const = std::max(worst_const, std::abs(pr.constant - expected) / expected);
        // single eigenfunctions: lhs / ||h_k||^2 reproduces the constant for every lambda
        for (int k : {0, 2, 10}) {
            auto hk = SampledField::from_function(g, [k](std::span<const double> x) { return hermite_fn(k, x[0]); });
            const auto s = polarization_pairing(hk, hk, basis, ord);
            const double e = std::abs(s.lhs / hk.inner(hk) - expected) / expected;
            worst_const = std::max(worst_const, e);
            r.csv_row_text({join({a}), "h_" + std::to_string(k), join({s.lhs}), join({s.rhs}), join({s.gap}),
                            join({s.constant})});
        }
    }
    r.metric("relative_gap", worst);
    r.metric("constant_rel_err", worst_const);
    r.at_most("relative_gap", worst, tol);
    r.at_most("constant_rel_err", worst_const, ctol);
}

void polarization_classical(const Params& p, std::uint64_t, Report& r) {
    const auto alphas = p.numbers("pairing.alpha");
    const double step = p.positive("field.step");
    const int log2n = p.integer("field.log2_points");
    const double ppu = p.positive("pairing.panels_per_unit");
    const double tol = p.positive("tolerance.relative_gap");
    if (log2n < 4 || log2n > 24) throw config_error("field.log2_points", "parameter 'field.log2_points' must lie in [4, 24]");

    const std::size_t n = std::size_t{1} << log2n;
    Grid g({Axis::uniform(-step * static_cast<double>(n / 2), step, n)});
    auto f = SampledField::from_function(g, [](std::span<const double> x) { return std::exp(-x[0] * x[0] / 2.0); });
    const auto basis = SpectralBasis::fourier(g);
    const auto c = basis.expand(f, {INFINITY});
    double zero_mode = 0.0;
    const auto lam = basis.eigenvalues();
    for (std::size_t k = 0; k < basis.modes(); ++k)
        if (lam[k] == 0.0) zero_mode += std::norm(c.at(k));
    r.csv_header({"alpha", "lhs", "rhs", "gap", "constant", "time_nodes"});
    double worst = 0.0;
    for (double a : alphas) {
        if (!(a > 0.0)) throw config_error("pairing.alpha", "orders must be positive");
        PairingOptions po;
        po.panels_per_unit = ppu;
        const auto pr = polarization_pairing(f, f, basis, FractionalOrder(a), po);
        worst = std::max(worst, pr.gap);
        r.csv_row({a, pr.lhs, pr.rhs, pr.gap, pr.constant, static_cast<double>(pr.time_nodes)});
    }
    r.metric("relative_gap", worst);
    r.metric("zero_mode_fraction", zero_mode / c.norm_squared);
    r.metric("box_period", g.axis(0).period());
    r.at_most("relative_gap", worst, tol);
}

}  // namespace

void register_frac_experiments(std::vector<Experiment>& out) {
    out.push_back({"weyl_eigen", "Weyl derivative of e^{-lambda t} by quadrature vs (-1)^m lambda^alpha e^{-lambda t}",
                   {{"weyl.alpha", "0.3,0.5,1,1.7", ""},
                    {"weyl.lambda", "0.5,1,4", ""},
                    {"weyl.t", "0.2,1", ""},
                    {"tolerance.max_rel_err", "1e-7", ""}},
                   weyl_eigen});
    out.push_back({"composition", "d^gamma d^beta T_t f vs d^{gamma+beta} T_t f on Hermite and classical fields",
                   {{"composition.orders", "0.3,0.7,1.2", "gamma and beta range over this set"},
                    {"composition.x", "-1.5,-0.5,0,0.7,1.6", "evaluation points"},
                    {"composition.t", "0.5", ""},
                    {"field.step", "0.05", ""},
                    {"field.hermite_half_width", "16", ""},
                    {"field.classical_half_width", "20", "periodic box half-width"},
                    {"tolerance.max_rel_err", "1e-6", "sup over points, relative to sup |direct|"}},
                   composition});
    out.push_back({"frac_routes", "classical d^alpha W_t f: spectral multiplier vs kernel quadrature",
                   {{"frac.alpha", "0.5", ""},
                    {"frac.t", "0.4", ""},
                    {"frac.x", "-2,-1,0,0.5,1.5", "grid nodes"},
                    {"field.step", "0.05", ""},
                    {"field.half_width", "10", "support window of f"},
                    {"field.box", "1600", "padded periodic box half-width"},
                    {"tolerance.max_abs_err", "1e-6", ""}},
                   frac_routes});
    out.push_back({"polarization_hermite",
                   "int <t^a d^a T_t f, t^a d^a T_t g> dt/t vs Gamma(2a)/2^{2a} <f, g>, Hermite",
                   {{"pairing.alpha", "0.5,1", ""},
                    {"field.step", "0.05", ""},
                    {"field.half_width", "12", ""},
                    {"tolerance.relative_gap", "1e-6", ""},
                    {"tolerance.constant", "1e-8", "single-mode constant reproduction"}},
                   polarization_hermite});
    out.push_back({"polarization_classical", "polarization identity for a Gaussian in a periodic Fourier box",
                   {{"pairing.alpha", "0.5,1", ""},
                    {"field.step", "0.125", ""},
                    {"field.log2_points", "19", "box period 2^19 * step"},
                    {"pairing.panels_per_unit", "2", "log-time panels per unit of log t"},
                    {"tolerance.relative_gap", "1e-4", ""}},
                   polarization_classical});
}

}  // namespace lps::cli::detail
