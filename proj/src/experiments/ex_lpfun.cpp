#include "common.hpp"

#include "lps/lpfun.hpp"
#include "lps/orthobasis.hpp"

#include <cmath>
#include <numbers>

namespace lps::cli::detail {
namespace {

void subordination(const Params& p, std::uint64_t, Report& r) {
    const auto ts = p.numbers("kernel.t");
    const auto zs = p.numbers("kernel.z");
    const auto lambdas = p.numbers("scalar.lambda");
    const auto sts = p.numbers("scalar.t");
    const double field_t = p.positive("field.t");
    const double step = p.positive("field.step");
    const double tol_k = p.positive("tolerance.kernel_rel_err");
    const double tol_s = p.positive("tolerance.scalar_rel_err");

    const auto C = SemigroupId::classical(1);
    r.csv_header({"kind", "t", "z_or_lambda", "subordinated", "closed_form", "rel_err"});
    double worst_k = 0.0, worst_s = 0.0;
    const double origin = 0.0;
    for (double t : ts)
        for (double z : zs) {
            if (!(t > 0.0)) throw config_error("kernel.t", "times must be positive");
            const double a = subordinated_kernel(C, t, {&origin, 1}, {&z, 1});
            const double b = poisson_kernel_classical(1, t, {&z, 1});
            const double e = std::abs(a - b) / b;
            worst_k = std::max(worst_k, e);
            r.csv_row_text({"kernel", join({t}), join({z}), join({a}), join({b}), join({e})});
        }
    for (double l : lambdas)
        for (double t : sts) {
            if (!(l >= 0.0)) throw config_error("scalar.lambda", "eigenvalues must be non-negative");
            const double a = subordinated_multiplier(l, t);
            const double b = std::exp(-t * std::sqrt(l));
            const double e = std::abs(a - b) / b;
            worst_s = std::max(worst_s, e);
            r.csv_row_text({"scalar", join({t}), join({l}), join({a}), join({b}), join({e})});
        }
    // P_t h_0 = e^{-t} h_0 for the Hermite semigroup (lambda_0 = 1)
    Grid g({Axis::symmetric(12.0, step)});
    auto h0 = SampledField::from_function(g, [](std::span<const double> x) { return hermite_fn(0, x[0]); });
    const auto ph = subordinate_poisson_apply(SemigroupId::hermite(1), h0, field_t);
    double worst_f = 0.0;
    for (std::size_t i = 0; i < ph.size(); ++i)
        worst_f = std::max(worst_f, std::abs(ph.at(i) - std::exp(-field_t) * h0.at(i)));
    r.metric("kernel_max_rel_err", worst_k);
    r.metric("scalar_max_rel_err", worst_s);
    r.metric("hermite_field_max_abs_err", worst_f);
    r.metric("rule_nodes", SubordinationRule::standard().v.size());
    r.at_most("kernel_max_rel_err", worst_k, tol_k);
    r.at_most("scalar_max_rel_err", worst_s, tol_s);
    r.at_most("hermite_field_max_abs_err", worst_f, tol_s);
}

GFunctionSpec spec_from(const Params& p, double alpha) {
    GFunctionSpec s;
    s.ord = FractionalOrder(alpha);
    s.q = p.number("gfun.q");
    s.t_min = p.positive("gfun.t_min");
    s.t_max = p.positive("gfun.t_max");
    s.panels = p.integer("gfun.panels");
    s.order = p.integer("gfun.order");
    try {
        s.validate();
    } catch (const precondition_error& e) {
        throw config_error("gfun", e.what());
    }
    return s;
}

void monotonicity(const Params& p, std::uint64_t, Report& r) {
    const double alpha = p.positive("monotonicity.alpha");
    const double beta = p.positive("monotonicity.beta");
    const double lo = p.number("grid.x_min"), hi = p.number("grid.x_max");
    const int count = p.integer("grid.points");
    const double step = p.positive("field.step");
    const double slack = p.positive("tolerance.slack");
    if (!(alpha < beta)) throw config_error("monotonicity.beta", "requires alpha < beta");
    if (count < 2) throw config_error("grid.points", "parameter 'grid.points' must be >= 2");
    const auto sa = spec_from(p, alpha), sb = spec_from(p, beta);

    struct Case {
        std::string name;
        SemigroupId id;
        SampledField f;
    };
    Grid gc({Axis::symmetric(p.positive("field.classical_half_width"), step)});
    Grid gh({Axis::symmetric(p.positive("field.hermite_half_width"), step)});
    std::vector<Case> cases = {
        {"classical", SemigroupId::classical(1),
         SampledField::from_function(gc, [](std::span<const double> x) { return std::exp(-x[0] * x[0] / 2.0); })},
        {"hermite", SemigroupId::hermite(1), SampledField::from_function(gh, [](std::span<const double> x) {
             return std::exp(-(x[0] - 0.3) * (x[0] - 0.3));
         })}};
    const auto xs = linspace(lo, hi, count);
    r.csv_header({"semigroup", "x", "g_alpha", "g_beta", "excess"});
    double excess = -INFINITY, ratio = 0.0;
    nlohmann::json per_case = nlohmann::json::object();
    for (const Case& c : cases) {
        const auto ga = g_function_field(c.id, c.f, sa).value;
        const auto gb = g_function_field(c.id, c.f, sb).value;
        double ex_c = -INFINITY;
        std::size_t violations = 0;
        for (double x : xs) {
            const std::size_t i = nearest_node(c.f.grid().axis(0).nodes, x);
            const double e = ga.at(i) - gb.at(i);
            ex_c = std::max(ex_c, e);
            if (e > slack) ++violations;
            ratio = std::max(ratio, ga.at(i) / gb.at(i));
            r.csv_row_text({c.name, join({x}), join({ga.at(i)}), join({gb.at(i)}), join({e})});
            r.plot(c.name + "_g_alpha", x, ga.at(i));
            r.plot(c.name + "_g_beta", x, gb.at(i));
        }
        per_case[c.name] = {{"max_excess", ex_c}, {"violations", violations}};
        excess = std::max(excess, ex_c);
    }
    r.metric("per_semigroup", per_case);
    r.metric("max_excess", excess);
    r.metric("sup_ratio_g_alpha_over_g_beta", ratio);
    r.metric("l2_constant_alpha", std::tgamma(2 * alpha) / std::pow(2.0, 2 * alpha));
    r.metric("l2_constant_beta", std::tgamma(2 * beta) / std::pow(2.0, 2 * beta));
    r.at_most("max_excess", excess, slack);
}

// g^1_P <= 2^{1 - 1/q} g^1_W: subordination plus Minkowski in L^q(dt/t),
// and t d_t W_{t^2/4v} = 2 s d_s W_s with dt/t = ds/(2s).
void subordination_domination(const Params& p, std::uint64_t, Report& r) {
    const auto qs = p.numbers("gfun.q_list");
    const double step = p.positive("field.step");
    const auto xs = linspace(p.number("grid.x_min"), p.number("grid.x_max"), p.integer("grid.points"));
    Grid gc({Axis::symmetric(p.positive("field.classical_half_width"), step)});
    Grid gh({Axis::symmetric(p.positive("field.hermite_half_width"), step)});
    struct Case {
        std::string name;
        SemigroupId id;
        SampledField f;
    };
    std::vector<Case> cases = {
        {"classical", SemigroupId::classical(1),
         SampledField::from_function(gc, [](std::span<const double> x) { return std::exp(-x[0] * x[0] / 2.0); })},
        {"hermite", SemigroupId::hermite(1), SampledField::from_function(gh, [](std::span<const double> x) {
             return std::exp(-(x[0] - 0.3) * (x[0] - 0.3)) * (1.0 + x[0]);
         })}};
    r.csv_header({"semigroup", "q", "x", "g_poisson", "g_heat", "ratio", "bound"});
    nlohmann::json fitted = nlohmann::json::object();
    for (double q : qs) {
        GFunctionSpec s;
        s.q = q;
        s.t_min = p.positive("gfun.t_min");
        s.t_max = p.positive("gfun.t_max");
        s.panels = p.integer("gfun.panels");
        s.tail_tolerance = p.positive("tolerance.window_tail");
        try {
            s.validate();
        } catch (const precondition_error& e) {
            throw config_error("gfun.q_list", e.what());
        }
        GFunctionSpec sp = s;
        sp.flavor = TimeFlavor::poisson;
        const double bound = std::pow(2.0, 1.0 - 1.0 / q);
        for (const Case& c : cases) {
            const auto gw = g_function_field(c.id, c.f, s).value;
            const auto gp = g_function_field(c.id, c.f, sp).value;
            double sup = 0.0;
            for (double x : xs) {
                const std::size_t i = nearest_node(c.f.grid().axis(0).nodes, x);
                const double ratio = gp.at(i) / gw.at(i);
                sup = std::max(sup, ratio);
                r.csv_row_text({c.name, join({q}), join({x}), join({gp.at(i)}), join({gw.at(i)}), join({ratio}),
                                join({bound})});
            }
            fitted[c.name + "_q" + join({q})] = {{"fitted", sup}, {"bound", bound}};
            r.at_most("ratio_" + c.name + "_q" + join({q}), sup, bound);
        }
    }
    r.metric("constants", fitted);
}

void area_vs_g(const Params& p, std::uint64_t, Report& r) {
    const auto qs = p.numbers("gfun.q_list");
    const double alpha = p.positive("gfun.alpha");
    const double step = p.positive("field.step");
    const int log2n = p.integer("field.log2_points");
    const double tol = p.positive("tolerance.relative");
    if (log2n < 4 || log2n > 20) throw config_error("field.log2_points", "parameter 'field.log2_points' must lie in [4, 20]");
    const std::size_t n = std::size_t{1} << log2n;
    Grid g({Axis::uniform(-step * static_cast<double>(n / 2), step, n)});
    auto f = SampledField::from_function(g, [](std::span<const double> x) { return std::exp(-x[0] * x[0] / 2.0); });
    const auto C = SemigroupId::classical(1);
    const double half_ball = 1.0;  // c_1 / 2 with c_1 = |B(0, 1)| = 2
    r.csv_header({"q", "area_norm_q", "g_norm_q", "rel_err", "area_tail", "g_tail"});
    double worst = 0.0;
    for (double q : qs) {
        GFunctionSpec s;
        s.ord = FractionalOrder(alpha);
        s.q = q;
        s.t_min = p.positive("gfun.t_min");
        s.t_max = p.positive("gfun.t_max");
        s.panels = p.integer("gfun.panels");
        s.tail_tolerance = INFINITY;
        try {
            s.validate();
        } catch (const precondition_error& e) {
            throw config_error("gfun.q_list", e.what());
        }
        const auto G = g_function_field(C, f, s);
        const auto A = area_integral_field(C, f, s);
        const double gq = lq_norm_q(G.value, q), aq = lq_norm_q(A.value, q);
        const double e = std::abs(aq - half_ball * gq) / gq;
        worst = std::max(worst, e);
        r.csv_row({q, aq, gq, e, A.tail_estimate, G.tail_estimate});
    }
    r.metric("max_rel_err", worst);
    r.metric("half_unit_ball_volume", half_ball);
    r.at_most("max_rel_err", worst, tol);
}

void hardy(const Params& p, std::uint64_t, Report& r) {
    const auto ps = p.numbers("hardy.p");
    const auto Rs = p.numbers("hardy.R");
    const double frac = p.positive("hardy.fraction");
    const double tol = p.positive("tolerance.closed_form");
    StepFunction chi({0.0, 1.0}, {1.0});
    const std::vector<double> xs = {2.0, std::exp(-1.0)};
    const double h0 = hardy_transform(chi, HardyDirection::from_zero, xs)[0];
    const double hinf = hardy_transform(chi, HardyDirection::to_infinity, xs)[1];
    r.csv_header({"p", "R", "ratio", "target"});
    bool all = true;
    nlohmann::json best = nlohmann::json::object();
    for (double pp : ps) {
        if (!(pp > 1.0)) throw config_error("hardy.p", "exponents must exceed 1");
        const double target = pp / (pp - 1.0);
        double top = 0.0;
        for (double R : Rs) {
            if (!(R > 1.0)) throw config_error("hardy.R", "truncation radii must exceed 1");
            // g = y^{-1/p} on [1, R]: the extremal family for ||H_0||_p
            const auto hr = hardy_lp_ratio([pp](double y) { return std::pow(y, -1.0 / pp); }, {1.0, R}, pp);
            top = std::max(top, hr.ratio);
            r.csv_row({pp, R, hr.ratio, target});
            r.plot("ratio_p" + join({pp}), std::log10(R), hr.ratio);
        }
        best[join({pp})] = {{"best_ratio", top}, {"norm", target}};
        r.at_least("ratio_p" + join({pp}), top, frac * target);
        all = all && top >= frac * target;
    }
    r.metric("family", best);
    r.metric("H0_chi_at_2", h0);
    r.metric("Hinf_chi_at_inv_e", hinf);
    r.at_most("H0_closed_form", std::abs(h0 - 0.5), tol);
    r.at_most("Hinf_closed_form", std::abs(hinf - 1.0), tol);
}

void covering_exp(const Params& p, std::uint64_t, Report& r) {
    const double lo = p.number("covering.lo"), hi = p.number("covering.hi");
    const double M = p.positive("covering.M");
    const double lattice = p.positive("covering.lattice");
    const double coarse = p.positive("ratio.step"), fine = p.positive("ratio.fine_step");
    const int inner = p.integer("ratio.inner");
    const double tol = p.positive("tolerance.refinement");
    if (!(hi > lo)) throw config_error("covering.hi", "parameter 'covering.hi' must exceed covering.lo");
    const auto fam = covering(lo, hi, M);
    const bool covers = covers_window(fam, lattice);
    const std::size_t brute = reference::covering_multiplicity(fam.centers, fam.radii, M);
    const auto rc = critical_radius_ratio(lo, hi, M, coarse, inner);
    const auto rf = critical_radius_ratio(lo, hi, M, fine, inner);
    r.csv_header({"center", "radius"});
    for (std::size_t k = 0; k < fam.centers.size(); ++k) r.csv_row({fam.centers[k], fam.radii[k]});
    const double change = std::abs(rf.sup - rc.sup) / rc.sup;
    r.metric("balls", fam.centers.size());
    r.metric("multiplicity", fam.multiplicity);
    r.metric("multiplicity_brute_force", brute);
    r.metric("ratio_sup", rc.sup);
    r.metric("ratio_inf", rc.inf);
    r.metric("ratio_sup_fine", rf.sup);
    r.metric("ratio_inf_fine", rf.inf);
    r.metric("ratio_pairs", rc.pairs + rf.pairs);
    r.holds("covers_window", covers);
    r.holds("multiplicity_finite", fam.multiplicity > 0 && fam.multiplicity == brute);
    r.holds("ratio_sup_finite", std::isfinite(rc.sup) && std::isfinite(rf.sup));
    r.at_most("ratio_sup_refinement_change", change, tol);
}

void maximal(const Params& p, std::uint64_t, Report& r) {
    const double step = p.positive("field.step");
    const double lo = p.number("field.lo");
    const int count = p.integer("field.points");
    const double x = p.number("probe.x");
    const double tol = p.positive("tolerance.abs_err");
    if (count < 2) throw config_error("field.points", "parameter 'field.points' must be >= 2");
    Grid g({Axis::uniform(lo + step / 2, step, static_cast<std::size_t>(count))});
    auto chi = SampledField::from_function(g, [](std::span<const double> y) { return y[0] > 0.0 && y[0] < 1.0 ? 1.0 : 0.0; });
    const auto m = maximal_fn(chi);
    const auto ms = maximal_fn(chi, NormedSpace::real_line(), Execution::serial);
    const std::size_t i = nearest_node(g.axis(0).nodes, x);
    const double at = g.axis(0).nodes[i];
    // for x >= 1 the best ball is the one reaching back to 0: 1 / (2x)
    const double exact = at >= 1.0 ? 1.0 / (2.0 * at) : at <= 0.0 ? 1.0 / (2.0 * (1.0 - at)) : 1.0;
    bool dominates = true, same = true;
    r.csv_header({"x", "f", "Mf"});
    for (std::size_t k = 0; k < m.size(); ++k) {
        dominates = dominates && m.at(k) >= chi.at(k);
        same = same && m.at(k) == ms.at(k);
        r.csv_row({g.axis(0).nodes[k], chi.at(k), m.at(k)});
    }
    r.metric("probe_node", at);
    r.metric("Mf_at_probe", m.at(i));
    r.metric("closed_form", exact);
    r.at_most("probe_abs_err", std::abs(m.at(i) - exact), tol);
    r.holds("dominates_f", dominates);
    r.holds("serial_equals_parallel", same);
}

void local_global(const Params& p, std::uint64_t, Report& r) {
    const auto xs = linspace(p.number("grid.x_min"), p.number("grid.x_max"), p.integer("grid.points"));
    const double step = p.positive("field.step");
    GFunctionSpec s;
    s.t_min = p.positive("gfun.t_min");
    s.t_max = p.positive("gfun.t_max");
    s.panels = p.integer("gfun.panels");
    const auto H = SemigroupId::hermite(1);
    Grid g({Axis::symmetric(p.positive("field.half_width"), step)});
    auto f = SampledField::from_function(g, [](std::span<const double> x) { return std::exp(-x[0] * x[0]); });
    const auto mf = maximal_fn(f);
    r.csv_header({"x", "radius", "local_norm", "global_norm", "maximal", "global_over_maximal"});
    double fitted = 0.0;
    for (double x : xs) {
        const auto lg = local_global_split(H, f, s, {&x, 1});
        const double m = mf.at(nearest_node(g.axis(0).nodes, x));
        const double ratio = lg.global_norm / m;
        fitted = std::max(fitted, ratio);
        r.csv_row({x, lg.radius, lg.local_norm, lg.global_norm, m, ratio});
    }
    r.metric("fitted_constant", fitted);
    r.holds("constant_finite", std::isfinite(fitted));
}

}  // namespace

void register_lpfun_experiments(std::vector<Experiment>& out) {
    out.push_back({"subordination", "subordinated heat kernel vs the Poisson kernel, and the scalar identity",
                   {{"kernel.t", "0.5,1,2", ""},
                    {"kernel.z", "0,1,3", ""},
                    {"scalar.lambda", "1,4", ""},
                    {"scalar.t", "0.5,1,2", ""},
                    {"field.t", "0.7", "P_t h_0 check"},
                    {"field.step", "0.05", ""},
                    {"tolerance.kernel_rel_err", "1e-6", ""},
                    {"tolerance.scalar_rel_err", "1e-8", ""}},
                   subordination});
    const std::vector<ParamSpec> gfun_defaults = {{"gfun.q", "2", ""},
                                                  {"gfun.t_min", "1e-4", ""},
                                                  {"gfun.t_max", "50", ""},
                                                  {"gfun.panels", "48", ""},
                                                  {"gfun.order", "8", ""}};
    // the classical g-function integrand only decays like t^{-2 alpha - 1} times
    // the field's L^1 mass, so the window reaches further than the defaults
    Experiment mono{"monotonicity", "pointwise g^alpha <= g^beta for alpha < beta",
                    {{"monotonicity.alpha", "0.5", ""},
                     {"monotonicity.beta", "1.2", ""},
                     {"grid.x_min", "-4", ""},
                     {"grid.x_max", "4", ""},
                     {"grid.points", "41", ""},
                     {"field.step", "0.05", ""},
                     {"field.classical_half_width", "400", ""},
                     {"field.hermite_half_width", "12", ""},
                     {"tolerance.slack", "1e-8", ""}},
                    monotonicity};
    mono.params.insert(mono.params.end(), gfun_defaults.begin(), gfun_defaults.end());
    for (auto& ps : mono.params) {
        if (ps.key == "gfun.t_min") ps.value = "1e-5";
        if (ps.key == "gfun.t_max") ps.value = "1e4";
        if (ps.key == "gfun.panels") ps.value = "96";
    }
    out.push_back(mono);
    out.push_back({"subordination_domination", "g^1 of the Poisson semigroup vs 2^{1-1/q} g^1 of the heat semigroup",
                   {{"gfun.q_list", "2,3", ""},
                    {"gfun.t_min", "1e-5", ""},
                    {"gfun.t_max", "1e4", ""},
                    {"gfun.panels", "96", ""},
                    {"grid.x_min", "-4", ""},
                    {"grid.x_max", "4", ""},
                    {"grid.points", "41", ""},
                    {"field.step", "0.05", ""},
                    {"field.classical_half_width", "100", "the bound is exact in any periodic box"},
                    {"field.hermite_half_width", "12", ""},
                    {"tolerance.window_tail", "1e-3", "truncated time-window tail"}},
                   subordination_domination});
    out.push_back({"area_vs_g", "||A||_q^q vs (c_1/2) ||g||_q^q for the classical heat semigroup, n = 1",
                   {{"gfun.q_list", "2,3", ""},
                    {"gfun.alpha", "0.5", ""},
                    {"gfun.t_min", "1e-6", ""},
                    {"gfun.t_max", "1e6", ""},
                    {"gfun.panels", "96", ""},
                    {"field.step", "0.0625", ""},
                    {"field.log2_points", "11", ""},
                    {"tolerance.relative", "0.02", ""}},
                   area_vs_g});
    out.push_back({"hardy", "lower-bound family for ||H_0||_p and closed-form Hardy examples",
                   {{"hardy.p", "2,4", ""},
                    {"hardy.R", "1e2,1e4,1e6,1e8", "support [1, R] of g = y^{-1/p}"},
                    {"hardy.fraction", "0.9", "required fraction of p/(p-1)"},
                    {"tolerance.closed_form", "1e-10", ""}},
                   hardy});
    out.push_back({"covering", "critical-radius covering of a window, multiplicity and the ratio bound",
                   {{"covering.lo", "-20", ""},
                    {"covering.hi", "20", ""},
                    {"covering.M", "2", ""},
                    {"covering.lattice", "0.01", "pointwise cover check spacing"},
                    {"ratio.step", "0.01", ""},
                    {"ratio.fine_step", "0.005", ""},
                    {"ratio.inner", "64", "y samples per ball"},
                    {"tolerance.refinement", "1e-3", "relative change of the sup under refinement"}},
                   covering_exp});
    out.push_back({"maximal", "centered maximal function of an indicator",
                   {{"field.step", "0.01", ""},
                    {"field.lo", "-5", ""},
                    {"field.points", "1000", ""},
                    {"probe.x", "2.005", "evaluation node"},
                    {"tolerance.abs_err", "1e-12", ""}},
                   maximal});
    out.push_back({"local_global", "Hermite local/global split of t d_t T_t against the maximal function",
                   {{"grid.x_min", "-4", ""},
                    {"grid.x_max", "4", ""},
                    {"grid.points", "9", ""},
                    {"field.step", "0.05", ""},
                    {"field.half_width", "10", ""},
                    {"gfun.t_min", "1e-2", ""},
                    {"gfun.t_max", "50", ""},
                    {"gfun.panels", "48", ""}},
                   local_global});
}

}  // namespace lps::cli::detail
