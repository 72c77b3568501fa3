#include "common.hpp"

#include "lps/banach.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace lps::cli::detail {
namespace {

void moduli(const Params& p, std::uint64_t seed, Report& r) {
    const auto eps_exact = p.numbers("l2.eps");
    const auto t_exact = p.numbers("l2.t");
    const int l2_dim = p.integer("l2.dim");
    const auto qs = p.numbers("fit.q");
    const auto eps_fit = p.numbers("fit.eps");
    const auto t_fit = p.numbers("fit.t");
    const int fit_dim = p.integer("fit.dim");
    ModulusOptions mo;
    mo.restarts = p.integer("search.restarts");
    mo.seed = seed;
    const double tol = p.positive("tolerance.closed_form");
    const double tol_l1 = p.positive("tolerance.l1_flat");
    if (mo.restarts < 1) throw config_error("search.restarts", "parameter 'search.restarts' must be >= 1");
    if (l2_dim < 2 || fit_dim < 2) throw config_error("fit.dim", "dimensions must be >= 2");

    r.csv_header({"space", "modulus", "argument", "value", "closed_form", "normalized"});
    const auto l2 = NormedSpace::lp(2.0, static_cast<std::size_t>(l2_dim));
    double worst = 0.0;
    for (double e : eps_exact) {
        if (!(e > 0.0 && e <= 2.0)) throw config_error("l2.eps", "eps must lie in (0, 2]");
        const double v = modulus_convexity(l2, e, mo).value;
        const double exact = 1.0 - std::sqrt(1.0 - e * e / 4.0);
        worst = std::max(worst, std::abs(v - exact));
        r.csv_row_text({l2.label(), "convexity", join({e}), join({v}), join({exact}), ""});
    }
    for (double t : t_exact) {
        if (!(t > 0.0)) throw config_error("l2.t", "t must be positive");
        const double v = modulus_smoothness(l2, t, mo).value;
        const double exact = std::sqrt(1.0 + t * t) - 1.0;
        worst = std::max(worst, std::abs(v - exact));
        r.csv_row_text({l2.label(), "smoothness", join({t}), join({v}), join({exact}), ""});
    }
    const auto l1 = NormedSpace::lp(1.0, 2);
    const double d_l1 = modulus_convexity(l1, 1.0, mo).value;
    r.csv_row_text({l1.label(), "convexity", "1", join({d_l1}), "0", ""});

    nlohmann::json fits = nlohmann::json::object();
    double drop = 0.0;  // largest decrease of delta between consecutive eps
    for (double q : qs) {
        if (!(q >= 1.0)) throw config_error("fit.q", "exponents must be >= 1");
        const auto sp = NormedSpace::lp(q, static_cast<std::size_t>(fit_dim));
        const double pc = std::max(q, 2.0), ps = std::min(q, 2.0);
        double conv = INFINITY, smooth = 0.0, prev = -INFINITY;
        for (double e : eps_fit) {
            const double v = modulus_convexity(sp, e, mo).value;
            drop = std::max(drop, prev - v);
            prev = v;
            conv = std::min(conv, v / std::pow(e, pc));
            r.csv_row_text({sp.label(), "convexity", join({e}), join({v}), "", join({v / std::pow(e, pc)})});
            r.plot(sp.label() + "_delta", e, v);
        }
        for (double t : t_fit) {
            const double v = modulus_smoothness(sp, t, mo).value;
            smooth = std::max(smooth, v / std::pow(t, ps));
            r.csv_row_text({sp.label(), "smoothness", join({t}), join({v}), "", join({v / std::pow(t, ps)})});
            r.plot(sp.label() + "_rho", t, v);
        }
        fits[sp.label()] = {{"convexity_exponent", pc}, {"convexity_constant", conv},
                            {"smoothness_exponent", ps}, {"smoothness_constant", smooth}};
        r.holds("convexity_fit_positive_" + sp.label(), std::isfinite(conv) && conv > 0.0);
        r.holds("smoothness_fit_finite_" + sp.label(), std::isfinite(smooth) && smooth > 0.0);
    }
    r.metric("l2_max_abs_err", worst);
    r.metric("delta_l1_2_at_1", d_l1);
    r.metric("fits", fits);
    r.at_most("l2_max_abs_err", worst, tol);
    r.at_most("delta_l1_2_at_1", d_l1, tol_l1);
    r.metric("convexity_max_decrease", drop);
    r.at_most("convexity_monotone", drop, p.positive("tolerance.monotone"));
}

void martingale_identity(const Params& p, std::uint64_t seed, Report& r) {
    const int count = p.integer("martingale.count");
    const int depth = p.integer("martingale.depth");
    const double tol = p.positive("tolerance.relative");
    if (count < 1) throw config_error("martingale.count", "parameter 'martingale.count' must be >= 1");
    if (depth < 1 || depth > 20) throw config_error("martingale.depth", "parameter 'martingale.depth' must lie in [1, 20]");
    std::mt19937_64 rng(seed);
    const auto R = NormedSpace::real_line();
    r.csv_header({"trial", "E_S2_squared", "E_MN_squared", "rel_err", "martingale_residual"});
    double worst = 0.0;
    for (int k = 0; k < count; ++k) {
        const auto m = FiniteMartingale::random(static_cast<std::size_t>(depth), 1, rng);
        const auto s = martingale_square_fn(m, R, 2.0);
        double es = 0.0, em = 0.0;
        for (std::size_t a = 0; a < m.atoms(); ++a) {
            es += s[a] * s[a];
            const double v = m.value(m.depth(), a)[0];
            em += v * v;
        }
        es /= static_cast<double>(m.atoms());
        em /= static_cast<double>(m.atoms());
        const double e = std::abs(es - em) / em;
        worst = std::max(worst, e);
        r.csv_row({static_cast<double>(k), es, em, e, m.martingale_residual()});
    }
    r.metric("max_rel_err", worst);
    r.at_most("max_rel_err", worst, tol);
}

void lusin_probe(const Params& p, std::uint64_t seed, Report& r) {
    const double pp = p.positive("probe.p");
    const int trials = p.integer("probe.trials");
    const auto dims = p.numbers("probe.dims");
    const double tol = p.positive("tolerance.l2_constant");
    GFunctionSpec s;
    s.ord = FractionalOrder(p.positive("gfun.alpha"));
    s.q = 2.0;
    s.t_min = p.positive("gfun.t_min");
    s.t_max = p.positive("gfun.t_max");
    s.panels = p.integer("gfun.panels");
    LusinProbeOptions lo;
    lo.seed = seed;
    lo.half_width = p.positive("field.half_width");
    lo.points = static_cast<std::size_t>(p.integer("field.points"));
    if (2.0 * lo.half_width / static_cast<double>(lo.points) > 0.125)
        throw config_error("field.points", "fewer than 8 points per unit length");
    if (trials < 1) throw config_error("probe.trials", "parameter 'probe.trials' must be >= 1");
    // q = p = 2: ||g(f)||_2 = sqrt(Gamma(2a)/2^{2a}) ||f||_2 exactly for mean-zero f
    const double expected = std::sqrt(std::tgamma(2.0 * s.ord.alpha()) / std::pow(2.0, 2.0 * s.ord.alpha()));
    r.csv_header({"semigroup", "space", "trial", "cotype_ratio"});
    nlohmann::json out = nlohmann::json::object();
    double worst = 0.0;
    for (const auto& id : {SemigroupId::classical(1), SemigroupId::hermite(1)})
        for (double d : dims) {
            if (!(d >= 1.0) || d != std::floor(d)) throw config_error("probe.dims", "dimensions must be positive integers");
            s.space = NormedSpace::lp(2.0, static_cast<std::size_t>(d));
            const auto rep = lusin_ratio_probe(id, s, pp, static_cast<std::size_t>(trials), lo);
            for (std::size_t k = 0; k < rep.cotype_samples.size(); ++k)
                r.csv_row_text({id.label(), s.space.label(), std::to_string(k), join({rep.cotype_samples[k]})});
            out[id.label() + "/" + s.space.label()] = {
                {"cotype", {{"min", rep.cotype.min}, {"median", rep.cotype.median}, {"max", rep.cotype.max}}},
                {"type", {{"min", rep.type.min}, {"median", rep.type.median}, {"max", rep.type.max}}}};
            if (pp == 2.0)
                worst = std::max({worst, std::abs(rep.cotype.min - expected), std::abs(rep.cotype.max - expected)});
        }
    r.metric("ratios", out);
    r.metric("l2_expected_ratio", expected);
    if (pp == 2.0) {
        r.metric("l2_max_deviation", worst);
        r.at_most("l2_max_deviation", worst, tol);
    }
}

void determinism(const Params& p, std::uint64_t seed, Report& r) {
    std::stringstream ss(p.text("determinism.targets"));
    std::string name;
    bool all = true;
    r.csv_header({"experiment", "identical", "bytes"});
    while (std::getline(ss, name, ',')) {
        const Experiment* ex = find_experiment(name);
        if (!ex || name == "determinism")
            throw config_error("determinism.targets", "unknown or recursive experiment '" + name + "'");
        const Params params = resolve(*ex, {});
        const std::string a = canonical_summary(run_experiment(*ex, params, seed).summary);
        const std::string b = canonical_summary(run_experiment(*ex, params, seed).summary);
        const bool same = a == b;
        all = all && same;
        r.csv_row_text({name, same ? "1" : "0", std::to_string(a.size())});
        r.holds("identical_" + name, same);
    }
    r.metric("all_identical", all);
}

}  // namespace

void register_banach_experiments(std::vector<Experiment>& out) {
    out.push_back({"moduli", "moduli of convexity and smoothness: l^2 closed forms and power-type fits",
                   {{"l2.eps", "0.5,1,1.5", ""},
                    {"l2.t", "0.25,1", ""},
                    {"l2.dim", "3", ""},
                    {"fit.q", "1.5,2,3,4", "l^q_dim spaces"},
                    {"fit.eps", "0.2,0.4,0.6,0.8,1,1.2,1.4,1.6,1.8", ""},
                    {"fit.t", "0.05,0.1,0.25,0.5,1", ""},
                    {"tolerance.monotone", "1e-5", "allowed decrease of delta along the eps grid"},
                    {"fit.dim", "2", ""},
                    {"search.restarts", "64", ""},
                    {"tolerance.closed_form", "1e-4", ""},
                    {"tolerance.l1_flat", "1e-6", ""}},
                   moduli});
    out.push_back({"martingale_identity", "E[S_2(M)^2] = E[M_N^2] for random real dyadic martingales",
                   {{"martingale.count", "100", ""},
                    {"martingale.depth", "6", ""},
                    {"tolerance.relative", "1e-12", ""}},
                   martingale_identity});
    out.push_back({"lusin_probe", "||g(f)||_p / ||f||_p over random band-limited l^2-valued fields",
                   {{"probe.p", "2", ""},
                    {"probe.trials", "8", ""},
                    {"probe.dims", "1,4", "l^2_M target spaces"},
                    {"gfun.alpha", "1", ""},
                    {"gfun.t_min", "1e-6", ""},
                    {"gfun.t_max", "400", ""},
                    {"gfun.panels", "64", ""},
                    {"field.half_width", "14", "wide enough for the Hermite basis to resolve h_0..h_8"},
                    {"field.points", "256", ""},
                    {"tolerance.l2_constant", "1e-3", ""}},
                   lusin_probe});
}

void register_meta_experiments(std::vector<Experiment>& out) {
    out.push_back({"determinism", "runs experiments twice in-process and compares the JSON summaries",
                   {{"determinism.targets", "markov_defect,martingale_identity,lusin_probe,polarization_hermite",
                     "comma-separated experiment names"}},
                   determinism});
}

}  // namespace lps::cli::detail
