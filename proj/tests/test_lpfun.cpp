#include <doctest.h>

#include "lps/error.hpp"
#include "lps/lpfun.hpp"

#include <cmath>
#include <numbers>

using namespace lps;

namespace {

const Grid& hgrid() {
    static const Grid g({Axis::symmetric(12.0, 0.05)});
    return g;
}

SampledField h0_field() {
    return SampledField::from_function(hgrid(), [](std::span<const double> x) { return hermite_fn(0, x[0]); });
}

// A(h_0)(x) at alpha = 1, q = 2: T_s h_0 = e^{-s} h_0, so the cone slice is
// s^2 e^{-2s} int_{|y-x|<sqrt s} h_0(y)^2 dy and h_0^2 integrates to erf.
double area_h0_oracle(double x) {
    const auto r = composite_gauss_legendre(std::vector<double>{1e-12, 1e-3, 0.01, 0.1, 0.5, 1, 2, 4, 8, 16, 40, 80}, 32);
    return std::sqrt(r.integrate([&](double s) {
        const double rs = std::sqrt(s);
        return s * s * std::exp(-2.0 * s) / (2.0 * std::pow(s, 1.5)) * 0.5 * (std::erf(x + rs) - std::erf(x - rs));
    }));
}

}  // namespace

TEST_CASE("g-function of h_0 is h_0 / 2") {
    GFunctionSpec s;
    const auto r = g_function_field(SemigroupId::hermite(1), h0_field(), s);
    CHECK(r.value.at(240) == doctest::Approx(hermite_fn(0, 0.0) / 2.0).epsilon(1e-7));
    CHECK(r.value.at(260) == doctest::Approx(hermite_fn(0, 1.0) / 2.0).epsilon(1e-7));
    CHECK(r.tail_estimate < 1e-6);

    // a finer time rule changes nothing at this accuracy
    GFunctionSpec fine = s;
    fine.panels = 96;
    fine.order = 12;
    const auto rf = g_function_field(SemigroupId::hermite(1), h0_field(), fine);
    CHECK(rf.value.at(240) == doctest::Approx(r.value.at(240)).epsilon(1e-5));
}

TEST_CASE("zero field has zero g-function and area integral") {
    SampledField z(hgrid(), 1);
    GFunctionSpec s;
    CHECK(g_function_field(SemigroupId::hermite(1), z, s).value.max_abs() == 0.0);
    CHECK(area_integral_field(SemigroupId::hermite(1), z, s).value.max_abs() == 0.0);
}

TEST_CASE("area integral of h_0 against the erf oracle") {
    GFunctionSpec s;
    const auto a = area_integral_field(SemigroupId::hermite(1), h0_field(), s);
    CHECK(a.value.at(240) == doctest::Approx(area_h0_oracle(0.0)).epsilon(1e-5));
    CHECK(a.value.at(260) == doctest::Approx(area_h0_oracle(1.0)).epsilon(1e-5));

    const auto ref = reference::area_integral_field(SemigroupId::hermite(1), h0_field(), s);
    double worst = 0.0;
    for (std::size_t i = 0; i < a.value.size(); ++i) worst = std::max(worst, std::abs(a.value.at(i) - ref.value.at(i)));
    CHECK(worst <= 1e-13);
}

TEST_CASE("L^q norms of the area integral and the g-function coincide") {
    Grid g({Axis::uniform(-64.0, 0.0625, 2048)});
    auto f = SampledField::from_function(g, [](std::span<const double> x) { return std::exp(-x[0] * x[0] / 2.0); });
    for (double q : {2.0, 3.0}) {
        GFunctionSpec s;
        s.ord = FractionalOrder(0.5);
        s.q = q;
        s.t_min = 1e-6;
        s.t_max = 1e6;
        s.panels = 96;
        s.tail_tolerance = 1.0;
        const auto C = SemigroupId::classical(1);
        const double gq = lq_norm_q(g_function_field(C, f, s).value, q);
        const double aq = lq_norm_q(area_integral_field(C, f, s).value, q);
        CAPTURE(q);
        CHECK(aq == doctest::Approx(gq).epsilon(1e-10));
    }
}

TEST_CASE("vector-valued fields: l^2_2 norm of the components") {
    GFunctionSpec s;
    s.space = NormedSpace::lp(2.0, 2);
    auto v = SampledField::from_function(hgrid(), 2, [](std::span<const double> x, std::span<double> out) {
        out[0] = hermite_fn(0, x[0]);
        out[1] = hermite_fn(0, x[0]);
    });
    const auto gv = g_function_field(SemigroupId::hermite(1), v, s);
    GFunctionSpec s1;
    const auto g1 = g_function_field(SemigroupId::hermite(1), h0_field(), s1);
    CHECK(gv.value.at(240) == doctest::Approx(std::sqrt(2.0) * g1.value.at(240)).epsilon(1e-13));
}

TEST_CASE("g-function: serial and parallel agree bit for bit") {
    GFunctionSpec s;
    const auto a = g_function_field(SemigroupId::hermite(1), h0_field(), s, Execution::serial);
    const auto b = g_function_field(SemigroupId::hermite(1), h0_field(), s, Execution::parallel);
    for (std::size_t i = 0; i < a.value.size(); ++i) REQUIRE(a.value.at(i) == b.value.at(i));
}

TEST_CASE("spec validation") {
    GFunctionSpec s;
    s.t_min = 2.0;
    s.t_max = 1.0;
    CHECK_THROWS_AS(s.validate(), precondition_error);
    s = GFunctionSpec{};
    s.q = 1.0;
    CHECK_THROWS_AS(g_function_field(SemigroupId::hermite(1), h0_field(), s), precondition_error);
}

TEST_CASE("poisson subordination") {
    for (double lam : {1e-8, 1e-4, 0.01, 1.0, 16.0, 1000.0})
        CHECK(subordinated_multiplier(lam, 1.0) == doctest::Approx(std::exp(-std::sqrt(lam))).epsilon(1e-12));
    const auto C = SemigroupId::classical(1);
    for (double t : {0.5, 1.0, 2.0})
        for (double z : {0.0, 1.0, 3.0}) {
            const double o = 0.0;
            CHECK(subordinated_kernel(C, t, {&o, 1}, {&z, 1}) ==
                  doctest::Approx(poisson_kernel_classical(1, t, {&z, 1})).epsilon(1e-12));
        }
    const auto P = subordinate_poisson_apply(SemigroupId::hermite(1), h0_field(), 0.7);
    CHECK(P.at(240) == doctest::Approx(std::exp(-0.7) * hermite_fn(0, 0.0)).epsilon(1e-12));
}

TEST_CASE("step functions") {
    StepFunction s({0.0, 1.0, 3.0}, {2.0, -1.0});
    CHECK(s(0.5) == 2.0);
    CHECK(s(2.0) == -1.0);
    CHECK(s(5.0) == 0.0);
    CHECK(s.antiderivative(2.0) == doctest::Approx(1.0));
    CHECK(s.integral(0.5, 3.0) == doctest::Approx(-1.0));
    CHECK_THROWS_AS(StepFunction({1.0, 0.0}, {1.0}), precondition_error);
}

TEST_CASE("hardy operators: closed forms and the p = 2 ratio") {
    StepFunction chi({0.0, 1.0}, {1.0});
    const std::vector<double> xs{2.0, std::exp(-1.0)};
    const auto h0 = hardy_transform(chi, HardyDirection::from_zero, xs);
    const auto hi = hardy_transform(chi, HardyDirection::to_infinity, xs);
    CHECK(h0[0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(h0[1] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(hi[0] == 0.0);
    CHECK(hi[1] == doctest::Approx(1.0).epsilon(1e-14));

    const auto r = hardy_lp_ratio([](double y) { return std::pow(y, -0.5); }, {1.0, 1e4}, 2.0);
    CHECK(r.ratio == doctest::Approx(1.772032).epsilon(1e-6));
    CHECK(r.ratio < 2.0);  // p' = 2
}

TEST_CASE("maximal function") {
    Grid g({Axis::uniform(-5.0 + 0.005, 0.01, 1000)});
    auto chi = SampledField::from_function(g, [](std::span<const double> x) { return (x[0] > 0 && x[0] < 1) ? 1.0 : 0.0; });
    const auto M = maximal_fn(chi);
    // best ball at 2.005 just reaches the far edge: 1 / (2 * 2.005)
    CHECK(M.at(700) == doctest::Approx(1.0 / 4.01).epsilon(1e-12));
    for (std::size_t i = 500; i < 600; ++i) CHECK(M.at(i) == doctest::Approx(1.0).epsilon(1e-14));

    auto c = SampledField::from_function(g, [](std::span<const double>) { return 3.0; });
    CHECK(maximal_fn(c).max_abs() == doctest::Approx(3.0).epsilon(1e-13));

    Grid gs({Axis::symmetric(6.0, 0.05)});
    auto gauss = SampledField::from_function(gs, [](std::span<const double> x) { return std::exp(-x[0] * x[0]); });
    const auto Mg = maximal_fn(gauss);
    CHECK(Mg.at(120) == doctest::Approx(1.0).epsilon(1e-14));
    for (std::size_t i = 0; i < gauss.size(); ++i) REQUIRE(Mg.at(i) >= gauss.at(i) - 1e-15);
    const auto Ms = maximal_fn(gauss, NormedSpace::real_line(), Execution::serial);
    for (std::size_t i = 0; i < gauss.size(); ++i) REQUIRE(Ms.at(i) == Mg.at(i));
}

TEST_CASE("critical radius and coverings") {
    CHECK(critical_radius(0.0) == 0.5);
    CHECK(critical_radius(1.0) == 0.5);
    CHECK(critical_radius(3.0) == 0.25);
    CHECK(critical_radius(-3.0) == 0.25);

    const auto fam = covering(-5.0, 5.0, 2.0);
    CHECK(fam.multiplicity == reference::covering_multiplicity(fam.centers, fam.radii, 2.0));
    CHECK(covering_multiplicity(fam.centers, fam.radii, 2.0) == fam.multiplicity);
    CHECK(covers_window(fam, 0.01));
    CHECK(fam.ratio_sup >= 1.0);
    CHECK(fam.ratio_inf <= 1.0);

    const auto rb = critical_radius_ratio(-5.0, 5.0, 2.0, 0.01);
    CHECK(rb.pairs > 0u);
    CHECK(rb.sup >= 1.0);
    CHECK(rb.inf > 0.0);
}

TEST_CASE("local/global split follows the support of f") {
    const auto H = SemigroupId::hermite(1);
    Grid g({Axis::symmetric(10.0, 0.05)});
    GFunctionSpec s;
    s.t_min = 1e-2;
    const std::vector<double> x0{0.0};
    // f supported far outside B(0, 1/2): nothing local
    auto far = SampledField::from_function(g, [](std::span<const double> x) { return x[0] > 3.0 && x[0] < 4.0 ? 1.0 : 0.0; });
    const auto a = local_global_split(H, far, s, x0);
    CHECK(a.radius == 0.5);
    CHECK(a.local_norm == 0.0);
    CHECK(a.global_norm > 0.0);
    // f supported inside: nothing global
    auto near = SampledField::from_function(g, [](std::span<const double> x) { return std::abs(x[0]) < 0.3 ? 1.0 : 0.0; });
    const auto b = local_global_split(H, near, s, x0);
    CHECK(b.global_norm == 0.0);
    CHECK(b.local_norm > 0.0);

    s.ord = FractionalOrder(0.5);
    CHECK_THROWS_AS(local_global_split(H, near, s, x0), precondition_error);
}
