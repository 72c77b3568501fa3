#include <doctest.h>

#include "lps/banach.hpp"
#include "lps/error.hpp"

#include <cmath>
#include <random>

using namespace lps;

TEST_CASE("normed spaces") {
    const auto l3 = NormedSpace::lp(3.0, 2);
    const std::vector<double> v{1.0, -2.0};
    CHECK(l3.norm(v) == doctest::Approx(std::cbrt(9.0)).epsilon(1e-15));
    CHECK(NormedSpace::lp(INFINITY, 2).norm(v) == 2.0);
    CHECK(NormedSpace::lp(1.0, 2).norm(v) == 3.0);
    CHECK(l3.exponent() == 3.0);
    CHECK_THROWS_AS(NormedSpace::lp(0.5, 2), precondition_error);
}

TEST_CASE("moduli in l^2 match the closed forms") {
    const auto l2 = NormedSpace::lp(2.0, 2);
    for (double e : {0.5, 1.0, 1.5}) {
        const auto r = modulus_convexity(l2, e);
        CHECK(r.value == doctest::Approx(1.0 - std::sqrt(1.0 - e * e / 4.0)).epsilon(1e-6));
        CHECK(r.residual <= 1e-9);
    }
    for (double t : {0.25, 1.0})
        CHECK(modulus_smoothness(l2, t).value == doctest::Approx(std::sqrt(1.0 + t * t) - 1.0).epsilon(1e-6));
}

TEST_CASE("l^1 has a flat face") {
    CHECK(std::abs(modulus_convexity(NormedSpace::lp(1.0, 2), 1.0).value) <= 1e-9);
}

TEST_CASE("optimizers beat random sampling") {
    // the optimizer's infimum sits below any sampled estimate, its supremum above
    const auto l4 = NormedSpace::lp(4.0, 3);
    const double d = modulus_convexity(l4, 0.8).value;
    const double ds = modulus_convexity_sampled(l4, 0.8, 200000, 7);
    CHECK(d <= ds + 1e-12);
    CHECK(ds - d <= 1e-3);

    const auto l15 = NormedSpace::lp(1.5, 3);
    const double r = modulus_smoothness(l15, 0.5).value;
    const double rs = modulus_smoothness_sampled(l15, 0.5, 200000, 7);
    CHECK(r >= rs - 1e-12);
    CHECK(r - rs <= 2e-3);
}

TEST_CASE("rho(t)/t decreases to zero in uniformly smooth spaces") {
    const auto l3 = NormedSpace::lp(3.0, 2);
    double prev = INFINITY;
    for (double t : {1.0, 0.5, 0.25, 0.1}) {
        const double q = modulus_smoothness(l3, t).value / t;
        CHECK(q < prev);
        prev = q;
    }
    CHECK(prev < 0.1);
}

TEST_CASE("moduli are deterministic in the seed and the execution policy") {
    const auto l3 = NormedSpace::lp(3.0, 2);
    ModulusOptions a, b;
    a.exec = Execution::serial;
    b.exec = Execution::parallel;
    CHECK(modulus_convexity(l3, 0.7, a).value == modulus_convexity(l3, 0.7, b).value);
    CHECK(modulus_smoothness(l3, 0.3, a).value == modulus_smoothness(l3, 0.3, b).value);
}

TEST_CASE("martingales: constant, L^2 identity, vector re-summation") {
    // constant martingale: S_2 = |M_0|
    FiniteMartingale c(2, 1, {{3.0, 3.0, 3.0, 3.0}, {3.0, 3.0, 3.0, 3.0}, {3.0, 3.0, 3.0, 3.0}});
    for (double s : martingale_square_fn(c, NormedSpace::real_line(), 2.0)) CHECK(s == 3.0);

    std::mt19937_64 rng(3);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const auto m = FiniteMartingale::random(6, 1, rng);
        CHECK(m.martingale_residual() <= 1e-12);
        const auto S = martingale_square_fn(m, NormedSpace::real_line(), 2.0);
        double a = 0.0, b = 0.0;
        for (std::size_t k = 0; k < m.atoms(); ++k) {
            a += S[k] * S[k];
            b += m.value(6, k)[0] * m.value(6, k)[0];
        }
        worst = std::max(worst, std::abs(a - b) / b);
    }
    CHECK(worst <= 1e-12);

    // l^2_4 square function squared is the sum of per-coordinate squares
    const auto m = FiniteMartingale::random(4, 4, rng);
    const auto S = martingale_square_fn(m, NormedSpace::lp(2.0, 4), 2.0);
    for (std::size_t k = 0; k < m.atoms(); ++k) {
        double sum = 0.0;
        for (std::size_t n = 0; n <= m.depth(); ++n)
            for (std::size_t d = 0; d < 4; ++d) {
                const double prev = n ? m.value(n - 1, k)[d] : 0.0;
                const double inc = m.value(n, k)[d] - prev;
                sum += inc * inc;
            }
        CHECK(S[k] * S[k] == doctest::Approx(sum).epsilon(1e-13));
    }
}

TEST_CASE("invalid martingales are rejected") {
    // the two children of the root do not average to M_0
    CHECK_THROWS_AS(FiniteMartingale(1, 1, {{0.0, 0.0}, {1.0, 0.5}}), precondition_error);
    // M_1 not constant on its block
    CHECK_THROWS_AS(FiniteMartingale(2, 1, {{0.0, 0.0, 0.0, 0.0}, {1.0, 0.0, -1.0, 0.0}, {1.0, 1.0, -1.0, -1.0}}),
                    precondition_error);
}

TEST_CASE("lusin probe: the L^2 constant") {
    GFunctionSpec s;
    s.t_min = 1e-6;
    s.t_max = 400.0;
    s.panels = 64;
    // alpha = 1: sqrt(Gamma(2) / 4) = 1/2
    auto r = lusin_ratio_probe(SemigroupId::classical(1), s, 2.0, 8);
    CHECK(r.cotype.min == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(r.cotype.max == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(r.type.median == doctest::Approx(2.0).epsilon(1e-6));
    s.space = NormedSpace::lp(2.0, 4);
    r = lusin_ratio_probe(SemigroupId::classical(1), s, 2.0, 8);
    CHECK(r.cotype.median == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("lusin probe: single mode at p = 3 and seed determinism") {
    GFunctionSpec s;
    s.t_min = 1e-6;
    s.t_max = 400.0;
    s.panels = 64;
    LusinProbeOptions o;
    o.k_min = 3;
    o.k_max = 3;
    // one Fourier mode: |T_t f| = e^{-lambda t}|f| pointwise, so g(f) = |f| / 2 for any p
    const auto r = lusin_ratio_probe(SemigroupId::classical(1), s, 3.0, 4, o);
    CHECK(r.cotype.min == doctest::Approx(0.5).epsilon(1e-6));

    LusinProbeOptions a;
    a.seed = 11;
    const auto x = lusin_ratio_probe(SemigroupId::classical(1), s, 3.0, 4, a);
    const auto y = lusin_ratio_probe(SemigroupId::classical(1), s, 3.0, 4, a);
    CHECK(x.cotype_samples == y.cotype_samples);
    a.seed = 12;
    const auto z = lusin_ratio_probe(SemigroupId::classical(1), s, 3.0, 4, a);
    CHECK(z.cotype_samples != x.cotype_samples);
}
