#include <doctest.h>

#include "lps/error.hpp"
#include "lps/kernels.hpp"
#include "lps/spectral.hpp"

#include <cmath>
#include <limits>
#include <numbers>

using namespace lps;

namespace {

const Grid& hermite_grid() {
    static const Grid g({Axis::symmetric(12.0, 0.05)});
    return g;
}

const Grid& laguerre_grid() {
    static const Grid g({Axis::half_line(-30.0, std::log(12.0), 120, 16)});
    return g;
}

SampledField hermite_combo(double a0, double a1, double a2) {
    return SampledField::from_function(hermite_grid(), [=](std::span<const double> x) {
        return a0 * hermite_fn(0, x[0]) + a1 * hermite_fn(1, x[0]) + a2 * hermite_fn(2, x[0]);
    });
}

constexpr double inf = std::numeric_limits<double>::infinity();

}  // namespace

TEST_CASE("hermite expansion recovers a single mode and round-trips") {
    const auto B = SpectralBasis::hermite(hermite_grid());
    CHECK(B.modes() == 18u);
    auto h3 = SampledField::from_function(hermite_grid(), [](std::span<const double> x) { return hermite_fn(3, x[0]); });
    const auto c = B.expand(h3);
    for (std::size_t k = 0; k < B.modes(); ++k) CHECK(std::abs(c.at(k).real() - (k == 3 ? 1.0 : 0.0)) <= 1e-12);
    CHECK(c.tail_energy <= 1e-12);
    const auto back = B.synthesize(c);
    double worst = 0.0;
    for (std::size_t i = 0; i < h3.size(); ++i) worst = std::max(worst, std::abs(back.at(i) - h3.at(i)));
    CHECK(worst <= 1e-12);
}

TEST_CASE("gaussian has c0 = pi^{1/4} and no odd modes") {
    const auto B = SpectralBasis::hermite(hermite_grid());
    auto f = SampledField::from_function(hermite_grid(), [](std::span<const double> x) { return std::exp(-x[0] * x[0] / 2.0); });
    const auto c = expand(f, B);
    CHECK(c.at(0).real() == doctest::Approx(std::pow(std::numbers::pi, 0.25)).epsilon(1e-13));
    for (std::size_t k = 1; k < B.modes(); ++k) CHECK(std::abs(c.at(k).real()) <= 1e-12);
}

TEST_CASE("laguerre expansion and heat action") {
    const double beta = 0.5;
    const auto B = SpectralBasis::laguerre(BesselOrder(beta), laguerre_grid());
    auto f = SampledField::from_function(laguerre_grid(), [&](std::span<const double> x) {
        return laguerre_fn(2, BesselOrder(beta), x[0]) + 0.5 * laguerre_fn(5, BesselOrder(beta), x[0]);
    });
    const auto c = B.expand(f);
    CHECK(c.at(2).real() == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(c.at(5).real() == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(std::abs(c.at(0).real()) <= 1e-10);

    const double t = 0.3;
    const auto u = spectral_apply(c, B, t, std::nullopt);
    const auto cu = B.expand(u);
    const auto lam = B.eigenvalues();
    CHECK(lam[2] == doctest::Approx(2.0 * 2 + beta + 1.0));
    CHECK(cu.at(2).real() == doctest::Approx(std::exp(-lam[2] * t)).epsilon(1e-10));
    CHECK(cu.at(5).real() == doctest::Approx(0.5 * std::exp(-lam[5] * t)).epsilon(1e-10));
}

TEST_CASE("hermite heat action matches kernel quadrature") {
    const auto B = SpectralBasis::hermite(hermite_grid());
    const auto H = SemigroupId::hermite(1);
    const auto f = hermite_combo(1.0, 0.0, 1.0);
    const double t = 0.3;
    const auto u = spectral_apply(B.expand(f), B, t, std::nullopt);
    const auto& ax = hermite_grid().axis(0);
    for (std::size_t i : {100u, 240u, 300u}) {
        double q = 0.0;
        for (std::size_t j = 0; j < ax.size(); ++j)
            q += ax.weights[j] * heat_kernel(H, t, {&ax.nodes[i], 1}, {&ax.nodes[j], 1}) * f.at(j);
        CHECK(u.at(i) == doctest::Approx(q).epsilon(1e-8));
    }
}

TEST_CASE("discrete delta is carried to the Mehler kernel") {
    const auto B = SpectralBasis::hermite(hermite_grid());
    const auto& ax = hermite_grid().axis(0);
    SampledField d(hermite_grid(), 1);
    d.at(240) = 1.0 / ax.weights[240];  // node 240 is x = 0
    const auto c = B.expand(d, {inf});
    const auto u = spectral_apply(c, B, 0.5, std::nullopt, {inf});
    const auto H = SemigroupId::hermite(1);
    const double z = 0.0;
    for (std::size_t i : {200u, 240u, 270u})
        CHECK(u.at(i) == doctest::Approx(heat_kernel(H, 0.5, {&ax.nodes[i], 1}, {&z, 1})).epsilon(1e-7));
    // the default tolerance rejects the truncation
    CHECK_THROWS_AS(B.expand(d), convergence_error);
}

TEST_CASE("evaluate_modes off the grid") {
    const auto B = SpectralBasis::hermite(hermite_grid());
    const double x = 0.37;
    const auto e = B.evaluate_modes({&x, 1});
    REQUIRE(e.size() == B.modes());
    for (int k = 0; k < 6; ++k) CHECK(e[k].real() == doctest::Approx(hermite_fn(k, x)).epsilon(1e-14));

    Grid g({Axis::symmetric(10.0, 0.1)});
    const auto F = SpectralBasis::fourier(g);
    const double V = g.axis(0).period();
    const auto ef = F.evaluate_modes({&x, 1});
    for (const auto& v : ef) CHECK(std::abs(v) == doctest::Approx(1.0 / std::sqrt(V)).epsilon(1e-13));
    CHECK(F.eigenvalues()[0] == 0.0);
}

TEST_CASE("fixed-point projection is zero") {
    const auto f = hermite_combo(1.0, 2.0, 0.0);
    for (const auto& id : {SemigroupId::hermite(1), SemigroupId::classical(1)})
        CHECK(fixed_point_projection(id, f).max_abs() == 0.0);
}

TEST_CASE("polarization pairing: eigenfunctions") {
    const auto B = SpectralBasis::hermite(hermite_grid());
    const auto h0 = hermite_combo(1.0, 0.0, 0.0);
    // Gamma(2a)/2^{2a}: 1/4 at a = 1, 1/2 at a = 1/2
    auto p = polarization_pairing(h0, h0, B, FractionalOrder(1.0));
    CHECK(p.lhs == doctest::Approx(0.25).epsilon(1e-12));
    p = polarization_pairing(h0, h0, B, FractionalOrder(0.5));
    CHECK(p.lhs == doctest::Approx(0.5).epsilon(1e-12));

    const auto h1 = hermite_combo(0.0, 1.0, 0.0), h2 = hermite_combo(0.0, 0.0, 1.0);
    p = polarization_pairing(h1, h2, B, FractionalOrder(0.7));
    CHECK(std::abs(p.lhs) <= 1e-14);
    CHECK(p.gap <= 1e-12);

    // single Laguerre modes probe eigenvalues 0.6 and 9.5
    const auto L = SpectralBasis::laguerre(BesselOrder(-0.4), laguerre_grid());
    auto phi0 = SampledField::from_function(laguerre_grid(), [](std::span<const double> x) {
        return laguerre_fn(0, BesselOrder(-0.4), x[0]);
    });
    CHECK(polarization_pairing(phi0, phi0, L, FractionalOrder(0.8)).gap <= 1e-10);
    const auto L2 = SpectralBasis::laguerre(BesselOrder(2.5), laguerre_grid());
    auto phi3 = SampledField::from_function(laguerre_grid(), [](std::span<const double> x) {
        return laguerre_fn(3, BesselOrder(2.5), x[0]);
    });
    CHECK(polarization_pairing(phi3, phi3, L2, FractionalOrder(1.3)).gap <= 1e-10);
}

TEST_CASE("polarization pairing: symmetric and bilinear") {
    const auto B = SpectralBasis::hermite(hermite_grid());
    const auto f = hermite_combo(1.0, 0.3, -0.2), g = hermite_combo(-0.5, 1.0, 0.4), h = hermite_combo(0.2, 0.0, 1.0);
    const FractionalOrder o(0.6);
    const double fg = polarization_pairing(f, g, B, o).lhs, gf = polarization_pairing(g, f, B, o).lhs;
    CHECK(fg == doctest::Approx(gf).epsilon(1e-13));
    auto comb = g;
    for (std::size_t i = 0; i < comb.size(); ++i) comb.at(i) = 2.0 * g.at(i) + h.at(i);
    const double lin = polarization_pairing(f, comb, B, o).lhs;
    CHECK(lin == doctest::Approx(2.0 * fg + polarization_pairing(f, h, B, o).lhs).epsilon(1e-12));
}

TEST_CASE("polarization pairing on a small periodic box misses the zero mode") {
    Grid g({Axis::symmetric(10.0, 0.1)});
    auto f = SampledField::from_function(g, [](std::span<const double> x) { return std::exp(-x[0] * x[0] / 2.0); });
    const auto F = SpectralBasis::fourier(g);
    const auto p = polarization_pairing(f, f, F, FractionalOrder(0.5));
    const auto c = F.expand(f, {inf});
    const double fraction = std::norm(c.at(0)) / c.norm_squared;
    CHECK(fraction > 0.1);
    CHECK(p.gap == doctest::Approx(fraction).epsilon(1e-6));
}
