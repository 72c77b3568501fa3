#include <doctest.h>

#include "lps/error.hpp"
#include "lps/field.hpp"
#include "lps/quadrature.hpp"

#include <cmath>
#include <numbers>

using namespace lps;

TEST_CASE("gauss-legendre integrates polynomials exactly") {
    const auto r = gauss_legendre(8, 0.0, 2.0);
    CHECK(r.integrate([](double x) { return std::pow(x, 15); }) == doctest::Approx(std::pow(2.0, 16) / 16.0).epsilon(1e-14));
    CHECK(gauss_legendre_reference(16).size() == 16u);
    CHECK_NOTHROW(r.validate());
    QuadratureRule bad;
    bad.nodes = {0.0, 1.0};
    bad.weights = {1.0, -1.0};
    CHECK_THROWS_AS(bad.validate(), precondition_error);
}

TEST_CASE("gauss-hermite weights are for unweighted integrals") {
    const auto r = gauss_hermite(30);
    CHECK(r.integrate([](double x) { return std::exp(-x * x); }) == doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-13));
    CHECK(r.integrate([](double x) { return x * x * std::exp(-x * x); }) ==
          doctest::Approx(std::sqrt(std::numbers::pi) / 2.0).epsilon(1e-13));
}

TEST_CASE("half-line and log-time rules") {
    const auto h = half_line_rule(-90.0, std::log(40.0), 160, 16);
    CHECK(h.integrate([](double x) { return std::exp(-x); }) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(h.integrate([](double x) { return std::pow(x, -0.5) * std::exp(-x); }) ==
          doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-12));
    const auto t = log_time_rule(1e-3, 1e3, 24, 16);
    CHECK(t.integrate([](double) { return 1.0; }) == doctest::Approx(std::log(1e6)).epsilon(1e-13));
    const std::vector<double> b{0.0, 1.0, 3.0};
    CHECK(composite_gauss_legendre(b, 4).integrate([](double x) { return x * x; }) == doctest::Approx(9.0).epsilon(1e-14));
}

TEST_CASE("grids and sampled fields") {
    Grid g({Axis::symmetric(1.0, 0.5), Axis::uniform(0.0, 1.0, 3)});
    CHECK(g.size() == 15u);
    CHECK(g.axis(0).size() == 5u);
    CHECK(g.point(4) == std::vector<double>{-0.5, 1.0});
    CHECK(g.weight(4) == 0.5);
    CHECK(g.axis(0).period() == doctest::Approx(2.5));
    auto f = SampledField::from_function(g, [](std::span<const double> x) { return x[0] + 10.0 * x[1]; });
    CHECK(f.at(4) == doctest::Approx(9.5));
    CHECK(f.max_abs() == doctest::Approx(21.0));
    CHECK(f.inner(f) > 0.0);
    CHECK_THROWS_AS(Axis::uniform(0.0, -1.0, 4), precondition_error);
}

TEST_CASE("zero padding keeps the spacing and the samples") {
    Grid g({Axis::symmetric(2.0, 0.25)});
    auto f = SampledField::from_function(g, [](std::span<const double> x) { return 1.0 + x[0]; });
    const auto p = pad_symmetric(f, 5.0);
    const auto& a = p.grid().axis(0);
    CHECK(a.step() == doctest::Approx(0.25));
    CHECK(a.nodes.front() == doctest::Approx(-5.0));
    CHECK(p.size() == 41u);
    CHECK(p.at(0) == 0.0);
    CHECK(p.at(20) == doctest::Approx(1.0));
    CHECK(p.inner(p) == doctest::Approx(f.inner(f)).epsilon(1e-15));
}
