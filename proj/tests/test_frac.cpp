#include <doctest.h>

#include "lps/error.hpp"
#include "lps/frac.hpp"
#include "lps/spectral.hpp"

#include <cmath>
#include <numbers>
#include <vector>

using namespace lps;

namespace {

// Weyl derivative of (1+u)^{-3} at order 0.7 by brute-force midpoint sums on
// u = t + s^{1/(1-a)}, truncated at s = 400 (tail below 1e-9).
double power_profile_oracle(double a, double t) {
    const double e = 1.0 / (1.0 - a);
    const int n = 1000000;
    const double S = 400.0, h = S / n;
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
        const double v = (i + 0.5) * h;
        const double u = t + std::pow(v, e);
        const double d1 = -3.0 * std::pow(1.0 + u, -4.0);
        s += d1 * e;  // (u-t)^{-a} du = e dv
    }
    return s * h / std::tgamma(1.0 - a);
}

}  // namespace

TEST_CASE("fractional order bookkeeping") {
    CHECK(FractionalOrder(0.5).m() == 1);
    CHECK(FractionalOrder(1.0).m() == 2);
    CHECK(FractionalOrder(1.7).m() == 2);
    CHECK(FractionalOrder(0.5).sign() == -1.0);
    CHECK(FractionalOrder(1.0).sign() == 1.0);
    CHECK(FractionalOrder(0.5).multiplier(0.0, 1.0) == 0.0);
    CHECK_THROWS_AS(FractionalOrder(0.0), precondition_error);
    CHECK_THROWS_AS(FractionalOrder(-1.0), precondition_error);
}

TEST_CASE("weyl derivative of exponentials") {
    auto r = weyl_derivative_fn(TimeProfile::exponential(1.0), FractionalOrder(0.5), 1.0);
    CHECK(r.value == doctest::Approx(-std::exp(-1.0)).epsilon(1e-12));
    CHECK(r.error_estimate < 1e-10);
    r = weyl_derivative_fn(TimeProfile::exponential(2.0), FractionalOrder(1.0), 0.3);
    CHECK(r.value == doctest::Approx(2.0 * std::exp(-0.6)).epsilon(1e-12));

    double worst = 0.0;
    for (double a : {0.3, 0.5, 1.0, 1.7, 2.5})
        for (double l : {0.5, 1.0, 4.0})
            for (double t : {0.2, 1.0}) {
                const FractionalOrder o(a);
                const double v = weyl_derivative_fn(TimeProfile::exponential(l), o, t).value;
                const double e = o.sign() * std::pow(l, a) * std::exp(-l * t);
                worst = std::max(worst, std::abs(v - e) / std::abs(e));
            }
    CHECK(worst <= 1e-10);
}

TEST_CASE("integer orders reduce to ordinary derivatives") {
    const auto p = TimeProfile::power(1.0, 3.0);
    // alpha = 1, m = 2: int_t^inf phi''(u) du = -phi'(t)
    const double d1 = -3.0 * std::pow(1.5, -4.0);
    CHECK(weyl_derivative_fn(p, FractionalOrder(1.0), 0.5).value == doctest::Approx(-d1).epsilon(1e-10));
    const double d2 = -12.0 * std::pow(1.5, -5.0);  // m = 3: -phi''(t)
    CHECK(weyl_derivative_fn(p, FractionalOrder(2.0), 0.5).value == doctest::Approx(d2).epsilon(1e-10));
}

TEST_CASE("power profile against a brute-force oracle") {
    const double v = weyl_derivative_fn(TimeProfile::power(1.0, 3.0), FractionalOrder(0.7), 0.5).value;
    const double o = power_profile_oracle(0.7, 0.5);
    CHECK(v == doctest::Approx(o).epsilon(1e-6));
    CHECK(v == doctest::Approx(-0.465196327001).epsilon(1e-10));
}

TEST_CASE("finite-difference derivatives stand in for analytic ones") {
    TimeProfile p;
    p.value = [](double u) { return std::exp(-u); };
    p.decay = DecayHint::exponential(1.0);
    CHECK(weyl_derivative_fn(p, FractionalOrder(0.5), 1.0).value == doctest::Approx(-std::exp(-1.0)).epsilon(1e-7));
    const double d3 = finite_difference_derivative([](double u) { return std::sin(u); }, 0.8, 3);
    CHECK(d3 == doctest::Approx(-std::cos(0.8)).epsilon(1e-6));
}

TEST_CASE("vector profile matches the scalar route component-wise") {
    const std::vector<double> lam{0.5, 1.0, 3.0};
    const FractionalOrder o(0.6);
    std::vector<double> out(3);
    // m = 1: phi'(u) = -lambda e^{-lambda u}
    weyl_derivative_vec(
        [&](double u, std::span<double> d) {
            for (std::size_t c = 0; c < 3; ++c) d[c] = -lam[c] * std::exp(-lam[c] * u);
        },
        3, DecayHint::exponential(0.5), o, 0.4, out);
    for (std::size_t c = 0; c < 3; ++c)
        CHECK(out[c] == doctest::Approx(weyl_derivative_fn(TimeProfile::exponential(lam[c]), o, 0.4).value).epsilon(1e-11));
}

TEST_CASE("composition of orders carries the sign factor") {
    // d^g d^b e^{-lt} = (-1)^{m_g + m_b} l^{g+b} e^{-lt}, while d^{g+b} has (-1)^{m_{g+b}}
    for (double g : {0.3, 0.5, 0.8})
        for (double b : {0.4, 0.5, 1.2}) {
            const FractionalOrder og(g), ob(b), os(g + b);
            const double l = 1.7, t = 0.6;
            const double inner = ob.multiplier(l, t) / std::exp(-l * t);
            TimeProfile p = TimeProfile::exponential(l);
            const double outer = weyl_derivative_fn(p, og, t).value * inner;
            const double direct = weyl_derivative_fn(p, os, t).value;
            const double factor = og.sign() * ob.sign() * os.sign();
            CHECK(outer == doctest::Approx(factor * direct).epsilon(1e-10));
        }
}

TEST_CASE("semigroup action: hermite eigenfunction") {
    Grid g({Axis::symmetric(12.0, 0.05)});
    auto h0 = SampledField::from_function(g, [](std::span<const double> x) { return hermite_fn(0, x[0]); });
    const auto H = SemigroupId::hermite(1);
    const auto s = frac_semigroup_apply(H, h0, FractionalOrder(1.0), 0.7);
    CHECK(s.at(240) == doctest::Approx(std::exp(-0.7) * hermite_fn(0, 0.0)).epsilon(1e-10));
    const auto k = frac_semigroup_apply_kernel(H, h0, FractionalOrder(1.5), 0.7, {{0.0}});
    CHECK(k[0] == doctest::Approx(FractionalOrder(1.5).multiplier(1.0, 0.7) * hermite_fn(0, 0.0)).epsilon(1e-8));

    auto zero = SampledField::from_function(g, [](std::span<const double>) { return 0.0; });
    CHECK(frac_semigroup_apply(H, zero, FractionalOrder(0.5), 0.3).max_abs() == 0.0);
}

TEST_CASE("semigroup action: kernel and spectral routes agree on a padded box") {
    Grid g({Axis::symmetric(40.0, 0.05)});
    auto f = SampledField::from_function(g, [](std::span<const double> x) { return std::exp(-x[0] * x[0] / 2.0); });
    const auto C = SemigroupId::classical(1);
    const FractionalOrder o(0.5);
    const auto padded = pad_symmetric(f, 1600.0);
    const auto sp = frac_semigroup_apply(C, padded, o, 0.4);
    const std::vector<std::vector<double>> pts{{-2.0}, {0.0}, {1.5}};
    const auto kr = frac_semigroup_apply_kernel(C, f, o, 0.4, pts);
    const auto& ax = padded.grid().axis(0);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const auto idx = static_cast<std::size_t>(std::llround((pts[i][0] - ax.nodes.front()) / ax.step()));
        CHECK(std::abs(sp.at(idx) - kr[i]) <= 1e-6);
    }
    // serial and parallel kernel routes are bit-identical
    const auto ks = frac_semigroup_apply_kernel(C, f, o, 0.4, pts, 0, Execution::serial);
    CHECK(ks == kr);
}
