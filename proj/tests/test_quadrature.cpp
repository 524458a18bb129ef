#include <catch_amalgamated.hpp>

#include "nli/quadrature.hpp"

#include <cmath>
#include <complex>
#include <numbers>

using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("GK21 rule integrates polynomials exactly") {
    const auto& r = nli::quad::gk21();
    REQUIRE(r.abscissa.size() == 11);
    REQUIRE(r.kronrod_weights.size() == 11);
    REQUIRE(r.gauss_weights.size() == 5);
    CHECK(r.abscissa[0] == 0.0);

    // A single panel with degree up to 31 (Kronrod) and 19 (Gauss).
    for (int degree = 0; degree <= 30; degree += 2) {
        CAPTURE(degree);
        auto f = [&](double x) { return std::pow(x, degree); };
        const auto p = nli::quad::detail::gk21_panel<double>(f, -1.0, 1.0);
        CHECK_THAT(p.value, WithinRel(2.0 / (degree + 1), 1e-14));
        if (degree <= 18) CHECK(p.error < 1e-14);
    }
}

TEST_CASE("adaptive integration of smooth functions") {
    auto r = nli::quad::integrate([](double x) { return std::exp(x); }, 0.0, 1.0);
    CHECK(r.converged);
    CHECK_THAT(r.value, WithinRel(std::numbers::e - 1.0, 1e-14));

    r = nli::quad::integrate([](double x) { return 1.0 / (1e-4 + x * x); }, -1.0, 1.0, {0.0, 1e-12, 500, 0.0});
    CHECK(r.converged);
    CHECK_THAT(r.value, WithinRel(2.0 * std::atan(1.0 / 1e-2) / 1e-2, 1e-11));
    CHECK(r.intervals > 1);

    r = nli::quad::integrate([](double x) { return std::sqrt(x); }, 0.0, 1.0, {0.0, 1e-10, 200, 0.0});
    CHECK(r.converged);
    CHECK_THAT(r.value, WithinRel(2.0 / 3.0, 1e-10));
}

TEST_CASE("complex oscillatory integrand with a panel cap") {
    const double w = 200.0;
    auto f = [&](double z) { return std::exp(std::complex<double>(-1.0, w) * z); };
    nli::quad::Options opt;
    opt.rel_tol = 1e-12;
    opt.max_panel_width = std::numbers::pi / (4.0 * w);
    const auto r = nli::quad::integrate(f, 0.0, 10.0, opt);
    CHECK(r.converged);
    const std::complex<double> lambda(1.0, -w);
    const std::complex<double> exact = (1.0 - std::exp(-lambda * 10.0)) / lambda;
    CHECK(std::abs(r.value - exact) <= 1e-12 * std::abs(exact));
    CHECK(r.intervals >= static_cast<std::size_t>(10.0 / opt.max_panel_width));
}

TEST_CASE("non-convergence is reported") {
    auto f = [](double x) { return x == 0.0 ? 0.0 : 1.0 / std::sqrt(std::abs(x)) * std::sin(1.0 / x); };
    const auto r = nli::quad::integrate(f, 0.0, 1.0, {0.0, 1e-14, 5, 0.0});
    CHECK_FALSE(r.converged);
    CHECK(r.intervals <= 5);
    CHECK(r.abs_error > 0.0);
}

TEST_CASE("empty interval and reversed limits") {
    const auto z = nli::quad::integrate([](double) { return 1.0; }, 2.0, 2.0);
    CHECK(z.value == 0.0);
    CHECK(z.converged);
    const auto r = nli::quad::integrate([](double x) { return x; }, 1.0, 0.0);
    CHECK_THAT(r.value, WithinAbs(-0.5, 1e-15));
}
