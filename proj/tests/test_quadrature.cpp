// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <vector>

#include "doctest.h"
#include "zakotfs/error.hpp"
#include "zakotfs/quadrature.hpp"

using namespace zakotfs;

TEST_SUITE("quadrature") {

TEST_CASE("polynomials and elementary integrals") {
    auto r = integrate_adaptive([](double x) { return cplx(x * x, 0); }, 0.0, 1.0);
    CHECK(std::abs(r.value - 1.0 / 3.0) < 1e-15);
    auto e = integrate_adaptive([](double x) { return std::exp(cplx(0, x)); }, 0.0, kPi);
    CHECK(std::abs(e.value - cplx(0, 2)) < 1e-14);
    auto g = integrate_adaptive([](double x) { return cplx(std::exp(-x * x), 0); }, -12.0, 12.0);
    CHECK(std::abs(g.value - std::sqrt(kPi)) < 1e-13);
    CHECK(g.evaluations > 0);
}

TEST_CASE("oscillatory integrand with zero exact value terminates") {
    auto r = integrate_adaptive([](double x) { return cis2pi(-50.0 * x); }, 0.0, 1.0);
    CHECK(std::abs(r.value) < 1e-12);
}

TEST_CASE("breakpoints handle kinks") {
    std::vector<double> br{-1.0, 0.3, 2.0};
    auto r = integrate_adaptive([](double x) { return cplx(std::abs(x - 0.3), 0); }, br);
    double exact = 0.5 * 1.3 * 1.3 + 0.5 * 1.7 * 1.7;
    CHECK(std::abs(r.value - exact) < 1e-14);
}

TEST_CASE("integrable singularity converges, budget exhaustion throws") {
    auto f = [](double x) { return cplx(1.0 / std::sqrt(std::abs(x) + 1e-300), 0); };
    QuadratureOptions loose;
    loose.rel_tol = 1e-6;
    loose.max_subdivisions = 4000;
    auto r = integrate_adaptive(f, 0.0, 1.0, loose);
    CHECK(std::abs(r.value - 2.0) < 1e-5);
    QuadratureOptions tiny;
    tiny.rel_tol = 1e-14;
    tiny.abs_tol = 0;
    tiny.max_subdivisions = 3;
    CHECK_THROWS_AS(integrate_adaptive(f, 0.0, 1.0, tiny), QuadratureFailure);
}

TEST_CASE("Gauss-Legendre rule is exact to degree 2n-1") {
    for (int n : {1, 3, 5, 12, 24}) {
        auto rule = gauss_legendre(n);
        REQUIRE(rule.size() == static_cast<std::size_t>(n));
        double wsum = 0;
        for (double w : rule.w) wsum += w;
        CHECK(wsum == doctest::Approx(2.0).epsilon(1e-14));
        for (int deg = 0; deg <= 2 * n - 1; ++deg) {
            double s = 0;
            for (std::size_t i = 0; i < rule.size(); ++i) s += rule.w[i] * std::pow(rule.x[i], deg);
            double exact = (deg % 2 == 1) ? 0.0 : 2.0 / (deg + 1);
            CHECK(std::abs(s - exact) < 1e-13);
        }
    }
}

TEST_CASE("composite rule and panel edges") {
    std::vector<double> extra{0.25};
    auto edges = panel_edges(0.0, 1.0, 0.3, extra);
    CHECK(edges.front() == 0.0);
    CHECK(edges.back() == 1.0);
    bool has_break = false;
    for (std::size_t i = 1; i < edges.size(); ++i) {
        CHECK(edges[i] > edges[i - 1]);
        CHECK(edges[i] - edges[i - 1] <= 0.3 + 1e-15);
        if (edges[i] == 0.25) has_break = true;
    }
    CHECK(has_break);
    auto rule = composite_gauss_legendre(edges, 6);
    CHECK(rule.size() == 6 * (edges.size() - 1));
    double s = 0;
    for (std::size_t i = 0; i < rule.size(); ++i) s += rule.w[i] * std::exp(rule.x[i]);
    CHECK(std::abs(s - (std::exp(1.0) - 1.0)) < 1e-14);
}

}  // TEST_SUITE
