// SPDX-License-Identifier: Apache-2.0
#include <cmath>

#include "doctest.h"
#include "zakotfs/channel.hpp"
#include "zakotfs/error.hpp"
#include "zakotfs/oracle.hpp"

using namespace zakotfs;
using namespace zakotfs::oracle;

namespace {
const FilterConfig kGauss = FilterConfig::gaussian(kUnexpandedAlpha, kUnexpandedAlpha);
}

TEST_SUITE("oracle") {

TEST_CASE("Gaussian pulse product integral has the analytic value") {
    auto g = make_grid(4, 4, 2000.0);
    const double a = 0.3 * g.delay_step(), b = -0.5 * g.delay_step(), f = 0.4 * g.B;
    auto r = pulse_product_integral(kGauss, g, Axis::Delay, a, b, f);
    const double A = kGauss.alpha_tau * g.B * g.B;
    const double c = 0.5 * (a + b);
    cplx expect = std::exp(-0.5 * A * (a - b) * (a - b) - kPi * kPi * f * f / (2.0 * A)) * cis2pi(-f * c);
    CHECK(std::abs(r.value - expect) < 1e-12);
}

TEST_CASE("sinc pulse product integral at zero frequency is a sinc of the offset") {
    auto g = make_grid(4, 4, 2000.0);
    const double a = 0.3 * g.delay_step(), b = -1.1 * g.delay_step();
    auto r = pulse_product_integral(FilterConfig::sinc(), g, Axis::Delay, a, b, 0.0);
    CHECK(std::abs(r.value - sinc(g.B * (a - b))) < 1e-10);
    // Out-of-band frequency: the two spectra do not overlap.
    auto z = pulse_product_integral(FilterConfig::sinc(), g, Axis::Delay, a, b, 1.5 * g.B);
    CHECK(std::abs(z.value) < 1e-10);
}

TEST_CASE("twisted convolution with a unit impulse at the origin is the identity") {
    auto f = DDOperand::function([](double t, double n) { return cplx(std::exp(-t * t - n * n), t); }, -6, 6, -6, 6);
    auto delta = DDOperand::impulse_sum(PathSet{{{1.0, 0.0, 0.0}}});
    for (auto [t, n] : std::vector<std::pair<double, double>>{{0.1, 0.2}, {-1.0, 0.5}}) {
        auto r = twisted_convolve_point(delta, f, t, n);
        CHECK(std::abs(r.value - f(t, n)) < 1e-12);
    }
}

TEST_CASE("twisted convolution with a shifted impulse applies the delay-Doppler twist") {
    auto f = DDOperand::function([](double t, double n) { return cplx(std::exp(-t * t - n * n), 0.0); }, -8, 8, -8, 8);
    const double tau0 = 0.3, nu0 = 0.7;
    auto h = DDOperand::impulse_sum(PathSet{{{1.0, tau0, nu0}}});
    const double t = 0.5, n = -0.2;
    auto r = twisted_convolve_point(h, f, t, n);
    cplx expect = f(t - tau0, n - nu0) * cis2pi(nu0 * (t - tau0));
    CHECK(std::abs(r.value - expect) < 1e-12);
}

TEST_CASE("twisted convolution of two smooth Gaussians at the origin") {
    // Inner Doppler integral gives exp(-pi t^2 / 2) / sqrt(2); the remaining delay integral is 1/sqrt(5).
    auto gauss = [](double t, double n) { return cplx(std::exp(-kPi * (t * t + n * n)), 0.0); };
    auto a = DDOperand::function(gauss, -6, 6, -6, 6);
    auto b = DDOperand::function(gauss, -6, 6, -6, 6);
    QuadratureOptions q;
    q.rel_tol = 1e-10;
    auto r = twisted_convolve_point(a, b, 0.0, 0.0, q);
    CHECK(std::abs(r.value - 1.0 / std::sqrt(5.0)) < 1e-9);
}

TEST_CASE("nested one-dimensional and direct two-dimensional integrations agree") {
    auto g = make_grid(4, 4, 4000.0);
    PathSet paths{{{cplx(0.7, 0.1), 0.4 * g.delay_step(), 0.3 * g.doppler_step()}}};
    Combination c{kGauss, RxScheme::Identical};
    QuadratureOptions q;
    q.rel_tol = 1e-9;
    q.abs_tol = 1e-13;
    q.max_subdivisions = 20000;
    auto a = heff_numeric(c, g, paths, 1, 0, q);
    auto b = heff_numeric_2d(c, g, paths, 1, 0, q);
    CHECK(std::abs(a.value - b.value) < 1e-7);
}

TEST_CASE("entrywise covariance oracle matches the full-matrix oracle") {
    auto g = make_grid(2, 3, 3000.0);
    Combination c{FilterConfig::sinc(), RxScheme::Matched};
    QuadratureOptions q;
    q.rel_tol = 1e-10;
    q.abs_tol = 1e-16;
    q.max_subdivisions = 20000;
    auto full = cov_numeric_matrix(c, g, {}, 1.0, q);
    for (auto [r, col] : std::vector<std::pair<int, int>>{{0, 0}, {1, 4}, {5, 2}}) {
        auto e = cov_numeric(c, g, {}, 1.0, r, col, q);
        CHECK(std::abs(e.value - full(r, col)) < 1e-9);
    }
    CHECK((full - full.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("Monte Carlo estimator standard error shrinks with draws") {
    auto g = make_grid(2, 2, 3000.0);
    Combination c{kGauss, RxScheme::Matched};
    auto G = filtered_noise_map(c, g, {}, 2.0 * g.tau_p, 6);
    Eigen::MatrixXd s1, s2;
    monte_carlo_covariance(G, 1.0, 2000, 1, &s1);
    monte_carlo_covariance(G, 1.0, 8000, 1, &s2);
    CHECK(s2(0, 0) < 0.7 * s1(0, 0));
    CHECK_THROWS_AS(filtered_noise_map({FilterConfig::sinc(), RxScheme::Identical}, g, {}, g.tau_p),
                    InvalidParameter);
}

}  // TEST_SUITE
