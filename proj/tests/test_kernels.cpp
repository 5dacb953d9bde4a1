// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <vector>

#include "doctest.h"
#include "zakotfs/channel.hpp"
#include "zakotfs/error.hpp"
#include "zakotfs/kernels.hpp"
#include "zakotfs/oracle.hpp"

using namespace zakotfs;

namespace {

const FilterConfig kGauss = FilterConfig::gaussian(kUnexpandedAlpha, kUnexpandedAlpha);

std::vector<Combination> exact_combinations() {
    return {{FilterConfig::sinc(), RxScheme::Matched},
            {FilterConfig::sinc(), RxScheme::ChannelMatched},
            {kGauss, RxScheme::Identical},
            {kGauss, RxScheme::Matched},
            {kGauss, RxScheme::ChannelMatched}};
}

PathSet origin_path(cplx gain = 1.0) { return PathSet{{{gain, 0.0, 0.0}}}; }

double rel_err(cplx a, cplx b, double scale) { return std::abs(a - b) / scale; }

}  // namespace

TEST_SUITE("kernels") {

TEST_CASE("sinc matched kernel of a unit path at the origin is a lattice delta") {
    auto g = make_grid(4, 6, 1000.0);
    Combination c{FilterConfig::sinc(), RxScheme::Matched};
    for (long k = -4; k <= 4; ++k)
        for (long l = -6; l <= 6; ++l) {
            cplx v = heff(c, g, origin_path(), k, l);
            if (k == 0 && l == 0)
                CHECK(std::abs(v - 1.0) < 1e-15);
            else
                CHECK(std::abs(v) < 1e-15);
        }
}

TEST_CASE("Gaussian matched kernel is one at the origin for a unit path") {
    auto g = make_grid(4, 6, 1000.0);
    CHECK(std::abs(heff_gauss_matched(g, kGauss, origin_path(), 0, 0) - 1.0) < 1e-15);
    CHECK(std::abs(heff_gauss_matched(g, kGauss, origin_path(), 1, 0)) < 1.0);
}

TEST_CASE("closed forms agree with numerical integration of the filter cascade") {
    auto g = make_grid(12, 14, 15000.0);
    auto paths = veh_a_realization(815.0, 21);
    QuadratureOptions q;
    q.rel_tol = 1e-11;
    q.abs_tol = 1e-16;
    q.max_subdivisions = 20000;
    const std::vector<std::pair<long, long>> pts{{0, 0}, {1, -1}, {2, 1}, {-1, 2}, {4, -3}};
    for (const auto& comb : exact_combinations()) {
        CAPTURE(to_string(comb));
        double peak = 0;
        for (auto [k, l] : pts) peak = std::max(peak, std::abs(heff(comb, g, paths, k, l)));
        for (auto [k, l] : pts) {
            CAPTURE(k);
            CAPTURE(l);
            auto ref = oracle::heff_numeric(comb, g, paths, k, l, q);
            CHECK(rel_err(heff(comb, g, paths, k, l), ref.value, peak) < 1e-8);
        }
    }
}

TEST_CASE("Gaussian matched closed form agrees with the two-dimensional twisted convolution") {
    auto g = make_grid(4, 4, 4000.0);
    PathSet paths{{{cplx(0.8, 0.3), 0.3 * g.delay_step(), 0.2 * g.doppler_step()},
                   {cplx(-0.4, 0.5), 1.2 * g.delay_step(), -0.7 * g.doppler_step()}}};
    Combination c{kGauss, RxScheme::Matched};
    QuadratureOptions q;
    q.rel_tol = 1e-9;
    q.abs_tol = 1e-13;
    q.max_subdivisions = 20000;
    for (auto [k, l] : std::vector<std::pair<long, long>>{{0, 0}, {1, 0}, {1, -1}}) {
        auto ref = oracle::heff_numeric_2d(c, g, paths, k, l, q);
        CHECK(std::abs(heff(c, g, paths, k, l) - ref.value) < 1e-7);
    }
}

TEST_CASE("sinc identical large-grid form stays near its exact delay integral") {
    auto g = make_grid(12, 14, 15000.0);
    auto paths = veh_a_realization(815.0, 4);
    TapWindow w{-2, 6, -3, 3};
    auto exact = heff_table_sinc_identical_quadrature(g, paths, w);
    Combination c{FilterConfig::sinc(), RxScheme::Identical};
    auto approx = heff_table(c, g, paths, w);
    double peak = exact.max_abs();
    double worst = 0;
    for (long k = w.k_min; k <= w.k_max; ++k)
        for (long l = w.l_min; l <= w.l_max; ++l) worst = std::max(worst, std::abs(exact.get(k, l) - approx.get(k, l)));
    // An approximation: small against the peak, not exact.
    CHECK(worst / peak < 0.05);
    CHECK(worst / peak > 1e-6);
    CHECK(std::abs(exact.get(1, 2) - heff_sinc_identical_quadrature(g, paths, 1, 2)) < 1e-13);
}

TEST_CASE("linear schemes scale with the gain, channel-matched scales with its square magnitude") {
    auto g = make_grid(6, 8, 5000.0);
    auto paths = veh_a_realization(600.0, 8);
    const cplx c(0.6, -1.3);
    auto scaled = paths.scaled(c);
    for (const auto& comb : exact_combinations()) {
        cplx base = heff(comb, g, paths, 1, -1);
        cplx v = heff(comb, g, scaled, 1, -1);
        cplx expect = comb.scheme == RxScheme::ChannelMatched ? std::norm(c) * base : c * base;
        CHECK(std::abs(v - expect) < 1e-13 * std::max(1.0, std::abs(expect)));
    }
}

TEST_CASE("cross channel-matched kernel reduces to the ordinary one for equal path sets") {
    auto g = make_grid(6, 8, 5000.0);
    auto paths = veh_a_realization(600.0, 12);
    for (const auto& f : {FilterConfig::sinc(), kGauss}) {
        Combination c{f, RxScheme::ChannelMatched};
        for (long k = -1; k <= 2; ++k)
            CHECK(std::abs(heff_chmatched_cross(f, g, paths, paths, k, 1) - heff(c, g, paths, k, 1)) < 1e-14);
    }
    auto est = apply_csi_error(paths, {0.01}, 3);
    CHECK_NOTHROW(heff_chmatched_cross(kGauss, g, est, paths, 0, 0));
    PathSet moved = est;
    moved.paths[0].delay += 1e-7;
    CHECK_THROWS_AS(heff_chmatched_cross(kGauss, g, moved, paths, 0, 0), InvalidParameter);
}

TEST_CASE("single path on the large grid peaks at the nearest lattice point") {
    auto g = make_grid(32, 32, 15000.0);
    PathSet p{{{1.0, 0.2 * g.tau_p, -0.25 * g.nu_p}}};
    for (const auto& comb : std::vector<Combination>{{FilterConfig::sinc(), RxScheme::Matched},
                                                     {kGauss, RxScheme::Matched}}) {
        auto eff = heff_table(comb, g, p, {0, 31, -16, 15});
        long bk = 0, bl = 0;
        double best = -1;
        for (long k = 0; k <= 31; ++k)
            for (long l = -16; l <= 15; ++l)
                if (std::abs(eff.get(k, l)) > best) {
                    best = std::abs(eff.get(k, l));
                    bk = k;
                    bl = l;
                }
        CHECK(bk == 6);
        CHECK(bl == -8);
    }
}

TEST_CASE("tap table window handling") {
    EffChannel e(-1, 1, -2, 2);
    CHECK(e.k_span() == 3);
    CHECK(e.l_span() == 5);
    e.ref(1, -2) = 3.0;
    CHECK(e.at(1, -2) == cplx(3.0));
    CHECK_THROWS_AS(e.at(2, 0), WindowCoverageError);
    CHECK_THROWS_AS(e.ref(0, 3), WindowCoverageError);
    EffChannel f(-1, 1, -2, 3);
    CHECK_THROWS_AS(e += f, InvalidParameter);
    CHECK((e * 2.0).max_abs() == doctest::Approx(6.0));
    CHECK_THROWS_AS(EffChannel(1, 0, 0, 0), InvalidParameter);
}

TEST_CASE("Gaussian kernels reject a sinc filter") {
    auto g = make_grid(2, 2, 1000.0);
    CHECK_THROWS_AS(heff_gauss_matched(g, FilterConfig::sinc(), origin_path(), 0, 0), InvalidParameter);
}

}  // TEST_SUITE
