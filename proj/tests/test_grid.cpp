// SPDX-License-Identifier: Apache-2.0
#include <random>

#include "doctest.h"
#include "zakotfs/alphabet.hpp"
#include "zakotfs/error.hpp"
#include "zakotfs/grid.hpp"

using namespace zakotfs;

TEST_SUITE("grid") {

TEST_CASE("make_grid derives periods, bandwidth and duration") {
    auto g = make_grid(12, 14, 15000.0);
    CHECK(g.tau_p == doctest::Approx(66.666666666e-6).epsilon(1e-9));
    CHECK(g.B == doctest::Approx(180e3));
    CHECK(g.T == doctest::Approx(0.933333333e-3).epsilon(1e-8));
    CHECK(std::abs(g.B * g.tau_p - 12.0) < 1e-12);
    CHECK(std::abs(g.T * g.nu_p - 14.0) < 1e-12);

    auto u = make_grid(1, 1, 1.0);
    CHECK(u.tau_p == 1.0);
    CHECK(u.B == 1.0);
    CHECK(u.T == 1.0);

    auto s = make_grid(2, 2, 3750.0);
    CHECK(s.tau_p == doctest::Approx(266.666666e-6).epsilon(1e-8));
    CHECK(s.B == doctest::Approx(7500.0));
    CHECK(s.T == doctest::Approx(533.333333e-6).epsilon(1e-8));
}

TEST_CASE("make_grid rejects non-positive inputs") {
    CHECK_THROWS_AS(make_grid(0, 4, 1.0), InvalidParameter);
    CHECK_THROWS_AS(make_grid(4, -1, 1.0), InvalidParameter);
    CHECK_THROWS_AS(make_grid(4, 4, 0.0), InvalidParameter);
}

TEST_CASE("flat index round trip") {
    auto g = make_grid(5, 7, 1000.0);
    for (int k = 0; k < g.M; ++k)
        for (int l = 0; l < g.N; ++l) {
            int f = g.flat(k, l);
            CHECK(f == k * 7 + l);
            CHECK(g.delay_index(f) == k);
            CHECK(g.doppler_index(f) == l);
        }
}

TEST_CASE("sinc normalization and small-argument branch") {
    CHECK(sinc(0.0) == 1.0);
    CHECK(std::abs(sinc(1.0)) < 1e-16);
    CHECK(std::abs(sinc(-3.0)) < 1e-16);
    CHECK(sinc(0.5) == doctest::Approx(2.0 / kPi).epsilon(1e-15));
    // Continuity across the series threshold.
    double x = 1e-6;
    CHECK(sinc(x * 0.999) == doctest::Approx(std::sin(kPi * x) / (kPi * x)).epsilon(1e-14));
}

TEST_CASE("quasi-periodic extension") {
    auto g = make_grid(2, 2, 1.0);
    CVector x = CVector::Zero(4);
    x[g.flat(0, 0)] = 1.0;
    CHECK(quasi_periodic_value(x, g, 0, 0) == cplx(1.0, 0.0));
    CHECK(quasi_periodic_value(x, g, 2, 0) == cplx(1.0, 0.0));

    x.setZero();
    x[g.flat(0, 1)] = 1.0;
    cplx v = quasi_periodic_value(x, g, 2, 1);
    CHECK(std::abs(v - cplx(-1.0, 0.0)) < 1e-15);
    // Doppler wraps carry no phase.
    CHECK(std::abs(quasi_periodic_value(x, g, 0, 3) - cplx(1.0, 0.0)) < 1e-15);
    // Negative wrap: n = -1 at l = 1 gives exp(-j pi) = -1.
    CHECK(std::abs(quasi_periodic_value(x, g, -2, 1) - cplx(-1.0, 0.0)) < 1e-15);
}

TEST_CASE("quasi-periodic phase accumulates over repeated wraps") {
    auto g = make_grid(3, 4, 1.0);
    std::mt19937_64 rng(3);
    std::normal_distribution<double> n01;
    CVector x(12);
    for (auto& v : x) v = {n01(rng), n01(rng)};
    for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 4; ++l)
            for (int n = -5; n <= 5; ++n) {
                cplx expect = x[g.flat(k, l)];
                for (int s = 0; s < std::abs(n); ++s)
                    expect *= std::exp(cplx(0, (n > 0 ? 1 : -1) * kTwoPi * l / 4.0));
                cplx got = quasi_periodic_value(x, g, k + n * 3, l + 4 * (n % 2));
                CHECK(std::abs(got - expect) < 1e-12);
            }
}

TEST_CASE("alphabets have unit energy and bijective labels") {
    for (const auto& a : {Alphabet::bpsk(), Alphabet::qam8()}) {
        CHECK(std::abs(a.mean_energy() - 1.0) < 1e-12);
        std::vector<int> seen(static_cast<std::size_t>(a.size()), 0);
        for (int i = 0; i < a.size(); ++i) seen[a.label(i)]++;
        for (int c : seen) CHECK(c == 1);
    }
    CHECK(Alphabet::qam8().bits_per_symbol() == 3);
    CHECK(Alphabet::bpsk().bits_per_symbol() == 1);
}

TEST_CASE("bpsk mapping convention") {
    std::vector<std::uint8_t> bits(8, 0);
    auto x = map_bits(bits, Alphabet::bpsk());
    for (auto v : x) CHECK(v == cplx(1.0, 0.0));
    bits[3] = 1;
    x = map_bits(bits, Alphabet::bpsk());
    CHECK(x[3] == cplx(-1.0, 0.0));
}

TEST_CASE("8-QAM layout is a Gray-labeled 2x4 rectangle") {
    auto a = Alphabet::qam8();
    // Rectangular grid {-3,-1,1,3} x {-1,1} scaled by 1/sqrt(6).
    double s = 1.0 / std::sqrt(6.0);
    for (const auto& p : a.points()) {
        double i = p.real() / s, q = p.imag() / s;
        CHECK(std::abs(std::abs(q) - 1.0) < 1e-12);
        CHECK((std::abs(std::abs(i) - 1.0) < 1e-12 || std::abs(std::abs(i) - 3.0) < 1e-12));
    }
    CHECK(a.min_distance() == doctest::Approx(2.0 * s));
    // Nearest neighbours differ in exactly one bit.
    for (int i = 0; i < a.size(); ++i)
        for (int j = 0; j < a.size(); ++j) {
            if (i == j) continue;
            if (std::abs(std::abs(a.points()[i] - a.points()[j]) - a.min_distance()) < 1e-12)
                CHECK(__builtin_popcount(a.label(i) ^ a.label(j)) == 1);
        }
}

TEST_CASE("map and demap round trip, and slicing of perturbed points") {
    std::mt19937_64 rng(11);
    for (const auto& a : {Alphabet::bpsk(), Alphabet::qam8()}) {
        std::vector<std::uint8_t> bits(static_cast<std::size_t>(24 * a.bits_per_symbol()));
        for (auto& b : bits) b = static_cast<std::uint8_t>(rng() & 1u);
        auto x = map_bits(bits, a);
        CHECK(x.size() == 24);
        CHECK(demap_symbols(x, a) == bits);

        std::uniform_real_distribution<double> ang(0, kTwoPi);
        CVector pert = x;
        for (auto& v : pert) v += std::polar(0.49 * a.min_distance(), ang(rng));
        CHECK(demap_symbols(pert, a) == bits);
    }
}

TEST_CASE("bit-length mismatch is rejected") {
    std::vector<std::uint8_t> bits(7, 0);
    CHECK_THROWS_AS(map_bits(bits, Alphabet::qam8()), InvalidParameter);
    CHECK_THROWS_AS(Alphabet::from_name("16qam"), InvalidParameter);
}

}  // TEST_SUITE
