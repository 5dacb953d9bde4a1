// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "zakotfs/alphabet.hpp"
#include "zakotfs/channel.hpp"
#include "zakotfs/error.hpp"
#include "zakotfs/kernels.hpp"
#include "zakotfs/linsys.hpp"
#include "zakotfs/noise.hpp"

using namespace zakotfs;

namespace {

const FilterConfig kGauss = FilterConfig::gaussian(kUnexpandedAlpha, kUnexpandedAlpha);

CVector random_frame(int n, std::uint64_t seed, const Alphabet& a) {
    auto rng = make_rng(seed);
    std::uniform_int_distribution<int> pick(0, a.size() - 1);
    CVector x(n);
    for (int i = 0; i < n; ++i) x[i] = a.points()[static_cast<std::size_t>(pick(rng))];
    return x;
}

CMatrix random_matrix(int r, int c, std::uint64_t seed) {
    auto rng = make_rng(seed);
    CMatrix A(r, c);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j) A(i, j) = complex_normal(rng, 1.0);
    return A;
}

// All hypotheses in lexicographic order, last symbol fastest; first minimizer wins.
CVector brute_force_ml(const CVector& y, const CMatrix& H, const CMatrix& C, const Alphabet& a) {
    const int n = static_cast<int>(H.cols());
    Eigen::PartialPivLU<CMatrix> lu(C);
    std::vector<int> idx(static_cast<std::size_t>(n), 0);
    double best = std::numeric_limits<double>::infinity();
    CVector arg(n), x(n);
    while (true) {
        for (int i = 0; i < n; ++i) x[i] = a.points()[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])];
        CVector r = y - H * x;
        double m = (r.adjoint() * lu.solve(r))(0, 0).real();
        if (m < best) {
            best = m;
            arg = x;
        }
        int pos = n - 1;
        while (pos >= 0 && ++idx[static_cast<std::size_t>(pos)] == a.size()) idx[static_cast<std::size_t>(pos--)] = 0;
        if (pos < 0) break;
    }
    return arg;
}

}  // namespace

TEST_SUITE("linsys") {

TEST_CASE("unit origin path gives the identity channel matrix") {
    auto g = make_grid(4, 5, 1000.0);
    PathSet one{{{1.0, 0.0, 0.0}}};
    for (const auto& f : {FilterConfig::sinc()}) {
        for (auto s : {RxScheme::Matched, RxScheme::ChannelMatched}) {
            auto H = build_H(heff_table({f, s}, g, one), g, "unit").H;
            CHECK((H - CMatrix::Identity(20, 20)).cwiseAbs().maxCoeff() < 1e-14);
        }
    }
}

TEST_CASE("channel matrix equals direct twisted convolution of quasi-periodic frames") {
    auto g = make_grid(3, 4, 2000.0);
    auto paths = veh_a_realization(300.0, 17);
    auto a = Alphabet::qam8();
    for (const auto& comb : std::vector<Combination>{{FilterConfig::sinc(), RxScheme::Matched},
                                                     {kGauss, RxScheme::ChannelMatched}}) {
        auto eff = heff_table(comb, g, paths);
        auto H = build_H(eff, g).H;
        for (std::uint64_t s = 0; s < 5; ++s) {
            auto x = random_frame(g.size(), s, a);
            CVector y = H * x, d = twisted_convolution_direct(eff, g, x);
            CHECK((y - d).cwiseAbs().maxCoeff() < 1e-10 * std::max(1.0, d.cwiseAbs().maxCoeff()));
        }
    }
}

TEST_CASE("tap window smaller than the wrap range is rejected") {
    auto g = make_grid(3, 4, 2000.0);
    EffChannel small(-2, 2, -2, 2);
    CHECK_THROWS_AS(build_H(small, g), WindowCoverageError);
}

TEST_CASE("MMSE on an identity channel with white noise shrinks by Es/(Es+N0)") {
    CMatrix H = CMatrix::Identity(4, 4);
    CMatrix C = 0.25 * CMatrix::Identity(4, 4);
    MmseDetector det(H, C);
    CVector y(4);
    y << cplx(1, 0), cplx(-1, 0), cplx(0.5, 0.5), cplx(0, -2);
    CHECK((det.equalize(y) - y / 1.25).norm() < 1e-14);
    CHECK_FALSE(det.regularized());
}

TEST_CASE("MMSE recovers symbols at negligible noise and matches the explicit formula") {
    const int n = 6;
    CMatrix H = random_matrix(n, n, 4);
    CMatrix A = random_matrix(n, n, 5);
    CMatrix C = 0.1 * (A * A.adjoint() + CMatrix::Identity(n, n));
    CVector y = random_matrix(n, 1, 6);
    MmseDetector det(H, C);
    CVector expect = H.adjoint() * (H * H.adjoint() + C).ldlt().solve(y);
    CHECK((det.equalize(y) - expect).norm() < 1e-10);

    auto a = Alphabet::bpsk();
    auto x = random_frame(n, 7, a);
    NoiseCov cov(C / 0.1, 1e-12);
    auto r = mmse_detect(H * x, H, cov, a);
    CHECK((r.symbols - x).norm() < 1e-12);
}

TEST_CASE("whitening turns the Mahalanobis norm into a Euclidean norm") {
    const int n = 5;
    CMatrix A = random_matrix(n, n, 8);
    CMatrix U = A * A.adjoint() + 0.5 * CMatrix::Identity(n, n);
    NoiseCov cov(U, 0.3);
    CVector y = random_matrix(n, 1, 9);
    CMatrix H = random_matrix(n, 3, 10);
    auto w = whiten(y, H, cov);
    CMatrix C = cov.matrix();
    double maha = (y.adjoint() * C.ldlt().solve(y))(0, 0).real();
    CHECK(w.y.squaredNorm() == doctest::Approx(maha).epsilon(1e-11));
    // H is whitened by the same operator as y.
    CVector x = random_matrix(3, 1, 11);
    auto wx = whiten(H * x, H, cov);
    CHECK((wx.y - w.H * x).norm() < 1e-11);

    NoiseCov white(CMatrix::Identity(n, n), 4.0);
    auto ww = whiten(y, H, white);
    CHECK((ww.y - y / 2.0).norm() < 1e-15);
    CHECK_THROWS_AS(whiten(y, H, white.with_N0(0.0)), NumericalError);
}

TEST_CASE("ML detection equals brute-force Mahalanobis minimization") {
    auto g = make_grid(2, 2, 3750.0);
    for (const auto& alpha : {Alphabet::bpsk(), Alphabet::qam8()}) {
        for (std::uint64_t s = 0; s < 6; ++s) {
            CMatrix H = random_matrix(4, 4, 100 + s);
            CMatrix A = random_matrix(4, 4, 200 + s);
            CMatrix U = A * A.adjoint() + 0.2 * CMatrix::Identity(4, 4);
            NoiseCov cov(U, 0.5);
            auto x = random_frame(4, 300 + s, alpha);
            CVector y = H * x + cov.factor() * random_matrix(4, 1, 400 + s);
            CVector ml = ml_detect(y, H, cov, alpha);
            CVector bf = brute_force_ml(y, H, cov.matrix(), alpha);
            CHECK((ml - bf).norm() < 1e-12);
        }
    }
    (void)g;
}

TEST_CASE("ML ties resolve to the lexicographically first hypothesis") {
    auto a = Alphabet::bpsk();
    CMatrix H = CMatrix::Zero(3, 3);
    NoiseCov cov(CMatrix::Identity(3, 3), 1.0);
    CVector y = CVector::Ones(3);
    CVector d = ml_detect(y, H, cov, a);
    for (int i = 0; i < 3; ++i) CHECK(d[i] == a.points()[0]);
}

TEST_CASE("ML error rate is no worse than MMSE on a hard channel") {
    const int n = 4;
    auto a = Alphabet::bpsk();
    long ml_err = 0, mmse_err = 0;
    for (std::uint64_t s = 0; s < 400; ++s) {
        CMatrix H = random_matrix(n, n, 1000 + s);
        NoiseCov cov(CMatrix::Identity(n, n), 0.5);
        auto x = random_frame(n, 2000 + s, a);
        CVector y = H * x + cov.factor() * random_matrix(n, 1, 3000 + s);
        ml_err += (ml_detect(y, H, cov, a) - x).cwiseAbs().cast<double>().sum() > 0.5 ? 1 : 0;
        mmse_err += (mmse_detect(y, H, cov, a).symbols - x).cwiseAbs().sum() > 0.5 ? 1 : 0;
    }
    CHECK(ml_err <= mmse_err);
}

TEST_CASE("exhaustive search refuses oversized frames") {
    auto a = Alphabet::bpsk();
    CHECK(hypothesis_count(20, a) == doctest::Approx(1048576.0));
    CMatrix H = CMatrix::Identity(168, 168);
    NoiseCov cov(CMatrix::Identity(168, 168), 1.0);
    CHECK_THROWS_AS(MlDetector(H, cov, a), SearchSpaceTooLarge);
    try {
        MlDetector det(H, cov, a);
    } catch (const SearchSpaceTooLarge& e) {
        CHECK(e.hypotheses() > 1e50);
    }
}

TEST_CASE("SNR profile scales with noise density and follows the Doppler row") {
    auto g = make_grid(6, 8, 5000.0);
    PathSet p{{{1.0, 2.0 * g.delay_step(), -1.0 * g.doppler_step()}}};
    auto eff = heff_table({FilterConfig::sinc(), RxScheme::Matched}, g, p);
    auto cov = cov_sinc_matched(g, 1.0);
    CHECK(nearest_doppler_row(-1.0 * g.doppler_step(), g) == -1);
    CHECK(nearest_doppler_row(0.4 * g.doppler_step(), g) == 0);
    auto prof = snr_profile(eff, cov, -g.doppler_step(), g);
    REQUIRE(prof.size() == 6);
    CHECK(prof[2].tau_norm == doctest::Approx(2.0 / 6.0));
    // On-lattice path: only the finite time and band windows reduce the tap.
    const double window = (1.0 - 2.0 / 48.0) * (1.0 - 1.0 / 48.0);
    CHECK(prof[2].snr_db == doctest::Approx(20.0 * std::log10(window)).epsilon(1e-9));
    auto loud = snr_profile(eff, cov.with_N0(0.1), -g.doppler_step(), g);
    CHECK(loud[2].snr_db - prof[2].snr_db == doctest::Approx(10.0).epsilon(1e-9));
}

TEST_CASE("sparse matrix CSV lists nonzero entries") {
    CMatrix A = CMatrix::Zero(2, 2);
    A(1, 0) = cplx(0.5, -1);
    std::ostringstream os;
    write_matrix_csv(os, A);
    CHECK(os.str() == "row,col,re,im\n1,0,0.5,-1\n");
}

}  // TEST_SUITE
