// SPDX-License-Identifier: Apache-2.0
#include "zakotfs/validate.hpp"

#include <chrono>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>

#include "zakotfs/channel.hpp"
#include "zakotfs/error.hpp"
#include "zakotfs/kernels.hpp"
#include "zakotfs/noise.hpp"
#include "zakotfs/oracle.hpp"

namespace zakotfs {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

constexpr double kExactTolerance = 1e-6;
// Large-grid approximation bars, per tap and per covariance entry.
constexpr double kApproxTapTolerance = 0.02;
constexpr double kApproxCovTolerance = 0.05;

std::vector<Combination> exact_combinations() {
    const auto g = FilterConfig::gaussian(kUnexpandedAlpha, kUnexpandedAlpha);
    const auto s = FilterConfig::sinc();
    return {{g, RxScheme::Identical}, {s, RxScheme::Matched},        {g, RxScheme::Matched},
            {s, RxScheme::ChannelMatched}, {g, RxScheme::ChannelMatched}};
}

QuadratureOptions oracle_quadrature() {
    QuadratureOptions q;
    q.rel_tol = 1e-11;
    q.abs_tol = 1e-16;
    q.max_subdivisions = 20000;
    return q;
}

std::string index_label(long k, long l) {
    std::ostringstream o;
    o << "k=" << k << " l=" << l;
    return o.str();
}

std::string entry_label(const DDGrid& g, int row, int col) {
    std::ostringstream o;
    o << "(" << g.delay_index(row) << ";" << g.doppler_index(row) << ")x(" << g.delay_index(col) << ";"
      << g.doppler_index(col) << ")";
    return o.str();
}

void heff_suite(const ValidationOptions& o, const DDGrid& grid, std::vector<ValidationCase>& out) {
    std::uniform_int_distribution<long> kd(-3, 5), ld(-4, 4);
    const auto quad = oracle_quadrature();
    int ci = 0;
    for (const auto& comb : exact_combinations()) {
        auto rng = make_rng(o.seed, 100 + static_cast<std::uint64_t>(ci++));
        for (int c = 0; c < o.cases; ++c) {
            const auto paths = veh_a_realization(o.nu_max, derive_seed(o.seed, static_cast<std::uint64_t>(ci), c));
            const long k = kd(rng), l = ld(rng);
            ValidationCase vc;
            vc.suite = "heff";
            vc.combination = to_string(comb);
            vc.indices = index_label(k, l);
            auto t0 = Clock::now();
            vc.closed_form = heff(comb, grid, paths, k, l);
            vc.closed_seconds = seconds_since(t0);
            t0 = Clock::now();
            vc.oracle = oracle::heff_numeric(comb, grid, paths, k, l, quad).value;
            vc.oracle_seconds = seconds_since(t0);
            vc.relative_error = std::abs(vc.closed_form - vc.oracle) / std::abs(vc.oracle);
            vc.tolerance = kExactTolerance;
            vc.passed = vc.relative_error <= vc.tolerance;
            out.push_back(vc);
        }
    }
    // Large-grid approximation against the remaining delay integral.
    auto rng = make_rng(o.seed, 199);
    const Combination approx{FilterConfig::sinc(), RxScheme::Identical};
    for (int c = 0; c < o.cases; ++c) {
        const auto paths = veh_a_realization(o.nu_max, derive_seed(o.seed, 99, c));
        const long k = kd(rng), l = ld(rng);
        ValidationCase vc;
        vc.suite = "heff-approx";
        vc.combination = to_string(approx);
        vc.indices = index_label(k, l);
        auto t0 = Clock::now();
        vc.closed_form = heff(approx, grid, paths, k, l);
        vc.closed_seconds = seconds_since(t0);
        t0 = Clock::now();
        vc.oracle = heff_sinc_identical_quadrature(grid, paths, k, l);
        vc.oracle_seconds = seconds_since(t0);
        vc.relative_error = std::abs(vc.closed_form - vc.oracle) / std::abs(vc.oracle);
        vc.tolerance = kApproxTapTolerance;
        vc.passed = vc.relative_error <= vc.tolerance;
        out.push_back(vc);
    }
}

// Entry errors are normalized by sqrt(C_aa C_bb), i.e. reported in units of
// the correlation coefficient, so near-zero off-diagonal entries stay meaningful.
void cov_suite(const ValidationOptions& o, const DDGrid& grid, std::vector<ValidationCase>& out) {
    const auto quad = oracle_quadrature();
    std::uniform_int_distribution<int> rd(0, grid.size() - 1), dd(-2, 2);
    int ci = 0;
    for (const auto& comb : exact_combinations()) {
        auto rng = make_rng(o.seed, 300 + static_cast<std::uint64_t>(ci++));
        const bool chm = comb.scheme == RxScheme::ChannelMatched;
        PathSet paths;
        CMatrix C;
        for (int c = 0; c < o.cases; ++c) {
            double closed_seconds = 0;
            if (chm || c == 0) {
                paths = chm ? veh_a_realization(o.nu_max, derive_seed(o.seed, 300 + static_cast<std::uint64_t>(ci), c))
                            : PathSet{};
                const auto t0 = Clock::now();
                C = cov_unit_matrix(comb, grid, paths);
                closed_seconds = seconds_since(t0);
            }
            const int row = rd(rng);
            const int k2 = static_cast<int>(wrap_index(grid.delay_index(row) + dd(rng), grid.M));
            const int l2 = static_cast<int>(wrap_index(grid.doppler_index(row) + dd(rng), grid.N));
            const int col = grid.flat(k2, l2);
            ValidationCase vc;
            vc.suite = "cov";
            vc.combination = to_string(comb);
            vc.indices = entry_label(grid, row, col);
            vc.closed_form = C(row, col);
            vc.closed_seconds = closed_seconds;
            const auto t0 = Clock::now();
            vc.oracle = oracle::cov_numeric(comb, grid, paths, 1.0, row, col, quad).value;
            vc.oracle_seconds = seconds_since(t0);
            const double scale = std::sqrt(C(row, row).real() * C(col, col).real());
            vc.relative_error = std::abs(vc.closed_form - vc.oracle) / scale;
            vc.tolerance = kExactTolerance;
            vc.passed = vc.relative_error <= vc.tolerance;
            out.push_back(vc);
        }
    }
    // Sinc identical: N0 I against the exact wrap sum.
    const CMatrix exact = cov_sinc_identical_exact(grid, 1.0).unit_matrix();
    const CMatrix approx = CMatrix::Identity(grid.size(), grid.size());
    Eigen::Index r = 0, c = 0;
    const double worst = (exact - approx).cwiseAbs().maxCoeff(&r, &c);
    ValidationCase vc;
    vc.suite = "cov-approx";
    vc.combination = "sinc/identical";
    vc.indices = "worst " + entry_label(grid, static_cast<int>(r), static_cast<int>(c));
    vc.closed_form = approx(r, c);
    vc.oracle = exact(r, c);
    vc.relative_error = worst;
    vc.tolerance = kApproxCovTolerance;
    vc.passed = worst <= vc.tolerance;
    out.push_back(vc);
}

void runtime_suite(const ValidationOptions& /*o*/, const DDGrid& grid, std::vector<ValidationCase>& out) {
    const auto quad = oracle_quadrature();
    for (const auto& comb : {Combination{FilterConfig::sinc(), RxScheme::Matched},
                             Combination{FilterConfig::gaussian(kUnexpandedAlpha, kUnexpandedAlpha), RxScheme::Matched}}) {
        double best = std::numeric_limits<double>::infinity();
        CMatrix C;
        for (int rep = 0; rep < 5; ++rep) {
            const auto t0 = Clock::now();
            C = cov_unit_matrix(comb, grid, {});
            best = std::min(best, seconds_since(t0));
        }
        const auto t0 = Clock::now();
        const CMatrix O = oracle::cov_numeric_matrix(comb, grid, {}, 1.0, quad);
        ValidationCase vc;
        vc.suite = "runtime";
        vc.combination = to_string(comb);
        vc.indices = "full matrix";
        vc.oracle_seconds = seconds_since(t0);
        vc.closed_seconds = best;
        vc.speedup = vc.oracle_seconds / best;
        Eigen::Index r = 0, c = 0;
        const double err = (C - O).cwiseAbs().maxCoeff(&r, &c);
        vc.closed_form = C(r, c);
        vc.oracle = O(r, c);
        vc.relative_error = err / C.cwiseAbs().maxCoeff();
        vc.tolerance = kExactTolerance;
        vc.passed = vc.relative_error <= vc.tolerance && vc.speedup >= 100.0;
        out.push_back(vc);
    }
}

}  // namespace

std::vector<ValidationCase> run_validation(const ValidationOptions& o) {
    if (o.cases < 1) throw InvalidParameter("validation needs at least one case");
    const auto grid = make_grid(o.M, o.N, o.nu_p);
    const bool all = o.subset == "all";
    if (!all && o.subset != "heff" && o.subset != "cov" && o.subset != "runtime")
        throw InvalidParameter("unknown validation subset '" + o.subset + "'");
    std::vector<ValidationCase> out;
    if (all || o.subset == "heff") heff_suite(o, grid, out);
    if (all || o.subset == "cov") cov_suite(o, grid, out);
    if (all || o.subset == "runtime") runtime_suite(o, grid, out);
    return out;
}

void write_validation_report(std::ostream& os, const std::vector<ValidationCase>& cases) {
    std::ostringstream b;
    b << std::setprecision(10)
      << "suite,combination,indices,closed_re,closed_im,oracle_re,oracle_im,relative_error,tolerance,"
         "closed_seconds,oracle_seconds,speedup,passed\n";
    int failed = 0;
    for (const auto& c : cases) {
        b << c.suite << ',' << c.combination << ',' << c.indices << ',' << c.closed_form.real() << ','
          << c.closed_form.imag() << ',' << c.oracle.real() << ',' << c.oracle.imag() << ',' << c.relative_error << ','
          << c.tolerance << ',' << c.closed_seconds << ',' << c.oracle_seconds << ',' << c.speedup << ','
          << (c.passed ? "yes" : "no") << '\n';
        failed += !c.passed;
    }
    b << "# " << cases.size() - static_cast<std::size_t>(failed) << " of " << cases.size() << " cases passed\n";
    os << b.str();
}

}  // namespace zakotfs
