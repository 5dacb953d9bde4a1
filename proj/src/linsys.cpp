// SPDX-License-Identifier: Apache-2.0
#include "zakotfs/linsys.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#include "zakotfs/error.hpp"

namespace zakotfs {

namespace {

// exp(j 2 pi num / den) with the numerator reduced exactly.
cplx lattice_phase(long num, long den) { return cis2pi(static_cast<double>(wrap_index(num, den)) / den); }

void require_window(const EffChannel& eff, const DDGrid& g) {
    const long kr = (kWrapRange + 1L) * g.M - 1, lr = (kWrapRange + 1L) * g.N - 1;
    if (!eff.covers(-kr, -lr) || !eff.covers(kr, lr)) {
        std::ostringstream m;
        m << "tap table [" << eff.k_min() << ',' << eff.k_max() << "]x[" << eff.l_min() << ',' << eff.l_max()
          << "] does not cover |k|<=" << kr << ", |l|<=" << lr;
        throw WindowCoverageError(m.str());
    }
}

[[noreturn]] void throw_search_space(double count) {
    std::ostringstream m;
    m << "exhaustive search over " << count << " hypotheses exceeds the limit of " << kMaxHypotheses;
    throw SearchSpaceTooLarge(count, m.str());
}

}  // namespace

ChannelMatrix build_H(const EffChannel& eff, const DDGrid& grid, std::string provenance) {
    require_window(eff, grid);
    const long M = grid.M, N = grid.N, MN = M * N;
    ChannelMatrix out{CMatrix::Zero(grid.size(), grid.size()), std::move(provenance)};
    for (long k = 0; k < M; ++k)
        for (long l = 0; l < N; ++l) {
            const int col = grid.flat(static_cast<int>(k), static_cast<int>(l));
            for (long kp = 0; kp < M; ++kp)
                for (long lp = 0; lp < N; ++lp) {
                    cplx s{};
                    for (long n = -kWrapRange; n <= kWrapRange; ++n) {
                        const long dk = kp - k - n * M;
                        const long kk = k + n * M;
                        for (long m = -kWrapRange; m <= kWrapRange; ++m) {
                            const long dl = lp - l - m * N;
                            // e^{j2pi n l/N} e^{j2pi dl (k+nM)/MN} combined over the common denominator MN.
                            s += eff.get(dk, dl) * lattice_phase(n * l * M + dl * kk, MN);
                        }
                    }
                    out.H(grid.flat(static_cast<int>(kp), static_cast<int>(lp)), col) = s;
                }
        }
    return out;
}

CVector twisted_convolution_direct(const EffChannel& eff, const DDGrid& grid, const CVector& x) {
    require_window(eff, grid);
    if (x.size() != grid.size()) throw InvalidParameter("frame size does not match the grid");
    const long M = grid.M, N = grid.N, MN = M * N;
    CVector y = CVector::Zero(grid.size());
    for (long k = 0; k < M; ++k)
        for (long l = 0; l < N; ++l) {
            cplx s{};
            for (long ki = -kWrapRange * M; ki < (kWrapRange + 1) * M; ++ki)
                for (long li = -kWrapRange * N; li < (kWrapRange + 1) * N; ++li)
                    s += eff.at(k - ki, l - li) * quasi_periodic_value(x, grid, ki, li) * lattice_phase(ki * (l - li), MN);
            y(grid.flat(static_cast<int>(k), static_cast<int>(l))) = s;
        }
    return y;
}

MmseDetector::MmseDetector(const CMatrix& H, const CMatrix& gram, const CMatrix& noise_cov, double Es) : Hh_(H.adjoint()) {
    if (!(Es > 0.0)) throw InvalidParameter("symbol energy must be positive");
    if (gram.rows() != H.rows() || noise_cov.rows() != H.rows()) throw InvalidParameter("dimension mismatch");
    factorize(gram + noise_cov / Es);
}

MmseDetector::MmseDetector(const CMatrix& H, const CMatrix& noise_cov, double Es)
    : MmseDetector(H, CMatrix(H * H.adjoint()), noise_cov, Es) {}

void MmseDetector::factorize(CMatrix system) {
    llt_.compute(system);
    if (llt_.info() == Eigen::Success) return;
    const double n = static_cast<double>(system.rows());
    const double scale = std::max(system.diagonal().real().sum() / n, std::numeric_limits<double>::min());
    for (double eps = 1e-12 * scale; eps <= scale; eps *= 10.0) {
        CMatrix loaded = system;
        loaded.diagonal().array() += eps;
        llt_.compute(loaded);
        if (llt_.info() == Eigen::Success) {
            regularized_ = true;
            return;
        }
    }
    throw NumericalError("MMSE system could not be factorized");
}

CVector MmseDetector::equalize(const CVector& y) const { return Hh_ * llt_.solve(y); }

MmseResult mmse_detect(const CVector& y, const CMatrix& H, const NoiseCov& cov, const Alphabet& alphabet) {
    MmseDetector det(H, cov.matrix(), alphabet.mean_energy());
    MmseResult r;
    r.estimate = det.equalize(y);
    r.symbols = slice_symbols(r.estimate, alphabet);
    r.regularized = det.regularized();
    return r;
}

Whitened whiten(const CVector& y, const CMatrix& H, const NoiseCov& cov) {
    if (!(cov.N0() > 0.0)) throw NumericalError("whitening needs N0 > 0");
    if (y.size() != cov.dim() || H.rows() != cov.dim()) throw InvalidParameter("dimension mismatch");
    const double s = 1.0 / std::sqrt(cov.N0());
    if (cov.is_scaled_identity()) return {s * y, s * H};
    const auto L = cov.unit_factor().triangularView<Eigen::Lower>();
    if (cov.unit_factor().diagonal().cwiseAbs().minCoeff() == 0.0) throw NumericalError("singular Cholesky factor");
    return {s * L.solve(y), s * L.solve(H)};
}

double hypothesis_count(int frame_size, const Alphabet& alphabet) {
    return std::pow(static_cast<double>(alphabet.size()), frame_size);
}

MlDetector::MlDetector(const CMatrix& H, const NoiseCov& cov, const Alphabet& alphabet) : alphabet_(alphabet) {
    const double count = hypothesis_count(static_cast<int>(H.cols()), alphabet);
    if (count > kMaxHypotheses) throw_search_space(count);
    // The argmin of |L^{-1}(y - Hx)| does not depend on N0, so whiten at unit density.
    R_ = cov.unit_factor();
    if (cov.is_scaled_identity())
        Hw_ = H;
    else
        Hw_ = R_.triangularView<Eigen::Lower>().solve(H);
}

CVector MlDetector::detect(const CVector& y) const {
    const CVector yw = R_.rows() && !R_.isIdentity(0.0) ? CVector(R_.triangularView<Eigen::Lower>().solve(y)) : y;
    return search(yw, Hw_, alphabet_);
}

CVector MlDetector::search(const CVector& y_w, const CMatrix& H_w, const Alphabet& alphabet) {
    const int n = static_cast<int>(H_w.cols());
    const double count = hypothesis_count(n, alphabet);
    if (count > kMaxHypotheses) throw_search_space(count);
    const auto& pts = alphabet.points();
    const int A = alphabet.size();
    std::vector<int> digit(static_cast<std::size_t>(n), 0);
    auto residual_of = [&] {
        CVector x(n);
        for (int i = 0; i < n; ++i) x(i) = pts[static_cast<std::size_t>(digit[static_cast<std::size_t>(i)])];
        return CVector(y_w - H_w * x);
    };
    // Lexicographic order with the last symbol varying fastest; the strict
    // comparison keeps the earliest, i.e. smallest, of tied hypotheses.
    CVector r = residual_of();
    double best = r.squaredNorm();
    std::vector<int> best_digit = digit;
    const int refresh_from = std::max(0, n - 4);
    for (;;) {
        int pos = n - 1;
        while (pos >= 0 && digit[static_cast<std::size_t>(pos)] == A - 1) --pos;
        if (pos < 0) break;
        for (int i = pos + 1; i < n; ++i) digit[static_cast<std::size_t>(i)] = 0;
        ++digit[static_cast<std::size_t>(pos)];
        if (pos < refresh_from) {
            r = residual_of();
        } else {
            // Digits pos+1.. rolled from A-1 to 0, digit pos advanced by one.
            r -= H_w.col(pos) * (pts[static_cast<std::size_t>(digit[static_cast<std::size_t>(pos)])] -
                                 pts[static_cast<std::size_t>(digit[static_cast<std::size_t>(pos)] - 1)]);
            for (int i = pos + 1; i < n; ++i) r -= H_w.col(i) * (pts[0] - pts[static_cast<std::size_t>(A - 1)]);
        }
        const double metric = r.squaredNorm();
        if (metric < best) {
            best = metric;
            best_digit = digit;
        }
    }
    CVector x(n);
    for (int i = 0; i < n; ++i) x(i) = pts[static_cast<std::size_t>(best_digit[static_cast<std::size_t>(i)])];
    return x;
}

CVector ml_detect(const CVector& y, const CMatrix& H, const NoiseCov& cov, const Alphabet& alphabet) {
    return MlDetector(H, cov, alphabet).detect(y);
}

long nearest_doppler_row(double nu, const DDGrid& grid) {
    return std::lround(nu / grid.doppler_step());
}

std::vector<SnrSample> snr_profile_row(const EffChannel& eff, const NoiseCov& cov, long row, const DDGrid& grid) {
    std::vector<SnrSample> out;
    const CMatrix& U = cov.unit_matrix();
    const int l = static_cast<int>(wrap_index(row, grid.N));
    for (int k = 0; k < grid.M; ++k) {
        const double signal = std::norm(eff.at(k, row));
        const double noise = cov.N0() * U(grid.flat(k, l), grid.flat(k, l)).real();
        const double snr = noise > 0.0 ? 10.0 * std::log10(signal / noise) : std::numeric_limits<double>::infinity();
        out.push_back({static_cast<double>(k) / grid.M, snr});
    }
    return out;
}

std::vector<SnrSample> snr_profile(const EffChannel& eff, const NoiseCov& cov, double nu_fixed, const DDGrid& grid) {
    return snr_profile_row(eff, cov, nearest_doppler_row(nu_fixed, grid), grid);
}

void write_matrix_csv(std::ostream& os, const CMatrix& A) {
    std::ostringstream buf;
    buf << std::setprecision(17) << "row,col,re,im\n";
    for (Eigen::Index i = 0; i < A.rows(); ++i)
        for (Eigen::Index j = 0; j < A.cols(); ++j)
            if (A(i, j) != cplx{}) buf << i << ',' << j << ',' << A(i, j).real() << ',' << A(i, j).imag() << '\n';
    os << buf.str();
}

}  // namespace zakotfs
