// SPDX-License-Identifier: Apache-2.0
#include "zakotfs/noise.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "zakotfs/error.hpp"

namespace zakotfs {

void QRange::validate() const {
    if (q_lo > q_hi) throw InvalidParameter("QRange needs q_lo <= q_hi");
}

QRange QRange::adequate(const DDGrid& grid, const FilterConfig& cfg) {
    QRange r;
    if (!cfg.is_gaussian()) return r;
    // Terms dropped at |q| > edge carry the squared envelope exp(-2 pi^2 q^2 / (a N^2)).
    const double edge = grid.N * std::sqrt(cfg.alpha_nu * std::log(1e11) / 2.0) / kPi;
    const int q = std::max(20, static_cast<int>(std::ceil(edge)));
    return {-q, q};
}

NoiseCov::NoiseCov(CMatrix unit, double N0) : unit_(std::move(unit)), N0_(N0) {
    if (!(N0 >= 0.0) || !std::isfinite(N0)) throw InvalidParameter("N0 must be non-negative");
    if (unit_.rows() != unit_.cols() || unit_.rows() == 0) throw InvalidParameter("covariance must be square");
    const auto n = unit_.rows();
    identity_ = unit_.isIdentity(0.0);
    if (identity_) {
        unit_factor_ = CMatrix::Identity(n, n);
        return;
    }
    const double scale = unit_.diagonal().real().sum() / static_cast<double>(n);
    if (!(scale > 0.0)) {
        if (unit_.isZero(0.0)) {
            unit_factor_ = CMatrix::Zero(n, n);
            return;
        }
        throw NumericalError("covariance has non-positive trace");
    }
    Eigen::LLT<CMatrix> llt(unit_);
    if (llt.info() == Eigen::Success) {
        unit_factor_ = llt.matrixL();
        return;
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> es(unit_, Eigen::EigenvaluesOnly);
    const double min_eig = es.eigenvalues().minCoeff();
    if (min_eig < -1e-9 * scale) {
        std::ostringstream m;
        m << "covariance is not PSD: min eigenvalue " << min_eig << " vs trace/MN " << scale;
        throw NumericalError(m.str());
    }
    for (double eps = 1e-12 * scale; eps <= 1e-9 * scale * (1 + 1e-12); eps *= 10.0) {
        CMatrix loaded = unit_;
        loaded.diagonal().array() += eps;
        Eigen::LLT<CMatrix> l2(loaded);
        if (l2.info() == Eigen::Success) {
            unit_jitter_ = eps;
            unit_factor_ = l2.matrixL();
            return;
        }
    }
    throw NumericalError("Cholesky factorization failed after diagonal loading");
}

NoiseCov NoiseCov::with_N0(double N0) const {
    if (!(N0 >= 0.0) || !std::isfinite(N0)) throw InvalidParameter("N0 must be non-negative");
    NoiseCov c = *this;
    c.N0_ = N0;
    return c;
}

CovDiagnostics diagnose(const CMatrix& C) {
    CovDiagnostics d{};
    const double mx = C.cwiseAbs().maxCoeff();
    d.asymmetry = mx > 0 ? (C - C.adjoint()).cwiseAbs().maxCoeff() / mx : 0.0;
    CMatrix H = 0.5 * (C + CMatrix(C.adjoint()));
    Eigen::SelfAdjointEigenSolver<CMatrix> es(H, Eigen::EigenvaluesOnly);
    d.min_eigenvalue = es.eigenvalues().minCoeff();
    d.trace_per_dim = C.diagonal().real().sum() / static_cast<double>(C.rows());
    return d;
}

namespace {

// Time instant t(k, q) = (k/M + q) tau_p of wrap q of delay bin k.
double wrap_time(const DDGrid& g, int k, int q) { return (static_cast<double>(k) / g.M + q) * g.tau_p; }

using TimeKernel = std::function<cplx(double t1, double t2)>;

// C[(k1,l1),(k2,l2)] = pref * sum_{q1,q2} exp(j 2 pi (q2 l2 - q1 l1)/N) K(t(k1,q1), t(k2,q2)),
// computed per delay-bin block as F K F^H with F[l, q] = exp(-j 2 pi q l / N).
// `wraps(k)` lists the q values contributing for delay bin k. A Hermitian
// kernel, K(t2, t1) = conj K(t1, t2), fills only k1 <= k2 and mirrors.
CMatrix assemble(const DDGrid& g, const std::function<std::vector<int>(int)>& wraps, const TimeKernel& kernel,
                 double pref, bool hermitian = true) {
    const int M = g.M, N = g.N;
    CMatrix C = CMatrix::Zero(g.size(), g.size());
    std::vector<std::vector<int>> qs(static_cast<std::size_t>(M));
    std::vector<CMatrix> F(static_cast<std::size_t>(M));
    for (int k = 0; k < M; ++k) {
        qs[static_cast<std::size_t>(k)] = wraps(k);
        const auto& q = qs[static_cast<std::size_t>(k)];
        CMatrix f(N, static_cast<Eigen::Index>(q.size()));
        for (int l = 0; l < N; ++l)
            for (std::size_t j = 0; j < q.size(); ++j)
                f(l, static_cast<Eigen::Index>(j)) =
                    cis2pi(-static_cast<double>(wrap_index(static_cast<long>(q[j]) * l, N)) / N);
        F[static_cast<std::size_t>(k)] = std::move(f);
    }
    for (int k1 = 0; k1 < M; ++k1)
        for (int k2 = hermitian ? k1 : 0; k2 < M; ++k2) {
            const auto& q1 = qs[static_cast<std::size_t>(k1)];
            const auto& q2 = qs[static_cast<std::size_t>(k2)];
            if (q1.empty() || q2.empty()) continue;
            CMatrix K(static_cast<Eigen::Index>(q1.size()), static_cast<Eigen::Index>(q2.size()));
            for (std::size_t a = 0; a < q1.size(); ++a)
                for (std::size_t b = 0; b < q2.size(); ++b)
                    K(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
                        kernel(wrap_time(g, k1, q1[a]), wrap_time(g, k2, q2[b]));
            CMatrix blk = pref * (F[static_cast<std::size_t>(k1)] * K * F[static_cast<std::size_t>(k2)].adjoint());
            if (hermitian && k1 == k2) blk = 0.5 * (blk + CMatrix(blk.adjoint()));
            C.block(k1 * N, k2 * N, N, N) = blk;
            if (hermitian && k1 != k2) C.block(k2 * N, k1 * N, N, N) = blk.adjoint();
        }
    return C;
}

std::function<std::vector<int>(int)> range_wraps(const QRange& qr) {
    qr.validate();
    return [qr](int) {
        std::vector<int> v;
        for (int q = qr.q_lo; q <= qr.q_hi; ++q) v.push_back(q);
        return v;
    };
}

// Wraps whose instant lies inside the frame, |t| <= T/2.
std::function<std::vector<int>(int)> frame_wraps(const DDGrid& g) {
    return [g](int k) {
        std::vector<int> v;
        const long MN = static_cast<long>(g.M) * g.N;
        const int qmax = g.N + 1;
        for (int q = -qmax; q <= qmax; ++q) {
            long a = k + static_cast<long>(q) * g.M;  // t = a tau_p / M
            if (2 * std::abs(a) <= MN) v.push_back(q);
        }
        return v;
    };
}

// rect(t/T) on the discrete instants, exact at the edge.
double frame_weight(const DDGrid& g, double t) {
    const double a = t / g.tau_p * g.M;  // integer-valued up to rounding
    const double A = std::round(a);
    const double MN = static_cast<double>(g.M) * g.N;
    if (2 * std::abs(A) < MN) return 1.0;
    if (2 * std::abs(A) == MN) return 0.5;
    return 0.0;
}

void require_gaussian(const FilterConfig& cfg) {
    if (!cfg.is_gaussian()) throw InvalidParameter("Gaussian covariance needs a Gaussian filter");
    cfg.validate();
}

// Channel-matched time kernels for one ordered path pair (i, j), gains included.
TimeKernel sinc_chmatched_kernel(const DDGrid& g, const Path& pi, const Path& pj) {
    const double tij = pi.delay - pj.delay, nij = pi.doppler - pj.doppler;
    if (!(std::abs(nij) < g.B)) return [](double, double) { return cplx{}; };
    const double bw = g.B - std::abs(nij);
    const double nsum = pi.doppler + pj.doppler;
    const cplx gains = std::conj(pi.gain) * pj.gain * (bw / g.B);
    const double nui = pi.doppler, nuj = pj.doppler;
    return [=](double t1, double t2) -> cplx {
        const double w = frame_weight(g, t1) * frame_weight(g, t2);
        if (w == 0.0) return 0.0;
        const double d = tij - (t2 - t1);
        return w * gains * cis2pi(nuj * t2 - nui * t1 + 0.5 * nsum * d) * sinc(bw * d);
    };
}

TimeKernel gauss_chmatched_kernel(const DDGrid& g, const FilterConfig& cfg, const Path& pi, const Path& pj) {
    const double a = cfg.alpha_tau * g.B * g.B, b = cfg.alpha_nu * g.T * g.T;
    const double tij = pi.delay - pj.delay, nij = pi.doppler - pj.doppler;
    const double nsum = pi.doppler + pj.doppler;
    const cplx gains = std::conj(pi.gain) * pj.gain * std::exp(-kPi * kPi * nij * nij / (2.0 * a));
    const double nui = pi.doppler, nuj = pj.doppler;
    return [=](double t1, double t2) -> cplx {
        const double d = tij - (t2 - t1);
        const double e = kPi * kPi * (t1 * t1 + t2 * t2) / b + 0.5 * a * d * d;
        if (e > 80.0) return 0.0;
        return gains * std::exp(-e) * cis2pi(nuj * t2 - nui * t1 + 0.5 * nsum * d);
    };
}

double chmatched_prefactor(const DDGrid& g, const FilterConfig& cfg) {
    return cfg.is_gaussian() ? g.tau_p / g.T * std::sqrt(2.0 * kPi / cfg.alpha_nu) : g.tau_p / g.T;
}

std::function<std::vector<int>(int)> chmatched_wraps(const DDGrid& g, const FilterConfig& cfg, const QRange& qr) {
    return cfg.is_gaussian() ? range_wraps(qr) : frame_wraps(g);
}

CMatrix unit_sinc_matched(const DDGrid& g) {
    auto kern = [g](double t1, double t2) -> cplx {
        return frame_weight(g, t1) * frame_weight(g, t2) * sinc(g.B * (t2 - t1));
    };
    return assemble(g, frame_wraps(g), kern, g.tau_p / g.T);
}

CMatrix unit_gauss_matched(const DDGrid& g, const FilterConfig& cfg, const QRange& qr) {
    const double a = cfg.alpha_tau * g.B * g.B, b = cfg.alpha_nu * g.T * g.T;
    auto kern = [=](double t1, double t2) -> cplx {
        const double z = t2 - t1;
        const double e = kPi * kPi * (t1 * t1 + t2 * t2) / b + 0.5 * a * z * z;
        return e > 80.0 ? 0.0 : std::exp(-e);
    };
    return assemble(g, range_wraps(qr), kern, g.tau_p / g.T * std::sqrt(2.0 * kPi / cfg.alpha_nu));
}

CMatrix unit_gauss_identical(const DDGrid& g, const FilterConfig& cfg, const QRange& qr) {
    const double a = cfg.alpha_tau * g.B * g.B;
    const double den = 2.0 * a + 2.0 * kPi * kPi / (cfg.alpha_nu * g.T * g.T);
    const double cross = 2.0 * kPi * kPi * a / (cfg.alpha_nu * g.T * g.T);
    auto kern = [=](double t1, double t2) -> cplx {
        const double z = t2 - t1;
        const double e = (a * a * z * z + cross * (t1 * t1 + t2 * t2)) / den;
        return e > 80.0 ? 0.0 : std::exp(-e);
    };
    const double pref = 2.0 * g.B * g.tau_p / g.T *
                        std::sqrt(kPi * cfg.alpha_tau /
                                  (2.0 * cfg.alpha_tau * cfg.alpha_nu * g.B * g.B + 2.0 * kPi * kPi / (g.T * g.T)));
    return assemble(g, range_wraps(qr), kern, pref);
}

CMatrix unit_sinc_identical_exact(const DDGrid& g) {
    const int M = g.M, N = g.N;
    CMatrix C = CMatrix::Zero(g.size(), g.size());
    for (int l = 0; l < N; ++l) {
        // Spectral replicas (l/N + n) nu_p inside the band |f| <= B/2, half
        // weight (squared) on the band edge.
        std::vector<std::pair<long, double>> reps;  // numerator l + nN over N, weight
        const long lim = static_cast<long>(M) * N;
        for (long n = -M - 1; n <= M + 1; ++n) {
            const long num = l + n * N;
            const long twice = 2 * std::abs(num);
            if (twice < lim)
                reps.emplace_back(num, 1.0);
            else if (twice == lim)
                reps.emplace_back(num, 0.25);
        }
        for (int k1 = 0; k1 < M; ++k1)
            for (int k2 = 0; k2 < M; ++k2) {
                cplx s{};
                const long dk = k1 - k2;
                const long period = static_cast<long>(M) * N;
                for (const auto& [num, w] : reps) s += w * cis2pi(static_cast<double>(wrap_index(num * dk, period)) / period);
                C(g.flat(k1, l), g.flat(k2, l)) = s / static_cast<double>(M);
            }
    }
    return 0.5 * (C + CMatrix(C.adjoint()));
}

}  // namespace

NoiseCov cov_sinc_identical(const DDGrid& grid, double N0) {
    return NoiseCov(CMatrix::Identity(grid.size(), grid.size()), N0);
}

NoiseCov cov_sinc_identical_exact(const DDGrid& grid, double N0) { return NoiseCov(unit_sinc_identical_exact(grid), N0); }

NoiseCov cov_gauss_identical(const DDGrid& grid, const FilterConfig& cfg, double N0, const QRange& qr) {
    require_gaussian(cfg);
    return NoiseCov(unit_gauss_identical(grid, cfg, qr), N0);
}

NoiseCov cov_sinc_matched(const DDGrid& grid, double N0) { return NoiseCov(unit_sinc_matched(grid), N0); }

NoiseCov cov_gauss_matched(const DDGrid& grid, const FilterConfig& cfg, double N0, const QRange& qr) {
    require_gaussian(cfg);
    return NoiseCov(unit_gauss_matched(grid, cfg, qr), N0);
}

CMatrix cov_chmatched_pair_unit(const FilterConfig& cfg, const DDGrid& grid, const Path& pi, const Path& pj,
                                const QRange& qr) {
    if (cfg.is_gaussian()) require_gaussian(cfg);
    const TimeKernel k = cfg.is_gaussian() ? gauss_chmatched_kernel(grid, cfg, pi, pj) : sinc_chmatched_kernel(grid, pi, pj);
    return assemble(grid, chmatched_wraps(grid, cfg, qr), k, chmatched_prefactor(grid, cfg), false);
}

namespace {

// Sum over all ordered pairs inside one kernel, which is then Hermitian.
CMatrix unit_chmatched(const FilterConfig& cfg, const DDGrid& grid, const PathSet& paths, const QRange& qr) {
    paths.validate();
    std::vector<TimeKernel> terms;
    for (const auto& pi : paths.paths)
        for (const auto& pj : paths.paths)
            terms.push_back(cfg.is_gaussian() ? gauss_chmatched_kernel(grid, cfg, pi, pj)
                                              : sinc_chmatched_kernel(grid, pi, pj));
    auto kern = [&terms](double t1, double t2) {
        cplx s{};
        for (const auto& t : terms) s += t(t1, t2);
        return s;
    };
    return assemble(grid, chmatched_wraps(grid, cfg, qr), kern, chmatched_prefactor(grid, cfg));
}

}  // namespace

NoiseCov cov_sinc_chmatched(const DDGrid& grid, const PathSet& paths, double N0) {
    return NoiseCov(unit_chmatched(FilterConfig::sinc(), grid, paths, {}), N0);
}

NoiseCov cov_gauss_chmatched(const DDGrid& grid, const FilterConfig& cfg, const PathSet& paths, double N0,
                             const QRange& qr) {
    require_gaussian(cfg);
    return NoiseCov(unit_chmatched(cfg, grid, paths, qr), N0);
}

CMatrix cov_unit_matrix(const Combination& comb, const DDGrid& grid, const PathSet& paths, const QRange& qr) {
    const bool gauss = comb.filter.is_gaussian();
    if (gauss) require_gaussian(comb.filter);
    switch (comb.scheme) {
        case RxScheme::Identical:
            return gauss ? unit_gauss_identical(grid, comb.filter, qr) : CMatrix::Identity(grid.size(), grid.size());
        case RxScheme::Matched:
            return gauss ? unit_gauss_matched(grid, comb.filter, qr) : unit_sinc_matched(grid);
        case RxScheme::ChannelMatched:
            return unit_chmatched(comb.filter, grid, paths, qr);
    }
    return {};
}

NoiseCov noise_covariance(const Combination& comb, const DDGrid& grid, const PathSet& paths, double N0,
                          const QRange& qr) {
    return NoiseCov(cov_unit_matrix(comb, grid, paths, qr), N0);
}

CVector sample_noise(const NoiseCov& cov, std::uint64_t seed) { return sample_noise_batch(cov, seed, 1).col(0); }

CMatrix sample_noise_batch(const NoiseCov& cov, std::uint64_t seed, int count) {
    auto rng = make_rng(seed, 0x9015e);
    const auto n = cov.dim();
    CMatrix W(n, count);
    for (int j = 0; j < count; ++j)
        for (Eigen::Index i = 0; i < n; ++i) W(i, j) = complex_normal(rng, 1.0);
    if (cov.is_scaled_identity()) return std::sqrt(cov.N0()) * W;
    CMatrix out = cov.unit_factor().triangularView<Eigen::Lower>() * W;
    return std::sqrt(cov.N0()) * out;
}

void write_csv(std::ostream& os, const CMatrix& C) {
    std::ostringstream buf;
    buf << std::setprecision(17) << "row,col,re,im\n";
    for (Eigen::Index i = 0; i < C.rows(); ++i)
        for (Eigen::Index j = 0; j < C.cols(); ++j)
            if (C(i, j) != cplx{}) buf << i << ',' << j << ',' << C(i, j).real() << ',' << C(i, j).imag() << '\n';
    os << buf.str();
}

}  // namespace zakotfs
