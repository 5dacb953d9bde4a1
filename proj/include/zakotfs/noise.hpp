// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>
#include <iosfwd>

#include "zakotfs/channel.hpp"
#include "zakotfs/filters.hpp"
#include "zakotfs/grid.hpp"

namespace zakotfs {

// Range of the period-wrap indices summed in the Gaussian covariances.
struct QRange {
    int q_lo = -20;
    int q_hi = 20;

    void validate() const;
    // The default range, widened until the squared time envelope
    // exp(-2 pi^2 t^2 / (a_nu T^2)) of the dropped wraps is below 1e-11.
    static QRange adequate(const DDGrid& grid, const FilterConfig& cfg);
};

// Covariance of the sampled, filtered noise on the MN lattice with its
// Cholesky factor. Stored per unit noise density so rescaling is exact.
class NoiseCov {
public:
    NoiseCov() = default;
    // `unit` is the covariance at N0 = 1. Factorizes at construction.
    NoiseCov(CMatrix unit, double N0);

    int dim() const noexcept { return static_cast<int>(unit_.rows()); }
    double N0() const noexcept { return N0_; }
    CMatrix matrix() const { return N0_ * unit_; }
    const CMatrix& unit_matrix() const noexcept { return unit_; }
    // Lower-triangular L with unit + jitter * I = L L^H.
    const CMatrix& unit_factor() const noexcept { return unit_factor_; }
    // R = sqrt(N0) L, so that C = R R^H.
    CMatrix factor() const { return std::sqrt(N0_) * unit_factor_; }
    // Diagonal loading added to the unit matrix before factorizing.
    double unit_jitter() const noexcept { return unit_jitter_; }
    bool is_scaled_identity() const noexcept { return identity_; }

    NoiseCov with_N0(double N0) const;

private:
    CMatrix unit_;
    CMatrix unit_factor_;
    double N0_ = 0.0;
    double unit_jitter_ = 0.0;
    bool identity_ = false;
};

// Hermitian part of the matrix, and PSD / symmetry diagnostics.
struct CovDiagnostics {
    double asymmetry;      // max|C - C^H| / max|C|
    double min_eigenvalue;
    double trace_per_dim;  // tr(C) / MN
};
CovDiagnostics diagnose(const CMatrix& C);

// Large-grid approximation N0 I for sinc pulses with identical filtering.
NoiseCov cov_sinc_identical(const DDGrid& grid, double N0);
// Same combination without the approximation. The wrap sums are handled by
// Poisson summation of the band-limited delay pulse, which collapses them to
// a finite sum over spectral replicas.
NoiseCov cov_sinc_identical_exact(const DDGrid& grid, double N0);
NoiseCov cov_gauss_identical(const DDGrid& grid, const FilterConfig& cfg, double N0,
                             const QRange& qr = {});
NoiseCov cov_sinc_matched(const DDGrid& grid, double N0);
NoiseCov cov_gauss_matched(const DDGrid& grid, const FilterConfig& cfg, double N0,
                           const QRange& qr = {});
NoiseCov cov_sinc_chmatched(const DDGrid& grid, const PathSet& paths, double N0);
NoiseCov cov_gauss_chmatched(const DDGrid& grid, const FilterConfig& cfg, const PathSet& paths,
                             double N0, const QRange& qr = {});

// Unit-density matrices without factorization, for callers that combine them.
CMatrix cov_unit_matrix(const Combination& comb, const DDGrid& grid, const PathSet& paths,
                        const QRange& qr = {});
// Channel-matched term for the ordered path pair (i, j), including h_i^* h_j.
CMatrix cov_chmatched_pair_unit(const FilterConfig& cfg, const DDGrid& grid, const Path& pi,
                                const Path& pj, const QRange& qr = {});

NoiseCov noise_covariance(const Combination& comb, const DDGrid& grid, const PathSet& paths,
                          double N0, const QRange& qr = {});

// n = R w with w ~ CN(0, I).
CVector sample_noise(const NoiseCov& cov, std::uint64_t seed);
// Columns are independent draws.
CMatrix sample_noise_batch(const NoiseCov& cov, std::uint64_t seed, int count);

// CSV `row,col,re,im` of the nonzero entries.
void write_csv(std::ostream& os, const CMatrix& C);

}  // namespace zakotfs
