// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "zakotfs/alphabet.hpp"
#include "zakotfs/grid.hpp"
#include "zakotfs/kernels.hpp"
#include "zakotfs/noise.hpp"

namespace zakotfs {

// y = H x + n on the vectorized frame, H[k'N + l', kN + l].
struct ChannelMatrix {
    CMatrix H;
    std::string provenance;
};

// Wrap count range used when folding the tap table onto one frame.
inline constexpr int kWrapRange = 2;

// Sums the taps over |n|, |m| <= kWrapRange delay/Doppler period wraps with
// the quasi-periodicity and twist phases. Throws WindowCoverageError when the
// table lacks a required tap.
ChannelMatrix build_H(const EffChannel& eff, const DDGrid& grid, std::string provenance = {});

// Discrete twisted convolution of the taps with the quasi-periodic extension
// of x, restricted to the same |n|, |m| <= kWrapRange periods. Reference for build_H.
CVector twisted_convolution_direct(const EffChannel& eff, const DDGrid& grid, const CVector& x);

struct MmseResult {
    CVector estimate;  // before slicing
    CVector symbols;   // nearest constellation points
    bool regularized = false;
};

// x_hat = H^H (H H^H + C / Es)^{-1} y, then nearest-point slicing.
class MmseDetector {
public:
    MmseDetector(const CMatrix& H, const CMatrix& gram, const CMatrix& noise_cov, double Es = 1.0);
    MmseDetector(const CMatrix& H, const CMatrix& noise_cov, double Es = 1.0);
    CVector equalize(const CVector& y) const;
    bool regularized() const noexcept { return regularized_; }

private:
    void factorize(CMatrix system);
    CMatrix Hh_;
    Eigen::LLT<CMatrix> llt_;
    bool regularized_ = false;
};

MmseResult mmse_detect(const CVector& y, const CMatrix& H, const NoiseCov& cov,
                       const Alphabet& alphabet);

struct Whitened {
    CVector y;
    CMatrix H;
};
// R^{-1} y and R^{-1} H by forward substitution with the Cholesky factor.
Whitened whiten(const CVector& y, const CMatrix& H, const NoiseCov& cov);

// Exhaustive search over A^{MN}; refuses more than kMaxHypotheses.
inline constexpr double kMaxHypotheses = 1048576.0;
double hypothesis_count(int frame_size, const Alphabet& alphabet);

class MlDetector {
public:
    // Precomputes the whitened channel. Throws SearchSpaceTooLarge.
    MlDetector(const CMatrix& H, const NoiseCov& cov, const Alphabet& alphabet);
    CVector detect(const CVector& y) const;
    // Same search on an already whitened system.
    static CVector search(const CVector& y_w, const CMatrix& H_w, const Alphabet& alphabet);

private:
    CMatrix Hw_;
    CMatrix R_;
    Alphabet alphabet_;
};

CVector ml_detect(const CVector& y, const CMatrix& H, const NoiseCov& cov,
                  const Alphabet& alphabet);

struct SnrSample {
    double tau_norm;  // k / M, delay in units of tau_p
    double snr_db;
};

// Pilot +1 at (0,0): SNR(k) = |h_eff[k, l1]|^2 / C[(k,l1),(k,l1)] for k in [0, M),
// l1 the Doppler row nearest nu_fixed.
std::vector<SnrSample> snr_profile(const EffChannel& eff, const NoiseCov& cov, double nu_fixed,
                                   const DDGrid& grid);
// Same ratio at a given Doppler row index.
std::vector<SnrSample> snr_profile_row(const EffChannel& eff, const NoiseCov& cov, long row,
                                       const DDGrid& grid);
long nearest_doppler_row(double nu, const DDGrid& grid);

// CSV `row,col,re,im` of the nonzero entries.
void write_matrix_csv(std::ostream& os, const CMatrix& A);

}  // namespace zakotfs
