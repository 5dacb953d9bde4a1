// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "zakotfs/filters.hpp"
#include "zakotfs/grid.hpp"

namespace zakotfs {

struct Spectrum {
    std::vector<double> f;    // [Hz], strictly increasing
    std::vector<cplx> X;
    std::vector<double> psd;  // |X|^2
};

// `points` samples evenly spaced on [-span_factor B, span_factor B].
std::vector<double> default_frequency_grid(const DDGrid& grid, int points = 4096,
                                           double span_factor = 2.0);

// Spectrum of the Tx-filtered frame. For each frequency the Doppler-pulse
// replicas are summed over `m_range` periods either side of the replica
// nearest to it.
Spectrum tx_spectrum(const CVector& frame, const FilterConfig& cfg, const DDGrid& grid,
                     std::span<const double> f_grid, int m_range = 4);

// Energy fraction outside (-B/2, B/2) by the trapezoidal rule. Throws
// CoverageError when the outer 1% of the grid carries more than 1e-4 of the energy
// or the grid does not reach past the band edges.
double oob_leakage(const Spectrum& spec, double B);

// CSV `f_hz,psd_db`, normalized so the peak is 0 dB.
void write_csv(std::ostream& os, const Spectrum& spec);

}  // namespace zakotfs
