// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <vector>

#include "zakotfs/channel.hpp"
#include "zakotfs/filters.hpp"
#include "zakotfs/grid.hpp"

namespace zakotfs {

// Effective-channel taps for one (Tx filter, Rx scheme) pair, sampled at
// (k tau_p / M, l nu_p / N).

// Sinc pulses, identical Rx filter. Large-grid approximation.
cplx heff_sinc_identical(const DDGrid& grid, const PathSet& paths, long k, long l);
cplx heff_gauss_identical(const DDGrid& grid, const FilterConfig& cfg, const PathSet& paths,
                          long k, long l);
cplx heff_sinc_matched(const DDGrid& grid, const PathSet& paths, long k, long l);
cplx heff_gauss_matched(const DDGrid& grid, const FilterConfig& cfg, const PathSet& paths,
                        long k, long l);
cplx heff_sinc_chmatched(const DDGrid& grid, const PathSet& paths, long k, long l);
cplx heff_gauss_chmatched(const DDGrid& grid, const FilterConfig& cfg, const PathSet& paths,
                          long k, long l);

cplx heff(const Combination& comb, const DDGrid& grid, const PathSet& paths, long k, long l);

// Rectangular table of taps over [k_min, k_max] x [l_min, l_max].
class EffChannel {
public:
    EffChannel() = default;
    EffChannel(long k_min, long k_max, long l_min, long l_max);

    long k_min() const noexcept { return k_min_; }
    long k_max() const noexcept { return k_max_; }
    long l_min() const noexcept { return l_min_; }
    long l_max() const noexcept { return l_max_; }
    bool covers(long k, long l) const noexcept {
        return k >= k_min_ && k <= k_max_ && l >= l_min_ && l <= l_max_;
    }
    // Throws WindowCoverageError outside the window.
    cplx at(long k, long l) const;
    cplx& ref(long k, long l);
    // Fast unchecked access for callers that already validated the window.
    cplx get(long k, long l) const noexcept {
        return taps_[static_cast<std::size_t>((k - k_min_) * l_span_ + (l - l_min_))];
    }
    long k_span() const noexcept { return k_max_ - k_min_ + 1; }
    long l_span() const noexcept { return l_span_; }
    double max_abs() const;

    EffChannel& operator+=(const EffChannel& other);
    EffChannel operator*(cplx c) const;

private:
    long k_min_ = 0, k_max_ = -1, l_min_ = 0, l_max_ = -1;
    long l_span_ = 0;
    std::vector<cplx> taps_;
};

// Minimum window that serves the channel-matrix wrap sum: |k| <= 3M-1, |l| <= 3N-1.
struct TapWindow {
    long k_min, k_max, l_min, l_max;
};
TapWindow default_tap_window(const DDGrid& grid);

EffChannel heff_table(const Combination& comb, const DDGrid& grid, const PathSet& paths);
EffChannel heff_table(const Combination& comb, const DDGrid& grid, const PathSet& paths,
                      const TapWindow& window);

// Sinc pulses, identical Rx filter, evaluated without the large-grid
// approximation: the remaining one-dimensional delay integral over
// [-T, T] is done with composite Gauss-Legendre panels of width 1/B.
EffChannel heff_table_sinc_identical_quadrature(const DDGrid& grid, const PathSet& paths,
                                                const TapWindow& window, int points_per_panel = 12);
cplx heff_sinc_identical_quadrature(const DDGrid& grid, const PathSet& paths, long k, long l,
                                    int points_per_panel = 12);

// CSV `k,l,re,im`.
void write_csv(std::ostream& os, const EffChannel& eff);

}  // namespace zakotfs

namespace zakotfs {

// Channel-matched taps when the Rx filter is built from `rx_paths` while the
// signal passes through `ch_paths` (same geometry, different gains), as with
// imperfect channel knowledge. Equal sets give the ordinary channel-matched taps.
cplx heff_chmatched_cross(const FilterConfig& cfg, const DDGrid& grid, const PathSet& rx_paths,
                          const PathSet& ch_paths, long k, long l);
EffChannel heff_table_chmatched_cross(const FilterConfig& cfg, const DDGrid& grid,
                                      const PathSet& rx_paths, const PathSet& ch_paths,
                                      const TapWindow& window);

}  // namespace zakotfs
