// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <vector>

#include "zakotfs/channel.hpp"
#include "zakotfs/filters.hpp"
#include "zakotfs/grid.hpp"
#include "zakotfs/quadrature.hpp"

namespace zakotfs::oracle {

// A DD-domain operand: either a smooth function with a finite integration
// window, or a finite sum of weighted impulses h delta(tau - tau0) delta(nu - nu0).
struct DDOperand {
    std::function<cplx(double, double)> smooth;
    std::vector<Path> impulses;
    double tau_lo = 0, tau_hi = 0, nu_lo = 0, nu_hi = 0;
    // Optional interior breakpoints for the smooth integrand.
    std::vector<double> tau_breaks, nu_breaks;

    static DDOperand function(std::function<cplx(double, double)> f, double tau_lo, double tau_hi,
                              double nu_lo, double nu_hi);
    static DDOperand impulse_sum(const PathSet& paths);
    bool is_impulsive() const noexcept { return !impulses.empty(); }
    cplx operator()(double tau, double nu) const;
};

// (a *_s b)(tau, nu) = int int a(t', v') b(tau - t', nu - v') exp(j 2 pi v' (tau - t')) dt' dv'
// Impulse operands are applied by sifting; two smooth operands use nested
// adaptive quadrature over a's window (outer delay, inner Doppler).
QuadratureResult twisted_convolve_point(const DDOperand& a, const DDOperand& b, double tau,
                                        double nu, const QuadratureOptions& quad = {});

// int w(x - a) w(x - b) exp(-j 2 pi f x) dx for the delay pulse (Axis::Delay)
// or the Doppler pulse (Axis::Doppler). Gaussian pulses are integrated
// directly; sinc pulses through their band-limited transforms, where the
// integrand has finite support.
enum class Axis { Delay, Doppler };
QuadratureResult pulse_product_integral(const FilterConfig& cfg, const DDGrid& grid, Axis axis,
                                        double a, double b, double f,
                                        const QuadratureOptions& quad = {});

// h_eff at (k tau_p/M, l nu_p/N) from the cascade integrals, for any combination.
QuadratureResult heff_numeric(const Combination& comb, const DDGrid& grid, const PathSet& paths,
                              long k, long l, const QuadratureOptions& quad = {});
// Gaussian pulses only: the full two-dimensional twisted convolution of the
// Rx filter with the channel-filtered Tx pulse.
QuadratureResult heff_numeric_2d(const Combination& comb, const DDGrid& grid,
                                 const PathSet& paths, long k, long l,
                                 const QuadratureOptions& quad = {});

// One covariance entry E[n(row) n(col)^*] from the filtered-noise integrals.
// Not available for sinc pulses with identical filtering (see below).
QuadratureResult cov_numeric(const Combination& comb, const DDGrid& grid, const PathSet& paths,
                             double N0, int row, int col, const QuadratureOptions& quad = {});
// Full matrix, entry by entry (upper triangle, mirrored).
CMatrix cov_numeric_matrix(const Combination& comb, const DDGrid& grid, const PathSet& paths,
                           double N0, const QuadratureOptions& quad = {});
// Sinc pulses, identical filtering: the wrap sums converge only conditionally,
// so they are truncated symmetrically at |q| <= q_max and the time integral is
// taken on a composite Gauss-Legendre grid.
CMatrix cov_numeric_sinc_identical(const DDGrid& grid, double N0, int q_max = 400,
                                   int points_per_panel = 12);

// Discretized filtered-noise map: rows are lattice samples, columns are
// white-noise time nodes scaled by sqrt(weight). n = G w with w ~ CN(0, N0 I)
// has covariance N0 G G^H.
CMatrix filtered_noise_map(const Combination& comb, const DDGrid& grid, const PathSet& paths,
                           double tail_span, int points_per_width = 8);
// Empirical covariance of `draws` filtered-noise samples; also fills the
// per-entry standard error of the estimator if `stderr_out` is given.
CMatrix monte_carlo_covariance(const CMatrix& noise_map, double N0, int draws, std::uint64_t seed,
                               Eigen::MatrixXd* stderr_out = nullptr);

}  // namespace zakotfs::oracle
