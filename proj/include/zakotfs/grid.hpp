// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstddef>

#include <Eigen/Dense>

namespace zakotfs {

using cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

// Normalized cardinal sine, sin(pi x) / (pi x).
double sinc(double x);

// exp(j * 2 pi * x), reducing x modulo 1 first so large arguments keep precision.
cplx cis2pi(double x);

// Lattice geometry of one Zak-OTFS frame.
//
// M delay bins of width tau_p/M and N Doppler bins of width nu_p/N. The frame
// spans bandwidth B = M nu_p and duration T = N tau_p.
struct DDGrid {
    int M = 1;
    int N = 1;
    double nu_p = 1.0;   // Doppler period [Hz]
    double tau_p = 1.0;  // delay period [s]
    double B = 1.0;      // bandwidth [Hz]
    double T = 1.0;      // frame duration [s]

    int size() const noexcept { return M * N; }
    double delay_step() const noexcept { return tau_p / M; }
    double doppler_step() const noexcept { return nu_p / N; }

    // Flat frame index of DD bin (k, l), zero-based, row-major in k.
    int flat(int k, int l) const noexcept { return k * N + l; }
    int delay_index(int flat_index) const noexcept { return flat_index / N; }
    int doppler_index(int flat_index) const noexcept { return flat_index % N; }
};

DDGrid make_grid(int M, int N, double nu_p);

// Value of the quasi-periodic extension of a frame at any integer (k, l).
//
// x[k + nM, l + mN] = x[k, l] exp(j 2 pi n l / N).
cplx quasi_periodic_value(const CVector& frame, const DDGrid& grid, long k, long l);

// Floor division and non-negative remainder for lattice wrapping.
inline long floor_div(long a, long b) {
    long q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}
inline long wrap_index(long a, long b) { return a - floor_div(a, b) * b; }

}  // namespace zakotfs
