// SPDX-License-Identifier: Apache-2.0
#include "zakotfs/grid.hpp"

#include <cmath>

#include "zakotfs/error.hpp"

namespace zakotfs {

double sinc(double x) {
    double px = kPi * x;
    if (std::abs(x) < 1e-6) return 1.0 - px * px / 6.0;
    return std::sin(px) / px;
}

cplx cis2pi(double x) {
    double r = x - std::round(x);
    return {std::cos(kTwoPi * r), std::sin(kTwoPi * r)};
}

DDGrid make_grid(int M, int N, double nu_p) {
    if (M < 1 || N < 1) throw InvalidParameter("grid dimensions must be positive");
    if (!(nu_p > 0.0) || !std::isfinite(nu_p)) throw InvalidParameter("Doppler period must be positive");
    DDGrid g;
    g.M = M;
    g.N = N;
    g.nu_p = nu_p;
    g.tau_p = 1.0 / nu_p;
    g.B = M * nu_p;
    g.T = N * g.tau_p;
    return g;
}

cplx quasi_periodic_value(const CVector& frame, const DDGrid& grid, long k, long l) {
    if (frame.size() != grid.size()) throw InvalidParameter("frame length must equal M*N");
    long n = floor_div(k, grid.M);
    long kk = k - n * grid.M;
    long ll = wrap_index(l, grid.N);
    cplx v = frame[kk * grid.N + ll];
    if (n == 0 || ll == 0) return v;
    // n * ll / N reduced modulo 1 exactly in integers.
    long num = wrap_index(n * ll, grid.N);
    return v * cis2pi(static_cast<double>(num) / grid.N);
}

}  // namespace zakotfs
