// SPDX-License-Identifier: Apache-2.0
#include "zakotfs/psd.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "zakotfs/error.hpp"

namespace zakotfs {

std::vector<double> default_frequency_grid(const DDGrid& grid, int points, double span_factor) {
    if (points < 2 || !(span_factor > 0.0)) throw InvalidParameter("frequency grid needs >= 2 points and a positive span");
    std::vector<double> f(static_cast<std::size_t>(points));
    const double lo = -span_factor * grid.B, step = 2.0 * span_factor * grid.B / (points - 1);
    for (int i = 0; i < points; ++i) f[static_cast<std::size_t>(i)] = lo + i * step;
    return f;
}

Spectrum tx_spectrum(const CVector& frame, const FilterConfig& cfg, const DDGrid& grid, std::span<const double> f_grid,
                     int m_range) {
    if (frame.size() != grid.size()) throw InvalidParameter("frame size does not match the grid");
    if (m_range < 0) throw InvalidParameter("m_range must be non-negative");
    for (std::size_t i = 1; i < f_grid.size(); ++i)
        if (!(f_grid[i] > f_grid[i - 1])) throw InvalidParameter("frequency grid must be strictly increasing");
    cfg.validate();
    Spectrum s;
    s.f.assign(f_grid.begin(), f_grid.end());
    s.X.resize(f_grid.size());
    s.psd.resize(f_grid.size());
    const double root = std::sqrt(grid.nu_p);
    for (std::size_t i = 0; i < f_grid.size(); ++i) {
        const double f = f_grid[i];
        const double W1 = delay_pulse_spectrum(cfg, grid, f);
        cplx acc{};
        if (W1 != 0.0) {
            for (int l = 0; l < grid.N; ++l) {
                const double base = static_cast<double>(l) / grid.N;  // l nu_p / N in units of nu_p
                const long m0 = std::lround(f / grid.nu_p - base);
                for (long m = m0 - m_range; m <= m0 + m_range; ++m) {
                    const double w2 = doppler_pulse(cfg, grid, f - (base + m) * grid.nu_p);
                    if (w2 == 0.0) continue;
                    for (int k = 0; k < grid.M; ++k) {
                        const cplx x = frame(grid.flat(k, l));
                        if (x == cplx{}) continue;
                        // (k tau_p/M)(l nu_p/N + m nu_p) = k (l + mN) / (MN)
                        const long num = static_cast<long>(k) * (l + m * grid.N);
                        const long den = static_cast<long>(grid.M) * grid.N;
                        acc += x * w2 * cis2pi(-static_cast<double>(wrap_index(num, den)) / den);
                    }
                }
            }
        }
        s.X[i] = root * W1 * acc;
        s.psd[i] = std::norm(s.X[i]);
    }
    return s;
}

double oob_leakage(const Spectrum& spec, double B) {
    const auto n = spec.f.size();
    if (n < 2 || spec.psd.size() != n) throw InvalidParameter("spectrum needs at least two samples");
    if (!(spec.f.front() < -B / 2 && spec.f.back() > B / 2)) throw CoverageError("frequency grid does not extend past +-B/2");
    // Trapezoids on each side of the band edges separately; a segment crossing
    // an edge contributes each endpoint's value over its own side. Keeps the
    // brick-wall edge of the sinc spectrum from smearing into the leakage.
    auto in_band = [B](double f) { return f > -B / 2 && f < B / 2; };
    double inside = 0.0, outside = 0.0, edge = 0.0;
    const double span = spec.f.back() - spec.f.front();
    const double lo_edge = spec.f.front() + 0.01 * span, hi_edge = spec.f.back() - 0.01 * span;
    for (std::size_t i = 1; i < n; ++i) {
        const double a = spec.f[i - 1], b = spec.f[i];
        const double pa = spec.psd[i - 1], pb = spec.psd[i];
        const bool ia = in_band(a), ib = in_band(b);
        if (ia == ib) {
            (ia ? inside : outside) += 0.5 * (pa + pb) * (b - a);
        } else {
            const double cut = ia ? B / 2 : -B / 2;
            (ia ? inside : outside) += pa * (cut - a);
            (ib ? inside : outside) += pb * (b - cut);
        }
        const double mid = 0.5 * (a + b);
        if (mid < lo_edge || mid > hi_edge) edge += 0.5 * (pa + pb) * (b - a);
    }
    const double total = inside + outside;
    if (total == 0.0) return 0.0;
    if (edge > 1e-4 * total) throw CoverageError("spectrum energy near the grid edge exceeds 1e-4 of the total");
    return outside / total;
}

void write_csv(std::ostream& os, const Spectrum& spec) {
    const double peak = spec.psd.empty() ? 0.0 : *std::max_element(spec.psd.begin(), spec.psd.end());
    std::ostringstream buf;
    buf << std::setprecision(12) << "f_hz,psd_db\n";
    for (std::size_t i = 0; i < spec.f.size(); ++i) {
        const double db = (peak > 0.0 && spec.psd[i] > 0.0) ? 10.0 * std::log10(spec.psd[i] / peak) : -400.0;
        buf << spec.f[i] << ',' << std::max(db, -400.0) << '\n';
    }
    os << buf.str();
}

}  // namespace zakotfs
