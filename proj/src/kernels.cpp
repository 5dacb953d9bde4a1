// SPDX-License-Identifier: Apache-2.0
#include "zakotfs/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "zakotfs/error.hpp"
#include "zakotfs/quadrature.hpp"

namespace zakotfs {

namespace {

// exp(j pi k l / (M N)) with the integer product reduced first.
cplx lattice_twist(const DDGrid& g, long k, long l) {
    const long period = 2L * g.M * g.N;
    long r = wrap_index(k * l, period);
    return cis2pi(static_cast<double>(r) / static_cast<double>(period));
}

struct LatticePoint {
    double tk;  // k tau_p / M
    double fl;  // l nu_p / N
};

LatticePoint point(const DDGrid& g, long k, long l) {
    return {static_cast<double>(k) * g.delay_step(), static_cast<double>(l) * g.doppler_step()};
}

cplx sinc_identical_path(const DDGrid& g, const Path& p, LatticePoint pt) {
    const double B = g.B;
    auto P = [&](double f) -> cplx {
        double af = std::abs(f);
        if (!(af < B)) return 0.0;
        double bw = B - af;
        return cis2pi(0.5 * f * (pt.tk + p.delay)) * (bw / (B * B) * sinc(bw * (pt.tk - p.delay)));
    };
    return 0.5 * B * p.gain * cis2pi(-p.delay * p.doppler) * sinc(g.T * (pt.fl - p.doppler)) *
           (P(pt.fl) + P(p.doppler));
}

cplx gauss_identical_path(const DDGrid& g, const FilterConfig& c, const Path& p, LatticePoint pt) {
    const double a = c.alpha_tau * g.B * g.B;
    const double b = c.alpha_nu * g.T * g.T;
    const double D = 2.0 * a + kPi * kPi / (2.0 * b);
    const cplx s(2.0 * a * (pt.tk + p.delay), kPi * (pt.fl + p.doppler));
    const double df = pt.fl - p.doppler;
    const cplx expo = a * (pt.tk * pt.tk + p.delay * p.delay) + 0.5 * b * df * df - s * s / (4.0 * D);
    // The j 2 pi nu tau part of the exponent is applied as a reduced phase.
    return p.gain * std::exp(-expo) * cis2pi(-p.doppler * p.delay);
}

double gauss_identical_prefactor(const DDGrid& g, const FilterConfig& c) {
    const double a = c.alpha_tau * g.B * g.B;
    const double b = c.alpha_nu * g.T * g.T;
    return std::sqrt(2.0 * a / (2.0 * a + kPi * kPi / (2.0 * b)));
}

cplx sinc_matched_path(const DDGrid& g, const Path& p, LatticePoint pt, cplx twist) {
    const double at = std::abs(pt.tk), an = std::abs(p.doppler);
    if (!(at < g.T) || !(an < g.B)) return 0.0;
    const double tw = g.T - at, bw = g.B - an;
    return p.gain * twist * cis2pi(-0.5 * p.delay * p.doppler) * (tw / g.T) * (bw / g.B) *
           sinc(bw * (pt.tk - p.delay)) * sinc(tw * (pt.fl - p.doppler));
}

cplx gauss_matched_path(const DDGrid& g, const FilterConfig& c, const Path& p, LatticePoint pt, cplx twist) {
    const double a = c.alpha_tau * g.B * g.B;
    const double b = c.alpha_nu * g.T * g.T;
    const double dt = pt.tk - p.delay, df = pt.fl - p.doppler;
    const double e = 0.5 * a * dt * dt + 0.5 * b * df * df +
                     0.5 * kPi * kPi * (pt.tk * pt.tk / b + p.doppler * p.doppler / a);
    return p.gain * twist * cis2pi(-0.5 * p.delay * p.doppler) * std::exp(-e);
}

// Term (i, j) of the channel-matched double sum with the Rx filter built from pi.
cplx sinc_chmatched_pair(const DDGrid& g, const Path& pi, const Path& pj, LatticePoint pt, cplx twist) {
    const double tij = pi.delay - pj.delay, nij = pi.doppler - pj.doppler;
    const double at = std::abs(pt.tk), an = std::abs(nij);
    if (!(at < g.T) || !(an < g.B)) return 0.0;
    const double tw = g.T - at, bw = g.B - an;
    return std::conj(pi.gain) * pj.gain * twist * cis2pi(0.5 * tij * (pi.doppler + pj.doppler)) * (bw / g.B) *
           (tw / g.T) * sinc(bw * (pt.tk + tij)) * sinc(tw * (pt.fl + nij));
}

cplx gauss_chmatched_pair(const DDGrid& g, const FilterConfig& c, const Path& pi, const Path& pj,
                          LatticePoint pt, cplx twist) {
    const double a = c.alpha_tau * g.B * g.B;
    const double b = c.alpha_nu * g.T * g.T;
    const double tij = pi.delay - pj.delay, nij = pi.doppler - pj.doppler;
    const double dt = pt.tk + tij, df = pt.fl + nij;
    const double e = 0.5 * a * dt * dt + 0.5 * b * df * df + 0.5 * kPi * kPi * (pt.tk * pt.tk / b + nij * nij / a);
    return std::conj(pi.gain) * pj.gain * twist * cis2pi(0.5 * tij * (pi.doppler + pj.doppler)) * std::exp(-e);
}

void require_gaussian(const FilterConfig& c) {
    if (c.family != FilterFamily::Gaussian) throw InvalidParameter("Gaussian kernel needs a Gaussian filter");
    c.validate();
}

void require_same_geometry(const PathSet& a, const PathSet& b) {
    if (a.size() != b.size()) throw InvalidParameter("path sets differ in size");
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a.paths[i].delay != b.paths[i].delay || a.paths[i].doppler != b.paths[i].doppler)
            throw InvalidParameter("path sets differ in geometry");
}

}  // namespace

cplx heff_sinc_identical(const DDGrid& grid, const PathSet& paths, long k, long l) {
    auto pt = point(grid, k, l);
    cplx s{};
    for (const auto& p : paths.paths) s += sinc_identical_path(grid, p, pt);
    return s;
}

cplx heff_gauss_identical(const DDGrid& grid, const FilterConfig& cfg, const PathSet& paths, long k, long l) {
    require_gaussian(cfg);
    auto pt = point(grid, k, l);
    cplx s{};
    for (const auto& p : paths.paths) s += gauss_identical_path(grid, cfg, p, pt);
    return gauss_identical_prefactor(grid, cfg) * s;
}

cplx heff_sinc_matched(const DDGrid& grid, const PathSet& paths, long k, long l) {
    auto pt = point(grid, k, l);
    cplx tw = lattice_twist(grid, k, l);
    cplx s{};
    for (const auto& p : paths.paths) s += sinc_matched_path(grid, p, pt, tw);
    return s;
}

cplx heff_gauss_matched(const DDGrid& grid, const FilterConfig& cfg, const PathSet& paths, long k, long l) {
    require_gaussian(cfg);
    auto pt = point(grid, k, l);
    cplx tw = lattice_twist(grid, k, l);
    cplx s{};
    for (const auto& p : paths.paths) s += gauss_matched_path(grid, cfg, p, pt, tw);
    return s;
}

cplx heff_sinc_chmatched(const DDGrid& grid, const PathSet& paths, long k, long l) {
    return heff_chmatched_cross(FilterConfig::sinc(), grid, paths, paths, k, l);
}

cplx heff_gauss_chmatched(const DDGrid& grid, const FilterConfig& cfg, const PathSet& paths, long k, long l) {
    require_gaussian(cfg);
    return heff_chmatched_cross(cfg, grid, paths, paths, k, l);
}

cplx heff_chmatched_cross(const FilterConfig& cfg, const DDGrid& grid, const PathSet& rx_paths,
                          const PathSet& ch_paths, long k, long l) {
    require_same_geometry(rx_paths, ch_paths);
    auto pt = point(grid, k, l);
    cplx tw = lattice_twist(grid, k, l);
    cplx s{};
    for (const auto& pi : rx_paths.paths)
        for (const auto& pj : ch_paths.paths)
            s += cfg.is_gaussian() ? gauss_chmatched_pair(grid, cfg, pi, pj, pt, tw)
                                   : sinc_chmatched_pair(grid, pi, pj, pt, tw);
    return s;
}

cplx heff(const Combination& comb, const DDGrid& grid, const PathSet& paths, long k, long l) {
    const bool gauss = comb.filter.is_gaussian();
    switch (comb.scheme) {
        case RxScheme::Identical:
            return gauss ? heff_gauss_identical(grid, comb.filter, paths, k, l) : heff_sinc_identical(grid, paths, k, l);
        case RxScheme::Matched:
            return gauss ? heff_gauss_matched(grid, comb.filter, paths, k, l) : heff_sinc_matched(grid, paths, k, l);
        case RxScheme::ChannelMatched:
            return gauss ? heff_gauss_chmatched(grid, comb.filter, paths, k, l) : heff_sinc_chmatched(grid, paths, k, l);
    }
    return {};
}

EffChannel::EffChannel(long k_min, long k_max, long l_min, long l_max)
    : k_min_(k_min), k_max_(k_max), l_min_(l_min), l_max_(l_max), l_span_(l_max - l_min + 1) {
    if (k_max < k_min || l_max < l_min) throw InvalidParameter("empty tap window");
    taps_.assign(static_cast<std::size_t>((k_max - k_min + 1) * l_span_), cplx{});
}

cplx EffChannel::at(long k, long l) const {
    if (!covers(k, l)) {
        std::ostringstream m;
        m << "tap (" << k << "," << l << ") outside window [" << k_min_ << "," << k_max_ << "]x[" << l_min_ << ","
          << l_max_ << "]";
        throw WindowCoverageError(m.str());
    }
    return get(k, l);
}

cplx& EffChannel::ref(long k, long l) {
    if (!covers(k, l)) throw WindowCoverageError("tap outside window");
    return taps_[static_cast<std::size_t>((k - k_min_) * l_span_ + (l - l_min_))];
}

double EffChannel::max_abs() const {
    double m = 0;
    for (const auto& t : taps_) m = std::max(m, std::abs(t));
    return m;
}

EffChannel& EffChannel::operator+=(const EffChannel& o) {
    if (o.k_min_ != k_min_ || o.k_max_ != k_max_ || o.l_min_ != l_min_ || o.l_max_ != l_max_)
        throw InvalidParameter("tap windows differ");
    for (std::size_t i = 0; i < taps_.size(); ++i) taps_[i] += o.taps_[i];
    return *this;
}

EffChannel EffChannel::operator*(cplx c) const {
    EffChannel out = *this;
    for (auto& t : out.taps_) t *= c;
    return out;
}

TapWindow default_tap_window(const DDGrid& grid) {
    const long km = 3L * grid.M - 1, lm = 3L * grid.N - 1;
    return {-km, km, -lm, lm};
}

EffChannel heff_table(const Combination& comb, const DDGrid& grid, const PathSet& paths) {
    return heff_table(comb, grid, paths, default_tap_window(grid));
}

EffChannel heff_table(const Combination& comb, const DDGrid& grid, const PathSet& paths, const TapWindow& w) {
    EffChannel eff(w.k_min, w.k_max, w.l_min, w.l_max);
    for (long k = w.k_min; k <= w.k_max; ++k)
        for (long l = w.l_min; l <= w.l_max; ++l) eff.ref(k, l) = heff(comb, grid, paths, k, l);
    return eff;
}

EffChannel heff_table_chmatched_cross(const FilterConfig& cfg, const DDGrid& grid, const PathSet& rx_paths,
                                      const PathSet& ch_paths, const TapWindow& w) {
    EffChannel eff(w.k_min, w.k_max, w.l_min, w.l_max);
    for (long k = w.k_min; k <= w.k_max; ++k)
        for (long l = w.l_min; l <= w.l_max; ++l)
            eff.ref(k, l) = heff_chmatched_cross(cfg, grid, rx_paths, ch_paths, k, l);
    return eff;
}

namespace {

// Nodes over [-T, T] in panels of width 1/B; the triangle kink at 0 is an edge.
NodeSet identical_delay_nodes(const DDGrid& g, int points) {
    const double zero = 0.0;
    auto edges = panel_edges(-g.T, g.T, 1.0 / g.B, std::span<const double>(&zero, 1));
    return composite_gauss_legendre(edges, points);
}

// exp(-j pi x (f + nu)) (T - |x|) sinc((T - |x|)(f - nu)) sinc(B (x + tau)), the
// pieces of the delay integrand that do not depend on the delay index.
cplx identical_doppler_factor(const DDGrid& g, const Path& p, double x, double f) {
    const double tw = g.T - std::abs(x);
    return cis2pi(-0.5 * x * (f + p.doppler)) * (tw * sinc(tw * (f - p.doppler)) * sinc(g.B * (x + p.delay)));
}

}  // namespace

cplx heff_sinc_identical_quadrature(const DDGrid& grid, const PathSet& paths, long k, long l, int points) {
    const auto nodes = identical_delay_nodes(grid, points);
    auto pt = point(grid, k, l);
    cplx total{};
    for (const auto& p : paths.paths) {
        cplx s{};
        for (std::size_t n = 0; n < nodes.size(); ++n) {
            double x = nodes.x[n];
            s += nodes.w[n] * sinc(grid.B * (x + pt.tk)) * identical_doppler_factor(grid, p, x, pt.fl);
        }
        total += p.gain * cis2pi(-p.delay * p.doppler) * s;
    }
    return grid.B / grid.T * total;
}

EffChannel heff_table_sinc_identical_quadrature(const DDGrid& grid, const PathSet& paths, const TapWindow& w,
                                                int points) {
    const auto nodes = identical_delay_nodes(grid, points);
    const auto X = static_cast<Eigen::Index>(nodes.size());
    const long K = w.k_max - w.k_min + 1, L = w.l_max - w.l_min + 1;
    Eigen::MatrixXd A(K, X);
    for (long k = 0; k < K; ++k) {
        double tk = static_cast<double>(k + w.k_min) * grid.delay_step();
        for (Eigen::Index n = 0; n < X; ++n) A(k, n) = sinc(grid.B * (nodes.x[static_cast<std::size_t>(n)] + tk));
    }
    CMatrix acc = CMatrix::Zero(K, L);
    Eigen::MatrixXd Er(X, L), Ei(X, L);
    for (const auto& p : paths.paths) {
        for (long l = 0; l < L; ++l) {
            double fl = static_cast<double>(l + w.l_min) * grid.doppler_step();
            for (Eigen::Index n = 0; n < X; ++n) {
                auto sn = static_cast<std::size_t>(n);
                cplx v = nodes.w[sn] * identical_doppler_factor(grid, p, nodes.x[sn], fl);
                Er(n, l) = v.real();
                Ei(n, l) = v.imag();
            }
        }
        cplx c = grid.B / grid.T * p.gain * cis2pi(-p.delay * p.doppler);
        Eigen::MatrixXd re = A * Er, im = A * Ei;
        acc.real() += (c.real() * re - c.imag() * im);
        acc.imag() += (c.real() * im + c.imag() * re);
    }
    EffChannel eff(w.k_min, w.k_max, w.l_min, w.l_max);
    for (long k = 0; k < K; ++k)
        for (long l = 0; l < L; ++l) eff.ref(k + w.k_min, l + w.l_min) = acc(k, l);
    return eff;
}

void write_csv(std::ostream& os, const EffChannel& eff) {
    std::ostringstream buf;
    buf << std::setprecision(17) << "k,l,re,im\n";
    for (long k = eff.k_min(); k <= eff.k_max(); ++k)
        for (long l = eff.l_min(); l <= eff.l_max(); ++l) {
            cplx v = eff.get(k, l);
            buf << k << ',' << l << ',' << v.real() << ',' << v.imag() << '\n';
        }
    os << buf.str();
}

}  // namespace zakotfs
