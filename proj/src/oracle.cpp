// SPDX-License-Identifier: Apache-2.0
#include "zakotfs/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "zakotfs/error.hpp"

namespace zakotfs::oracle {

DDOperand DDOperand::function(std::function<cplx(double, double)> f, double tau_lo, double tau_hi, double nu_lo,
                              double nu_hi) {
    DDOperand op;
    op.smooth = std::move(f);
    op.tau_lo = tau_lo;
    op.tau_hi = tau_hi;
    op.nu_lo = nu_lo;
    op.nu_hi = nu_hi;
    return op;
}

DDOperand DDOperand::impulse_sum(const PathSet& paths) {
    DDOperand op;
    op.impulses = paths.paths;
    return op;
}

cplx DDOperand::operator()(double tau, double nu) const {
    if (is_impulsive()) throw InvalidParameter("impulse operand has no pointwise value");
    return smooth(tau, nu);
}

namespace {

std::vector<double> with_breaks(double lo, double hi, const std::vector<double>& extra, int panels) {
    std::vector<double> e;
    for (int i = 0; i <= panels; ++i) e.push_back(lo + (hi - lo) * i / panels);
    for (double x : extra)
        if (x > lo && x < hi) e.push_back(x);
    std::sort(e.begin(), e.end());
    e.erase(std::unique(e.begin(), e.end()), e.end());
    return e;
}

}  // namespace

QuadratureResult twisted_convolve_point(const DDOperand& a, const DDOperand& b, double tau, double nu,
                                        const QuadratureOptions& quad) {
    QuadratureResult out;
    if (a.is_impulsive() && b.is_impulsive())
        throw InvalidParameter("twisted convolution of two impulse sums is not a pointwise function");
    if (a.is_impulsive()) {
        for (const auto& p : a.impulses)
            out.value += p.gain * b(tau - p.delay, nu - p.doppler) * cis2pi(p.doppler * (tau - p.delay));
        out.evaluations = static_cast<long>(a.impulses.size());
        return out;
    }
    if (b.is_impulsive()) {
        for (const auto& p : b.impulses)
            out.value += p.gain * a(tau - p.delay, nu - p.doppler) * cis2pi((nu - p.doppler) * p.delay);
        out.evaluations = static_cast<long>(b.impulses.size());
        return out;
    }
    QuadratureOptions inner = quad;
    inner.rel_tol = quad.rel_tol * 0.1;
    inner.abs_tol = quad.abs_tol * 0.1;
    double inner_err = 0.0;
    long evals = 0;
    const auto nu_breaks = with_breaks(a.nu_lo, a.nu_hi, a.nu_breaks, 8);
    const auto tau_breaks = with_breaks(a.tau_lo, a.tau_hi, a.tau_breaks, 8);
    auto outer = [&](double tp) -> cplx {
        auto inner_f = [&](double vp) -> cplx {
            return a(tp, vp) * b(tau - tp, nu - vp) * cis2pi(vp * (tau - tp));
        };
        auto r = integrate_adaptive(inner_f, nu_breaks, inner);
        inner_err = std::max(inner_err, r.error);
        evals += r.evaluations;
        return r.value;
    };
    auto r = integrate_adaptive(outer, tau_breaks, quad);
    out.value = r.value;
    out.error = r.error + inner_err * (a.tau_hi - a.tau_lo);
    out.evaluations = evals;
    return out;
}

namespace {

struct AxisPulse {
    double W;
    double alpha;
};

AxisPulse axis_pulse(const FilterConfig& cfg, const DDGrid& g, Axis axis) {
    return axis == Axis::Delay ? AxisPulse{g.B, cfg.alpha_tau} : AxisPulse{g.T, cfg.alpha_nu};
}

double axis_value(const FilterConfig& cfg, const DDGrid& g, Axis axis, double x) {
    return axis == Axis::Delay ? delay_pulse(cfg, g, x) : doppler_pulse(cfg, g, x);
}

// int over the overlap of [-W/2, W/2] and [f - W/2, f + W/2] of exp(-j 2 pi g d) / W dg.
QuadratureResult sinc_band_integral(double W, double d, double f, const QuadratureOptions& quad) {
    const double lo = std::max(-0.5 * W, f - 0.5 * W);
    const double hi = std::min(0.5 * W, f + 0.5 * W);
    if (!(hi > lo)) return {};
    int panels = std::max(1, static_cast<int>(std::ceil((hi - lo) * std::abs(d))));
    panels = std::min(panels, 100000);
    std::vector<double> br;
    for (int i = 0; i <= panels; ++i) br.push_back(lo + (hi - lo) * i / panels);
    auto integrand = [&](double g) -> cplx { return cis2pi(-g * d) / W; };
    // O(1) result that vanishes on the lattice nulls, where only roundoff is left.
    QuadratureOptions q = quad;
    q.abs_tol = std::max(quad.abs_tol, 1e-15);
    return integrate_adaptive(integrand, br, q);
}

}  // namespace

QuadratureResult pulse_product_integral(const FilterConfig& cfg, const DDGrid& grid, Axis axis, double a, double b,
                                        double f, const QuadratureOptions& quad) {
    const auto ap = axis_pulse(cfg, grid, axis);
    if (cfg.is_gaussian()) {
        // Product envelope exp(-2 alpha W^2 (x - c)^2) around the midpoint.
        const double c = 0.5 * (a + b);
        const double half = 9.0 / (ap.W * std::sqrt(ap.alpha));
        const double env = std::exp(-0.5 * ap.alpha * ap.W * ap.W * (a - b) * (a - b));
        int panels = 8;
        if (f != 0.0) panels = std::max(panels, static_cast<int>(std::ceil(2.0 * half * std::abs(f))));
        panels = std::min(panels, 4096);
        std::vector<double> br;
        for (int i = 0; i <= panels; ++i) br.push_back(c - half + 2.0 * half * i / panels);
        QuadratureOptions q = quad;
        // The integrand is O(env); below a few ulps of that the estimate is roundoff.
        q.abs_tol = std::max(quad.abs_tol, 1e-15) * std::max(env, 1e-300);
        auto integrand = [&](double x) -> cplx {
            return axis_value(cfg, grid, axis, x - a) * axis_value(cfg, grid, axis, x - b) * cis2pi(-f * x);
        };
        return integrate_adaptive(integrand, br, q);
    }
    // Band-limited pulses: the product of the two spectra is supported on a
    // finite interval, and its convolution gives the requested transform.
    auto r = sinc_band_integral(ap.W, a - b, f, quad);
    r.value *= cis2pi(-f * b);
    return r;
}

namespace {

void accumulate(QuadratureResult& acc, const QuadratureResult& r, cplx weight) {
    acc.value += weight * r.value;
    acc.error += std::abs(weight) * r.error;
    acc.evaluations += r.evaluations;
}

}  // namespace

QuadratureResult heff_numeric(const Combination& comb, const DDGrid& grid, const PathSet& paths, long k, long l,
                              const QuadratureOptions& quad) {
    const double tau = static_cast<double>(k) * grid.delay_step();
    const double nu = static_cast<double>(l) * grid.doppler_step();
    const auto& cfg = comb.filter;
    QuadratureResult out;
    switch (comb.scheme) {
        case RxScheme::Matched:
            for (const auto& p : paths.paths) {
                auto f1 = pulse_product_integral(cfg, grid, Axis::Delay, 0.0, tau - p.delay, p.doppler, quad);
                auto f2 = pulse_product_integral(cfg, grid, Axis::Doppler, 0.0, nu - p.doppler, -tau, quad);
                cplx w = p.gain * cis2pi(p.doppler * (tau - p.delay));
                out.value += w * f1.value * f2.value;
                out.error += std::abs(w) * (std::abs(f1.value) * f2.error + std::abs(f2.value) * f1.error);
                out.evaluations += f1.evaluations + f2.evaluations;
            }
            return out;
        case RxScheme::ChannelMatched:
            for (const auto& pi : paths.paths)
                for (const auto& pj : paths.paths) {
                    const double nij = pi.doppler - pj.doppler;
                    auto f1 = pulse_product_integral(cfg, grid, Axis::Delay, -pi.delay, tau - pj.delay, -nij, quad);
                    auto f2 = pulse_product_integral(cfg, grid, Axis::Doppler, -pi.doppler, nu - pj.doppler, -tau, quad);
                    cplx w = std::conj(pi.gain) * pj.gain *
                             cis2pi(pi.delay * pi.doppler - pj.delay * pj.doppler + tau * pj.doppler);
                    out.value += w * f1.value * f2.value;
                    out.error += std::abs(w) * (std::abs(f1.value) * f2.error + std::abs(f2.value) * f1.error);
                    out.evaluations += f1.evaluations + f2.evaluations;
                }
            return out;
        case RxScheme::Identical:
            break;
    }
    // Identical filters: the Doppler integral depends on the delay variable,
    // so it is nested inside the delay integral.
    for (const auto& p : paths.paths) {
        QuadratureOptions inner = quad;
        inner.rel_tol = quad.rel_tol * 0.1;
        long evals = 0;
        auto doppler_factor = [&](double u) {
            auto r = pulse_product_integral(cfg, grid, Axis::Doppler, 0.0, nu - p.doppler, -u, inner);
            evals += r.evaluations;
            return r.value;
        };
        auto integrand = [&](double tp) -> cplx {
            cplx y = doppler_factor(tau - tp);
            if (y == cplx{}) return 0.0;
            return delay_pulse(cfg, grid, tp) * delay_pulse(cfg, grid, tau - p.delay - tp) *
                   cis2pi(p.doppler * (tau - tp - p.delay)) * y;
        };
        std::vector<double> br;
        if (cfg.is_gaussian()) {
            const double c = 0.5 * (tau - p.delay);
            const double half = 9.0 / (grid.B * std::sqrt(cfg.alpha_tau));
            for (int i = 0; i <= 16; ++i) br.push_back(c - half + 2.0 * half * i / 16);
        } else {
            // The Doppler factor vanishes once |tau - tp| reaches T.
            const double kink = tau;
            br = panel_edges(tau - grid.T, tau + grid.T, 1.0 / grid.B, std::span<const double>(&kink, 1));
        }
        auto r = integrate_adaptive(integrand, br, quad);
        r.evaluations += evals;
        accumulate(out, r, p.gain);
    }
    return out;
}

QuadratureResult heff_numeric_2d(const Combination& comb, const DDGrid& grid, const PathSet& paths, long k, long l,
                                 const QuadratureOptions& quad) {
    const auto& cfg = comb.filter;
    if (!cfg.is_gaussian()) throw InvalidParameter("two-dimensional oracle supports Gaussian pulses only");
    auto wtx = [cfg, grid](double t, double v) -> cplx { return tx_filter_eval(cfg, grid, t, v); };
    // Channel applied to the Tx pulse by sifting.
    auto chan = DDOperand::impulse_sum(paths);
    auto pulse_op = DDOperand::function(wtx, 0, 0, 0, 0);
    auto cascade = [chan, pulse_op](double t, double v) -> cplx {
        return twisted_convolve_point(chan, pulse_op, t, v).value;
    };
    std::function<cplx(double, double)> rx;
    double dmin = 0, dmax = 0, nmin = 0, nmax = 0;
    for (const auto& p : paths.paths) {
        dmax = std::max(dmax, p.delay);
        nmin = std::min(nmin, p.doppler);
        nmax = std::max(nmax, p.doppler);
    }
    switch (comb.scheme) {
        case RxScheme::Identical:
            rx = wtx;
            break;
        case RxScheme::Matched:
            rx = [wtx](double t, double v) { return std::conj(wtx(-t, -v)) * cis2pi(v * t); };
            break;
        case RxScheme::ChannelMatched:
            rx = [cascade](double t, double v) { return std::conj(cascade(-t, -v)) * cis2pi(v * t); };
            // Support of the adjoint cascade is mirrored.
            std::swap(dmin, dmax);
            dmin = -dmin;
            dmax = -dmax;
            std::swap(nmin, nmax);
            nmin = -nmin;
            nmax = -nmax;
            if (dmin > dmax) std::swap(dmin, dmax);
            break;
    }
    if (comb.scheme != RxScheme::ChannelMatched) dmin = dmax = nmin = nmax = 0.0;
    const double ht = 9.0 / (grid.B * std::sqrt(cfg.alpha_tau));
    const double hn = 9.0 / (grid.T * std::sqrt(cfg.alpha_nu));
    auto rx_op = DDOperand::function(rx, dmin - ht, dmax + ht, nmin - hn, nmax + hn);
    auto cas_op = DDOperand::function(cascade, 0, 0, 0, 0);
    return twisted_convolve_point(rx_op, cas_op, static_cast<double>(k) * grid.delay_step(),
                                  static_cast<double>(l) * grid.doppler_step(), quad);
}

namespace {

// Wrap indices q whose time instant kτ_p/M + qτ_p lies where the Doppler
// pulse's time envelope is not negligible.
std::vector<int> active_wraps(const FilterConfig& cfg, const DDGrid& g, int k) {
    std::vector<int> qs;
    const double t0 = static_cast<double>(k) * g.delay_step();
    double reach;
    if (cfg.is_gaussian())
        reach = g.T * std::sqrt(cfg.alpha_nu * 45.0) / kPi;  // exp(-pi^2 t^2/(a T^2)) < 1e-19
    else
        reach = 0.5 * g.T;
    const int qmax = static_cast<int>(std::ceil(reach / g.tau_p)) + 1;
    for (int q = -qmax; q <= qmax; ++q) {
        double t = t0 + q * g.tau_p;
        if (std::abs(t) <= reach && doppler_pulse_time(cfg, g, t) != 0.0) qs.push_back(q);
    }
    return qs;
}

struct Lattice {
    int k, l;
};

Lattice lattice_of(const DDGrid& g, int index) { return {g.delay_index(index), g.doppler_index(index)}; }

}  // namespace

namespace {

// Sinc band integrals keyed by (delay offset, frequency offset). Entries of
// one matrix share many of them; each distinct one is still integrated.
using BandCache = std::map<std::pair<double, double>, QuadratureResult>;

QuadratureResult cov_numeric_impl(const Combination& comb, const DDGrid& grid, const PathSet& paths, double N0,
                                  int row, int col, const QuadratureOptions& quad, BandCache* cache) {
    const auto& cfg = comb.filter;
    QuadratureResult out;
    if (N0 == 0.0) return out;
    const auto r = lattice_of(grid, row), c = lattice_of(grid, col);
    const double nu1 = r.l * grid.doppler_step(), nu2 = c.l * grid.doppler_step();
    if (comb.scheme == RxScheme::Identical) {
        if (!cfg.is_gaussian())
            throw InvalidParameter("sinc identical covariance is evaluated by cov_numeric_sinc_identical");
        // N0 tau_p int what2(s)^2 sum_q1 sum_q2 phase w1(t1 - s) w1(t2 - s) ds
        const double reach = grid.T * std::sqrt(cfg.alpha_nu * 45.0) / kPi + 10.0 / grid.B;
        const int qmax = static_cast<int>(std::ceil(reach / grid.tau_p)) + 2;
        const double pair_reach = 12.0 / (grid.B * std::sqrt(cfg.alpha_tau));
        for (int q1 = -qmax; q1 <= qmax; ++q1)
            for (int q2 = -qmax; q2 <= qmax; ++q2) {
                const double t1 = r.k * grid.delay_step() + q1 * grid.tau_p;
                const double t2 = c.k * grid.delay_step() + q2 * grid.tau_p;
                if (std::abs(t1 - t2) > pair_reach) continue;
                const double mid = 0.5 * (t1 + t2), half = 9.0 / (grid.B * std::sqrt(cfg.alpha_tau));
                if (std::abs(mid) - half > reach) continue;
                auto f = [&](double s) -> cplx {
                    double wt = doppler_pulse_time(cfg, grid, s);
                    return wt * wt * delay_pulse(cfg, grid, t1 - s) * delay_pulse(cfg, grid, t2 - s);
                };
                std::vector<double> br;
                for (int i = 0; i <= 8; ++i) br.push_back(mid - half + 2.0 * half * i / 8);
                // Terms are O(1/T); the tolerance is taken relative to that scale.
                QuadratureOptions q = quad;
                q.abs_tol = quad.abs_tol / grid.T;
                auto res = integrate_adaptive(f, br, q);
                accumulate(out, res, N0 * grid.tau_p * cis2pi(-(nu1 * q1 - nu2 * q2) * grid.tau_p));
            }
        return out;
    }
    PathSet unit;
    const PathSet* rx = &paths;
    if (comb.scheme == RxScheme::Matched) {
        unit.paths = {{1.0, 0.0, 0.0}};
        rx = &unit;
    }
    const auto q1s = active_wraps(cfg, grid, r.k), q2s = active_wraps(cfg, grid, c.k);
    for (int q1 : q1s)
        for (int q2 : q2s) {
            const double t1 = r.k * grid.delay_step() + q1 * grid.tau_p;
            const double t2 = c.k * grid.delay_step() + q2 * grid.tau_p;
            const double wt = doppler_pulse_time(cfg, grid, t1) * doppler_pulse_time(cfg, grid, t2);
            if (wt == 0.0) continue;
            const cplx phase = N0 * grid.tau_p * wt * cis2pi(-(nu1 * q1 - nu2 * q2) * grid.tau_p);
            for (const auto& pi : rx->paths)
                for (const auto& pj : rx->paths) {
                    const double a = t1 + pi.delay, b = t2 + pj.delay;
                    if (cfg.is_gaussian() &&
                        0.5 * cfg.alpha_tau * grid.B * grid.B * (a - b) * (a - b) > 75.0)
                        continue;
                    const double f = pi.doppler - pj.doppler;
                    QuadratureResult res;
                    if (cache && !cfg.is_gaussian()) {
                        // Offset from integers so equal offsets share identical bits.
                        const double d = static_cast<double>((r.k - c.k) + (q1 - q2) * grid.M) * grid.delay_step() +
                                         (pi.delay - pj.delay);
                        auto it = cache->find({d, f});
                        if (it == cache->end())
                            it = cache->emplace(std::make_pair(d, f), sinc_band_integral(grid.B, d, f, quad)).first;
                        res = it->second;
                        res.value *= cis2pi(-f * b);
                    } else {
                        res = pulse_product_integral(cfg, grid, Axis::Delay, a, b, f, quad);
                    }
                    accumulate(out, res,
                               phase * std::conj(pi.gain) * pj.gain *
                                   cis2pi(pi.doppler * pi.delay - pj.doppler * pj.delay));
                }
        }
    return out;
}

}  // namespace

QuadratureResult cov_numeric(const Combination& comb, const DDGrid& grid, const PathSet& paths, double N0, int row,
                             int col, const QuadratureOptions& quad) {
    return cov_numeric_impl(comb, grid, paths, N0, row, col, quad, nullptr);
}

CMatrix cov_numeric_matrix(const Combination& comb, const DDGrid& grid, const PathSet& paths, double N0,
                           const QuadratureOptions& quad) {
    const int n = grid.size();
    CMatrix C(n, n);
    BandCache cache;
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            cplx v = cov_numeric_impl(comb, grid, paths, N0, i, j, quad, &cache).value;
            C(i, j) = v;
            C(j, i) = std::conj(v);
        }
    for (int i = 0; i < n; ++i) C(i, i) = C(i, i).real();
    return C;
}

CMatrix cov_numeric_sinc_identical(const DDGrid& grid, double N0, int q_max, int points_per_panel) {
    const int M = grid.M, N = grid.N;
    const double zero = 0.0;
    auto edges = panel_edges(-0.5 * grid.T, 0.5 * grid.T, 1.0 / grid.B, std::span<const double>(&zero, 1));
    const auto nodes = composite_gauss_legendre(edges, points_per_panel);
    const auto S = static_cast<Eigen::Index>(nodes.size());
    // G(k N + l, s) = sum_{|q| <= q_max} exp(-j 2 pi q l / N) sinc(B (k tau_p/M + q tau_p - s)),
    // grouped by q mod N before the length-N transform over l.
    CMatrix G = CMatrix::Zero(grid.size(), S);
    Eigen::MatrixXd U(N, S);
    for (int k = 0; k < M; ++k) {
        U.setZero();
        for (int q = -q_max; q <= q_max; ++q) {
            const double t = k * grid.delay_step() + q * grid.tau_p;
            const auto rr = static_cast<Eigen::Index>(wrap_index(q, N));
            for (Eigen::Index s = 0; s < S; ++s) U(rr, s) += sinc(grid.B * (t - nodes.x[static_cast<std::size_t>(s)]));
        }
        for (int l = 0; l < N; ++l)
            for (int rr = 0; rr < N; ++rr) {
                cplx ph = cis2pi(-static_cast<double>(wrap_index(static_cast<long>(rr) * l, N)) / N);
                G.row(grid.flat(k, l)) += ph * U.row(rr).cast<cplx>();
            }
    }
    Eigen::VectorXd w(S);
    for (Eigen::Index s = 0; s < S; ++s) w[s] = nodes.w[static_cast<std::size_t>(s)];
    CMatrix C = (N0 * grid.B * grid.tau_p / grid.T) * (G * w.asDiagonal() * G.adjoint());
    return 0.5 * (C + CMatrix(C.adjoint()));
}

CMatrix filtered_noise_map(const Combination& comb, const DDGrid& grid, const PathSet& paths, double tail_span,
                           int points_per_width) {
    const auto& cfg = comb.filter;
    if (comb.scheme == RxScheme::Identical && !cfg.is_gaussian())
        throw InvalidParameter("sinc identical noise map needs unbounded wrap sums");
    double reach = cfg.is_gaussian() ? grid.T * std::sqrt(cfg.alpha_nu * 45.0) / kPi : 0.5 * grid.T;
    double dmax = 0;
    for (const auto& p : paths.paths) dmax = std::max(dmax, p.delay);
    const double lo = -reach - tail_span - dmax - grid.tau_p, hi = reach + tail_span + grid.tau_p + dmax;
    auto edges = panel_edges(lo, hi, 1.0 / grid.B);
    const auto nodes = composite_gauss_legendre(edges, points_per_width);
    const auto S = static_cast<Eigen::Index>(nodes.size());
    CMatrix G = CMatrix::Zero(grid.size(), S);
    const double sq = std::sqrt(grid.tau_p);
    for (int idx = 0; idx < grid.size(); ++idx) {
        const int k = grid.delay_index(idx), l = grid.doppler_index(idx);
        const double nu = l * grid.doppler_step();
        const int qmax = static_cast<int>(std::ceil((reach + tail_span) / grid.tau_p)) + 2;
        for (int q = -qmax; q <= qmax; ++q) {
            const double t = k * grid.delay_step() + q * grid.tau_p;
            const cplx ph = sq * cis2pi(-nu * q * grid.tau_p);
            for (Eigen::Index s = 0; s < S; ++s) {
                const double x = nodes.x[static_cast<std::size_t>(s)];
                cplx v{};
                switch (comb.scheme) {
                    case RxScheme::Identical:
                        v = doppler_pulse_time(cfg, grid, x) * delay_pulse(cfg, grid, t - x);
                        break;
                    case RxScheme::Matched:
                        v = doppler_pulse_time(cfg, grid, t) * delay_pulse(cfg, grid, t - x);
                        break;
                    case RxScheme::ChannelMatched: {
                        const double wt = doppler_pulse_time(cfg, grid, t);
                        if (wt == 0.0) break;
                        for (const auto& p : paths.paths)
                            v += std::conj(p.gain) * cis2pi(p.doppler * (p.delay - x)) *
                                 delay_pulse(cfg, grid, t - x + p.delay);
                        v *= wt;
                        break;
                    }
                }
                G(idx, s) += ph * v * std::sqrt(nodes.w[static_cast<std::size_t>(s)]);
            }
        }
    }
    return G;
}

CMatrix monte_carlo_covariance(const CMatrix& noise_map, double N0, int draws, std::uint64_t seed,
                               Eigen::MatrixXd* stderr_out) {
    const auto S = noise_map.cols(), D = noise_map.rows();
    CMatrix acc = CMatrix::Zero(D, D);
    auto rng = make_rng(seed, 0x3c);
    std::normal_distribution<double> n01(0.0, std::sqrt(0.5 * N0));
    const int batch = 2000;
    CMatrix W(S, batch);
    for (int done = 0; done < draws; done += batch) {
        const int cnt = std::min(batch, draws - done);
        for (int j = 0; j < cnt; ++j)
            for (Eigen::Index s = 0; s < S; ++s) {
                double re = n01(rng);
                double im = n01(rng);
                W(s, j) = {re, im};
            }
        CMatrix X = noise_map * W.leftCols(cnt);
        acc.noalias() += X * X.adjoint();
    }
    CMatrix C = acc / static_cast<double>(draws);
    if (stderr_out) {
        stderr_out->resize(D, D);
        for (Eigen::Index i = 0; i < D; ++i)
            for (Eigen::Index j = 0; j < D; ++j)
                (*stderr_out)(i, j) = std::sqrt(std::abs(C(i, i).real() * C(j, j).real()) / draws);
    }
    return C;
}

}  // namespace zakotfs::oracle
