// SPDX-License-Identifier: Apache-2.0
#include "zakotfs/filters.hpp"

#include <algorithm>
#include <cmath>

#include "zakotfs/error.hpp"

namespace zakotfs {

FilterConfig FilterConfig::gaussian(double alpha_tau, double alpha_nu) {
    FilterConfig c;
    c.family = FilterFamily::Gaussian;
    c.alpha_tau = alpha_tau;
    c.alpha_nu = alpha_nu;
    c.validate();
    return c;
}

void FilterConfig::validate() const {
    if (family == FilterFamily::Gaussian) {
        if (!(alpha_tau > 0.0) || !(alpha_nu > 0.0) || !std::isfinite(alpha_tau) || !std::isfinite(alpha_nu))
            throw InvalidParameter("Gaussian filter needs positive alpha_tau and alpha_nu");
    }
}

std::string to_string(FilterFamily f) { return f == FilterFamily::Sinc ? "sinc" : "gaussian"; }

std::string to_string(RxScheme s) {
    switch (s) {
        case RxScheme::Identical: return "identical";
        case RxScheme::Matched: return "matched";
        case RxScheme::ChannelMatched: return "channel-matched";
    }
    return "?";
}

std::string to_string(const Combination& c) { return to_string(c.filter.family) + "/" + to_string(c.scheme); }

static std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

FilterFamily filter_family_from_string(const std::string& s) {
    auto v = lower(s);
    if (v == "sinc") return FilterFamily::Sinc;
    if (v == "gaussian" || v == "gauss") return FilterFamily::Gaussian;
    throw InvalidParameter("unknown filter family: " + s);
}

RxScheme rx_scheme_from_string(const std::string& s) {
    auto v = lower(s);
    if (v == "identical" || v == "id") return RxScheme::Identical;
    if (v == "matched" || v == "mf") return RxScheme::Matched;
    if (v == "channel-matched" || v == "chmatched" || v == "cmf") return RxScheme::ChannelMatched;
    throw InvalidParameter("unknown receive scheme: " + s);
}

double rect(double x) {
    double a = std::abs(x);
    if (a < 0.5) return 1.0;
    if (a == 0.5) return 0.5;
    return 0.0;
}

namespace {

// Shared pulse shape along one axis with width parameter W (B or T).
double pulse(const FilterConfig& cfg, double alpha, double W, double x) {
    if (cfg.family == FilterFamily::Sinc) return std::sqrt(W) * sinc(W * x);
    return std::pow(2.0 * alpha * W * W / kPi, 0.25) * std::exp(-alpha * W * W * x * x);
}

// Fourier transform of the shape above.
double pulse_transform(const FilterConfig& cfg, double alpha, double W, double f) {
    if (cfg.family == FilterFamily::Sinc) return rect(f / W) / std::sqrt(W);
    return std::pow(2.0 * kPi / (alpha * W * W), 0.25) * std::exp(-kPi * kPi * f * f / (alpha * W * W));
}

}  // namespace

double delay_pulse(const FilterConfig& cfg, const DDGrid& grid, double tau) {
    return pulse(cfg, cfg.alpha_tau, grid.B, tau);
}

double doppler_pulse(const FilterConfig& cfg, const DDGrid& grid, double nu) {
    return pulse(cfg, cfg.alpha_nu, grid.T, nu);
}

double delay_pulse_spectrum(const FilterConfig& cfg, const DDGrid& grid, double f) {
    return pulse_transform(cfg, cfg.alpha_tau, grid.B, f);
}

double doppler_pulse_time(const FilterConfig& cfg, const DDGrid& grid, double t) {
    return pulse_transform(cfg, cfg.alpha_nu, grid.T, t);
}

double tx_filter_eval(const FilterConfig& cfg, const DDGrid& grid, double tau, double nu) {
    return delay_pulse(cfg, grid, tau) * doppler_pulse(cfg, grid, nu);
}

double gaussian_containment_fraction(double alpha, double expansion_ratio) {
    if (!(alpha > 0.0)) throw InvalidParameter("alpha must be positive");
    return std::erf(kPi * expansion_ratio / std::sqrt(2.0 * alpha));
}

double reference_containment_fraction() { return gaussian_containment_fraction(kUnexpandedAlpha, 1.0); }

namespace {

// x with erf(x) = p, p in (0, 1): bracketing bisection refined by Newton steps.
double erf_root(double p) {
    double lo = 0.0, hi = 1.0;
    while (std::erf(hi) < p) hi *= 2.0;
    for (int i = 0; i < 60; ++i) {
        double mid = 0.5 * (lo + hi);
        (std::erf(mid) < p ? lo : hi) = mid;
    }
    double x = 0.5 * (lo + hi);
    for (int i = 0; i < 3; ++i) {
        double d = 2.0 / std::sqrt(kPi) * std::exp(-x * x);
        if (d <= 0) break;
        double step = (std::erf(x) - p) / d;
        if (!std::isfinite(step)) break;
        x -= step;
    }
    return x;
}

}  // namespace

GaussianAlphas gaussian_alpha_for_containment(double expansion_B, double expansion_T, double fraction) {
    if (!std::isfinite(expansion_B) || !std::isfinite(expansion_T) || expansion_B < 1.0 || expansion_T < 1.0)
        throw Infeasible("expansion ratios must be finite and at least 1");
    double p = fraction > 0.0 ? fraction : reference_containment_fraction();
    if (!(p < 1.0)) throw Infeasible("containment fraction must be below 1");
    double x = erf_root(p);
    auto alpha = [x](double r) {
        double v = kPi * r / x;
        return 0.5 * v * v;
    };
    return {alpha(expansion_B), alpha(expansion_T)};
}

}  // namespace zakotfs
