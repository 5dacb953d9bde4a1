// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "zakotfs/grid.hpp"

namespace zakotfs {

enum class FilterFamily { Sinc, Gaussian };
enum class RxScheme { Identical, Matched, ChannelMatched };

// Transmit pulse family and its spread parameters.
//
// Sinc:     w1(tau) = sqrt(B) sinc(B tau),  w2(nu) = sqrt(T) sinc(T nu)
// Gaussian: w1(tau) = (2 a_tau B^2 / pi)^(1/4) exp(-a_tau B^2 tau^2), same shape in nu
struct FilterConfig {
    FilterFamily family = FilterFamily::Sinc;
    double alpha_tau = 0.0;
    double alpha_nu = 0.0;

    static FilterConfig sinc() { return {}; }
    static FilterConfig gaussian(double alpha_tau, double alpha_nu);
    bool is_gaussian() const noexcept { return family == FilterFamily::Gaussian; }
    void validate() const;
};

struct Combination {
    FilterConfig filter;
    RxScheme scheme = RxScheme::Identical;
};

std::string to_string(FilterFamily f);
std::string to_string(RxScheme s);
std::string to_string(const Combination& c);
FilterFamily filter_family_from_string(const std::string& s);
RxScheme rx_scheme_from_string(const std::string& s);

// rect(x): 1 inside |x| < 1/2, 1/2 on the edge, 0 outside.
double rect(double x);

// Delay pulse w1(tau) and Doppler pulse w2(nu).
double delay_pulse(const FilterConfig& cfg, const DDGrid& grid, double tau);
double doppler_pulse(const FilterConfig& cfg, const DDGrid& grid, double nu);
// Fourier transform of w1 over delay, as a function of frequency f.
double delay_pulse_spectrum(const FilterConfig& cfg, const DDGrid& grid, double f);
// Inverse Fourier transform of w2 over Doppler, as a function of time t.
double doppler_pulse_time(const FilterConfig& cfg, const DDGrid& grid, double t);

// w_tx(tau, nu) = w1(tau) w2(nu). Real for both families.
double tx_filter_eval(const FilterConfig& cfg, const DDGrid& grid, double tau, double nu);

// Gaussian energy containment.
//
// A pulse exp(-a B^2 tau^2) has a spectrum whose energy fraction inside
// |f| < r B / 2 equals erf(pi r / sqrt(2 a)). The reference level below is
// the fraction reached by a = 1.584 at r = 1 (no expansion).
inline constexpr double kUnexpandedAlpha = 1.584;
double gaussian_containment_fraction(double alpha, double expansion_ratio);
double reference_containment_fraction();

struct GaussianAlphas {
    double alpha_tau;
    double alpha_nu;
};

// Smallest spread parameters keeping `fraction` of the pulse energy within
// the expanded bandwidth expansion_B * B (delay pulse) and duration
// expansion_T * T (Doppler pulse). fraction <= 0 selects the reference level.
GaussianAlphas gaussian_alpha_for_containment(double expansion_B, double expansion_T,
                                              double fraction = 0.0);

}  // namespace zakotfs
