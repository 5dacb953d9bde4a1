// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <atomic>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "zakotfs/alphabet.hpp"
#include "zakotfs/channel.hpp"
#include "zakotfs/filters.hpp"
#include "zakotfs/grid.hpp"
#include "zakotfs/noise.hpp"

namespace zakotfs {

enum class ChannelKind {
    VehA,           // fresh Veh-A realization per frame
    FixedRayleigh,  // fixed delays/Dopplers from `paths`, Rayleigh gains with powers |h|^2
    Static,         // `paths` used as given
};
enum class Detector { Mmse, Ml };
// Sinc pulses with identical filtering only: large-grid closed form or the
// delay-integral quadrature for the taps; N0 I or the exact wrap sum for the noise.
enum class TapModel { ClosedForm, Quadrature };
enum class NoiseModel { ClosedForm, Exact };

struct ExperimentConfig {
    int M = 12;
    int N = 14;
    double nu_p = 15000.0;
    FilterFamily filter = FilterFamily::Sinc;
    double alpha_tau = kUnexpandedAlpha;
    double alpha_nu = kUnexpandedAlpha;
    // When either ratio differs from 1, the Gaussian alphas are derived from
    // the containment rule and override alpha_tau / alpha_nu.
    double expansion_B = 1.0;
    double expansion_T = 1.0;
    RxScheme scheme = RxScheme::Matched;
    ChannelKind channel = ChannelKind::VehA;
    PathSet paths;
    double nu_max = 815.0;
    std::string alphabet = "bpsk";
    Detector detector = Detector::Mmse;
    std::vector<double> snr_db = {0, 2, 4, 6, 8, 10, 12, 14, 16, 18, 20};
    int realizations = 200;
    double csi_sigma_e2 = 0.0;
    std::uint64_t seed = 1;
    std::string output;
    TapModel tap_model = TapModel::ClosedForm;
    NoiseModel noise_model = NoiseModel::ClosedForm;
    // q_lo > q_hi selects QRange::adequate for the grid.
    int q_lo = 1;
    int q_hi = 0;
    int workers = 1;

    DDGrid grid() const;
    FilterConfig filter_config() const;
    Combination combination() const;
    QRange q_range() const;
    void validate() const;
};

// `key = value` lines, '#' comments. Keys match the field names above;
// lists are comma separated; `paths` is a file path in PathSet text format
// and `path` (repeatable) adds one inline record `h_re h_im tau_s nu_hz`.
void apply_setting(ExperimentConfig& cfg, const std::string& key, const std::string& value);
ExperimentConfig parse_config(std::istream& is);
ExperimentConfig load_config(const std::string& file);
void write_config(std::ostream& os, const ExperimentConfig& cfg);

struct BerRecord {
    double snr_db = 0;
    long long bit_errors = 0;
    long long bits = 0;
    double ber = 0;
    double wall_time = 0;  // [s]
    double ci_low = 0;     // 95% Wilson interval
    double ci_high = 0;
};

struct Interval {
    double low;
    double high;
};
Interval binomial_interval(long long errors, long long trials, double z = 1.959963984540054);

// Set by a signal handler to stop sweeps early; finished points are kept.
std::atomic<bool>& interrupt_flag();

std::vector<BerRecord> run_ber_sweep(const ExperimentConfig& cfg);

struct SweepRecord {
    FilterFamily filter;
    RxScheme scheme;
    double parameter;  // nu_max [Hz] or sigma_e2
    BerRecord record;
};
// Both filter families, all three schemes, at each nu_max.
std::vector<SweepRecord> run_ber_vs_doppler(const ExperimentConfig& cfg,
                                            const std::vector<double>& nu_max_list);
// Both filter families with cfg's scheme, at each CSI error variance.
std::vector<SweepRecord> run_csi_sweep(const ExperimentConfig& cfg,
                                       const std::vector<double>& sigma_e2_list);

// SNR at which the BER curve crosses `target`, by log-linear interpolation
// between the bracketing points. NaN when the curve never crosses it.
double snr_at_ber(const std::vector<BerRecord>& records, double target);

void write_ber_csv(std::ostream& os, const std::vector<BerRecord>& records,
                   const std::string& comment);
void write_sweep_csv(std::ostream& os, const std::vector<SweepRecord>& records,
                     const std::string& parameter_name, const std::string& comment);

}  // namespace zakotfs
