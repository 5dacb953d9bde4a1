// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <span>
#include <vector>

#include "zakotfs/grid.hpp"

namespace zakotfs {

struct Path {
    cplx gain;
    double delay;    // [s]
    double doppler;  // [Hz]
};

// Physical DD channel: a sum of P point scatterers.
struct PathSet {
    std::vector<Path> paths;

    std::size_t size() const noexcept { return paths.size(); }
    bool empty() const noexcept { return paths.empty(); }
    void validate() const;
    PathSet scaled(cplx c) const;
};

struct CsiErrorModel {
    double sigma_e2 = 0.0;
};

// Deterministic per-stream generator: stream `index` of run `seed`.
std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t index = 0);
// Mixes a seed with stream labels into an independent 64-bit seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0);

// Circularly symmetric complex normal with E|z|^2 = variance.
cplx complex_normal(std::mt19937_64& rng, double variance);

struct VehA {
    static constexpr int kPaths = 6;
    static constexpr double kDelaysUs[kPaths] = {0.0, 0.31, 0.71, 1.09, 1.73, 2.51};
    static constexpr double kPowersDb[kPaths] = {0.0, -1.0, -9.0, -10.0, -15.0, -20.0};
    static std::vector<double> normalized_powers();
};

// Rayleigh path gains with the normalized Veh-A profile. Dopplers are
// nu_max cos(theta) with theta uniform on [0, 2 pi).
PathSet veh_a_realization(double nu_max, std::uint64_t seed);

// Fixed geometry, Rayleigh gains with the given powers (normalized to sum 1).
PathSet rayleigh_paths(std::span<const double> delays, std::span<const double> dopplers,
                       std::span<const double> powers, std::uint64_t seed);

// h_i + e_i with e_i ~ CN(0, sigma_e2). Delays and Dopplers are copied unchanged.
PathSet apply_csi_error(const PathSet& paths, const CsiErrorModel& model, std::uint64_t seed);

// Text records `h_re h_im tau_s nu_hz`, one per line, '#' starts a comment.
void write_paths(std::ostream& os, const PathSet& paths);
PathSet read_paths(std::istream& is);

}  // namespace zakotfs
