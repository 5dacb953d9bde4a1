// SPDX-License-Identifier: Apache-2.0
#include "zakotfs/channel.hpp"

#include <cmath>
#include <iomanip>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "zakotfs/error.hpp"

namespace zakotfs {

void PathSet::validate() const {
    if (paths.empty()) throw InvalidParameter("path set is empty");
    for (const auto& p : paths) {
        if (!std::isfinite(p.gain.real()) || !std::isfinite(p.gain.imag()) || !std::isfinite(p.delay) ||
            !std::isfinite(p.doppler))
            throw InvalidParameter("path values must be finite");
        if (p.delay < 0.0) throw InvalidParameter("path delays must be non-negative");
    }
}

PathSet PathSet::scaled(cplx c) const {
    PathSet out = *this;
    for (auto& p : out.paths) p.gain *= c;
    return out;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    // splitmix64 finalizer over the combined words.
    auto mix = [](std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    };
    return mix(mix(mix(seed) ^ a) ^ (b * 0xd6e8feb86659fd93ULL));
}

std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t index) {
    return std::mt19937_64(derive_seed(seed, index, 0x5eed));
}

cplx complex_normal(std::mt19937_64& rng, double variance) {
    std::normal_distribution<double> n(0.0, std::sqrt(0.5 * variance));
    double re = n(rng);
    double im = n(rng);
    return {re, im};
}

std::vector<double> VehA::normalized_powers() {
    std::vector<double> p(kPaths);
    for (int i = 0; i < kPaths; ++i) p[static_cast<std::size_t>(i)] = std::pow(10.0, kPowersDb[i] / 10.0);
    double s = std::accumulate(p.begin(), p.end(), 0.0);
    for (auto& v : p) v /= s;
    return p;
}

PathSet veh_a_realization(double nu_max, std::uint64_t seed) {
    if (!(nu_max >= 0.0) || !std::isfinite(nu_max)) throw InvalidParameter("nu_max must be non-negative");
    auto rng = make_rng(seed);
    auto powers = VehA::normalized_powers();
    std::uniform_real_distribution<double> angle(0.0, kTwoPi);
    PathSet ps;
    ps.paths.resize(VehA::kPaths);
    for (int i = 0; i < VehA::kPaths; ++i) {
        auto& p = ps.paths[static_cast<std::size_t>(i)];
        p.delay = VehA::kDelaysUs[i] * 1e-6;
        p.gain = complex_normal(rng, powers[static_cast<std::size_t>(i)]);
    }
    for (auto& p : ps.paths) p.doppler = nu_max * std::cos(angle(rng));
    return ps;
}

PathSet rayleigh_paths(std::span<const double> delays, std::span<const double> dopplers,
                       std::span<const double> powers, std::uint64_t seed) {
    if (delays.size() != dopplers.size() || delays.size() != powers.size() || delays.empty())
        throw InvalidParameter("delays, Dopplers and powers must have one entry per path");
    double s = std::accumulate(powers.begin(), powers.end(), 0.0);
    if (!(s > 0.0)) throw InvalidParameter("path powers must sum to a positive value");
    auto rng = make_rng(seed);
    PathSet ps;
    for (std::size_t i = 0; i < delays.size(); ++i)
        ps.paths.push_back({complex_normal(rng, powers[i] / s), delays[i], dopplers[i]});
    ps.validate();
    return ps;
}

PathSet apply_csi_error(const PathSet& paths, const CsiErrorModel& model, std::uint64_t seed) {
    if (!(model.sigma_e2 >= 0.0)) throw InvalidParameter("CSI error variance must be non-negative");
    PathSet out = paths;
    if (model.sigma_e2 == 0.0) return out;
    auto rng = make_rng(seed, 0xc51);
    for (auto& p : out.paths) p.gain += complex_normal(rng, model.sigma_e2);
    return out;
}

void write_paths(std::ostream& os, const PathSet& paths) {
    std::ostringstream buf;
    buf << std::setprecision(17);
    for (const auto& p : paths.paths)
        buf << p.gain.real() << ' ' << p.gain.imag() << ' ' << p.delay << ' ' << p.doppler << '\n';
    os << buf.str();
}

PathSet read_paths(std::istream& is) {
    PathSet ps;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        double re, im, tau, nu;
        if (!(ls >> re)) continue;
        if (!(ls >> im >> tau >> nu))
            throw InvalidParameter("path record needs four numbers at line " + std::to_string(lineno));
        std::string extra;
        if (ls >> extra) throw InvalidParameter("trailing text in path record at line " + std::to_string(lineno));
        ps.paths.push_back({{re, im}, tau, nu});
    }
    ps.validate();
    return ps;
}

}  // namespace zakotfs
