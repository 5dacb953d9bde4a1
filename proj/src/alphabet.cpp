// SPDX-License-Identifier: Apache-2.0
#include "zakotfs/alphabet.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "zakotfs/error.hpp"

namespace zakotfs {

Alphabet::Alphabet(AlphabetKind kind, std::string name, std::vector<cplx> pts,
                   std::vector<unsigned> labels)
    : kind_(kind), name_(std::move(name)), points_(std::move(pts)), labels_(std::move(labels)) {
    bits_per_symbol_ = 0;
    while ((1 << bits_per_symbol_) < size()) ++bits_per_symbol_;
    point_of_label_.assign(points_.size(), -1);
    for (int i = 0; i < size(); ++i) point_of_label_[labels_[static_cast<std::size_t>(i)]] = i;
}

Alphabet Alphabet::bpsk() { return Alphabet(AlphabetKind::BPSK, "bpsk", {1.0, -1.0}, {0u, 1u}); }

Alphabet Alphabet::qam8() {
    // In-phase levels carry two Gray-coded bits, quadrature levels one bit.
    const double s = 1.0 / std::sqrt(6.0);
    const double ivals[4] = {-3, -1, 1, 3};
    const unsigned igray[4] = {0b00, 0b01, 0b11, 0b10};
    const double qvals[2] = {-1, 1};
    std::vector<cplx> pts;
    std::vector<unsigned> labels;
    for (int i = 0; i < 4; ++i)
        for (int q = 0; q < 2; ++q) {
            pts.emplace_back(ivals[i] * s, qvals[q] * s);
            labels.push_back((igray[i] << 1) | static_cast<unsigned>(q));
        }
    return Alphabet(AlphabetKind::QAM8, "8qam", std::move(pts), std::move(labels));
}

Alphabet Alphabet::from_name(const std::string& name) {
    std::string n = name;
    std::transform(n.begin(), n.end(), n.begin(), [](unsigned char c) { return std::tolower(c); });
    if (n == "bpsk") return bpsk();
    if (n == "8qam" || n == "qam8" || n == "8-qam") return qam8();
    throw InvalidParameter("unknown alphabet: " + name);
}

cplx Alphabet::point_for_label(unsigned label) const {
    if (label >= points_.size()) throw InvalidParameter("label out of range");
    return points_[static_cast<std::size_t>(point_of_label_[label])];
}

double Alphabet::mean_energy() const {
    double e = 0;
    for (const auto& p : points_) e += std::norm(p);
    return e / static_cast<double>(points_.size());
}

double Alphabet::min_distance() const {
    double d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < points_.size(); ++i)
        for (std::size_t j = i + 1; j < points_.size(); ++j) d = std::min(d, std::abs(points_[i] - points_[j]));
    return d;
}

int Alphabet::nearest(cplx z) const {
    int best = 0;
    double bd = std::norm(z - points_[0]);
    for (int i = 1; i < size(); ++i) {
        double d = std::norm(z - points_[static_cast<std::size_t>(i)]);
        if (d < bd) {
            bd = d;
            best = i;
        }
    }
    return best;
}

CVector map_bits(std::span<const std::uint8_t> bits, const Alphabet& alphabet) {
    const int bps = alphabet.bits_per_symbol();
    if (bits.size() % static_cast<std::size_t>(bps) != 0)
        throw InvalidParameter("bit count is not a multiple of bits per symbol");
    const auto count = static_cast<Eigen::Index>(bits.size() / static_cast<std::size_t>(bps));
    CVector x(count);
    for (Eigen::Index s = 0; s < count; ++s) {
        unsigned label = 0;
        for (int b = 0; b < bps; ++b) label = (label << 1) | (bits[static_cast<std::size_t>(s * bps + b)] & 1u);
        x[s] = alphabet.point_for_label(label);
    }
    return x;
}

std::vector<std::uint8_t> demap_symbols(const CVector& frame, const Alphabet& alphabet) {
    const int bps = alphabet.bits_per_symbol();
    std::vector<std::uint8_t> bits(static_cast<std::size_t>(frame.size() * bps));
    for (Eigen::Index s = 0; s < frame.size(); ++s) {
        unsigned label = alphabet.label(alphabet.nearest(frame[s]));
        for (int b = 0; b < bps; ++b)
            bits[static_cast<std::size_t>(s * bps + b)] = static_cast<std::uint8_t>((label >> (bps - 1 - b)) & 1u);
    }
    return bits;
}

CVector slice_symbols(const CVector& soft, const Alphabet& alphabet) {
    CVector out(soft.size());
    for (Eigen::Index s = 0; s < soft.size(); ++s)
        out[s] = alphabet.points()[static_cast<std::size_t>(alphabet.nearest(soft[s]))];
    return out;
}

}  // namespace zakotfs
