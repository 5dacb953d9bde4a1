// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "zakotfs/grid.hpp"

namespace zakotfs {

enum class AlphabetKind { BPSK, QAM8 };

class Alphabet {
public:
    static Alphabet bpsk();
    // Rectangular 2x4 constellation with a Gray labeling, unit average energy.
    static Alphabet qam8();
    static Alphabet from_name(const std::string& name);

    AlphabetKind kind() const noexcept { return kind_; }
    const std::string& name() const noexcept { return name_; }
    int size() const noexcept { return static_cast<int>(points_.size()); }
    int bits_per_symbol() const noexcept { return bits_per_symbol_; }
    const std::vector<cplx>& points() const noexcept { return points_; }
    // Label of point i; the bit packed at position b is bit b of the symbol, MSB first.
    unsigned label(int i) const { return labels_.at(static_cast<std::size_t>(i)); }
    cplx point_for_label(unsigned label) const;
    double mean_energy() const;
    double min_distance() const;
    // Index of the constellation point nearest to z (Euclidean).
    int nearest(cplx z) const;

private:
    Alphabet(AlphabetKind kind, std::string name, std::vector<cplx> pts, std::vector<unsigned> labels);

    AlphabetKind kind_;
    std::string name_;
    std::vector<cplx> points_;
    std::vector<unsigned> labels_;
    std::vector<int> point_of_label_;
    int bits_per_symbol_;
};

// Bits are consumed bits_per_symbol at a time, MSB of each label first.
CVector map_bits(std::span<const std::uint8_t> bits, const Alphabet& alphabet);
std::vector<std::uint8_t> demap_symbols(const CVector& frame, const Alphabet& alphabet);
// Nearest-point slicing without going back to bits.
CVector slice_symbols(const CVector& soft, const Alphabet& alphabet);

}  // namespace zakotfs
