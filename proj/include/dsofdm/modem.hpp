#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "dsofdm/numerics.hpp"

namespace dsofdm {

enum class Scheme { Qpsk, Qam16 };

std::string_view to_string(Scheme s);
/// Accepts "qpsk" and "qam16" (also "16qam"); throws std::invalid_argument otherwise.
Scheme parse_scheme(std::string_view name);

using Bits = std::vector<std::uint8_t>;

/// Gray-labelled, unit-average-energy constellation. points()[label] is the
/// symbol for the bit group whose first bit is the label's MSB.
class Constellation {
public:
    static const Constellation& get(Scheme scheme);

    Scheme scheme() const { return scheme_; }
    int bits_per_symbol() const { return bits_per_symbol_; }
    std::span<const Cplx> points() const { return points_; }

private:
    Constellation(Scheme scheme, int bits, CVec points)
        : scheme_(scheme), bits_per_symbol_(bits), points_(std::move(points)) {}

    Scheme scheme_;
    int bits_per_symbol_;
    CVec points_;
};

CVec map_bits(std::span<const std::uint8_t> bits, const Constellation& c);

/// Minimum-distance decision per symbol; exact ties go to the smallest label.
Bits demap_hard(std::span<const Cplx> symbols, const Constellation& c);

}  // namespace dsofdm
