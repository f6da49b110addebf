#include "dsofdm/modem.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace dsofdm {

std::string_view to_string(Scheme s) {
    return s == Scheme::Qpsk ? "qpsk" : "qam16";
}

Scheme parse_scheme(std::string_view name) {
    if (name == "qpsk") return Scheme::Qpsk;
    if (name == "qam16" || name == "16qam") return Scheme::Qam16;
    throw std::invalid_argument("unknown scheme '" + std::string(name) + "'");
}

namespace {

// Per-axis Gray order: +3, +1, -1, -3 <-> 01, 00, 10, 11
constexpr double qam16_level(int b0, int b1) {
    if (b0 == 0) return b1 == 0 ? 1.0 : 3.0;
    return b1 == 0 ? -1.0 : -3.0;
}

}  // namespace

const Constellation& Constellation::get(Scheme scheme) {
    static const Constellation qpsk = [] {
        const double a = 1.0 / std::sqrt(2.0);
        CVec pts(4);
        for (int label = 0; label < 4; ++label) {
            const int b0 = (label >> 1) & 1;
            const int b1 = label & 1;
            pts[label] = {b0 ? -a : a, b1 ? -a : a};
        }
        return Constellation(Scheme::Qpsk, 2, std::move(pts));
    }();
    static const Constellation qam16 = [] {
        const double a = 1.0 / std::sqrt(10.0);
        CVec pts(16);
        for (int label = 0; label < 16; ++label) {
            const int b0 = (label >> 3) & 1, b1 = (label >> 2) & 1;
            const int b2 = (label >> 1) & 1, b3 = label & 1;
            pts[label] = {a * qam16_level(b0, b1), a * qam16_level(b2, b3)};
        }
        return Constellation(Scheme::Qam16, 4, std::move(pts));
    }();
    return scheme == Scheme::Qpsk ? qpsk : qam16;
}

CVec map_bits(std::span<const std::uint8_t> bits, const Constellation& c) {
    const auto k = static_cast<std::size_t>(c.bits_per_symbol());
    if (bits.size() % k != 0) {
        throw std::invalid_argument("map_bits: bit count " + std::to_string(bits.size()) +
                                    " not divisible by " + std::to_string(k));
    }
    const auto pts = c.points();
    CVec out(bits.size() / k);
    for (std::size_t i = 0; i < out.size(); ++i) {
        std::size_t label = 0;
        for (std::size_t j = 0; j < k; ++j) label = (label << 1) | (bits[i * k + j] & 1u);
        out[i] = pts[label];
    }
    return out;
}

Bits demap_hard(std::span<const Cplx> symbols, const Constellation& c) {
    const auto k = static_cast<std::size_t>(c.bits_per_symbol());
    const auto pts = c.points();
    Bits out(symbols.size() * k);
    for (std::size_t i = 0; i < symbols.size(); ++i) {
        std::size_t best = 0;
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t label = 0; label < pts.size(); ++label) {
            const double d = std::norm(symbols[i] - pts[label]);
            if (d < best_d) {
                best_d = d;
                best = label;
            }
        }
        for (std::size_t j = 0; j < k; ++j) {
            out[i * k + j] = static_cast<std::uint8_t>((best >> (k - 1 - j)) & 1u);
        }
    }
    return out;
}

}  // namespace dsofdm
