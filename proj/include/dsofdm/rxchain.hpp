#pragma once

#include <array>
#include <cstdint>
#include <span>

#include "dsofdm/channel.hpp"
#include "dsofdm/numerics.hpp"

namespace dsofdm {

/// Bias-corrected linear MMSE filter G = Gamma W0 with W0 = (s2 I + H^H H)^{-1} H^H
/// and Gamma = diag(1 / [W0 H]_kk), so diag(G H) = (1, 1). With sigma2 == 0 it is
/// the zero-forcing inverse H^{-1}.
///
/// Throws SingularMatrixError if the matrix to invert is singular (only possible
/// for sigma2 == 0).
Mat2 mmse_filter(const Mat2& h, double sigma2);

/// The unbiased MMSE matrix W0 alone, without Gamma.
Mat2 mmse_unbiased_core(const Mat2& h, double sigma2);

Vec2 mmse_equalize(const Vec2& y, const Mat2& h, double sigma2);

struct EqualizerOutput {
    std::array<CVec, 2> x_hat;
    std::array<CVec, 2> s_hat;
};

/// Tone-by-tone equalization of both polarizations.
std::array<CVec, 2> equalize(const std::array<CVec, 2>& y, const ToneChannel& ch);

/// s_hat = F^H x_hat.
CVec despread(std::span<const Cplx> x_hat);

struct ErrorCount {
    std::uint64_t bit_errors = 0;
    std::uint64_t bits_total = 0;
    std::uint64_t symbol_errors = 0;

    ErrorCount& operator+=(const ErrorCount& o) {
        bit_errors += o.bit_errors;
        bits_total += o.bits_total;
        symbol_errors += o.symbol_errors;
        return *this;
    }
    friend bool operator==(const ErrorCount&, const ErrorCount&) = default;
};

/// Hamming distance; a symbol error is any group of bits_per_symbol with a bit error.
ErrorCount count_errors(std::span<const std::uint8_t> tx, std::span<const std::uint8_t> rx,
                        int bits_per_symbol = 1);

}  // namespace dsofdm
