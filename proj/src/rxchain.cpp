#include "dsofdm/rxchain.hpp"

#include <algorithm>
#include <stdexcept>

namespace dsofdm {

Mat2 mmse_unbiased_core(const Mat2& h, double sigma2) {
    if (sigma2 < 0.0) throw std::invalid_argument("mmse: negative noise variance");
    const Mat2 hh = mat2_hermitian(h);
    return mat2_inv(Mat2::diag(sigma2, sigma2) + hh * h) * hh;
}

Mat2 mmse_filter(const Mat2& h, double sigma2) {
    if (sigma2 == 0.0) return mat2_inv(h);
    const Mat2 w0 = mmse_unbiased_core(h, sigma2);
    const Mat2 g = w0 * h;
    return Mat2::diag(1.0 / g.a11.real(), 1.0 / g.a22.real()) * w0;
}

Vec2 mmse_equalize(const Vec2& y, const Mat2& h, double sigma2) {
    return mmse_filter(h, sigma2) * y;
}

std::array<CVec, 2> equalize(const std::array<CVec, 2>& y, const ToneChannel& ch) {
    const std::size_t m = ch.h.size();
    if (y[0].size() != m || y[1].size() != m) {
        throw std::invalid_argument("equalize: tone count mismatch");
    }
    std::array<CVec, 2> x{CVec(m), CVec(m)};
    for (std::size_t i = 0; i < m; ++i) {
        const Vec2 est = mmse_filter(ch.h[i], ch.sigma2) * Vec2{y[0][i], y[1][i]};
        x[0][i] = est.v1;
        x[1][i] = est.v2;
    }
    return x;
}

CVec despread(std::span<const Cplx> x_hat) { return idft_unitary(x_hat); }

ErrorCount count_errors(std::span<const std::uint8_t> tx, std::span<const std::uint8_t> rx,
                        int bits_per_symbol) {
    if (tx.size() != rx.size()) throw std::invalid_argument("count_errors: length mismatch");
    if (bits_per_symbol < 1) throw std::invalid_argument("count_errors: bits_per_symbol < 1");
    ErrorCount e;
    e.bits_total = tx.size();
    const auto k = static_cast<std::size_t>(bits_per_symbol);
    for (std::size_t i = 0; i < tx.size(); i += k) {
        std::uint64_t errs = 0;
        for (std::size_t j = i; j < std::min(i + k, tx.size()); ++j) errs += (tx[j] != rx[j]);
        e.bit_errors += errs;
        e.symbol_errors += errs != 0;
    }
    return e;
}

}  // namespace dsofdm
