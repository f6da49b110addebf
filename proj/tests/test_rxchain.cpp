#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "dsofdm/modem.hpp"
#include "dsofdm/rxchain.hpp"
#include "dsofdm/txchain.hpp"

using namespace dsofdm;

namespace {

Mat2 random_channel(std::mt19937_64& gen) {
    std::normal_distribution<double> nd;
    while (true) {
        const Mat2 h{Cplx{nd(gen), nd(gen)}, Cplx{nd(gen), nd(gen)}, Cplx{nd(gen), nd(gen)},
                     Cplx{nd(gen), nd(gen)}};
        const auto [smax, smin] = mat2_singular_values(h);
        if (smin / smax > 0.05) return h;
    }
}

double vec_err(const Vec2& a, const Vec2& b) { return std::max(std::abs(a.v1 - b.v1), std::abs(a.v2 - b.v2)); }

}  // namespace

TEST(Mmse, IdentityChannelIsUnbiased) {
    const Vec2 x{{0.3, -0.2}, {-1.0, 0.5}};
    const Mat2 w0 = mmse_unbiased_core(Mat2::identity(), 0.5);
    EXPECT_LT(mat2_max_abs(w0 - Mat2::diag(2.0 / 3.0, 2.0 / 3.0)), 1e-15);
    EXPECT_LT(mat2_max_abs(mmse_filter(Mat2::identity(), 0.5) - Mat2::identity()), 1e-15);
    EXPECT_LT(vec_err(mmse_equalize(x, Mat2::identity(), 0.5), x), 1e-15);
}

TEST(Mmse, ZeroForcingLimit) {
    std::mt19937_64 gen(1);
    for (int i = 0; i < 100; ++i) {
        const Mat2 h = random_channel(gen);
        const Vec2 x{{1, 2}, {-3, 0.5}};
        const Vec2 y = h * x;
        EXPECT_LT(vec_err(mmse_equalize(y, h, 0.0), x), 1e-10);
        // tiny noise variance converges to the same answer
        EXPECT_LT(vec_err(mmse_equalize(y, h, 1e-12), x), 1e-8);
        EXPECT_LT(mat2_max_abs(mmse_filter(h, 0.0) * h - Mat2::identity()), 1e-10);
    }
}

TEST(Mmse, SingularZeroForcingRejected) {
    EXPECT_THROW(mmse_filter(Mat2{1.0, 1.0, 1.0, 1.0}, 0.0), SingularMatrixError);
    EXPECT_NO_THROW(mmse_filter(Mat2{1.0, 1.0, 1.0, 1.0}, 0.1));
}

TEST(Mmse, BiasCorrectionIdentity) {
    std::mt19937_64 gen(2);
    for (int i = 0; i < 1000; ++i) {
        const Mat2 h = random_channel(gen);
        for (double s2 : {0.01, 0.1, 1.0}) {
            // independent route: (s2 I + H^H H)^{-1} H^H by explicit cofactors
            const Mat2 hh{std::conj(h.a11), std::conj(h.a21), std::conj(h.a12), std::conj(h.a22)};
            const Mat2 a = Mat2::diag(s2, s2) + hh * h;
            const Cplx det = a.a11 * a.a22 - a.a12 * a.a21;
            const Mat2 ainv{a.a22 / det, -a.a12 / det, -a.a21 / det, a.a11 / det};
            const Mat2 g = ainv * hh * h;
            // Gamma via 1 - [(I + H^H H / s2)^{-1}]_kk, which equals [W0 H]_kk
            const Mat2 b = Mat2::identity() + (1.0 / s2) * (hh * h);
            const Cplx bdet = b.a11 * b.a22 - b.a12 * b.a21;
            EXPECT_NEAR(std::abs(1.0 - b.a22 / bdet - g.a11), 0.0, 1e-10);
            EXPECT_NEAR(std::abs(1.0 - b.a11 / bdet - g.a22), 0.0, 1e-10);

            const Mat2 composite = mmse_filter(h, s2) * h;
            ASSERT_NEAR(std::abs(composite.a11 - 1.0), 0.0, 1e-10);
            ASSERT_NEAR(std::abs(composite.a22 - 1.0), 0.0, 1e-10);
        }
    }
}

TEST(Equalize, ToneCountMismatch) {
    ToneChannel ch;
    ch.h.assign(4, Mat2::identity());
    ch.sigma2 = 0.1;
    EXPECT_THROW(equalize({CVec(3), CVec(4)}, ch), std::invalid_argument);
}

TEST(Despread, Examples) {
    RngStream rng(3, 3);
    CVec s(64);
    for (auto& c : s) c = sample_gaussian_pair(rng, 1.0);
    const CVec back = despread(spread(s));
    for (std::size_t i = 0; i < s.size(); ++i) EXPECT_NEAR(std::abs(back[i] - s[i]), 0.0, 1e-12);
    EXPECT_NEAR(norm2(despread(s)), norm2(s), 1e-12);

    CVec impulse(16);
    impulse[0] = 4.0;
    for (const auto& c : despread(impulse)) EXPECT_NEAR(std::abs(c - 1.0), 0.0, 1e-15);
}

TEST(CountErrors, Examples) {
    const Bits a{0, 1, 1, 0, 1, 0, 0, 1};
    EXPECT_EQ(count_errors(a, a).bit_errors, 0u);
    Bits comp(100), zero(100);
    for (std::size_t i = 0; i < 100; ++i) comp[i] = 1;
    const auto e = count_errors(zero, comp, 2);
    EXPECT_EQ(e.bit_errors, 100u);
    EXPECT_EQ(e.bits_total, 100u);
    EXPECT_EQ(e.symbol_errors, 50u);
    EXPECT_THROW(count_errors(a, Bits(7)), std::invalid_argument);

    const Bits b{0, 1, 1, 1, 1, 0, 0, 0};
    const auto f = count_errors(a, b, 4);
    EXPECT_EQ(f.bit_errors, 2u);
    EXPECT_EQ(f.symbol_errors, 2u);
}

TEST(CountErrors, HalfFlipped) {
    RngStream rng(4, 4);
    const std::size_t n = 1000000;
    Bits tx(n), rx(n);
    for (std::size_t i = 0; i < n; ++i) {
        tx[i] = static_cast<std::uint8_t>(rng() >> 63);
        rx[i] = static_cast<std::uint8_t>(tx[i] ^ (rng() >> 63));
    }
    const double r = static_cast<double>(count_errors(tx, rx).bit_errors) / n;
    EXPECT_GE(r, 0.497);
    EXPECT_LE(r, 0.503);
}
