#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace dsofdm {

using Cplx = std::complex<double>;
using CVec = std::vector<Cplx>;

inline constexpr double kPi = 3.14159265358979323846;

/// 2x2 complex matrix, row-major. Holds per-tone channel and Jones matrices.
struct Mat2 {
    Cplx a11{1.0}, a12{0.0}, a21{0.0}, a22{1.0};

    static constexpr Mat2 identity() { return {}; }
    static constexpr Mat2 diag(Cplx d1, Cplx d2) { return {d1, 0.0, 0.0, d2}; }

    constexpr Cplx det() const { return a11 * a22 - a12 * a21; }

    friend constexpr bool operator==(const Mat2&, const Mat2&) = default;
};

constexpr Mat2 operator*(const Mat2& a, const Mat2& b) {
    return {a.a11 * b.a11 + a.a12 * b.a21, a.a11 * b.a12 + a.a12 * b.a22,
            a.a21 * b.a11 + a.a22 * b.a21, a.a21 * b.a12 + a.a22 * b.a22};
}
constexpr Mat2 operator+(const Mat2& a, const Mat2& b) {
    return {a.a11 + b.a11, a.a12 + b.a12, a.a21 + b.a21, a.a22 + b.a22};
}
constexpr Mat2 operator-(const Mat2& a, const Mat2& b) {
    return {a.a11 - b.a11, a.a12 - b.a12, a.a21 - b.a21, a.a22 - b.a22};
}
constexpr Mat2 operator*(Cplx s, const Mat2& a) {
    return {s * a.a11, s * a.a12, s * a.a21, s * a.a22};
}

/// Two-element complex vector (one entry per polarization).
struct Vec2 {
    Cplx v1{}, v2{};
    friend constexpr bool operator==(const Vec2&, const Vec2&) = default;
};

constexpr Vec2 operator*(const Mat2& a, const Vec2& x) {
    return {a.a11 * x.v1 + a.a12 * x.v2, a.a21 * x.v1 + a.a22 * x.v2};
}

Mat2 mat2_hermitian(const Mat2& a);

/// Closed-form inverse; throws SingularMatrixError when |det| <= kSingularDet.
Mat2 mat2_inv(const Mat2& a);

/// Largest elementwise modulus.
double mat2_max_abs(const Mat2& a);

/// Singular values (largest first).
std::pair<double, double> mat2_singular_values(const Mat2& a);

inline constexpr double kSingularDet = 1e-30;

class SingularMatrixError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Unitary DFT pair: F[a,b] = exp(-j 2 pi a b / M) / sqrt(M). Power-of-two
// lengths use a radix-2 FFT, other lengths fall back to direct summation.
CVec dft_unitary(std::span<const Cplx> v);
CVec idft_unitary(std::span<const Cplx> v);

double norm2(std::span<const Cplx> v);

/// Counter-based random stream. Sample i of a stream is a pure function of
/// (seed, stream_id, i), so streams can be created anywhere in any order.
class RngStream {
public:
    using result_type = std::uint64_t;

    RngStream(std::uint64_t seed, std::uint64_t stream_id);

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_id_; }
    std::uint64_t position() const { return counter_; }

    std::uint64_t operator()();
    static constexpr std::uint64_t min() { return 0; }
    static constexpr std::uint64_t max() { return ~std::uint64_t{0}; }

    /// Uniform on the open interval (0, 1).
    double uniform();
    /// Standard normal real sample.
    double normal();

private:
    std::uint64_t seed_;
    std::uint64_t stream_id_;
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

/// 64-bit finalizer used for key and stream derivation.
std::uint64_t mix64(std::uint64_t x);

/// Stream id for trial `trial` of sweep point `point`.
std::uint64_t derive_stream_id(std::uint64_t seed, std::uint64_t point, std::uint64_t trial);

/// Circularly-symmetric complex Gaussian with E|v|^2 = variance.
Cplx sample_gaussian_pair(RngStream& rng, double variance);

/// Maxwellian sample: norm of three i.i.d. N(0, rms^2/3) components, so E[tau^2] = rms^2.
double sample_maxwellian(RngStream& rng, double rms);

/// Mean-to-rms ratio of the Maxwellian distribution, 2 sqrt(2/pi) / sqrt(3).
double maxwellian_mean_over_rms();

}  // namespace dsofdm
