#include "dsofdm/numerics.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <unordered_map>

namespace dsofdm {

Mat2 mat2_hermitian(const Mat2& a) {
    return {std::conj(a.a11), std::conj(a.a21), std::conj(a.a12), std::conj(a.a22)};
}

Mat2 mat2_inv(const Mat2& a) {
    const Cplx d = a.det();
    if (!(std::abs(d) > kSingularDet)) {
        throw SingularMatrixError("mat2_inv: |det| below singularity threshold");
    }
    const Cplx r = 1.0 / d;
    return {r * a.a22, -r * a.a12, -r * a.a21, r * a.a11};
}

double mat2_max_abs(const Mat2& a) {
    return std::max({std::abs(a.a11), std::abs(a.a12), std::abs(a.a21), std::abs(a.a22)});
}

std::pair<double, double> mat2_singular_values(const Mat2& a) {
    const double fro2 = std::norm(a.a11) + std::norm(a.a12) + std::norm(a.a21) + std::norm(a.a22);
    const double det2 = std::norm(a.det());
    const double disc = std::sqrt(std::max(0.0, fro2 * fro2 - 4.0 * det2));
    const double big = 0.5 * (fro2 + disc);
    // small = det2 / big avoids cancellation when the two values are far apart
    const double small = big > 0.0 ? det2 / big : 0.0;
    return {std::sqrt(big), std::sqrt(small)};
}

namespace {

// exp(-j 2 pi k / n) for k < n/2, computed per entry so no error accumulates.
const CVec& twiddles(std::size_t n) {
    thread_local std::unordered_map<std::size_t, CVec> cache;
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    CVec w(n / 2);
    for (std::size_t k = 0; k < w.size(); ++k) {
        const double ang = -2.0 * kPi * static_cast<double>(k) / static_cast<double>(n);
        w[k] = {std::cos(ang), std::sin(ang)};
    }
    return cache.emplace(n, std::move(w)).first->second;
}

void fft_radix2(CVec& x, bool inverse) {
    const std::size_t n = x.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(x[i], x[j]);
    }
    const CVec& w = twiddles(n);
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t half = len / 2;
        const std::size_t stride = n / len;
        for (std::size_t i = 0; i < n; i += len) {
            for (std::size_t k = 0; k < half; ++k) {
                const Cplx tw = inverse ? std::conj(w[k * stride]) : w[k * stride];
                const Cplx u = x[i + k];
                const Cplx t = x[i + k + half] * tw;
                x[i + k] = u + t;
                x[i + k + half] = u - t;
            }
        }
    }
}

CVec dft_direct(std::span<const Cplx> v, bool inverse) {
    const std::size_t n = v.size();
    CVec out(n);
    const double sign = inverse ? 1.0 : -1.0;
    for (std::size_t a = 0; a < n; ++a) {
        Cplx acc{};
        for (std::size_t b = 0; b < n; ++b) {
            const std::size_t k = (a * b) % n;
            const double ang = sign * 2.0 * kPi * static_cast<double>(k) / static_cast<double>(n);
            acc += v[b] * Cplx{std::cos(ang), std::sin(ang)};
        }
        out[a] = acc;
    }
    return out;
}

CVec transform(std::span<const Cplx> v, bool inverse) {
    if (v.empty()) {
        throw std::invalid_argument("DFT of a zero-length vector");
    }
    CVec out;
    if (std::has_single_bit(v.size())) {
        out.assign(v.begin(), v.end());
        fft_radix2(out, inverse);
    } else {
        out = dft_direct(v, inverse);
    }
    const double scale = 1.0 / std::sqrt(static_cast<double>(v.size()));
    for (auto& c : out) c *= scale;
    return out;
}

}  // namespace

CVec dft_unitary(std::span<const Cplx> v) { return transform(v, false); }

CVec idft_unitary(std::span<const Cplx> v) { return transform(v, true); }

double norm2(std::span<const Cplx> v) {
    double acc = 0.0;
    for (const auto& c : v) acc += std::norm(c);
    return std::sqrt(acc);
}

// --- random streams -------------------------------------------------------

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
}

std::uint64_t mix64(std::uint64_t x) {
    x ^= x >> 30;
    x *= 0xBF58476D1CE4E5B9ULL;
    x ^= x >> 27;
    x *= 0x94D049BB133111EBULL;
    x ^= x >> 31;
    return x;
}

std::uint64_t derive_stream_id(std::uint64_t seed, std::uint64_t point, std::uint64_t trial) {
    std::uint64_t h = mix64(seed + kGolden);
    h = mix64(h ^ (point + 0x632BE59BD9B4E019ULL));
    h = mix64(h ^ (trial + 0x8CB92BA72F3D8DD7ULL));
    return h;
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id),
      key_(mix64(mix64(seed ^ 0xD1B54A32D192ED03ULL) ^ mix64(stream_id + kGolden))) {}

std::uint64_t RngStream::operator()() {
    const std::uint64_t ctr = counter_++;
    std::uint64_t z = key_ ^ (ctr * kGolden);
    z = mix64(z);
    return mix64(z + key_);
}

double RngStream::uniform() {
    return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
}

double RngStream::normal() {
    const double u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
}

Cplx sample_gaussian_pair(RngStream& rng, double variance) {
    if (variance < 0.0) {
        throw std::invalid_argument("sample_gaussian_pair: negative variance");
    }
    const double u1 = rng.uniform();
    const double u2 = rng.uniform();
    if (variance == 0.0) return {0.0, 0.0};
    const double r = std::sqrt(-variance * std::log(u1));
    const double ang = 2.0 * kPi * u2;
    return {r * std::cos(ang), r * std::sin(ang)};
}

double sample_maxwellian(RngStream& rng, double rms) {
    if (rms < 0.0) {
        throw std::invalid_argument("sample_maxwellian: negative rms");
    }
    // pair variance 2 s^2 puts s^2 on each real component
    const double s2 = rms * rms / 3.0;
    const Cplx g12 = sample_gaussian_pair(rng, 2.0 * s2);
    const Cplx g3 = sample_gaussian_pair(rng, 2.0 * s2);
    return std::sqrt(std::norm(g12) + g3.real() * g3.real());
}

double maxwellian_mean_over_rms() {
    return 2.0 * std::sqrt(2.0 / kPi) / std::sqrt(3.0);
}

}  // namespace dsofdm
