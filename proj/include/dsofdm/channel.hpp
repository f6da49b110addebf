#pragma once

#include <array>
#include <cmath>
#include <span>
#include <vector>

#include "dsofdm/numerics.hpp"

namespace dsofdm {

inline constexpr double kSpeedOfLight = 2.99792458e8;  // m/s

/// Multi-span fiber link parameters in SI units.
struct FiberParams {
    int n_spans = 12;
    double span_length = 80e3;     ///< m
    double cd = 17e-6;             ///< s/m^2 (17 ps/nm/km)
    double pmd = 0.15e-12 / std::sqrt(1e3);  ///< s/sqrt(m) (0.15 ps/sqrt(km))
    double pdl_db = 0.1;           ///< per span
    double wavelength = 1.55e-6;   ///< m

    static FiberParams from_engineering(int n_spans, double span_km, double lambda_nm,
                                        double cd_ps_nm_km, double pmd_ps_sqrtkm, double pdl_db);

    double total_length() const { return n_spans * span_length; }
    double carrier_frequency() const { return kSpeedOfLight / wavelength; }
    /// PDL attenuation k = 10^(-pdl_db/20).
    double pdl_attenuation() const;
    /// RMS DGD of one span, pmd * sqrt(span_length).
    double span_dgd_rms() const;

    void validate() const;
};

struct SpanDraw {
    double k = 1.0;      ///< PDL attenuation in (0, 1]
    double tau = 0.0;    ///< DGD, s
    double theta = 0.0;  ///< rotation, rad in [0, 2 pi)
};

struct LinkRealization {
    std::vector<SpanDraw> spans;
    double cpe = 0.0;  ///< common phase error, rad
    FiberParams params;
};

struct LinkOptions {
    bool random_cpe = false;  ///< draw the common phase uniformly instead of fixing it at 0
};

struct ToneChannel {
    std::vector<Mat2> h;
    double sigma2 = 0.0;
};

/// f_m = m / t_s for tone index m = 0..M-1.
std::vector<double> frequency_grid(int subcarriers, double symbol_duration);

/// Chromatic-dispersion phase pi c D L f^2 / f_c^2 accumulated over length L.
double cd_phase(double f, const FiberParams& p, double length);

LinkRealization draw_link(const FiberParams& p, RngStream& rng, LinkOptions opts = {});

/// Jones factor of one span at absolute optical frequency f_c + f (without the
/// scalar CD phase): diag(1, k) * diag(e^{j pi f tau}, e^{-j pi f tau}) * R(theta).
Mat2 span_jones(const SpanDraw& span, double carrier_frequency, double f);

/// Per-tone 2x2 transfer H_m for tone index m (0-based).
Mat2 tone_transfer(const LinkRealization& link, std::size_t tone, std::span<const double> grid);

ToneChannel tone_channel(const LinkRealization& link, std::span<const double> grid, double sigma2);

/// Noise variance per complex entry for unit-energy symbols; +inf gives 0.
double sigma2_from_esn0_db(double esn0_db);

/// y_m = H_m x_m + v_m on every tone, v_m ~ CN(0, sigma2 I).
std::array<CVec, 2> apply_channel(const std::array<CVec, 2>& x, const ToneChannel& ch, RngStream& rng);

}  // namespace dsofdm
