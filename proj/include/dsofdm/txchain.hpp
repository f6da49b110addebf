#pragma once

#include <array>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "dsofdm/numerics.hpp"

namespace dsofdm {

enum class Mode { DftSpread, Ofdm };

std::string_view to_string(Mode m);
/// Accepts "dft_spread" and "ofdm".
Mode parse_mode(std::string_view name);

struct FrameConfig {
    int subcarriers = 256;
    double symbol_rate = 25e9;  ///< symbols per second
    double cp_fraction = 0.0;   ///< rate overhead only; no samples are replicated
    int oversample = 4;

    /// Useful symbol duration t_s = M / symbol_rate (cyclic prefix excluded).
    double symbol_duration() const { return subcarriers / symbol_rate; }
    double sample_interval() const { return symbol_duration() / (oversample * subcarriers); }
};

/// Data symbols s and transmitted tones x for both polarizations.
struct SymbolFrame {
    std::array<CVec, 2> s;
    std::array<CVec, 2> x;
};

struct Waveform {
    std::array<CVec, 2> samples;
    double sample_interval = 0.0;
};

/// x = F s.
CVec spread(std::span<const Cplx> s);

/// Tone vector for one polarization: F s in DFT-spread mode, s itself in OFDM mode.
CVec modulate(std::span<const Cplx> s, Mode mode);

/// Oversampled time waveform of the tones x. The M tones sit contiguously
/// about DC (first half at positive frequencies, rest at the top of the
/// oversample*M grid); the scaling makes the mean sample power ||x||^2 / M.
CVec synthesize_waveform(std::span<const Cplx> x, int oversample);

Waveform synthesize(const SymbolFrame& frame, const FrameConfig& cfg);

/// Inverse of synthesize_waveform restricted to the occupied tones.
CVec extract_tones(std::span<const Cplx> w, std::size_t subcarriers);

/// Amplitude clipping at A = P * 10^(cr_db/20), P the RMS amplitude of w.
/// Samples above A keep their phase; the rest pass unchanged. An infinite
/// cr_db disables clipping.
CVec clip(std::span<const Cplx> w, double cr_db);

/// Clips the waveform of tones x (synthesized at `oversample`), returns the
/// in-band tones rescaled to the energy of x.
CVec clip_tones(std::span<const Cplx> x, double cr_db, int oversample = 1);

/// 10 log10(max|w|^2 / mean|w|^2).
double papr_db(std::span<const Cplx> w);

struct CcdfPoint {
    double threshold_db;
    double probability;
};

/// Fraction of samples strictly above each threshold.
std::vector<CcdfPoint> ccdf(std::span<const double> samples, std::span<const double> thresholds);

/// Smallest threshold whose CCDF is at or below `level`; nullopt if none is.
std::optional<double> ccdf_crossing(std::span<const CcdfPoint> curve, double level);

}  // namespace dsofdm
