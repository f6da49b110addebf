#include "dsofdm/txchain.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace dsofdm {

std::string_view to_string(Mode m) {
    return m == Mode::DftSpread ? "dft_spread" : "ofdm";
}

Mode parse_mode(std::string_view name) {
    if (name == "dft_spread") return Mode::DftSpread;
    if (name == "ofdm") return Mode::Ofdm;
    throw std::invalid_argument("unknown mode '" + std::string(name) + "'");
}

CVec spread(std::span<const Cplx> s) { return dft_unitary(s); }

CVec modulate(std::span<const Cplx> s, Mode mode) {
    if (mode == Mode::DftSpread) return spread(s);
    return CVec(s.begin(), s.end());
}

CVec synthesize_waveform(std::span<const Cplx> x, int oversample) {
    if (oversample < 1) {
        throw std::invalid_argument("synthesize_waveform: oversample must be >= 1");
    }
    const std::size_t m = x.size();
    const std::size_t n = m * static_cast<std::size_t>(oversample);
    const std::size_t low = m / 2;
    CVec padded(n);
    std::copy(x.begin(), x.begin() + low, padded.begin());
    std::copy(x.begin() + low, x.end(), padded.end() - (m - low));
    CVec w = idft_unitary(padded);
    const double gain = std::sqrt(static_cast<double>(oversample));
    for (auto& c : w) c *= gain;
    return w;
}

Waveform synthesize(const SymbolFrame& frame, const FrameConfig& cfg) {
    Waveform wf;
    wf.sample_interval = cfg.sample_interval();
    for (int k = 0; k < 2; ++k) wf.samples[k] = synthesize_waveform(frame.x[k], cfg.oversample);
    return wf;
}

CVec extract_tones(std::span<const Cplx> w, std::size_t subcarriers) {
    if (subcarriers == 0 || w.size() % subcarriers != 0) {
        throw std::invalid_argument("extract_tones: waveform length not a multiple of M");
    }
    const CVec spec = dft_unitary(w);
    const double gain = 1.0 / std::sqrt(static_cast<double>(w.size() / subcarriers));
    const std::size_t low = subcarriers / 2;
    CVec x(subcarriers);
    for (std::size_t i = 0; i < low; ++i) x[i] = spec[i] * gain;
    for (std::size_t i = low; i < subcarriers; ++i) x[i] = spec[spec.size() - subcarriers + i] * gain;
    return x;
}

namespace {

double mean_power(std::span<const Cplx> w) {
    double acc = 0.0;
    for (const auto& c : w) acc += std::norm(c);
    return acc / static_cast<double>(w.size());
}

}  // namespace

CVec clip(std::span<const Cplx> w, double cr_db) {
    if (w.empty()) throw std::invalid_argument("clip: empty waveform");
    const double p = std::sqrt(mean_power(w));
    if (p == 0.0) throw std::invalid_argument("clip: all-zero waveform");
    CVec out(w.begin(), w.end());
    if (std::isinf(cr_db) && cr_db > 0) return out;
    const double a = p * std::pow(10.0, cr_db / 20.0);
    for (auto& c : out) {
        const double mag = std::abs(c);
        if (mag > a) c *= a / mag;
    }
    return out;
}

CVec clip_tones(std::span<const Cplx> x, double cr_db, int oversample) {
    const CVec w = clip(synthesize_waveform(x, oversample), cr_db);
    CVec out = extract_tones(w, x.size());
    const double scale = norm2(x) / norm2(out);
    for (auto& c : out) c *= scale;
    return out;
}

double papr_db(std::span<const Cplx> w) {
    if (w.empty()) throw std::invalid_argument("papr_db: empty waveform");
    double peak = 0.0;
    for (const auto& c : w) peak = std::max(peak, std::norm(c));
    const double mean = mean_power(w);
    if (mean == 0.0) throw std::invalid_argument("papr_db: all-zero waveform");
    return 10.0 * std::log10(peak / mean);
}

std::vector<CcdfPoint> ccdf(std::span<const double> samples, std::span<const double> thresholds) {
    if (samples.empty()) throw std::invalid_argument("ccdf: no samples");
    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());
    std::vector<CcdfPoint> out;
    out.reserve(thresholds.size());
    for (double t : thresholds) {
        const auto above = sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), t);
        out.push_back({t, static_cast<double>(above) / n});
    }
    return out;
}

std::optional<double> ccdf_crossing(std::span<const CcdfPoint> curve, double level) {
    for (const auto& p : curve) {
        if (p.probability <= level) return p.threshold_db;
    }
    return std::nullopt;
}

}  // namespace dsofdm
