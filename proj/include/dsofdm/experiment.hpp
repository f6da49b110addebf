#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dsofdm/config.hpp"
#include "dsofdm/rxchain.hpp"

namespace dsofdm {

struct BerRecord {
    double esn0_db = 0.0;
    Mode mode = Mode::DftSpread;
    Scheme scheme = Scheme::Qpsk;
    std::optional<double> clip_cr_db;
    double ber = 0.0;
    std::uint64_t bit_errors = 0;
    std::uint64_t bits = 0;
    double ci95_low = 0.0;
    double ci95_high = 1.0;
};

struct CcdfRecord {
    Mode mode = Mode::DftSpread;
    Scheme scheme = Scheme::Qpsk;
    std::optional<double> clip_cr_db;
    double threshold_db = 0.0;
    double ccdf = 0.0;
};

struct RunOptions {
    int workers = 0;               ///< 0: SIM_WORKERS, else hardware concurrency
    int clip_oversample = 1;       ///< rate at which the clipper sees the waveform
    std::uint64_t min_bits = 100000;
    std::uint64_t target_errors = 500;
    int batch = 32;                ///< link trials between stopping-rule checks
};

/// Worker count from the options, the SIM_WORKERS variable, or the hardware.
int resolve_workers(const RunOptions& opts);

/// Wilson score interval at 95 % confidence.
std::pair<double, double> wilson_interval(std::uint64_t errors, std::uint64_t trials);

/// Closed-form QPSK bit error rate Q(sqrt(2 Eb/N0)) with Eb/N0 = Es/N0 / 2.
double qpsk_awgn_ber(double esn0_db);

/// Errors for one link trial: draw a fiber realization, then send
/// cfg.symbols_per_point frames over it. The stream fully determines the result.
ErrorCount run_link_trial(const ExperimentConfig& cfg, double sigma2, RngStream rng,
                          const RunOptions& opts = {});

/// One record per Es/N0 grid point. Trials stream-seeded from (seed, point, trial);
/// results do not depend on the worker count.
std::vector<BerRecord> run_ber_sweep(const ExperimentConfig& cfg, const RunOptions& opts = {});

/// Threshold grid 0, 0.1, ..., 20 dB.
std::vector<double> papr_thresholds();

/// PAPR samples (one per single-polarization symbol) for the given mode and clipping.
std::vector<double> papr_samples(const ExperimentConfig& cfg, Mode mode, std::optional<double> clip_cr_db,
                                 const RunOptions& opts = {});

/// CCDF curves for DFT-spread, OFDM and (if cfg.clip_cr_db is set) clipped OFDM,
/// each for QPSK and 16-QAM.
std::vector<CcdfRecord> run_papr_experiment(const ExperimentConfig& cfg, const RunOptions& opts = {});

/// Es/N0 at which the curve crosses `target` by log-linear interpolation
/// between the bracketing grid points; nullopt if it never does.
std::optional<double> ber_crossing(std::span<const BerRecord> curve, double target = 1e-3);

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct ComparisonReport {
    std::vector<CheckResult> checks;
    std::vector<BerRecord> ber;
    std::vector<CcdfRecord> papr;

    bool passed() const;
};

/// Es/N0 grids used by the comparison suite.
std::vector<double> comparison_grid(Scheme scheme);

/// BER part of the comparison: DFT-spread, OFDM and clipped OFDM curves for
/// both constellations, the curve-equivalence test and the clipping penalties.
ComparisonReport compare_ber(const ExperimentConfig& cfg, const RunOptions& opts = {});

/// PAPR orderings at CCDF 1e-2 and the 1e-3 gap between DFT-spread and OFDM.
ComparisonReport compare_papr(const ExperimentConfig& cfg, const RunOptions& opts = {});

ComparisonReport run_comparison(const ExperimentConfig& cfg, const RunOptions& opts = {});

void write_ber_csv(std::span<const BerRecord> records, const std::filesystem::path& path);
void write_papr_csv(std::span<const CcdfRecord> records, const std::filesystem::path& path);
std::string format_ber_csv(std::span<const BerRecord> records);
std::string format_papr_csv(std::span<const CcdfRecord> records);

/// Span lines "k tau theta", then tone lines "m Re/Im(h11 h12 h21 h22)".
std::string format_channel_dump(const LinkRealization& link, std::span<const double> grid);

}  // namespace dsofdm
