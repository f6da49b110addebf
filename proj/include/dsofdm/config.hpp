#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dsofdm/channel.hpp"
#include "dsofdm/modem.hpp"
#include "dsofdm/txchain.hpp"

namespace dsofdm {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Experiment configuration. Field names match the keys of the config file;
/// physical quantities are kept in the engineering units the file uses.
struct ExperimentConfig {
    int n_spans = 12;
    double span_km = 80.0;
    double lambda_nm = 1550.0;
    double cd_ps_nm_km = 17.0;
    double pmd_ps_sqrtkm = 0.15;
    double pdl_db = 0.1;
    int n_subcarriers = 256;
    double symbol_rate_gbaud = 25.0;
    double cp_fraction = 0.0;
    int oversample = 4;
    Scheme scheme = Scheme::Qpsk;
    Mode mode = Mode::DftSpread;
    std::optional<double> clip_cr_db;  ///< nullopt = "off"
    std::vector<double> esn0_grid_db = {0, 2, 4, 6, 8, 10, 12, 14};
    int symbols_per_point = 1;   ///< OFDM symbols sent per link realization
    int links_per_point = 4000;  ///< upper bound on link realizations per grid point
    int papr_symbols = 100000;
    std::uint64_t seed = 1;

    FiberParams fiber() const;
    FrameConfig frame() const;

    /// Throws ConfigError listing every invalid field by name.
    void validate() const;

    friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// Exact key set of the config file, in canonical order.
const std::vector<std::string_view>& config_keys();

ExperimentConfig parse_config_text(std::string_view text);
ExperimentConfig parse_config(const std::filesystem::path& path);

std::string format_config(const ExperimentConfig& cfg);
void write_config(const ExperimentConfig& cfg, const std::filesystem::path& path);

/// Shortest round-trip decimal form; "inf" / "-inf" for infinities.
std::string format_double(double v);
double parse_double(std::string_view s);

}  // namespace dsofdm
