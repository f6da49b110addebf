// Command-line driver for the coherent optical DFT-spread OFDM simulator.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

#include "dsofdm/config.hpp"
#include "dsofdm/experiment.hpp"

using namespace dsofdm;

namespace {

void print_report(const ComparisonReport& rep) {
    for (const auto& c : rep.checks) {
        std::printf("[%s] %s", c.pass ? "PASS" : "FAIL", c.name.c_str());
        if (!c.detail.empty()) std::printf("  (%s)", c.detail.c_str());
        std::printf("\n");
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Coherent optical DFT-spread OFDM physical-layer simulator"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_path;
    std::uint64_t seed = 0;
    RunOptions opts;

    auto* ber = app.add_subcommand("ber", "BER sweep over the configured Es/N0 grid");
    ber->add_option("--config", config_path, "config file")->required()->check(CLI::ExistingFile);
    ber->add_option("--out", out_path, "output CSV")->required();
    ber->add_option("--clip-oversample", opts.clip_oversample,
                    "oversampling factor seen by the clipper (1 = critical rate)")
        ->check(CLI::PositiveNumber);

    auto* papr = app.add_subcommand("papr", "PAPR CCDF for DFT-spread, OFDM and clipped OFDM");
    papr->add_option("--config", config_path, "config file")->required()->check(CLI::ExistingFile);
    papr->add_option("--out", out_path, "output CSV")->required();

    auto* dump = app.add_subcommand("channel-dump", "write one fiber realization and its per-tone matrices");
    dump->add_option("--config", config_path, "config file")->required()->check(CLI::ExistingFile);
    dump->add_option("--seed", seed, "seed of the realization")->required();
    dump->add_option("--out", out_path, "output text file")->required();

    auto* verify = app.add_subcommand("verify", "run the DFT-spread vs. clipped OFDM comparison suite");
    verify->add_option("--config", config_path, "config file")->required()->check(CLI::ExistingFile);
    std::string verify_ber_out;
    std::string verify_papr_out;
    verify->add_option("--ber-out", verify_ber_out, "optional CSV of all BER curves");
    verify->add_option("--papr-out", verify_papr_out, "optional CSV of all CCDF curves");

    CLI11_PARSE(app, argc, argv);

    try {
        const ExperimentConfig cfg = parse_config(config_path);
        if (*ber) {
            write_ber_csv(run_ber_sweep(cfg, opts), out_path);
        } else if (*papr) {
            write_papr_csv(run_papr_experiment(cfg, opts), out_path);
        } else if (*dump) {
            RngStream rng(seed, derive_stream_id(seed, 0, 0));
            const auto link = draw_link(cfg.fiber(), rng);
            const auto frame = cfg.frame();
            const auto grid = frequency_grid(frame.subcarriers, frame.symbol_duration());
            std::FILE* f = std::fopen(out_path.c_str(), "wb");
            if (!f) throw std::runtime_error("cannot open " + out_path);
            const std::string text = format_channel_dump(link, grid);
            const bool ok = std::fwrite(text.data(), 1, text.size(), f) == text.size();
            std::fclose(f);
            if (!ok) throw std::runtime_error("write failed for " + out_path);
        } else if (*verify) {
            const auto rep = run_comparison(cfg, opts);
            print_report(rep);
            if (!verify_ber_out.empty()) write_ber_csv(rep.ber, verify_ber_out);
            if (!verify_papr_out.empty()) write_papr_csv(rep.papr, verify_papr_out);
            return rep.passed() ? 0 : 1;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
