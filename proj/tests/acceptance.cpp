// Acceptance suite: one line per criterion, nonzero exit if any fails.
//
//   dsofdm_acceptance <path-to-dsofdm_sim>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "dsofdm/experiment.hpp"
#include "oracles.hpp"

using namespace dsofdm;
namespace fs = std::filesystem;

namespace {

struct Line {
    std::string id;
    bool pass;
    std::string detail;
};

std::vector<Line> g_lines;

void report(const std::string& id, bool pass, const std::string& detail) {
    g_lines.push_back({id, pass, detail});
    std::printf("[%s] %s: %s\n", pass ? "PASS" : "FAIL", id.c_str(), detail.c_str());
    std::fflush(stdout);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof(buf), f, args...);
    return buf;
}

ExperimentConfig longhaul_config() {
    ExperimentConfig cfg;  // defaults describe the 12 x 80 km link
    cfg.clip_cr_db.reset();
    cfg.seed = 20100101;
    return cfg;
}

// 1. Noise-free loopback over the impaired fiber recovers >= 1e6 bits per case.
void zero_noise_loopback() {
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    std::string detail;
    for (Scheme scheme : {Scheme::Qpsk, Scheme::Qam16}) {
        for (Mode mode : {Mode::DftSpread, Mode::Ofdm}) {
            ExperimentConfig cfg = longhaul_config();
            cfg.scheme = scheme;
            cfg.mode = mode;
            cfg.esn0_grid_db = {std::numeric_limits<double>::infinity()};
            const int bits_per_link = 2 * cfg.n_subcarriers * Constellation::get(scheme).bits_per_symbol();
            cfg.links_per_point = (1000000 + bits_per_link - 1) / bits_per_link;
            const auto r = run_ber_sweep(cfg).at(0);
            ok = ok && r.bit_errors == 0 && r.bits >= 1000000;
            detail += fmt("%s/%s %llu errors in %llu bits; ", std::string(to_string(mode)).c_str(),
                          std::string(to_string(scheme)).c_str(), (unsigned long long)r.bit_errors,
                          (unsigned long long)r.bits);
        }
    }
    const double secs = seconds_since(t0);
    report("AC1 zero-noise loopback", ok && secs < 30.0, detail + fmt("%.1f s (target < 30 s)", secs));
}

// 2. Identity channel, QPSK, DFT-spread: BER within 3 binomial sigma of Q(sqrt(2 Eb/N0)).
void awgn_oracle() {
    ExperimentConfig cfg = longhaul_config();
    cfg.pmd_ps_sqrtkm = 0.0;
    cfg.pdl_db = 0.0;
    cfg.links_per_point = 400000;
    const std::vector<double> ebn0 = {4, 6, 8, 10};
    cfg.esn0_grid_db.clear();
    for (double e : ebn0) cfg.esn0_grid_db.push_back(e + 10.0 * std::log10(2.0));
    const auto recs = run_ber_sweep(cfg);
    bool ok = true;
    std::string detail;
    for (std::size_t i = 0; i < recs.size(); ++i) {
        const double p = oracle::q_function(std::sqrt(2.0 * std::pow(10.0, ebn0[i] / 10.0)));
        const double sigma = oracle::binomial_sigma(p, double(recs[i].bits));
        const double z = (recs[i].ber - p) / sigma;
        ok = ok && std::abs(z) <= 3.0;
        detail += fmt("Eb/N0 %g dB: %.3e vs %.3e (%+.2f sigma); ", ebn0[i], recs[i].ber, p, z);
    }
    report("AC2 AWGN oracle", ok, detail);
}

// 3. diag(Gamma W0 H) = (1, 1) over 1e3 random fiber channels with up to 3 dB PDL per span.
void mmse_bias_identity() {
    double worst = 0.0;
    const auto grid = frequency_grid(256, 256 / 25e9);
    for (std::uint64_t i = 0; i < 1000; ++i) {
        RngStream rng(3, i);
        FiberParams p = longhaul_config().fiber();
        p.pdl_db = 3.0 * rng.uniform();
        const auto link = draw_link(p, rng);
        const std::size_t tone = static_cast<std::size_t>(rng() % grid.size());
        const Mat2 h = tone_transfer(link, tone, grid);
        for (double s2 : {0.01, 0.1, 1.0}) {
            const Mat2 g = mmse_filter(h, s2) * h;
            worst = std::max({worst, std::abs(g.a11 - 1.0), std::abs(g.a22 - 1.0)});
        }
    }
    report("AC3 MMSE bias identity", worst < 1e-10, fmt("max |diag(Gamma W0 H) - 1| = %.2e (tol 1e-10)", worst));
}

// 4. Unitarity without PDL, exact identity with impairments off, singular-value bounds.
void channel_invariants() {
    const auto grid = frequency_grid(256, 256 / 25e9);
    double unitary_err = 0.0;
    FiberParams lossless = longhaul_config().fiber();
    lossless.pdl_db = 0.0;
    for (std::uint64_t i = 0; i < 100; ++i) {
        RngStream rng(4, i);
        for (const auto& h : tone_channel(draw_link(lossless, rng), grid, 0.0).h) {
            unitary_err = std::max(unitary_err, mat2_max_abs(mat2_hermitian(h) * h - Mat2::identity()));
        }
    }

    FiberParams off = longhaul_config().fiber();
    off.pmd = 0.0;
    off.pdl_db = 0.0;
    bool identity = true;
    for (std::uint64_t i = 0; i < 10; ++i) {
        RngStream rng(5, i);
        LinkRealization link = draw_link(off, rng);
        for (auto& s : link.spans) s.theta = 0.0;
        for (const auto& h : tone_channel(link, grid, 0.0).h) identity = identity && h == Mat2::identity();
    }

    double below = 0.0, above = 0.0;
    for (double pdl : {0.1, 1.0, 3.0}) {
        FiberParams p = longhaul_config().fiber();
        p.pdl_db = pdl;
        const double floor = std::pow(p.pdl_attenuation(), p.n_spans);
        for (std::uint64_t i = 0; i < 100; ++i) {
            RngStream rng(6, i);
            for (const auto& h : tone_channel(draw_link(p, rng), grid, 0.0).h) {
                const auto [smax, smin] = mat2_singular_values(h);
                above = std::max(above, smax - 1.0);
                below = std::max(below, floor - smin);
            }
        }
    }
    const bool ok = unitary_err < 1e-10 && identity && above <= 1e-10 && below <= 1e-10;
    report("AC4 channel invariants", ok,
           fmt("max|H^H H - I| = %.2e; impairments-off H == I: %s; sigma_max - 1 <= %.2e; "
               "prod(k) - sigma_min <= %.2e",
               unitary_err, identity ? "exact" : "NO", above, below));
}

// 5. PAPR orderings with M = 256, L_os = 4, 1e5 symbols.
void papr_reproduction() {
    const auto t0 = std::chrono::steady_clock::now();
    ExperimentConfig cfg = longhaul_config();
    cfg.oversample = 4;
    cfg.papr_symbols = 100000;
    cfg.clip_cr_db = 3.0;
    const auto rep = compare_papr(cfg);
    const double secs = seconds_since(t0);
    auto find = [&](const std::string& prefix) {
        for (const auto& c : rep.checks)
            if (c.name.rfind(prefix, 0) == 0) return c;
        return CheckResult{prefix, false, "check missing"};
    };
    const auto a = find("qpsk dft-spread PAPR >= 2 dB below ofdm");
    const auto b = find("ofdm qam16 PAPR within 0.5 dB");
    const auto c1 = find("qpsk clipped ofdm PAPR between");
    const auto c2 = find("qam16 clipped ofdm PAPR between");
    report("AC5a DFT-spread QPSK >= 2 dB left of OFDM QPSK at CCDF 1e-3", a.pass, a.detail);
    report("AC5b OFDM 16-QAM within 0.5 dB of OFDM QPSK at CCDF 1e-2", b.pass, b.detail);
    report("AC5c clipped OFDM between DFT-spread and OFDM at CCDF 1e-2", c1.pass && c2.pass,
           "qpsk: " + c1.detail + "; qam16: " + c2.detail);
    report("AC5 runtime", secs < 120.0, fmt("%.1f s (target < 120 s)", secs));
}

// 6. BER equivalence and clipping penalties under the long-haul link.
void ber_reproduction() {
    const auto t0 = std::chrono::steady_clock::now();
    ExperimentConfig cfg = longhaul_config();
    cfg.clip_cr_db = 3.0;
    const auto rep = compare_ber(cfg);
    const double secs = seconds_since(t0);
    auto get = [&](const std::string& name) {
        for (const auto& c : rep.checks)
            if (c.name == name) return c;
        return CheckResult{name, false, "check missing"};
    };
    const auto eq_q = get("qpsk dft-spread and ofdm BER curves overlap (95% CI)");
    const auto eq_16 = get("qam16 dft-spread and ofdm BER curves overlap (95% CI)");
    report("AC6a DFT-spread and OFDM BER curves overlap at every point", eq_q.pass && eq_16.pass,
           "qpsk " + eq_q.detail + "; qam16 " + eq_16.detail);
    const auto pq = get("qpsk clipping penalty at BER 1e-3 in [0.4, 1.2] dB");
    report("AC6b QPSK clipping penalty 0.8 +/- 0.4 dB at BER 1e-3", pq.pass, pq.detail);
    const auto p16 = get("qam16 clipping penalty at BER 1e-3 >= 5 dB");
    const auto p16t = get("qam16 clipping penalty at BER 1e-3 in [6, 10] dB");
    report("AC6c 16-QAM clipping penalty >= 5 dB at BER 1e-3", p16.pass, p16.detail);
    report("AC6c' 16-QAM clipping penalty within 8 +/- 2 dB", p16t.pass, p16t.detail);
    report("AC6 runtime", secs < 600.0, fmt("%.1f s (target < 600 s)", secs));
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// 7. `ber` CLI output is byte-identical for different SIM_WORKERS values.
void reproducibility(const std::string& sim) {
    const fs::path dir = fs::temp_directory_path() / "dsofdm_acceptance";
    fs::create_directories(dir);
    ExperimentConfig cfg = longhaul_config();
    cfg.scheme = Scheme::Qam16;
    cfg.mode = Mode::Ofdm;
    cfg.clip_cr_db = 3.0;
    cfg.esn0_grid_db = {10, 14, 18, 22};
    cfg.links_per_point = 300;
    write_config(cfg, dir / "repro.cfg");
    std::vector<std::string> outputs;
    int status = 0;
    for (int workers : {1, 4}) {
        const fs::path out = dir / ("ber_w" + std::to_string(workers) + ".csv");
        const std::string cmd = "SIM_WORKERS=" + std::to_string(workers) + " \"" + sim + "\" ber --config \"" +
                                (dir / "repro.cfg").string() + "\" --out \"" + out.string() + "\"";
        status |= std::system(cmd.c_str());
        outputs.push_back(slurp(out));
    }
    const bool ok = status == 0 && !outputs[0].empty() && outputs[0] == outputs[1];
    report("AC7 reproducibility across SIM_WORKERS", ok,
           fmt("exit status %d, %zu vs %zu bytes, %s", status, outputs[0].size(), outputs[1].size(),
               outputs[0] == outputs[1] ? "identical" : "DIFFERENT"));
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: %s <path-to-dsofdm_sim>\n", argv[0]);
        return 2;
    }
    zero_noise_loopback();
    awgn_oracle();
    mmse_bias_identity();
    channel_invariants();
    papr_reproduction();
    ber_reproduction();
    reproducibility(argv[1]);

    int failed = 0;
    for (const auto& l : g_lines) failed += !l.pass;
    std::printf("%zu checks, %d failed\n", g_lines.size(), failed);
    return failed == 0 ? 0 : 1;
}
