#include "dsofdm/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>
#include <thread>

#include "dsofdm/modem.hpp"

namespace dsofdm {

namespace {

constexpr std::uint64_t kPaprStreamPoint = 0x50415052;  // separates PAPR streams from BER points

template <typename Fn>
void parallel_for(std::size_t n, int workers, Fn&& fn) {
    const auto w = static_cast<std::size_t>(std::max(1, workers));
    if (w == 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(std::min(w, n));
    for (std::size_t t = 0; t < std::min(w, n); ++t) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) fn(i);
        });
    }
}

Bits random_bits(RngStream& rng, std::size_t n) {
    Bits b(n);
    std::uint64_t word = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (i % 64 == 0) word = rng();
        b[i] = static_cast<std::uint8_t>(word & 1u);
        word >>= 1;
    }
    return b;
}

bool overlap(const BerRecord& a, const BerRecord& b) {
    return std::max(a.ci95_low, b.ci95_low) <= std::min(a.ci95_high, b.ci95_high);
}

std::string fixed(double v, int digits = 2) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
    return buf;
}

std::string sci(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

}  // namespace

int resolve_workers(const RunOptions& opts) {
    if (opts.workers > 0) return opts.workers;
    if (const char* env = std::getenv("SIM_WORKERS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

std::pair<double, double> wilson_interval(std::uint64_t errors, std::uint64_t trials) {
    if (trials == 0) return {0.0, 1.0};
    constexpr double z = 1.959963984540054;
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(errors) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double centre = (p + z2 / (2.0 * n)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

double qpsk_awgn_ber(double esn0_db) {
    const double ebn0 = std::pow(10.0, esn0_db / 10.0) / 2.0;
    return 0.5 * std::erfc(std::sqrt(ebn0));
}

ErrorCount run_link_trial(const ExperimentConfig& cfg, double sigma2, RngStream rng,
                          const RunOptions& opts) {
    const FrameConfig frame = cfg.frame();
    const auto grid = frequency_grid(frame.subcarriers, frame.symbol_duration());
    const LinkRealization link = draw_link(cfg.fiber(), rng);
    const ToneChannel ch = tone_channel(link, grid, sigma2);
    const Constellation& con = Constellation::get(cfg.scheme);
    const auto nbits = static_cast<std::size_t>(frame.subcarriers * con.bits_per_symbol());

    ErrorCount total;
    for (int sym = 0; sym < cfg.symbols_per_point; ++sym) {
        std::array<Bits, 2> bits;
        std::array<CVec, 2> x;
        for (int k = 0; k < 2; ++k) {
            bits[k] = random_bits(rng, nbits);
            x[k] = modulate(map_bits(bits[k], con), cfg.mode);
            if (cfg.clip_cr_db) x[k] = clip_tones(x[k], *cfg.clip_cr_db, opts.clip_oversample);
        }
        const auto y = apply_channel(x, ch, rng);
        const auto x_hat = equalize(y, ch);
        for (int k = 0; k < 2; ++k) {
            const CVec s_hat = cfg.mode == Mode::DftSpread ? despread(x_hat[k]) : x_hat[k];
            total += count_errors(bits[k], demap_hard(s_hat, con), con.bits_per_symbol());
        }
    }
    return total;
}

std::vector<BerRecord> run_ber_sweep(const ExperimentConfig& cfg, const RunOptions& opts) {
    cfg.validate();
    const int workers = resolve_workers(opts);
    const auto batch = static_cast<std::size_t>(std::max(1, opts.batch));
    const auto max_trials = static_cast<std::size_t>(cfg.links_per_point);

    std::vector<BerRecord> out;
    for (std::size_t p = 0; p < cfg.esn0_grid_db.size(); ++p) {
        const double esn0 = cfg.esn0_grid_db[p];
        const double sigma2 = sigma2_from_esn0_db(esn0);
        ErrorCount acc;
        std::size_t done = 0;
        while (done < max_trials) {
            const std::size_t n = std::min(batch, max_trials - done);
            std::vector<ErrorCount> results(n);
            parallel_for(n, workers, [&](std::size_t i) {
                RngStream rng(cfg.seed, derive_stream_id(cfg.seed, p, done + i));
                results[i] = run_link_trial(cfg, sigma2, rng, opts);
            });
            for (const auto& r : results) acc += r;
            done += n;
            if (acc.bits_total >= opts.min_bits && acc.bit_errors >= opts.target_errors) break;
        }
        BerRecord rec;
        rec.esn0_db = esn0;
        rec.mode = cfg.mode;
        rec.scheme = cfg.scheme;
        rec.clip_cr_db = cfg.clip_cr_db;
        rec.bit_errors = acc.bit_errors;
        rec.bits = acc.bits_total;
        rec.ber = static_cast<double>(acc.bit_errors) / static_cast<double>(acc.bits_total);
        std::tie(rec.ci95_low, rec.ci95_high) = wilson_interval(acc.bit_errors, acc.bits_total);
        out.push_back(rec);
    }
    return out;
}

std::vector<double> papr_thresholds() {
    std::vector<double> t(201);
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = static_cast<double>(i) / 10.0;
    return t;
}

std::vector<double> papr_samples(const ExperimentConfig& cfg, Mode mode, std::optional<double> clip_cr_db,
                                 const RunOptions& opts) {
    const Constellation& con = Constellation::get(cfg.scheme);
    const auto nbits = static_cast<std::size_t>(cfg.n_subcarriers * con.bits_per_symbol());
    std::vector<double> out(static_cast<std::size_t>(cfg.papr_symbols));
    parallel_for(out.size(), resolve_workers(opts), [&](std::size_t i) {
        RngStream rng(cfg.seed, derive_stream_id(cfg.seed, kPaprStreamPoint, i));
        CVec x = modulate(map_bits(random_bits(rng, nbits), con), mode);
        if (clip_cr_db) x = clip_tones(x, *clip_cr_db, opts.clip_oversample);
        out[i] = papr_db(synthesize_waveform(x, cfg.oversample));
    });
    return out;
}

std::vector<CcdfRecord> run_papr_experiment(const ExperimentConfig& cfg, const RunOptions& opts) {
    cfg.validate();
    struct Combo {
        Mode mode;
        std::optional<double> clip;
    };
    std::vector<Combo> combos = {{Mode::DftSpread, std::nullopt}, {Mode::Ofdm, std::nullopt}};
    if (cfg.clip_cr_db) combos.push_back({Mode::Ofdm, cfg.clip_cr_db});

    const auto thresholds = papr_thresholds();
    std::vector<CcdfRecord> out;
    for (Scheme scheme : {Scheme::Qpsk, Scheme::Qam16}) {
        ExperimentConfig c = cfg;
        c.scheme = scheme;
        for (const auto& combo : combos) {
            const auto samples = papr_samples(c, combo.mode, combo.clip, opts);
            for (const auto& pt : ccdf(samples, thresholds)) {
                out.push_back({combo.mode, scheme, combo.clip, pt.threshold_db, pt.probability});
            }
        }
    }
    return out;
}

std::optional<double> ber_crossing(std::span<const BerRecord> curve, double target) {
    auto log_ber = [](const BerRecord& r) {
        // zero-error points count as half an error
        const double ber = r.bit_errors > 0 ? r.ber : 0.5 / static_cast<double>(r.bits);
        return std::log10(ber);
    };
    for (std::size_t i = 0; i + 1 < curve.size(); ++i) {
        const auto& a = curve[i];
        const auto& b = curve[i + 1];
        if (a.ber >= target && b.ber < target) {
            const double la = log_ber(a);
            const double lb = log_ber(b);
            const double t = (la - std::log10(target)) / (la - lb);
            return a.esn0_db + t * (b.esn0_db - a.esn0_db);
        }
    }
    return std::nullopt;
}

bool ComparisonReport::passed() const {
    return !checks.empty() &&
           std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

std::vector<double> comparison_grid(Scheme scheme) {
    std::vector<double> g;
    const int lo = scheme == Scheme::Qpsk ? 2 : 8;
    const int hi = scheme == Scheme::Qpsk ? 16 : 32;
    for (int v = lo; v <= hi; ++v) g.push_back(v);
    return g;
}

namespace {

double clip_ratio_or_default(const ExperimentConfig& cfg) { return cfg.clip_cr_db.value_or(3.0); }

}  // namespace

ComparisonReport compare_ber(const ExperimentConfig& cfg, const RunOptions& opts) {
    ComparisonReport rep;
    const double cr = clip_ratio_or_default(cfg);
    for (Scheme scheme : {Scheme::Qpsk, Scheme::Qam16}) {
        ExperimentConfig c = cfg;
        c.scheme = scheme;
        c.esn0_grid_db = comparison_grid(scheme);
        c.clip_cr_db.reset();
        c.mode = Mode::DftSpread;
        const auto dft = run_ber_sweep(c, opts);
        c.mode = Mode::Ofdm;
        const auto ofdm = run_ber_sweep(c, opts);
        c.clip_cr_db = cr;
        const auto clipped = run_ber_sweep(c, opts);
        for (const auto* curve : {&dft, &ofdm, &clipped}) {
            rep.ber.insert(rep.ber.end(), curve->begin(), curve->end());
        }

        const std::string name(to_string(scheme));
        std::size_t disjoint = 0;
        std::string where;
        for (std::size_t i = 0; i < dft.size(); ++i) {
            if (!overlap(dft[i], ofdm[i])) {
                ++disjoint;
                where += " " + fixed(dft[i].esn0_db, 1);
            }
        }
        rep.checks.push_back({name + " dft-spread and ofdm BER curves overlap (95% CI)", disjoint == 0,
                              disjoint == 0 ? std::to_string(dft.size()) + " points overlap"
                                            : "disjoint at Es/N0" + where});

        bool monotone = true;
        for (const auto* curve : {&dft, &ofdm, &clipped}) {
            for (std::size_t i = 0; i + 1 < curve->size(); ++i) {
                const auto& a = (*curve)[i];
                const auto& b = (*curve)[i + 1];
                if (b.ber > a.ber && !overlap(a, b)) monotone = false;
            }
        }
        rep.checks.push_back({name + " BER non-increasing in Es/N0", monotone, ""});

        const auto ref = ber_crossing(ofdm);
        const auto clp = ber_crossing(clipped);
        const bool have = ref && clp;
        const double penalty = have ? *clp - *ref : 0.0;
        const std::string detail =
            have ? "ofdm " + fixed(*ref) + " dB, clipped " + fixed(*clp) + " dB, penalty " + fixed(penalty) + " dB"
                 : "curve does not cross 1e-3 on the grid";
        if (scheme == Scheme::Qpsk) {
            rep.checks.push_back({"qpsk clipping penalty at BER 1e-3 in [0.4, 1.2] dB",
                                  have && penalty >= 0.4 && penalty <= 1.2, detail});
        } else {
            rep.checks.push_back({"qam16 clipping penalty at BER 1e-3 >= 5 dB", have && penalty >= 5.0, detail});
            rep.checks.push_back({"qam16 clipping penalty at BER 1e-3 in [6, 10] dB",
                                  have && penalty >= 6.0 && penalty <= 10.0, detail});
        }
    }
    return rep;
}

ComparisonReport compare_papr(const ExperimentConfig& cfg, const RunOptions& opts) {
    ComparisonReport rep;
    ExperimentConfig c = cfg;
    c.clip_cr_db = clip_ratio_or_default(cfg);
    rep.papr = run_papr_experiment(c, opts);

    auto curve = [&](Mode mode, Scheme scheme, bool clipped) {
        std::vector<CcdfPoint> pts;
        for (const auto& r : rep.papr) {
            if (r.mode == mode && r.scheme == scheme && r.clip_cr_db.has_value() == clipped) {
                pts.push_back({r.threshold_db, r.ccdf});
            }
        }
        return pts;
    };
    auto at = [](const std::vector<CcdfPoint>& pts, double level) {
        return ccdf_crossing(pts, level).value_or(std::numeric_limits<double>::infinity());
    };

    const auto dft_q = curve(Mode::DftSpread, Scheme::Qpsk, false);
    const auto ofdm_q = curve(Mode::Ofdm, Scheme::Qpsk, false);
    const auto ofdm_16 = curve(Mode::Ofdm, Scheme::Qam16, false);

    const double gap3 = at(ofdm_q, 1e-3) - at(dft_q, 1e-3);
    rep.checks.push_back({"qpsk dft-spread PAPR >= 2 dB below ofdm at CCDF 1e-3", gap3 >= 2.0,
                          "gap " + fixed(gap3, 1) + " dB"});

    bool left_everywhere = true;
    std::string levels;
    for (double level : {1e-3, 1e-2, 1e-1}) {
        const double d = at(dft_q, level);
        const double o = at(ofdm_q, level);
        left_everywhere = left_everywhere && d < o;
        levels += " " + sci(level) + ":" + fixed(d, 1) + "/" + fixed(o, 1);
    }
    rep.checks.push_back({"qpsk dft-spread CCDF left of ofdm on [1e-3, 1e-1]", left_everywhere,
                          "dft/ofdm dB at" + levels});

    const double sim = std::abs(at(ofdm_16, 1e-2) - at(ofdm_q, 1e-2));
    rep.checks.push_back({"ofdm qam16 PAPR within 0.5 dB of ofdm qpsk at CCDF 1e-2", sim <= 0.5,
                          "difference " + fixed(sim, 1) + " dB"});

    for (Scheme scheme : {Scheme::Qpsk, Scheme::Qam16}) {
        const double d = at(curve(Mode::DftSpread, scheme, false), 1e-2);
        const double o = at(curve(Mode::Ofdm, scheme, false), 1e-2);
        const double k = at(curve(Mode::Ofdm, scheme, true), 1e-2);
        rep.checks.push_back({std::string(to_string(scheme)) +
                                  " clipped ofdm PAPR between dft-spread and ofdm at CCDF 1e-2",
                              d < k && k < o,
                              "dft " + fixed(d, 1) + ", clipped " + fixed(k, 1) + ", ofdm " + fixed(o, 1) + " dB"});
    }
    return rep;
}

ComparisonReport run_comparison(const ExperimentConfig& cfg, const RunOptions& opts) {
    ComparisonReport rep = compare_ber(cfg, opts);
    ComparisonReport papr = compare_papr(cfg, opts);
    rep.checks.insert(rep.checks.end(), papr.checks.begin(), papr.checks.end());
    rep.papr = std::move(papr.papr);
    return rep;
}

namespace {

std::string clip_field(const std::optional<double>& c) { return c ? format_double(*c) : "off"; }

void write_text(const std::string& text, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << text;
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace

std::string format_ber_csv(std::span<const BerRecord> records) {
    std::ostringstream os;
    os << "esn0_db,mode,scheme,clip_cr_db,ber,bit_errors,bits,ci95_low,ci95_high\n";
    for (const auto& r : records) {
        os << format_double(r.esn0_db) << ',' << to_string(r.mode) << ',' << to_string(r.scheme) << ','
           << clip_field(r.clip_cr_db) << ',' << format_double(r.ber) << ',' << r.bit_errors << ',' << r.bits
           << ',' << format_double(r.ci95_low) << ',' << format_double(r.ci95_high) << '\n';
    }
    return os.str();
}

std::string format_papr_csv(std::span<const CcdfRecord> records) {
    std::ostringstream os;
    os << "mode,scheme,clip_cr_db,threshold_db,ccdf\n";
    for (const auto& r : records) {
        os << to_string(r.mode) << ',' << to_string(r.scheme) << ',' << clip_field(r.clip_cr_db) << ','
           << format_double(r.threshold_db) << ',' << format_double(r.ccdf) << '\n';
    }
    return os.str();
}

void write_ber_csv(std::span<const BerRecord> records, const std::filesystem::path& path) {
    write_text(format_ber_csv(records), path);
}

void write_papr_csv(std::span<const CcdfRecord> records, const std::filesystem::path& path) {
    write_text(format_papr_csv(records), path);
}

std::string format_channel_dump(const LinkRealization& link, std::span<const double> grid) {
    std::string out;
    char buf[96];
    auto put = [&](double v, char sep) {
        std::snprintf(buf, sizeof(buf), "%.16e%c", v, sep);
        out += buf;
    };
    for (const auto& s : link.spans) {
        put(s.k, ' ');
        put(s.tau, ' ');
        put(s.theta, '\n');
    }
    for (std::size_t m = 0; m < grid.size(); ++m) {
        const Mat2 h = tone_transfer(link, m, grid);
        out += std::to_string(m + 1) + ' ';
        const Cplx entries[] = {h.a11, h.a12, h.a21, h.a22};
        for (int i = 0; i < 4; ++i) {
            put(entries[i].real(), ' ');
            put(entries[i].imag(), i == 3 ? '\n' : ' ');
        }
    }
    return out;
}

}  // namespace dsofdm
