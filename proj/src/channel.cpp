#include "dsofdm/channel.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace dsofdm {

FiberParams FiberParams::from_engineering(int n_spans, double span_km, double lambda_nm,
                                          double cd_ps_nm_km, double pmd_ps_sqrtkm,
                                          double pdl_db) {
    FiberParams p;
    p.n_spans = n_spans;
    p.span_length = span_km * 1e3;
    p.wavelength = lambda_nm * 1e-9;
    p.cd = cd_ps_nm_km * 1e-12 / (1e-9 * 1e3);
    p.pmd = pmd_ps_sqrtkm * 1e-12 / std::sqrt(1e3);
    p.pdl_db = pdl_db;
    return p;
}

double FiberParams::pdl_attenuation() const { return std::pow(10.0, -pdl_db / 20.0); }

double FiberParams::span_dgd_rms() const { return pmd * std::sqrt(span_length); }

void FiberParams::validate() const {
    auto require = [](bool ok, const char* what) {
        if (!ok) throw std::invalid_argument(std::string("fiber parameters: ") + what);
    };
    require(n_spans >= 1, "n_spans must be >= 1");
    require(span_length > 0.0, "span length must be positive");
    require(wavelength > 0.0, "wavelength must be positive");
    require(cd >= 0.0, "CD parameter must be >= 0");
    require(pmd >= 0.0, "PMD parameter must be >= 0");
    require(pdl_db >= 0.0, "PDL must be >= 0 dB");
}

std::vector<double> frequency_grid(int subcarriers, double symbol_duration) {
    if (subcarriers < 1 || !(symbol_duration > 0.0)) {
        throw std::invalid_argument("frequency_grid: need M >= 1 and t_s > 0");
    }
    std::vector<double> f(static_cast<std::size_t>(subcarriers));
    for (std::size_t m = 0; m < f.size(); ++m) f[m] = static_cast<double>(m) / symbol_duration;
    return f;
}

double cd_phase(double f, const FiberParams& p, double length) {
    const double fc = p.carrier_frequency();
    return kPi * kSpeedOfLight * p.cd * length * f * f / (fc * fc);
}

LinkRealization draw_link(const FiberParams& p, RngStream& rng, LinkOptions opts) {
    LinkRealization link;
    link.params = p;
    link.spans.resize(static_cast<std::size_t>(p.n_spans));
    const double k = p.pdl_attenuation();
    const double rms = p.span_dgd_rms();
    for (auto& s : link.spans) {
        s.k = k;
        s.tau = sample_maxwellian(rng, rms);
        s.theta = 2.0 * kPi * rng.uniform();
    }
    if (opts.random_cpe) link.cpe = 2.0 * kPi * rng.uniform();
    return link;
}

namespace {

// Per-span quantities that do not depend on the tone.
struct SpanTerms {
    double k;
    double cos_t;
    double sin_t;
    double carrier_cycles;  ///< fractional part of f_c tau / 2
    double tau;
};

SpanTerms span_terms(const SpanDraw& span, double carrier_frequency) {
    // f_c tau / 2 is a few hundred cycles; reduce it in extended precision
    const long double half_cycles = 0.5L * static_cast<long double>(carrier_frequency) *
                                    static_cast<long double>(span.tau);
    return {span.k, std::cos(span.theta), std::sin(span.theta),
            static_cast<double>(half_cycles - std::floor(half_cycles)), span.tau};
}

// diag(1, k) * diag(d, conj d) * [[c, s], [-s, c]] with d = e^{j pi (f_c + f) tau}
Mat2 jones(const SpanTerms& t, double f) {
    const Cplx d = std::polar(1.0, 2.0 * kPi * (t.carrier_cycles + 0.5 * f * t.tau));
    const Cplx lo = t.k * std::conj(d);
    return {d * t.cos_t, d * t.sin_t, -lo * t.sin_t, lo * t.cos_t};
}

// The fiber CD phase e^{j Phi_D(L)} factors per span as e^{j Phi_D(L_span)}, and each
// span's DCF term e^{-j Phi_D / n_E} cancels it, so only the Jones factors remain.
Mat2 transfer(std::span<const SpanTerms> spans, double cpe, double f) {
    Mat2 t = Mat2::identity();
    for (const auto& s : spans) t = t * jones(s, f);
    if (cpe != 0.0) t = std::polar(1.0, cpe) * t;
    return t;
}

std::vector<SpanTerms> link_terms(const LinkRealization& link) {
    std::vector<SpanTerms> terms;
    terms.reserve(link.spans.size());
    const double fc = link.params.carrier_frequency();
    for (const auto& s : link.spans) terms.push_back(span_terms(s, fc));
    return terms;
}

}  // namespace

Mat2 span_jones(const SpanDraw& span, double carrier_frequency, double f) {
    return jones(span_terms(span, carrier_frequency), f);
}

Mat2 tone_transfer(const LinkRealization& link, std::size_t tone, std::span<const double> grid) {
    if (tone >= grid.size()) {
        throw std::out_of_range("tone_transfer: tone index " + std::to_string(tone) +
                                " outside grid of " + std::to_string(grid.size()));
    }
    return transfer(link_terms(link), link.cpe, grid[tone]);
}

ToneChannel tone_channel(const LinkRealization& link, std::span<const double> grid, double sigma2) {
    if (sigma2 < 0.0) throw std::invalid_argument("tone_channel: negative noise variance");
    const auto terms = link_terms(link);
    ToneChannel ch;
    ch.sigma2 = sigma2;
    ch.h.reserve(grid.size());
    for (double f : grid) ch.h.push_back(transfer(terms, link.cpe, f));
    return ch;
}

double sigma2_from_esn0_db(double esn0_db) {
    if (std::isinf(esn0_db) && esn0_db > 0) return 0.0;
    return std::pow(10.0, -esn0_db / 10.0);
}

std::array<CVec, 2> apply_channel(const std::array<CVec, 2>& x, const ToneChannel& ch, RngStream& rng) {
    const std::size_t m = ch.h.size();
    if (x[0].size() != m || x[1].size() != m) {
        throw std::invalid_argument("apply_channel: tone count mismatch");
    }
    std::array<CVec, 2> y{CVec(m), CVec(m)};
    for (std::size_t i = 0; i < m; ++i) {
        Vec2 out = ch.h[i] * Vec2{x[0][i], x[1][i]};
        out.v1 += sample_gaussian_pair(rng, ch.sigma2);
        out.v2 += sample_gaussian_pair(rng, ch.sigma2);
        y[0][i] = out.v1;
        y[1][i] = out.v2;
    }
    return y;
}

}  // namespace dsofdm
