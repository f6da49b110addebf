#include "dsofdm/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

namespace dsofdm {

FiberParams ExperimentConfig::fiber() const {
    return FiberParams::from_engineering(n_spans, span_km, lambda_nm, cd_ps_nm_km, pmd_ps_sqrtkm,
                                         pdl_db);
}

FrameConfig ExperimentConfig::frame() const {
    FrameConfig f;
    f.subcarriers = n_subcarriers;
    f.symbol_rate = symbol_rate_gbaud * 1e9;
    f.cp_fraction = cp_fraction;
    f.oversample = oversample;
    return f;
}

void ExperimentConfig::validate() const {
    std::vector<std::string> bad;
    auto check = [&](bool ok, const char* field, const char* why) {
        if (!ok) bad.push_back(std::string(field) + " " + why);
    };
    check(n_spans >= 1, "n_spans", "must be >= 1");
    check(span_km > 0, "span_km", "must be > 0");
    check(lambda_nm > 0, "lambda_nm", "must be > 0");
    check(cd_ps_nm_km >= 0, "cd_ps_nm_km", "must be >= 0");
    check(pmd_ps_sqrtkm >= 0, "pmd_ps_sqrtkm", "must be >= 0");
    check(pdl_db >= 0, "pdl_db", "must be >= 0");
    check(n_subcarriers >= 1, "n_subcarriers", "must be >= 1");
    check(symbol_rate_gbaud > 0, "symbol_rate_gbaud", "must be > 0");
    check(cp_fraction >= 0, "cp_fraction", "must be >= 0");
    check(oversample >= 1, "oversample", "must be >= 1");
    check(!esn0_grid_db.empty(), "esn0_grid_db", "must not be empty");
    check(std::none_of(esn0_grid_db.begin(), esn0_grid_db.end(),
                       [](double v) { return std::isnan(v) || v == -std::numeric_limits<double>::infinity(); }),
          "esn0_grid_db", "entries must be finite or +inf");
    check(!clip_cr_db || std::isfinite(*clip_cr_db), "clip_cr_db", "must be finite or off");
    check(symbols_per_point >= 1, "symbols_per_point", "must be >= 1");
    check(links_per_point >= 1, "links_per_point", "must be >= 1");
    check(papr_symbols >= 1, "papr_symbols", "must be >= 1");
    if (bad.empty()) return;
    std::string msg = "invalid config:";
    for (const auto& b : bad) msg += "\n  " + b;
    throw ConfigError(msg);
}

const std::vector<std::string_view>& config_keys() {
    static const std::vector<std::string_view> keys = {
        "n_spans",      "span_km",           "lambda_nm",        "cd_ps_nm_km",
        "pmd_ps_sqrtkm", "pdl_db",           "n_subcarriers",    "symbol_rate_gbaud",
        "cp_fraction",  "oversample",        "scheme",           "mode",
        "clip_cr_db",   "esn0_grid_db",      "symbols_per_point", "links_per_point",
        "papr_symbols", "seed"};
    return keys;
}

std::string format_double(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

double parse_double(std::string_view s) {
    if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
        throw std::invalid_argument("not a number: '" + std::string(s) + "'");
    }
    return v;
}

namespace {

std::string_view trim(std::string_view s) {
    const auto ws = " \t\r\n";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

template <typename Int>
Int parse_int(std::string_view s) {
    Int v{};
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
        throw std::invalid_argument("not an integer: '" + std::string(s) + "'");
    }
    return v;
}

std::vector<double> parse_list(std::string_view s) {
    std::vector<double> out;
    while (true) {
        const auto comma = s.find(',');
        const auto item = trim(s.substr(0, comma));
        if (!item.empty()) out.push_back(parse_double(item));
        if (comma == std::string_view::npos) break;
        s.remove_prefix(comma + 1);
    }
    return out;
}

void assign(ExperimentConfig& c, std::string_view key, std::string_view v) {
    if (key == "n_spans") c.n_spans = parse_int<int>(v);
    else if (key == "span_km") c.span_km = parse_double(v);
    else if (key == "lambda_nm") c.lambda_nm = parse_double(v);
    else if (key == "cd_ps_nm_km") c.cd_ps_nm_km = parse_double(v);
    else if (key == "pmd_ps_sqrtkm") c.pmd_ps_sqrtkm = parse_double(v);
    else if (key == "pdl_db") c.pdl_db = parse_double(v);
    else if (key == "n_subcarriers") c.n_subcarriers = parse_int<int>(v);
    else if (key == "symbol_rate_gbaud") c.symbol_rate_gbaud = parse_double(v);
    else if (key == "cp_fraction") c.cp_fraction = parse_double(v);
    else if (key == "oversample") c.oversample = parse_int<int>(v);
    else if (key == "scheme") c.scheme = parse_scheme(v);
    else if (key == "mode") c.mode = parse_mode(v);
    else if (key == "clip_cr_db") c.clip_cr_db = v == "off" ? std::nullopt : std::optional(parse_double(v));
    else if (key == "esn0_grid_db") c.esn0_grid_db = parse_list(v);
    else if (key == "symbols_per_point") c.symbols_per_point = parse_int<int>(v);
    else if (key == "links_per_point") c.links_per_point = parse_int<int>(v);
    else if (key == "papr_symbols") c.papr_symbols = parse_int<int>(v);
    else if (key == "seed") c.seed = parse_int<std::uint64_t>(v);
}

}  // namespace

ExperimentConfig parse_config_text(std::string_view text) {
    ExperimentConfig cfg;
    std::map<std::string, int, std::less<>> seen;
    const auto& keys = config_keys();
    int lineno = 0;
    while (!text.empty()) {
        ++lineno;
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        const auto where = "line " + std::to_string(lineno) + ": ";
        if (eq == std::string_view::npos) throw ConfigError(where + "expected 'key = value'");
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));
        if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
            throw ConfigError(where + "unknown key '" + std::string(key) + "'");
        }
        if (auto it = seen.find(key); it != seen.end()) {
            throw ConfigError(where + "duplicate key '" + std::string(key) + "' (first on line " +
                              std::to_string(it->second) + ")");
        }
        seen.emplace(std::string(key), lineno);
        try {
            assign(cfg, key, value);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(where + std::string(key) + ": " + e.what());
        }
    }
    std::string missing;
    for (const auto& k : keys) {
        if (!seen.contains(k)) missing += (missing.empty() ? "" : ", ") + std::string(k);
    }
    if (!missing.empty()) throw ConfigError("missing required key(s): " + missing);
    cfg.validate();
    return cfg;
}

ExperimentConfig parse_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

std::string format_config(const ExperimentConfig& c) {
    std::string grid;
    for (double v : c.esn0_grid_db) grid += (grid.empty() ? "" : ", ") + format_double(v);
    std::ostringstream os;
    os << "n_spans = " << c.n_spans << '\n'
       << "span_km = " << format_double(c.span_km) << '\n'
       << "lambda_nm = " << format_double(c.lambda_nm) << '\n'
       << "cd_ps_nm_km = " << format_double(c.cd_ps_nm_km) << '\n'
       << "pmd_ps_sqrtkm = " << format_double(c.pmd_ps_sqrtkm) << '\n'
       << "pdl_db = " << format_double(c.pdl_db) << '\n'
       << "n_subcarriers = " << c.n_subcarriers << '\n'
       << "symbol_rate_gbaud = " << format_double(c.symbol_rate_gbaud) << '\n'
       << "cp_fraction = " << format_double(c.cp_fraction) << '\n'
       << "oversample = " << c.oversample << '\n'
       << "scheme = " << to_string(c.scheme) << '\n'
       << "mode = " << to_string(c.mode) << '\n'
       << "clip_cr_db = " << (c.clip_cr_db ? format_double(*c.clip_cr_db) : "off") << '\n'
       << "esn0_grid_db = " << grid << '\n'
       << "symbols_per_point = " << c.symbols_per_point << '\n'
       << "links_per_point = " << c.links_per_point << '\n'
       << "papr_symbols = " << c.papr_symbols << '\n'
       << "seed = " << c.seed << '\n';
    return os.str();
}

void write_config(const ExperimentConfig& cfg, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write config file " + path.string());
    out << format_config(cfg);
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace dsofdm
