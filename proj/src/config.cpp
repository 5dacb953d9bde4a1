// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include "zakotfs/error.hpp"
#include "zakotfs/sim.hpp"

namespace zakotfs {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

template <class T>
T parse_number(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    T v{};
    const auto* end = t.data() + t.size();
    const auto [ptr, ec] = std::from_chars(t.data(), end, v);
    if (ec != std::errc{} || ptr != end || t.empty()) throw InvalidParameter("bad value for " + key + ": '" + text + "'");
    return v;
}

std::vector<double> parse_list(const std::string& key, const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        // a:b:c expands to a, a+b, ..., <= c
        if (std::count(item.begin(), item.end(), ':') == 2) {
            const auto p1 = item.find(':'), p2 = item.rfind(':');
            const double a = parse_number<double>(key, item.substr(0, p1));
            const double s = parse_number<double>(key, item.substr(p1 + 1, p2 - p1 - 1));
            const double b = parse_number<double>(key, item.substr(p2 + 1));
            if (!(s > 0.0)) throw InvalidParameter("range step must be positive in " + key);
            for (int i = 0; a + i * s <= b + 1e-9 * std::abs(s); ++i) out.push_back(a + i * s);
        } else {
            out.push_back(parse_number<double>(key, item));
        }
    }
    return out;
}

ChannelKind channel_from_string(const std::string& s) {
    const auto v = lower(trim(s));
    if (v == "veh-a" || v == "veha") return ChannelKind::VehA;
    if (v == "fixed-rayleigh" || v == "rayleigh") return ChannelKind::FixedRayleigh;
    if (v == "static") return ChannelKind::Static;
    throw InvalidParameter("unknown channel kind '" + s + "'");
}

std::string to_string(ChannelKind c) {
    switch (c) {
        case ChannelKind::VehA: return "veh-a";
        case ChannelKind::FixedRayleigh: return "fixed-rayleigh";
        case ChannelKind::Static: return "static";
    }
    return {};
}

Path parse_path_record(const std::string& text) {
    std::istringstream is(text);
    double re, im, tau, nu;
    if (!(is >> re >> im >> tau >> nu)) throw InvalidParameter("path record needs 'h_re h_im tau_s nu_hz': " + text);
    std::string extra;
    if (is >> extra) throw InvalidParameter("trailing text in path record: " + text);
    return {{re, im}, tau, nu};
}

}  // namespace

void apply_setting(ExperimentConfig& cfg, const std::string& key_in, const std::string& value_in) {
    const std::string key = lower(trim(key_in));
    const std::string value = trim(value_in);
    if (key == "m") cfg.M = parse_number<int>(key, value);
    else if (key == "n") cfg.N = parse_number<int>(key, value);
    else if (key == "nu_p") cfg.nu_p = parse_number<double>(key, value);
    else if (key == "filter") cfg.filter = filter_family_from_string(lower(value));
    else if (key == "alpha_tau") cfg.alpha_tau = parse_number<double>(key, value);
    else if (key == "alpha_nu") cfg.alpha_nu = parse_number<double>(key, value);
    else if (key == "expansion_b") cfg.expansion_B = parse_number<double>(key, value);
    else if (key == "expansion_t") cfg.expansion_T = parse_number<double>(key, value);
    else if (key == "scheme") cfg.scheme = rx_scheme_from_string(lower(value));
    else if (key == "channel") cfg.channel = channel_from_string(value);
    else if (key == "paths") {
        std::ifstream f(value);
        if (!f) throw InvalidParameter("cannot open path file '" + value + "'");
        cfg.paths = read_paths(f);
    } else if (key == "path") cfg.paths.paths.push_back(parse_path_record(value));
    else if (key == "nu_max") cfg.nu_max = parse_number<double>(key, value);
    else if (key == "alphabet") {
        Alphabet::from_name(lower(value));
        cfg.alphabet = lower(value);
    } else if (key == "detector") {
        const auto v = lower(value);
        if (v == "mmse") cfg.detector = Detector::Mmse;
        else if (v == "ml") cfg.detector = Detector::Ml;
        else throw InvalidParameter("unknown detector '" + value + "'");
    } else if (key == "snr_db") cfg.snr_db = parse_list(key, value);
    else if (key == "realizations") cfg.realizations = parse_number<int>(key, value);
    else if (key == "csi_sigma_e2") cfg.csi_sigma_e2 = parse_number<double>(key, value);
    else if (key == "seed") cfg.seed = parse_number<std::uint64_t>(key, value);
    else if (key == "output") cfg.output = value;
    else if (key == "tap_model") {
        const auto v = lower(value);
        if (v == "closed-form") cfg.tap_model = TapModel::ClosedForm;
        else if (v == "quadrature") cfg.tap_model = TapModel::Quadrature;
        else throw InvalidParameter("unknown tap_model '" + value + "'");
    } else if (key == "noise_model") {
        const auto v = lower(value);
        if (v == "closed-form") cfg.noise_model = NoiseModel::ClosedForm;
        else if (v == "exact") cfg.noise_model = NoiseModel::Exact;
        else throw InvalidParameter("unknown noise_model '" + value + "'");
    } else if (key == "q_lo") cfg.q_lo = parse_number<int>(key, value);
    else if (key == "q_hi") cfg.q_hi = parse_number<int>(key, value);
    else if (key == "workers") cfg.workers = parse_number<int>(key, value);
    else throw InvalidParameter("unknown config key '" + key_in + "'");
}

ExperimentConfig parse_config(std::istream& is) {
    ExperimentConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw InvalidParameter("config line " + std::to_string(lineno) + " is not 'key = value'");
        try {
            apply_setting(cfg, line.substr(0, eq), line.substr(eq + 1));
        } catch (const InvalidParameter& e) {
            throw InvalidParameter("config line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return cfg;
}

ExperimentConfig load_config(const std::string& file) {
    std::ifstream f(file);
    if (!f) throw InvalidParameter("cannot open config file '" + file + "'");
    return parse_config(f);
}

void write_config(std::ostream& os, const ExperimentConfig& c) {
    std::ostringstream o;
    o << std::setprecision(17);
    o << "M = " << c.M << "\nN = " << c.N << "\nnu_p = " << c.nu_p << "\nfilter = " << to_string(c.filter)
      << "\nalpha_tau = " << c.alpha_tau << "\nalpha_nu = " << c.alpha_nu << "\nexpansion_B = " << c.expansion_B
      << "\nexpansion_T = " << c.expansion_T << "\nscheme = " << to_string(c.scheme)
      << "\nchannel = " << to_string(c.channel) << '\n';
    for (const auto& p : c.paths.paths)
        o << "path = " << p.gain.real() << ' ' << p.gain.imag() << ' ' << p.delay << ' ' << p.doppler << '\n';
    o << "nu_max = " << c.nu_max << "\nalphabet = " << c.alphabet
      << "\ndetector = " << (c.detector == Detector::Ml ? "ml" : "mmse") << "\nsnr_db = ";
    for (std::size_t i = 0; i < c.snr_db.size(); ++i) o << (i ? "," : "") << c.snr_db[i];
    o << "\nrealizations = " << c.realizations << "\ncsi_sigma_e2 = " << c.csi_sigma_e2 << "\nseed = " << c.seed;
    if (!c.output.empty()) o << "\noutput = " << c.output;
    o << "\ntap_model = " << (c.tap_model == TapModel::Quadrature ? "quadrature" : "closed-form")
      << "\nnoise_model = " << (c.noise_model == NoiseModel::Exact ? "exact" : "closed-form") << "\nq_lo = " << c.q_lo
      << "\nq_hi = " << c.q_hi << "\nworkers = " << c.workers << '\n';
    os << o.str();
}

}  // namespace zakotfs
