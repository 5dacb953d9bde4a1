// SPDX-License-Identifier: Apache-2.0
// Command-line front end: closed-form exports, experiment sweeps, validation.
#include <csignal>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>

#include "zakotfs/error.hpp"
#include "zakotfs/kernels.hpp"
#include "zakotfs/linsys.hpp"
#include "zakotfs/noise.hpp"
#include "zakotfs/psd.hpp"
#include "zakotfs/sim.hpp"
#include "zakotfs/validate.hpp"

namespace {

using namespace zakotfs;

struct Common {
    std::string config_file;
    std::vector<std::string> overrides;
    std::string output;
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("-c,--config", c.config_file, "key = value config file");
    cmd->add_option("-s,--set", c.overrides, "override one setting, key=value (repeatable)");
    cmd->add_option("-o,--output", c.output, "output CSV (default: the config's output, else stdout)");
}

ExperimentConfig resolve(const Common& c) {
    ExperimentConfig cfg = c.config_file.empty() ? ExperimentConfig{} : load_config(c.config_file);
    for (const auto& kv : c.overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw InvalidParameter("--set expects key=value, got '" + kv + "'");
        apply_setting(cfg, kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (!c.output.empty()) cfg.output = c.output;
    return cfg;
}

// The configured channel as one realization (the first frame of a sweep).
PathSet single_channel(const ExperimentConfig& cfg) {
    const auto s = derive_seed(cfg.seed, 0, 1);
    switch (cfg.channel) {
        case ChannelKind::VehA:
            return veh_a_realization(cfg.nu_max, s);
        case ChannelKind::FixedRayleigh: {
            std::vector<double> d, n, p;
            for (const auto& x : cfg.paths.paths) {
                d.push_back(x.delay);
                n.push_back(x.doppler);
                p.push_back(std::norm(x.gain));
            }
            return rayleigh_paths(d, n, p, s);
        }
        case ChannelKind::Static:
            return cfg.paths;
    }
    return {};
}

// Writes `body` to cfg.output or stdout.
void emit(const ExperimentConfig& cfg, const std::string& body) {
    if (cfg.output.empty() || cfg.output == "-") {
        std::cout << body;
        return;
    }
    std::ofstream f(cfg.output);
    if (!f) throw InvalidParameter("cannot write '" + cfg.output + "'");
    f << body;
}

std::string describe(const ExperimentConfig& cfg) {
    std::ostringstream o;
    write_config(o, cfg);
    return o.str();
}

std::vector<double> parse_doubles(const std::string& key, const std::string& text) {
    ExperimentConfig scratch;
    apply_setting(scratch, "snr_db", text);  // same list syntax
    (void)key;
    return scratch.snr_db;
}

extern "C" void on_interrupt(int) { interrupt_flag().store(true); }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Zak-OTFS delay-Doppler modeling engine"};
    app.require_subcommand(1);

    Common c_heff, c_cov, c_matrix, c_ber, c_dop, c_csi, c_snr, c_psd;
    long k_lo = -3, k_hi = 5, l_lo = -4, l_hi = 4;
    auto* heff_cmd = app.add_subcommand("heff", "effective-channel taps k,l,re,im");
    add_common(heff_cmd, c_heff);
    heff_cmd->add_option("--k-min", k_lo, "first delay index");
    heff_cmd->add_option("--k-max", k_hi, "last delay index");
    heff_cmd->add_option("--l-min", l_lo, "first Doppler index");
    heff_cmd->add_option("--l-max", l_hi, "last Doppler index");

    double n0 = 1.0;
    auto* cov_cmd = app.add_subcommand("cov", "noise covariance row,col,re,im");
    add_common(cov_cmd, c_cov);
    cov_cmd->add_option("--n0", n0, "noise density");

    auto* matrix_cmd = app.add_subcommand("matrix", "channel matrix row,col,re,im");
    add_common(matrix_cmd, c_matrix);

    auto* ber_cmd = app.add_subcommand("ber", "BER versus SNR");
    add_common(ber_cmd, c_ber);

    std::string nu_list = "0,100,200,400,600,815";
    double fixed_snr = 15.0;
    auto* dop_cmd = app.add_subcommand("ber-vs-doppler", "BER versus nu_max at a fixed SNR, all combinations");
    add_common(dop_cmd, c_dop);
    dop_cmd->add_option("--nu-max", nu_list, "comma list or a:step:b [Hz]");
    dop_cmd->add_option("--snr", fixed_snr, "SNR [dB]");

    std::string sigma_list = "0,0.001,0.01,0.05";
    auto* csi_cmd = app.add_subcommand("csi-sweep", "BER versus SNR under channel-estimation error");
    add_common(csi_cmd, c_csi);
    csi_cmd->add_option("--sigma", sigma_list, "comma list of error variances");

    double nu_fixed = 0.0;
    double snr_n0 = 1.0;
    auto* snr_cmd = app.add_subcommand("snr-profile", "per-delay SNR of a single pilot at the Doppler row nearest --nu");
    add_common(snr_cmd, c_snr);
    snr_cmd->add_option("--nu", nu_fixed, "Doppler [Hz]");
    snr_cmd->add_option("--n0", snr_n0, "noise density");

    std::string frame_kind = "pilot";
    int points = 4096;
    auto* psd_cmd = app.add_subcommand("psd", "spectrum of the Tx-filtered frame, f_hz,psd_db");
    add_common(psd_cmd, c_psd);
    psd_cmd->add_option("--frame", frame_kind, "pilot | data")->check(CLI::IsMember({"pilot", "data"}));
    psd_cmd->add_option("--points", points, "frequency samples over (-2B, 2B)");

    ValidationOptions vopt;
    std::string vout;
    auto* val_cmd = app.add_subcommand("validate", "closed forms against the quadrature oracle");
    val_cmd->add_option("--subset", vopt.subset, "which suites to run")
        ->check(CLI::IsMember({"all", "heff", "cov", "runtime"}));
    val_cmd->add_option("--cases", vopt.cases, "random cases per combination");
    val_cmd->add_option("--seed", vopt.seed, "seed for paths and indices");
    val_cmd->add_option("-M", vopt.M, "delay bins");
    val_cmd->add_option("-N", vopt.N, "Doppler bins");
    val_cmd->add_option("-o,--output", vout, "report CSV (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    std::signal(SIGINT, on_interrupt);
    try {
        if (*heff_cmd) {
            const auto cfg = resolve(c_heff);
            cfg.validate();
            const auto g = cfg.grid();
            const auto paths = single_channel(cfg);
            EffChannel eff = (cfg.tap_model == TapModel::Quadrature)
                                 ? heff_table_sinc_identical_quadrature(g, paths, {k_lo, k_hi, l_lo, l_hi})
                                 : heff_table(cfg.combination(), g, paths, {k_lo, k_hi, l_lo, l_hi});
            std::ostringstream o;
            write_csv(o, eff);
            emit(cfg, o.str());
        } else if (*cov_cmd) {
            const auto cfg = resolve(c_cov);
            cfg.validate();
            const auto g = cfg.grid();
            const CMatrix unit = (cfg.noise_model == NoiseModel::Exact)
                                     ? cov_sinc_identical_exact(g, 1.0).unit_matrix()
                                     : cov_unit_matrix(cfg.combination(), g, single_channel(cfg), cfg.q_range());
            const NoiseCov cov(unit, n0);
            const auto d = diagnose(cov.matrix());
            std::cerr << "asymmetry " << d.asymmetry << ", min eigenvalue " << d.min_eigenvalue << ", trace/MN "
                      << d.trace_per_dim << ", jitter " << cov.unit_jitter() << '\n';
            std::ostringstream o;
            write_csv(o, cov.matrix());
            emit(cfg, o.str());
        } else if (*matrix_cmd) {
            const auto cfg = resolve(c_matrix);
            cfg.validate();
            const auto g = cfg.grid();
            const auto paths = single_channel(cfg);
            EffChannel eff = (cfg.tap_model == TapModel::Quadrature)
                                 ? heff_table_sinc_identical_quadrature(g, paths, default_tap_window(g))
                                 : heff_table(cfg.combination(), g, paths);
            std::ostringstream o;
            write_matrix_csv(o, build_H(eff, g).H);
            emit(cfg, o.str());
        } else if (*ber_cmd) {
            const auto cfg = resolve(c_ber);
            const auto rec = run_ber_sweep(cfg);
            std::ostringstream o;
            write_ber_csv(o, rec, describe(cfg));
            emit(cfg, o.str());
        } else if (*dop_cmd) {
            auto cfg = resolve(c_dop);
            cfg.snr_db = {fixed_snr};
            const auto rec = run_ber_vs_doppler(cfg, parse_doubles("nu_max", nu_list));
            std::ostringstream o;
            write_sweep_csv(o, rec, "nu_max", describe(cfg));
            emit(cfg, o.str());
        } else if (*csi_cmd) {
            const auto cfg = resolve(c_csi);
            const auto rec = run_csi_sweep(cfg, parse_doubles("sigma", sigma_list));
            std::ostringstream o;
            write_sweep_csv(o, rec, "sigma_e2", describe(cfg));
            emit(cfg, o.str());
        } else if (*snr_cmd) {
            const auto cfg = resolve(c_snr);
            cfg.validate();
            const auto g = cfg.grid();
            const auto paths = single_channel(cfg);
            const NoiseCov cov(cov_unit_matrix(cfg.combination(), g, paths, cfg.q_range()), snr_n0);
            const EffChannel eff = heff_table(cfg.combination(), g, paths);
            std::ostringstream o;
            o << std::setprecision(10) << "tau_norm,snr_db\n";
            for (const auto& s : snr_profile(eff, cov, nu_fixed, g)) o << s.tau_norm << ',' << s.snr_db << '\n';
            emit(cfg, o.str());
        } else if (*psd_cmd) {
            const auto cfg = resolve(c_psd);
            cfg.validate();
            const auto g = cfg.grid();
            CVector frame = CVector::Zero(g.size());
            if (frame_kind == "pilot") {
                frame(g.flat(g.M / 2, g.N / 2)) = 1.0;
            } else {
                const auto alpha = Alphabet::from_name(cfg.alphabet);
                std::vector<std::uint8_t> bits(static_cast<std::size_t>(g.size() * alpha.bits_per_symbol()));
                auto rng = make_rng(derive_seed(cfg.seed, 0, 3));
                std::bernoulli_distribution coin(0.5);
                for (auto& b : bits) b = coin(rng) ? 1 : 0;
                frame = map_bits(bits, alpha);
            }
            const auto f = default_frequency_grid(g, points);
            const auto spec = tx_spectrum(frame, cfg.filter_config(), g, f);
            std::cerr << "out-of-band fraction " << oob_leakage(spec, g.B) << '\n';
            std::ostringstream o;
            write_csv(o, spec);
            emit(cfg, o.str());
        } else if (*val_cmd) {
            const auto cases = run_validation(vopt);
            std::ostringstream o;
            write_validation_report(o, cases);
            if (vout.empty())
                std::cout << o.str();
            else
                std::ofstream(vout) << o.str();
            int failed = 0;
            for (const auto& c : cases)
                if (!c.passed) {
                    ++failed;
                    std::cerr << "FAIL " << c.suite << ' ' << c.combination << ' ' << c.indices << " error "
                              << c.relative_error << " > " << c.tolerance << '\n';
                }
            return failed ? 2 : 0;
        }
    } catch (const InvalidParameter& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    if (interrupt_flag().load()) std::cerr << "interrupted; partial results written\n";
    return 0;
}
