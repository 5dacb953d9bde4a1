// SPDX-License-Identifier: Apache-2.0
#include "zakotfs/sim.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <iomanip>
#include <limits>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include "zakotfs/error.hpp"
#include "zakotfs/kernels.hpp"
#include "zakotfs/linsys.hpp"

namespace zakotfs {

DDGrid ExperimentConfig::grid() const { return make_grid(M, N, nu_p); }

FilterConfig ExperimentConfig::filter_config() const {
    if (filter == FilterFamily::Sinc) return FilterConfig::sinc();
    if (expansion_B != 1.0 || expansion_T != 1.0) {
        const auto a = gaussian_alpha_for_containment(expansion_B, expansion_T);
        return FilterConfig::gaussian(a.alpha_tau, a.alpha_nu);
    }
    return FilterConfig::gaussian(alpha_tau, alpha_nu);
}

Combination ExperimentConfig::combination() const { return {filter_config(), scheme}; }

QRange ExperimentConfig::q_range() const {
    if (q_lo > q_hi) return QRange::adequate(grid(), filter_config());
    return {q_lo, q_hi};
}

void ExperimentConfig::validate() const {
    const auto g = grid();
    filter_config().validate();
    if (realizations < 1) throw InvalidParameter("realizations must be >= 1");
    if (snr_db.empty()) throw InvalidParameter("SNR list is empty");
    for (double s : snr_db)
        if (!std::isfinite(s)) throw InvalidParameter("SNR values must be finite");
    if (!(nu_max >= 0.0) || !std::isfinite(nu_max)) throw InvalidParameter("nu_max must be non-negative");
    if (!(csi_sigma_e2 >= 0.0)) throw InvalidParameter("csi_sigma_e2 must be non-negative");
    if (workers < 1) throw InvalidParameter("workers must be >= 1");
    if (!(expansion_B >= 1.0) || !(expansion_T >= 1.0)) throw InvalidParameter("expansion ratios must be >= 1");
    const auto alpha = Alphabet::from_name(alphabet);
    if (channel != ChannelKind::VehA) {
        if (paths.empty()) throw InvalidParameter("this channel kind needs a path list");
        paths.validate();
    }
    const bool sinc_identical = filter == FilterFamily::Sinc && scheme == RxScheme::Identical;
    if (tap_model == TapModel::Quadrature && !sinc_identical)
        throw InvalidParameter("tap_model=quadrature applies to sinc identical filtering only");
    if (noise_model == NoiseModel::Exact && !sinc_identical)
        throw InvalidParameter("noise_model=exact applies to sinc identical filtering only");
    if (detector == Detector::Ml) {
        const double count = hypothesis_count(g.size(), alpha);
        if (count > kMaxHypotheses) {
            std::ostringstream m;
            m << "ML search over " << count << " hypotheses exceeds the limit of " << kMaxHypotheses;
            throw SearchSpaceTooLarge(count, m.str());
        }
    }
    q_range().validate();
}

Interval binomial_interval(long long errors, long long trials, double z) {
    if (trials <= 0) return {0.0, 1.0};
    if (errors < 0 || errors > trials) throw InvalidParameter("error count outside [0, trials]");
    const double n = static_cast<double>(trials), p = static_cast<double>(errors) / n;
    const double z2 = z * z, den = 1.0 + z2 / n;
    const double centre = (p + z2 / (2.0 * n)) / den;
    const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / den;
    return {errors == 0 ? 0.0 : std::max(0.0, centre - half), errors == trials ? 1.0 : std::min(1.0, centre + half)};
}

std::atomic<bool>& interrupt_flag() {
    static std::atomic<bool> flag{false};
    return flag;
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::vector<cplx> gains_of(const PathSet& p) {
    std::vector<cplx> g;
    for (const auto& x : p.paths) g.push_back(x.gain);
    return g;
}

PathSet with_unit_gain(const PathSet& p, std::size_t i) {
    PathSet out = p;
    for (std::size_t j = 0; j < out.size(); ++j) out.paths[j].gain = (j == i) ? cplx{1.0} : cplx{};
    return out;
}

// What one frame needs: true matrix for transmission, estimated matrix and
// noise covariance for detection.
struct FrameSystem {
    CMatrix H_true;
    CMatrix H_est;
    const NoiseCov* cov = nullptr;
    std::optional<NoiseCov> own_cov;
};

class Engine {
public:
    explicit Engine(const ExperimentConfig& cfg)
        : cfg_(cfg), grid_(cfg.grid()), comb_(cfg.combination()), qr_(cfg.q_range()),
          alphabet_(Alphabet::from_name(cfg.alphabet)), window_(default_tap_window(grid_)) {
        cfg_.validate();
        chmatched_ = comb_.scheme == RxScheme::ChannelMatched;
        if (!chmatched_) {
            CMatrix unit = (cfg_.noise_model == NoiseModel::Exact)
                               ? cov_sinc_identical_exact(grid_, 1.0).unit_matrix()
                               : cov_unit_matrix(comb_, grid_, {}, qr_);
            fixed_cov_.emplace(std::move(unit), 1.0);
        }
        if (cfg_.channel == ChannelKind::FixedRayleigh) build_gain_basis();
    }

    const DDGrid& grid() const { return grid_; }
    const Alphabet& alphabet() const { return alphabet_; }

    PathSet true_paths(int r) const {
        const auto s = derive_seed(cfg_.seed, static_cast<std::uint64_t>(r), 1);
        switch (cfg_.channel) {
            case ChannelKind::VehA:
                return veh_a_realization(cfg_.nu_max, s);
            case ChannelKind::FixedRayleigh: {
                std::vector<double> d, n, p;
                for (const auto& x : cfg_.paths.paths) {
                    d.push_back(x.delay);
                    n.push_back(x.doppler);
                    p.push_back(std::norm(x.gain));
                }
                return rayleigh_paths(d, n, p, s);
            }
            case ChannelKind::Static:
                return cfg_.paths;
        }
        return {};
    }

    PathSet estimated_paths(const PathSet& truth, int r) const {
        if (cfg_.csi_sigma_e2 == 0.0) return truth;
        return apply_csi_error(truth, {cfg_.csi_sigma_e2}, derive_seed(cfg_.seed, static_cast<std::uint64_t>(r), 2));
    }

    FrameSystem system(const PathSet& truth, const PathSet& est) const {
        FrameSystem fs;
        if (basis_ready_) {
            combine_basis(truth, est, fs);
        } else if (chmatched_) {
            fs.H_est = build_H(heff_table(comb_, grid_, est, window_), grid_).H;
            fs.H_true = (cfg_.csi_sigma_e2 == 0.0)
                            ? fs.H_est
                            : build_H(heff_table_chmatched_cross(comb_.filter, grid_, est, truth, window_), grid_).H;
            fs.own_cov.emplace(cov_unit_matrix(comb_, grid_, est, qr_), 1.0);
        } else {
            fs.H_true = build_H(taps(truth), grid_).H;
            fs.H_est = (cfg_.csi_sigma_e2 == 0.0) ? fs.H_true : build_H(taps(est), grid_).H;
        }
        fs.cov = fs.own_cov ? &*fs.own_cov : &*fixed_cov_;
        return fs;
    }

    // Bit errors at each SNR point for realization r.
    std::vector<long long> run_frame(int r, std::vector<double>& seconds) const {
        const auto t0 = Clock::now();
        const PathSet truth = true_paths(r);
        const PathSet est = estimated_paths(truth, r);
        const FrameSystem fs = system(truth, est);

        const int bps = alphabet_.bits_per_symbol();
        std::vector<std::uint8_t> bits(static_cast<std::size_t>(grid_.size() * bps));
        auto brng = make_rng(derive_seed(cfg_.seed, static_cast<std::uint64_t>(r), 3));
        std::bernoulli_distribution coin(0.5);
        for (auto& b : bits) b = coin(brng) ? 1 : 0;
        const CVector x = map_bits(bits, alphabet_);

        CVector w(grid_.size());
        auto nrng = make_rng(derive_seed(cfg_.seed, static_cast<std::uint64_t>(r), 4));
        for (Eigen::Index i = 0; i < w.size(); ++i) w(i) = complex_normal(nrng, 1.0);
        const CVector Lw = fs.cov->is_scaled_identity()
                               ? w
                               : CVector(fs.cov->unit_factor().triangularView<Eigen::Lower>() * w);
        const CVector clean = fs.H_true * x;

        std::optional<CMatrix> gram;
        std::optional<MlDetector> ml;
        if (cfg_.detector == Detector::Mmse)
            gram = fs.H_est * fs.H_est.adjoint();
        else
            ml.emplace(fs.H_est, *fs.cov, alphabet_);
        const double setup = seconds_since(t0) / static_cast<double>(cfg_.snr_db.size());

        std::vector<long long> errors(cfg_.snr_db.size(), 0);
        for (std::size_t s = 0; s < cfg_.snr_db.size(); ++s) {
            const auto t1 = Clock::now();
            const double N0 = std::pow(10.0, -cfg_.snr_db[s] / 10.0);
            const CVector y = clean + std::sqrt(N0) * Lw;
            CVector xhat;
            if (gram) {
                MmseDetector det(fs.H_est, *gram, N0 * fs.cov->unit_matrix(), alphabet_.mean_energy());
                xhat = slice_symbols(det.equalize(y), alphabet_);
            } else {
                xhat = ml->detect(y);
            }
            const auto rx = demap_symbols(xhat, alphabet_);
            long long e = 0;
            for (std::size_t i = 0; i < bits.size(); ++i) e += rx[i] != bits[i];
            errors[s] = e;
            seconds[s] += setup + seconds_since(t1);
        }
        return errors;
    }

private:
    EffChannel taps(const PathSet& p) const {
        if (cfg_.tap_model == TapModel::Quadrature) return heff_table_sinc_identical_quadrature(grid_, p, window_);
        return heff_table(comb_, grid_, p, window_);
    }

    // Fixed geometry: H and the channel-matched covariance are linear in the
    // gains (or their pairwise products), so per-path matrices are built once.
    void build_gain_basis() {
        const auto& geo = cfg_.paths;
        const std::size_t P = geo.size();
        if (!chmatched_) {
            for (std::size_t i = 0; i < P; ++i) path_H_.push_back(build_H(taps(with_unit_gain(geo, i)), grid_).H);
        } else {
            for (std::size_t i = 0; i < P; ++i)
                for (std::size_t j = 0; j < P; ++j) {
                    const auto ei = with_unit_gain(geo, i), ej = with_unit_gain(geo, j);
                    pair_H_.push_back(build_H(heff_table_chmatched_cross(comb_.filter, grid_, ei, ej, window_), grid_).H);
                    Path pi = geo.paths[i], pj = geo.paths[j];
                    pi.gain = pj.gain = 1.0;
                    pair_cov_.push_back(cov_chmatched_pair_unit(comb_.filter, grid_, pi, pj, qr_));
                }
        }
        basis_ready_ = true;
    }

    void combine_basis(const PathSet& truth, const PathSet& est, FrameSystem& fs) const {
        const auto ht = gains_of(truth), he = gains_of(est);
        const std::size_t P = ht.size();
        const auto n = grid_.size();
        fs.H_true = CMatrix::Zero(n, n);
        fs.H_est = CMatrix::Zero(n, n);
        if (!chmatched_) {
            for (std::size_t i = 0; i < P; ++i) {
                fs.H_true += ht[i] * path_H_[i];
                fs.H_est += he[i] * path_H_[i];
            }
            return;
        }
        CMatrix C = CMatrix::Zero(n, n);
        for (std::size_t i = 0; i < P; ++i)
            for (std::size_t j = 0; j < P; ++j) {
                const auto& B = pair_H_[i * P + j];
                fs.H_true += std::conj(he[i]) * ht[j] * B;
                fs.H_est += std::conj(he[i]) * he[j] * B;
                C += std::conj(he[i]) * he[j] * pair_cov_[i * P + j];
            }
        C = 0.5 * (C + CMatrix(C.adjoint()));
        fs.own_cov.emplace(std::move(C), 1.0);
    }

    ExperimentConfig cfg_;
    DDGrid grid_;
    Combination comb_;
    QRange qr_;
    Alphabet alphabet_;
    TapWindow window_;
    bool chmatched_ = false;
    std::optional<NoiseCov> fixed_cov_;
    bool basis_ready_ = false;
    std::vector<CMatrix> path_H_, pair_H_, pair_cov_;
};

}  // namespace

std::vector<BerRecord> run_ber_sweep(const ExperimentConfig& cfg) {
    Engine engine(cfg);
    const std::size_t S = cfg.snr_db.size();
    const int R = cfg.realizations;
    std::vector<std::vector<long long>> errors(static_cast<std::size_t>(R));
    std::vector<std::vector<double>> seconds(static_cast<std::size_t>(R), std::vector<double>(S, 0.0));
    std::atomic<int> next{0};
    std::mutex failure_lock;
    std::exception_ptr failure;
    auto work = [&] {
        for (;;) {
            if (interrupt_flag().load()) return;
            const int r = next.fetch_add(1);
            if (r >= R) return;
            try {
                errors[static_cast<std::size_t>(r)] = engine.run_frame(r, seconds[static_cast<std::size_t>(r)]);
            } catch (...) {
                std::lock_guard<std::mutex> lk(failure_lock);
                if (!failure) failure = std::current_exception();
                next.store(R);
                return;
            }
        }
    };
    const int W = std::min(cfg.workers, R);
    if (W <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (int i = 0; i < W; ++i) pool.emplace_back(work);
    }
    if (failure) std::rethrow_exception(failure);

    const long long bits_per_frame = static_cast<long long>(engine.grid().size()) * engine.alphabet().bits_per_symbol();
    std::vector<BerRecord> out(S);
    for (std::size_t s = 0; s < S; ++s) {
        auto& rec = out[s];
        rec.snr_db = cfg.snr_db[s];
        for (int r = 0; r < R; ++r) {
            const auto& e = errors[static_cast<std::size_t>(r)];
            if (e.empty()) continue;  // not run before an interrupt
            rec.bit_errors += e[s];
            rec.bits += bits_per_frame;
            rec.wall_time += seconds[static_cast<std::size_t>(r)][s];
        }
        rec.ber = rec.bits ? static_cast<double>(rec.bit_errors) / static_cast<double>(rec.bits) : 0.0;
        const auto ci = binomial_interval(rec.bit_errors, rec.bits);
        rec.ci_low = ci.low;
        rec.ci_high = ci.high;
    }
    return out;
}

std::vector<SweepRecord> run_ber_vs_doppler(const ExperimentConfig& cfg, const std::vector<double>& nu_max_list) {
    std::vector<SweepRecord> out;
    for (FilterFamily f : {FilterFamily::Sinc, FilterFamily::Gaussian})
        for (RxScheme s : {RxScheme::Identical, RxScheme::Matched, RxScheme::ChannelMatched})
            for (double nu : nu_max_list) {
                if (interrupt_flag().load()) return out;
                ExperimentConfig c = cfg;
                c.filter = f;
                c.scheme = s;
                c.nu_max = nu;
                c.tap_model = TapModel::ClosedForm;
                c.noise_model = NoiseModel::ClosedForm;
                for (const auto& rec : run_ber_sweep(c)) out.push_back({f, s, nu, rec});
            }
    return out;
}

std::vector<SweepRecord> run_csi_sweep(const ExperimentConfig& cfg, const std::vector<double>& sigma_e2_list) {
    std::vector<SweepRecord> out;
    for (FilterFamily f : {FilterFamily::Sinc, FilterFamily::Gaussian})
        for (double sigma : sigma_e2_list) {
            if (interrupt_flag().load()) return out;
            ExperimentConfig c = cfg;
            c.filter = f;
            c.csi_sigma_e2 = sigma;
            c.tap_model = TapModel::ClosedForm;
            c.noise_model = NoiseModel::ClosedForm;
            for (const auto& rec : run_ber_sweep(c)) out.push_back({f, c.scheme, sigma, rec});
        }
    return out;
}

double snr_at_ber(const std::vector<BerRecord>& records, double target) {
    if (!(target > 0.0)) throw InvalidParameter("target BER must be positive");
    for (std::size_t i = 1; i < records.size(); ++i) {
        const auto& a = records[i - 1];
        const auto& b = records[i];
        if (a.ber >= target && b.ber < target) {
            // Zero counts are floored at half an error so the log stays finite.
            const double fa = std::log10(std::max(a.ber, 0.5 / std::max<long long>(a.bits, 1)));
            const double fb = std::log10(std::max(b.ber, 0.5 / std::max<long long>(b.bits, 1)));
            const double ft = std::log10(target);
            if (fa == fb) return a.snr_db;
            return a.snr_db + (ft - fa) / (fb - fa) * (b.snr_db - a.snr_db);
        }
    }
    return std::numeric_limits<double>::quiet_NaN();
}

namespace {

std::string timestamp_line() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream o;
    o << "# generated " << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ") << '\n';
    return o.str();
}

void write_comment(std::ostream& os, const std::string& comment) {
    std::istringstream lines(comment);
    std::string line;
    while (std::getline(lines, line)) os << "# " << line << '\n';
}

void write_record(std::ostream& os, const BerRecord& r) {
    os << r.snr_db << ',' << r.bit_errors << ',' << r.bits << ',' << r.ber << ',' << r.wall_time << ',' << r.ci_low
       << ',' << r.ci_high;
}

}  // namespace

void write_ber_csv(std::ostream& os, const std::vector<BerRecord>& records, const std::string& comment) {
    std::ostringstream buf;
    buf << std::setprecision(10) << timestamp_line();
    write_comment(buf, comment);
    buf << "snr_db,bit_errors,bits,ber,wall_time,ci_low,ci_high\n";
    for (const auto& r : records) {
        write_record(buf, r);
        buf << '\n';
    }
    os << buf.str();
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRecord>& records, const std::string& parameter_name,
                     const std::string& comment) {
    std::ostringstream buf;
    buf << std::setprecision(10) << timestamp_line();
    write_comment(buf, comment);
    buf << "filter,scheme," << parameter_name << ",snr_db,bit_errors,bits,ber,wall_time,ci_low,ci_high\n";
    for (const auto& r : records) {
        buf << to_string(r.filter) << ',' << to_string(r.scheme) << ',' << r.parameter << ',';
        write_record(buf, r.record);
        buf << '\n';
    }
    os << buf.str();
}

}  // namespace zakotfs
