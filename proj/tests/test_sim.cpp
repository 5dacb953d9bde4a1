// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "zakotfs/error.hpp"
#include "zakotfs/sim.hpp"

using namespace zakotfs;

namespace {

ExperimentConfig small_config() {
    ExperimentConfig c;
    c.M = 4;
    c.N = 4;
    c.nu_p = 15000.0;
    c.nu_max = 815.0;
    c.realizations = 20;
    c.snr_db = {0, 10, 20};
    c.seed = 3;
    return c;
}

void check_same_counts(const std::vector<BerRecord>& a, const std::vector<BerRecord>& b) {
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].snr_db == b[i].snr_db);
        CHECK(a[i].bit_errors == b[i].bit_errors);
        CHECK(a[i].bits == b[i].bits);
    }
}

}  // namespace

TEST_SUITE("sim") {

TEST_CASE("Wilson interval reference values") {
    auto a = binomial_interval(0, 100);
    CHECK(a.low == 0.0);
    CHECK(a.high == doctest::Approx(0.036995).epsilon(1e-4));
    auto b = binomial_interval(50, 100);
    CHECK(b.low == doctest::Approx(0.403832).epsilon(1e-5));
    CHECK(b.high == doctest::Approx(0.596168).epsilon(1e-5));
    auto c = binomial_interval(100, 100);
    CHECK(c.high == doctest::Approx(1.0));
    auto none = binomial_interval(0, 0);
    CHECK(none.low == 0.0);
    CHECK(none.high == 1.0);
    CHECK_THROWS_AS(binomial_interval(5, 4), InvalidParameter);
}

TEST_CASE("SNR at a target BER interpolates on a log scale") {
    std::vector<BerRecord> r(3);
    r[0].snr_db = 0;
    r[0].ber = 1e-1;
    r[0].bits = 1000;
    r[1].snr_db = 10;
    r[1].ber = 1e-3;
    r[1].bits = 1000;
    r[2].snr_db = 20;
    r[2].ber = 1e-5;
    r[2].bits = 100000;
    CHECK(snr_at_ber(r, 1e-2) == doctest::Approx(5.0));
    CHECK(snr_at_ber(r, 1e-4) == doctest::Approx(15.0));
    CHECK(std::isnan(snr_at_ber(r, 1e-7)));
}

TEST_CASE("configuration text round trip") {
    std::istringstream in(
        "# comment\nM = 6\nN = 8\nfilter = gaussian\nscheme = channel-matched\nsnr_db = 0:5:15\n"
        "realizations = 7\nchannel = static\npath = 1 0 1e-6 100\nEXPANSION_B = 1.12\n");
    auto c = parse_config(in);
    CHECK(c.M == 6);
    CHECK(c.N == 8);
    CHECK(c.filter == FilterFamily::Gaussian);
    CHECK(c.scheme == RxScheme::ChannelMatched);
    CHECK(c.snr_db == std::vector<double>{0, 5, 10, 15});
    CHECK(c.channel == ChannelKind::Static);
    REQUIRE(c.paths.size() == 1);
    CHECK(c.paths.paths[0].doppler == 100.0);
    CHECK(c.expansion_B == 1.12);
    std::stringstream ss;
    write_config(ss, c);
    auto d = parse_config(ss);
    CHECK(d.M == c.M);
    CHECK(d.snr_db == c.snr_db);
    CHECK(d.filter_config().alpha_tau == doctest::Approx(c.filter_config().alpha_tau));
    CHECK(d.paths.paths[0].delay == c.paths.paths[0].delay);
}

TEST_CASE("configuration errors name the line") {
    std::istringstream bad("M = 4\nbogus = 1\n");
    try {
        parse_config(bad);
        FAIL("expected an error");
    } catch (const InvalidParameter& e) {
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
    ExperimentConfig c;
    CHECK_THROWS_AS(apply_setting(c, "realizations", "many"), InvalidParameter);
    CHECK_THROWS_AS(apply_setting(c, "detector", "oracle"), InvalidParameter);
}

TEST_CASE("validation rejects impossible experiments") {
    auto c = small_config();
    c.M = 6;
    c.detector = Detector::Ml;
    CHECK_THROWS_AS(c.validate(), SearchSpaceTooLarge);
    c = small_config();
    c.expansion_B = 0.9;
    CHECK_THROWS_AS(c.validate(), InvalidParameter);
    c = small_config();
    c.scheme = RxScheme::Matched;
    c.tap_model = TapModel::Quadrature;
    CHECK_THROWS_AS(c.validate(), InvalidParameter);
    c = small_config();
    c.channel = ChannelKind::Static;
    CHECK_THROWS_AS(c.validate(), InvalidParameter);
    CHECK_NOTHROW(small_config().validate());
}

TEST_CASE("sweeps are reproducible and independent of the worker count") {
    auto c = small_config();
    auto a = run_ber_sweep(c);
    auto b = run_ber_sweep(c);
    check_same_counts(a, b);
    c.workers = 3;
    check_same_counts(a, run_ber_sweep(c));
    for (const auto& r : a) {
        CHECK(r.bits == 20LL * 16);
        CHECK(r.ber == doctest::Approx(double(r.bit_errors) / r.bits));
        CHECK(r.ci_low <= r.ber);
        CHECK(r.ci_high >= r.ber);
    }
    CHECK(a.front().ber >= a.back().ber);
}

TEST_CASE("errors vanish on a clean identity channel") {
    auto c = small_config();
    c.channel = ChannelKind::Static;
    c.paths = PathSet{{{1.0, 0.0, 0.0}}};
    c.snr_db = {60};
    c.alphabet = "8qam";
    auto r = run_ber_sweep(c);
    CHECK(r[0].bit_errors == 0);
    CHECK(r[0].bits == 20LL * 16 * 3);
}

TEST_CASE("zero CSI error equals perfect CSI") {
    for (auto s : {RxScheme::Matched, RxScheme::ChannelMatched}) {
        auto c = small_config();
        c.scheme = s;
        auto perfect = run_ber_sweep(c);
        auto sweep = run_csi_sweep(c, {0.0});
        REQUIRE(!sweep.empty());
        for (const auto& rec : sweep) {
            if (rec.scheme != s || rec.filter != c.filter) continue;
            for (const auto& p : perfect)
                if (p.snr_db == rec.record.snr_db) CHECK(p.bit_errors == rec.record.bit_errors);
        }
    }
}

TEST_CASE("zero Doppler spread in the Doppler sweep equals a static-Doppler sweep") {
    auto c = small_config();
    c.snr_db = {10};
    auto sweep = run_ber_vs_doppler(c, {0.0});
    for (const auto& rec : sweep) {
        auto d = c;
        d.filter = rec.filter;
        d.scheme = rec.scheme;
        d.nu_max = 0.0;
        auto r = run_ber_sweep(d);
        CHECK(r[0].bit_errors == rec.record.bit_errors);
    }
}

TEST_CASE("ML detection on a small frame runs and improves with SNR") {
    ExperimentConfig c;
    c.M = 2;
    c.N = 2;
    c.nu_p = 3750.0;
    c.channel = ChannelKind::FixedRayleigh;
    c.paths = PathSet{{{1.0, 8e-5, 1312.5}, {1.0, 1.6e-4, 1687.5}}};
    c.detector = Detector::Ml;
    c.filter = FilterFamily::Gaussian;
    c.scheme = RxScheme::ChannelMatched;
    c.snr_db = {0, 30};
    c.realizations = 400;
    auto r = run_ber_sweep(c);
    CHECK(r[1].ber < r[0].ber);
}

TEST_CASE("an interrupted sweep stops early") {
    auto c = small_config();
    interrupt_flag() = true;
    auto r = run_ber_sweep(c);
    interrupt_flag() = false;
    long long bits = 0;
    for (const auto& x : r) bits += x.bits;
    CHECK(bits < 20LL * 16 * 3);
}

TEST_CASE("BER CSV layout") {
    std::vector<BerRecord> r(1);
    r[0].snr_db = 4;
    r[0].bit_errors = 3;
    r[0].bits = 100;
    r[0].ber = 0.03;
    std::ostringstream os;
    write_ber_csv(os, r, "sinc matched");
    auto s = os.str();
    CHECK(s.rfind("# generated ", 0) == 0);
    CHECK(s.find("# sinc matched\n") != std::string::npos);
    CHECK(s.find("snr_db,bit_errors,bits,ber,wall_time,ci_low,ci_high\n4,3,100,0.03,") != std::string::npos);
}

}  // TEST_SUITE
