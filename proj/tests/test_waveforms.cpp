#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>

#include "jrc/waveforms.hpp"

using namespace jrc;

constexpr double kPi = std::numbers::pi;

namespace {

SystemConfig desk(int tx, int pulses, double f_b, double t_r, double t_0, double p_rad = 1.0) {
    SystemConfig c = paper_defaults();
    c.tx_antennas = tx;
    c.f_b = f_b;
    c.t_r = t_r;
    c.t_0 = t_0;
    c.duty = t_0 / t_r;
    c.t_c = pulses * t_r;
    c.p_rad = p_rad;
    c.validate();
    return c;
}

// Independent evaluation of the uncoded chirp at continuous time u within a
// pulse (u measured from the pulse start).
cd chirp(double u, const SystemConfig& c, double amp) {
    const double x = u - 0.5 * c.t_0;
    return std::polar(amp, kPi * c.f_b / c.t_0 * x * x);
}

SampledWaveform uncoded(const SystemConfig& c) {
    return lfm_pulse_train(c, zero_codes(c.tx_antennas, in_pulse_sample_count(c)));
}

}  // namespace

TEST_CASE("desk train: two bursts of ten unit samples") {
    const auto c = desk(1, 2, 100e3, 1e-3, 0.1e-3);
    const auto w = uncoded(c);
    CHECK(w.length() == 200);
    CHECK(w.dt == doctest::Approx(10e-6));
    int nonzero = 0;
    std::vector<int> starts;
    for (int l = 0; l < w.length(); ++l) {
        const double m = std::abs(w.samples(0, l));
        if (m > 0.0) {
            CHECK(m == doctest::Approx(1.0).epsilon(1e-14));
            if (l == 0 || std::abs(w.samples(0, l - 1)) == 0.0) starts.push_back(l);
            ++nonzero;
        }
    }
    CHECK(nonzero == 20);
    REQUIRE(starts.size() == 2);
    CHECK(starts[0] == 0);
    CHECK(starts[1] == 100);
    CHECK(in_pulse_sample_count(c) == 20);
}

TEST_CASE("pulse start phase of the uncoded chirp") {
    const auto c = desk(2, 3, 100e3, 1e-3, 0.1e-3, 0.5);
    const auto w = uncoded(c);
    const double amp = std::sqrt(c.p_rad / c.tx_antennas);
    // substituting t = k T_R into the chirp phase leaves (T_0/2)^2
    const cd expect = std::polar(amp, kPi * c.f_b * c.t_0 / 4.0);
    for (int k = 0; k < 3; ++k) {
        for (int i = 0; i < 2; ++i) CHECK(std::abs(w.samples(i, k * 100) - expect) < 1e-12);
    }
}

TEST_CASE("samples and derivative agree with the continuous chirp") {
    const auto c = desk(1, 3, 200e3, 0.5e-3, 0.1e-3);
    const auto w = uncoded(c);
    const double h = 1e-6 * w.dt;
    for (int l = 0; l < w.length(); ++l) {
        const double t = w.time(l);
        const int k = static_cast<int>(std::floor(t / c.t_r + 1e-9));
        const double u = t - k * c.t_r;
        if (u >= c.t_0 - 1e-9 * w.dt) {
            CHECK(w.samples(0, l) == cd{});
            CHECK(w.deriv(0, l) == cd{});
            continue;
        }
        CHECK(std::abs(w.samples(0, l) - chirp(u, c, 1.0)) < 1e-9);
        if (u > 0.0) {  // interior points only
            const cd fd = (chirp(u + h, c, 1.0) - chirp(u - h, c, 1.0)) / (2.0 * h);
            CHECK(std::abs(fd - w.deriv(0, l)) <= 1e-4 * std::abs(w.deriv(0, l)) + 1e-6);
        }
    }
}

TEST_CASE("paper-default energy per antenna") {
    const auto c = paper_defaults();
    const auto w = uncoded(c);
    CHECK(w.antennas() == 32);
    CHECK(w.length() == 250000);
    const double expect = (0.1 / 32) * 50 * 1e-4;
    for (int i = 0; i < w.antennas(); i += 7) {
        const double e = w.dt * w.samples.row(i).squaredNorm();
        CHECK(std::abs(e - expect) <= (0.1 / 32) * w.dt * 50);
    }
    CHECK(derive(c).pulse_count == 50);
}

TEST_CASE("code validation") {
    const auto c = desk(2, 2, 100e3, 1e-3, 0.1e-3);
    CHECK_THROWS_AS(lfm_pulse_train(c, zero_codes(3, 20)), std::invalid_argument);
    CHECK_THROWS_AS(lfm_pulse_train(c, zero_codes(2, 19)), std::invalid_argument);
    auto bad = zero_codes(2, 20);
    bad[1][4] = 2;
    CHECK_THROWS_AS(lfm_pulse_train(c, bad), std::invalid_argument);
}

TEST_CASE("coded antennas are nearly orthogonal") {
    const auto c = desk(8, 50, 1e6, 1e-3, 0.1e-3);
    const auto w = lfm_pulse_train(c, random_codes(8, in_pulse_sample_count(c), 2024));
    double worst = 0.0;
    for (int i = 0; i < 8; ++i) {
        for (int j = i + 1; j < 8; ++j) worst = std::max(worst, cross_correlation(w, i, j));
    }
    CHECK(worst < 0.05);
    CHECK(cross_correlation(w, 3, 3) == doctest::Approx(1.0));
}

TEST_CASE("rms bandwidth of reference spectra") {
    const auto c = desk(1, 1, 100e3, 2.56e-3, 0.1e-3);
    SampledWaveform w = uncoded(c);
    const double fb2 = c.f_b * c.f_b;

    SUBCASE("impulse: flat spectrum across the band") {
        w.samples.setZero();
        w.samples(0, 3) = cd{2.0, 0.0};
        CHECK(rms_bandwidth(w) == doctest::Approx(fb2 / 12.0).epsilon(1e-3));
    }
    SUBCASE("tone at band centre") {
        w.samples.setConstant(cd{1.0, 0.0});
        CHECK(rms_bandwidth(w) < 1e-3 * fb2);
    }
    SUBCASE("all-zero waveform") {
        w.samples.setZero();
        CHECK_THROWS(rms_bandwidth(w));
    }
}

TEST_CASE("rms bandwidth of the paper-default chirp") {
    SystemConfig c = paper_defaults();
    c.tx_antennas = 1;
    const auto w = uncoded(c);
    CHECK(rms_bandwidth(w) == doctest::Approx(c.f_b * c.f_b / 12.0).epsilon(0.10));
}

TEST_CASE("temporal moments of a rectangular pulse") {
    // zero chirp rate is not available from the synthesiser, so build the
    // pulse by hand: amplitude A on [0, T_0)
    const auto c = desk(1, 1, 100e3, 2e-3, 1e-3);
    SampledWaveform w = uncoded(c);
    const double a = 0.7;
    w.samples.setZero();
    w.deriv.setZero();
    w.chirp_rate = 0.0;
    const int n = static_cast<int>(std::lround(c.t_0 / w.dt));
    for (int l = 0; l < n; ++l) w.samples(0, l) = a;
    const auto m = temporal_moments(w, 0.0);
    const double exact = a * a * std::pow(c.t_0, 3) / 3.0;
    // left Riemann sum: one-sample slack
    CHECK(std::abs(m.m_t2 - exact) <= a * a * c.t_0 * c.t_0 * w.dt);
    CHECK(m.energy == doctest::Approx(a * a * c.t_0));
    CHECK(m.m_cross == doctest::Approx(0.0));
}

TEST_CASE("temporal moments of a zero waveform vanish") {
    const auto c = desk(2, 2, 100e3, 1e-3, 0.1e-3);
    SampledWaveform w = uncoded(c);
    w.samples.setZero();
    w.deriv.setZero();
    const auto m = temporal_moments(w, 0.0);
    CHECK(m.energy == 0.0);
    CHECK(m.m_t2 == 0.0);
    CHECK(m.m_cross == 0.0);
    CHECK(m.b_rms2 == 0.0);
    CHECK(m.mean_t2() == 0.0);
}

TEST_CASE("temporal moments against direct sums over the shifted grid") {
    const auto c = desk(2, 4, 100e3, 1e-3, 0.1e-3);
    const auto w = lfm_pulse_train(c, random_codes(2, in_pulse_sample_count(c), 5));
    const int shift = 7;
    const auto m = temporal_moments(w, shift * w.dt);
    double e = 0.0, t2 = 0.0, cross = 0.0;
    for (int i = 0; i < 2; ++i) {
        for (int l = shift; l < w.length(); ++l) {
            const cd s = w.samples(i, l - shift);
            const cd ds = w.deriv(i, l - shift);
            const double t = l * w.dt;
            e += std::norm(s);
            t2 += t * t * std::norm(s);
            cross += 2.0 * std::real(std::conj(-ds) * cd{0.0, t} * s);
        }
    }
    CHECK(m.energy == doctest::Approx(e * w.dt).epsilon(1e-12));
    CHECK(m.m_t2 == doctest::Approx(t2 * w.dt).epsilon(1e-12));
    CHECK(m.m_cross == doctest::Approx(cross * w.dt).epsilon(1e-10));
    CHECK_THROWS_AS(temporal_moments(w, c.t_r), DomainError);
    CHECK_THROWS_AS(temporal_moments(w, -1e-9), DomainError);
}

TEST_CASE("sub-sample delay follows the continuous chirp") {
    const auto c = desk(1, 2, 100e3, 1e-3, 0.2e-3);
    const auto w = uncoded(c);
    const double tau = 3.4 * w.dt;
    const auto d = delayed(w, tau);
    for (int l = 3; l < w.length(); ++l) {
        // window membership follows the whole-sample shift
        if (std::abs(w.samples(0, l - 3)) == 0.0) {
            CHECK(d.samples(0, l) == cd{});
            continue;
        }
        const double t = l * w.dt - tau;
        const int k = static_cast<int>(std::floor((l - 3) * w.dt / c.t_r + 1e-9));
        CHECK(std::abs(d.samples(0, l) - chirp(t - k * c.t_r, c, 1.0)) < 1e-9);
    }
    for (int l = 0; l < 3; ++l) CHECK(d.samples(0, l) == cd{});
    CHECK_THROWS_AS(delayed(w, -1.0), DomainError);
}

TEST_CASE("waveform dump") {
    const auto c = desk(2, 1, 100e3, 0.1e-3, 0.05e-3);
    const auto w = uncoded(c);
    const std::string path = "waveform_dump_test.csv";
    write_waveform_csv(w, path);
    std::ifstream in(path);
    std::string header, first;
    std::getline(in, header);
    std::getline(in, first);
    CHECK(header == "t,re_0,im_0,re_1,im_1");
    CHECK(first.rfind("0,", 0) == 0);
    int lines = 1;
    for (std::string s; std::getline(in, s);) ++lines;
    CHECK(lines == w.length());
    std::remove(path.c_str());
}
