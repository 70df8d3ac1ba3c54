#include "jrc/waveforms.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <numbers>
#include <stdexcept>

namespace jrc {

namespace {

constexpr double kPi = std::numbers::pi;

// Index of the pulse containing grid time t, or -1 between pulses.
struct PulsePosition {
    int pulse = -1;
    double offset = 0.0;  // t - k T_R
};

PulsePosition locate(double t, double dt, const PulseGeometry& g) {
    const double guard = 1e-9 * dt;
    const int k = static_cast<int>(std::floor((t + guard) / g.t_r));
    if (k < 0 || k >= g.pulse_count) return {};
    double u = t - k * g.t_r;
    if (u < 0.0) u = 0.0;
    if (u >= g.t_0 - guard) return {};
    return {k, u};
}

// Delayed copy of one antenna row. Exact for quadratic-phase pulses when
// chirp_rate is set; otherwise the local instantaneous frequency is used.
void delay_row(const SampledWaveform& w, int row, double tau, std::vector<cd>& s, std::vector<cd>& d) {
    const int L = w.length();
    s.assign(L, cd{});
    d.assign(L, cd{});
    const double guard = 1e-9 * w.dt;
    const int shift = static_cast<int>(std::floor((tau + guard) / w.dt));
    double frac = tau - shift * w.dt;
    if (std::abs(frac) < guard) frac = 0.0;
    for (int l = shift; l < L; ++l) {
        const int src = l - shift;
        if (src < 0) continue;
        const cd v = w.samples(row, src);
        const cd dv = w.deriv(row, src);
        if (frac == 0.0) {
            s[l] = v;
            d[l] = dv;
            continue;
        }
        const double mag2 = std::norm(v);
        if (mag2 == 0.0) {
            d[l] = dv;
            continue;
        }
        const double inst = std::imag(dv * std::conj(v)) / mag2;  // phase derivative
        const double dphi = -inst * frac + 0.5 * w.chirp_rate * frac * frac;
        const cd rot = std::polar(1.0, dphi);
        s[l] = v * rot;
        d[l] = cd{0.0, inst - w.chirp_rate * frac} * s[l];
    }
}

struct FftwFree {
    void operator()(void* p) const { fftw_free(p); }
};

}  // namespace

int in_pulse_sample_count(const SystemConfig& cfg) {
    const auto dq = derive(cfg);
    const PulseGeometry g{dq.pulse_count, cfg.t_r, cfg.t_0};
    int count = 0;
    for (int l = 0; l < dq.sample_count; ++l) {
        if (locate(l * dq.sample_step, dq.sample_step, g).pulse >= 0) ++count;
    }
    return count;
}

CodeFamily random_codes(int antennas, int chips, std::uint64_t seed) {
    CodeFamily codes(antennas, std::vector<int>(chips));
    for (int i = 0; i < antennas; ++i) {
        Rng rng(seed, "code", static_cast<std::uint64_t>(i));
        for (auto& c : codes[i]) c = (rng() >> 63) ? 1 : -1;
    }
    return codes;
}

CodeFamily zero_codes(int antennas, int chips) {
    return CodeFamily(antennas, std::vector<int>(chips, 0));
}

SampledWaveform lfm_pulse_train(const SystemConfig& cfg, const CodeFamily& codes) {
    const auto dq = derive(cfg);
    const int M = cfg.tx_antennas;
    const int L = dq.sample_count;
    if (static_cast<int>(codes.size()) != M) {
        throw std::invalid_argument("lfm_pulse_train: expected one code row per transmit antenna");
    }
    const int chips = in_pulse_sample_count(cfg);
    for (const auto& row : codes) {
        if (static_cast<int>(row.size()) != chips) {
            throw std::invalid_argument("lfm_pulse_train: code length " + std::to_string(row.size()) +
                                        " does not match " + std::to_string(chips) + " in-pulse samples");
        }
        for (int c : row) {
            if (c < -1 || c > 1) throw std::invalid_argument("lfm_pulse_train: chips must be -1, 0 or +1");
        }
    }

    SampledWaveform w;
    w.dt = dq.sample_step;
    w.total_power = cfg.p_rad;
    w.geometry = {dq.pulse_count, cfg.t_r, cfg.t_0};
    w.chirp_rate = 2.0 * kPi * cfg.f_b / cfg.t_0;
    w.samples = WaveMatrix::Zero(M, L);
    w.deriv = WaveMatrix::Zero(M, L);

    const double amp = std::sqrt(cfg.p_rad / M);
    const double rate = kPi * cfg.f_b / cfg.t_0;

    int chip = 0;
    for (int l = 0; l < L; ++l) {
        const auto pos = locate(l * w.dt, w.dt, w.geometry);
        if (pos.pulse < 0) continue;
        const double x = pos.offset - 0.5 * cfg.t_0;
        const double chirp_phase = rate * x * x;
        const double inst = 2.0 * rate * x;
        for (int i = 0; i < M; ++i) {
            const cd v = std::polar(amp, chirp_phase + 0.5 * kPi * codes[i][chip]);
            w.samples(i, l) = v;
            w.deriv(i, l) = cd{0.0, inst} * v;
        }
        ++chip;
    }
    return w;
}

SampledWaveform delayed(const SampledWaveform& w, double tau) {
    if (tau < 0.0) throw DomainError("delayed: negative delay");
    SampledWaveform out = w;
    std::vector<cd> s, d;
    for (int i = 0; i < w.antennas(); ++i) {
        delay_row(w, i, tau, s, d);
        for (int l = 0; l < w.length(); ++l) {
            out.samples(i, l) = s[l];
            out.deriv(i, l) = d[l];
        }
    }
    return out;
}

double rms_bandwidth(const SampledWaveform& w) {
    const int L = w.length();
    if (L == 0) throw std::invalid_argument("rms_bandwidth: empty waveform");

    std::unique_ptr<fftw_complex, FftwFree> in(fftw_alloc_complex(L));
    std::unique_ptr<fftw_complex, FftwFree> out(fftw_alloc_complex(L));
    fftw_plan plan = fftw_plan_dft_1d(L, in.get(), out.get(), FFTW_FORWARD, FFTW_ESTIMATE);

    const double df = 1.0 / (L * w.dt);
    double acc = 0.0;
    int active = 0;
    for (int i = 0; i < w.antennas(); ++i) {
        for (int l = 0; l < L; ++l) {
            in.get()[l][0] = w.samples(i, l).real();
            in.get()[l][1] = w.samples(i, l).imag();
        }
        fftw_execute(plan);
        double num = 0.0, den = 0.0;
        for (int k = 0; k < L; ++k) {
            // centred bin index in [-L/2, L/2)
            const int m = (k < (L + 1) / 2) ? k : k - L;
            const double p = out.get()[k][0] * out.get()[k][0] + out.get()[k][1] * out.get()[k][1];
            const double f = m * df;
            num += f * f * p;
            den += p;
        }
        if (den > 0.0) {
            acc += num / den;
            ++active;
        }
    }
    fftw_destroy_plan(plan);
    if (active == 0) throw std::invalid_argument("rms_bandwidth: all-zero waveform");
    return acc / active;
}

namespace {

struct RowMoments {
    double energy = 0.0, m_t = 0.0, m_t2 = 0.0, m_cross = 0.0;
};

RowMoments row_moments(const SampledWaveform& w, int row, double tau) {
    std::vector<cd> s, d;
    delay_row(w, row, tau, s, d);
    RowMoments r;
    for (int l = 0; l < w.length(); ++l) {
        const double p = std::norm(s[l]);
        if (p == 0.0) continue;
        const double t = w.time(l);
        r.energy += p;
        r.m_t += t * p;
        r.m_t2 += t * t * p;
        // dS/dtau = -dS/dt, dS/domega = j t S
        const cd dtau = -d[l];
        const cd domega = cd{0.0, t} * s[l];
        r.m_cross += 2.0 * std::real(std::conj(dtau) * domega);
    }
    r.energy *= w.dt;
    r.m_t *= w.dt;
    r.m_t2 *= w.dt;
    r.m_cross *= w.dt;
    return r;
}

void check_delay(const SampledWaveform& w, double tau) {
    if (tau < 0.0 || (w.geometry.t_r > 0.0 && tau >= w.geometry.t_r)) {
        throw DomainError("temporal_moments: tau must lie in [0, T_R)");
    }
}

WaveformMoments combine(const std::vector<RowMoments>& rows, double b_rms2) {
    WaveformMoments m;
    m.b_rms2 = b_rms2;
    for (const auto& r : rows) {
        m.energy += r.energy;
        m.m_t += r.m_t;
        m.m_t2 += r.m_t2;
        m.m_cross += r.m_cross;
    }
    return m;
}

double safe_rms_bandwidth(const SampledWaveform& w) {
    for (int i = 0; i < w.antennas(); ++i) {
        if (w.samples.row(i).squaredNorm() > 0.0) return rms_bandwidth(w);
    }
    return 0.0;
}

}  // namespace

WaveformMoments temporal_moments_serial(const SampledWaveform& w, double tau) {
    check_delay(w, tau);
    std::vector<RowMoments> rows(w.antennas());
    for (int i = 0; i < w.antennas(); ++i) rows[i] = row_moments(w, i, tau);
    return combine(rows, safe_rms_bandwidth(w));
}

WaveformMoments temporal_moments(const SampledWaveform& w, double tau) {
    check_delay(w, tau);
    const int M = w.antennas();
    std::vector<RowMoments> rows(M);
#pragma omp parallel for schedule(static)
    for (int i = 0; i < M; ++i) rows[i] = row_moments(w, i, tau);
    return combine(rows, safe_rms_bandwidth(w));
}

double cross_correlation(const SampledWaveform& w, int i, int j) {
    const cd inner = (w.samples.row(j).conjugate().array() * w.samples.row(i).array()).sum();
    const double ni = w.samples.row(i).norm();
    const double nj = w.samples.row(j).norm();
    if (ni == 0.0 || nj == 0.0) return 0.0;
    return std::abs(inner) / (ni * nj);
}

void write_waveform_csv(const SampledWaveform& w, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write waveform dump '" + path + "'");
    out << "t";
    for (int i = 0; i < w.antennas(); ++i) out << ",re_" << i << ",im_" << i;
    out << '\n';
    char buf[40];
    for (int l = 0; l < w.length(); ++l) {
        std::snprintf(buf, sizeof buf, "%.12g", w.time(l));
        out << buf;
        for (int i = 0; i < w.antennas(); ++i) {
            std::snprintf(buf, sizeof buf, ",%.12g", w.samples(i, l).real());
            out << buf;
            std::snprintf(buf, sizeof buf, ",%.12g", w.samples(i, l).imag());
            out << buf;
        }
        out << '\n';
    }
    if (!out) throw std::runtime_error("I/O failure writing '" + path + "'");
}

}  // namespace jrc
