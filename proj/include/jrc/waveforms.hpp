#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "jrc/channels.hpp"
#include "jrc/config.hpp"

namespace jrc {

using WaveMatrix = Eigen::Matrix<cd, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct PulseGeometry {
    int pulse_count = 1;  // K
    double t_r = 0.0;     // pulse repetition interval, s
    double t_0 = 0.0;     // pulse width, s
};

/// Per-antenna complex baseband samples on the grid t_l = l * dt, l = 0..L-1.
/// Row i holds antenna i. `deriv` is the analytic time derivative of the
/// smooth part of each pulse (zero between pulses).
struct SampledWaveform {
    WaveMatrix samples;
    WaveMatrix deriv;
    double dt = 1.0;
    double total_power = 0.0;  // P_rad, W
    PulseGeometry geometry;
    /// Second derivative of the pulse phase (rad/s^2). Zero for waveforms that
    /// were not synthesised as chirps; used for exact sub-sample delays.
    double chirp_rate = 0.0;

    int antennas() const { return static_cast<int>(samples.rows()); }
    int length() const { return static_cast<int>(samples.cols()); }
    double time(int l) const { return l * dt; }
};

/// Phase-code chips, one row per transmit antenna, one chip per in-pulse
/// sample. Chip values are in {-1, 0, +1} and enter the phase as (pi/2)*b.
using CodeFamily = std::vector<std::vector<int>>;

/// Number of grid samples that fall inside a pulse window over the CPI.
int in_pulse_sample_count(const SystemConfig& cfg);

/// Pseudo-random +/-1 chips for `antennas` rows drawn from a seeded stream.
CodeFamily random_codes(int antennas, int chips, std::uint64_t seed);
CodeFamily zero_codes(int antennas, int chips);

/// Coded LFM pulse train. Within pulse k the phase is
/// pi (f_B/T_0) (t - k T_R - T_0/2)^2 + (pi/2) b_i, so the sweep spans f_B;
/// amplitude sqrt(P_rad/M) inside [k T_R, k T_R + T_0), zero elsewhere.
SampledWaveform lfm_pulse_train(const SystemConfig& cfg, const CodeFamily& codes);

/// Waveform delayed by tau: whole-sample shift plus the analytic sub-sample
/// phase of the pulse. Samples shifted past the end of the grid are dropped.
SampledWaveform delayed(const SampledWaveform& w, double tau);

struct WaveformMoments {
    double b_rms2 = 0.0;   // Hz^2
    double energy = 0.0;   // dt * sum |S|^2, J
    double m_t = 0.0;      // dt * sum t |S|^2
    double m_t2 = 0.0;     // dt * sum t^2 |S|^2
    double m_cross = 0.0;  // dt * sum 2 Re{ conj(dS/dtau) * dS/domega }

    /// Energy-normalised moments, the expectations entering the residual
    /// radar power bound.
    double mean_t2() const { return energy > 0.0 ? m_t2 / energy : 0.0; }
    double mean_cross() const { return energy > 0.0 ? m_cross / energy : 0.0; }
};

/// Spectral second moment of the centred discrete spectrum, averaged over
/// antennas with nonzero signal.
double rms_bandwidth(const SampledWaveform& w);

/// Temporal moments of the waveform delayed by tau (t from CPI start), summed
/// over antennas. OpenMP-parallel over antennas; deterministic reduction.
WaveformMoments temporal_moments(const SampledWaveform& w, double tau);
/// Single-threaded reference for temporal_moments.
WaveformMoments temporal_moments_serial(const SampledWaveform& w, double tau);

/// Magnitude of the normalised inner product between antennas i and j.
double cross_correlation(const SampledWaveform& w, int i, int j);

/// Columns: t, re_0, im_0, re_1, im_1, ...
void write_waveform_csv(const SampledWaveform& w, const std::string& path);

}  // namespace jrc
