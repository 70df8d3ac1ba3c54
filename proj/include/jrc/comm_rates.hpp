#pragma once

#include <cstdint>
#include <span>

#include "jrc/config.hpp"
#include "jrc/waveforms.hpp"

namespace jrc {

struct CrbMatrix;

/// Interference terms entering the SINR denominators of the two links.
struct InterferenceLedger {
    // downlink side
    double i_dl_dl = 0.0;   // (1-rho1^2) Omega_dl P_dl
    double i_dl_rad = 0.0;  // (1-rho1^2) Omega_dl P_rad
    double i_dl_ul = 0.0;   // K_co P_ul
    // uplink side
    double i_ul_ul = 0.0;   // (1-rho2^2) Omega_ul P_ul
    double i_ul_dl = 0.0;   // (K_self + K_boun) P_dl
    double i_ul_rad = 0.0;  // (K_self + K_rad) P_rad

    double downlink_denominator(double noise) const { return i_dl_dl + i_dl_rad + i_dl_ul + noise; }
    double uplink_denominator(double noise) const { return i_ul_ul + i_ul_dl + i_ul_rad + noise; }
};

InterferenceLedger interference_ledger(const SystemConfig& cfg, double k_rad_effective);

enum class Link { Downlink, Uplink };

double downlink_rate_bound(const SystemConfig& cfg);
double uplink_rate_bound(const SystemConfig& cfg, double k_rad_effective);

/// Lower bound on the power of the residual radar return after suppression,
/// summed over targets. `crbs` holds one CRB per target.
double residual_radar_power(const SystemConfig& cfg, std::span<const CrbMatrix> crbs,
                            const WaveformMoments& moments);

/// Best achievable radar-return suppression factor: residual power / P_rad.
double k_rad_star(const SystemConfig& cfg, std::span<const CrbMatrix> crbs,
                  const WaveformMoments& moments);

struct McEstimate {
    double mean = 0.0;        // bits/s
    double std_error = 0.0;   // standard error of the mean, bits/s
    int trials = 0;
};

/// Monte Carlo mean of f_B log2(1 + instantaneous SINR) over independent
/// channel draws. Trial t uses its own stream (seed, link, t); the result is
/// independent of the number of OpenMP workers.
McEstimate mc_rate(const SystemConfig& cfg, Link link, double k_rad_effective, int trials,
                   std::uint64_t seed);
/// Single-threaded reference for mc_rate (bit-identical result).
McEstimate mc_rate_serial(const SystemConfig& cfg, Link link, double k_rad_effective, int trials,
                          std::uint64_t seed);

/// The rate of one channel realisation, exposed for testing.
double instantaneous_rate(const SystemConfig& cfg, Link link, double k_rad_effective,
                          std::uint64_t seed, std::uint64_t trial);

}  // namespace jrc
