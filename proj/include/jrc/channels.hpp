#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "jrc/config.hpp"

namespace jrc {

using cd = std::complex<double>;

class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// ---------------------------------------------------------------------------
// Random streams
// ---------------------------------------------------------------------------

/// 64-bit generator seeded from (base seed, stream label, index) through a
/// splitmix64 mix, so every (trial, link) pair owns an independent stream
/// regardless of which worker evaluates it.
class Rng {
public:
    using result_type = std::uint64_t;

    Rng(std::uint64_t seed, std::string_view label, std::uint64_t index);
    explicit Rng(std::uint64_t seed) : Rng(seed, "", 0) {}

    result_type operator()() { return engine_(); }
    static constexpr result_type min() { return std::mt19937_64::min(); }
    static constexpr result_type max() { return std::mt19937_64::max(); }

    /// Circular complex Gaussian with E|z|^2 = variance.
    cd complex_normal(double variance);
    double normal(double mean, double stddev);

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> gauss_{0.0, 1.0};
};

std::uint64_t mix_seed(std::uint64_t seed, std::string_view label, std::uint64_t index);

// ---------------------------------------------------------------------------
// Uniform linear array
// ---------------------------------------------------------------------------

/// Half-wavelength ULA response a[k] = exp(j k pi sin(theta)) together with its
/// analytic derivative in theta.
struct SteeringVector {
    double theta = 0.0;
    Eigen::VectorXcd values;
    Eigen::VectorXcd derivative;

    int size() const { return static_cast<int>(values.size()); }
};

SteeringVector steering(double theta, int n);

// ---------------------------------------------------------------------------
// Large-scale fading
// ---------------------------------------------------------------------------

/// E[10^(beta/10)] / (1 + (d/d0)^l) with beta ~ N(0, sigma_s^2) in dB. The
/// log-normal mean is taken in closed form.
double mean_pathloss_gain(const PathlossParams& p, double distance);

/// One shadowing realisation 10^(beta/10)/(1+(d/d0)^l).
double draw_pathloss_gain(const PathlossParams& p, double distance, Rng& rng);

inline double omega_dl(const SystemConfig& cfg) { return mean_pathloss_gain(cfg.pathloss, cfg.pathloss.d_dl); }
inline double omega_ul(const SystemConfig& cfg) { return mean_pathloss_gain(cfg.pathloss, cfg.pathloss.d_ul); }

// ---------------------------------------------------------------------------
// Imperfect CSI
// ---------------------------------------------------------------------------

/// h_true = rho * h_est + sqrt(1 - rho^2) * eps, with h_est and eps i.i.d.
/// CN(0, omega) per entry.
struct ChannelDraw {
    Eigen::VectorXcd h_true;
    Eigen::VectorXcd h_est;
    Eigen::VectorXcd eps;
    double rho = 1.0;
    double omega = 1.0;
};

ChannelDraw draw_channel(double omega, int n, double rho, Rng& rng);

}  // namespace jrc
