#include "jrc/channels.hpp"

#include <cmath>
#include <numbers>

namespace jrc {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

}  // namespace

std::uint64_t mix_seed(std::uint64_t seed, std::string_view label, std::uint64_t index) {
    std::uint64_t h = splitmix64(seed);
    for (unsigned char ch : label) h = splitmix64(h ^ ch);
    return splitmix64(h ^ splitmix64(index + 0x632be59bd9b4e019ull));
}

Rng::Rng(std::uint64_t seed, std::string_view label, std::uint64_t index)
    : engine_(mix_seed(seed, label, index)) {}

cd Rng::complex_normal(double variance) {
    const double s = std::sqrt(variance / 2.0);
    const double re = gauss_(engine_);
    const double im = gauss_(engine_);
    return {s * re, s * im};
}

double Rng::normal(double mean, double stddev) { return mean + stddev * gauss_(engine_); }

SteeringVector steering(double theta, int n) {
    if (!(std::abs(theta) < std::numbers::pi / 2)) {
        throw DomainError("steering: |theta| must be below pi/2 (endfire excluded)");
    }
    if (n < 1) throw DomainError("steering: antenna count must be positive");

    SteeringVector sv;
    sv.theta = theta;
    sv.values.resize(n);
    sv.derivative.resize(n);
    const double s = std::sin(theta);
    const double c = std::cos(theta);
    for (int k = 0; k < n; ++k) {
        const double phase = k * std::numbers::pi * s;
        const cd v = (k == 0) ? cd{1.0, 0.0} : std::polar(1.0, phase);
        sv.values[k] = v;
        sv.derivative[k] = cd{0.0, k * std::numbers::pi * c} * v;
    }
    return sv;
}

double mean_pathloss_gain(const PathlossParams& p, double distance) {
    const double shadow = p.sigma_s_db * std::numbers::ln10 / 10.0;
    const double lognormal_mean = std::exp(0.5 * shadow * shadow);
    return lognormal_mean / (1.0 + std::pow(distance / p.d0, p.exponent));
}

double draw_pathloss_gain(const PathlossParams& p, double distance, Rng& rng) {
    const double beta = rng.normal(0.0, p.sigma_s_db);
    return std::pow(10.0, beta / 10.0) / (1.0 + std::pow(distance / p.d0, p.exponent));
}

ChannelDraw draw_channel(double omega, int n, double rho, Rng& rng) {
    ChannelDraw d;
    d.rho = rho;
    d.omega = omega;
    d.h_est.resize(n);
    d.eps.resize(n);
    for (int i = 0; i < n; ++i) d.h_est[i] = rng.complex_normal(omega);
    for (int i = 0; i < n; ++i) d.eps[i] = rng.complex_normal(omega);
    if (rho == 1.0) {
        d.h_true = d.h_est;
    } else {
        d.h_true = rho * d.h_est + std::sqrt(1.0 - rho * rho) * d.eps;
    }
    return d;
}

}  // namespace jrc
