#include "jrc/comm_rates.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "jrc/channels.hpp"
#include "jrc/radar_est.hpp"

namespace jrc {

InterferenceLedger interference_ledger(const SystemConfig& cfg, double k_rad_effective) {
    const double w_dl = omega_dl(cfg);
    const double w_ul = omega_ul(cfg);
    const double r1 = cfg.rho_dl * cfg.rho_dl;
    const double r2 = cfg.rho_ul * cfg.rho_ul;
    InterferenceLedger led;
    led.i_dl_dl = (1.0 - r1) * w_dl * cfg.p_dl;
    led.i_dl_rad = (1.0 - r1) * w_dl * cfg.p_rad;
    led.i_dl_ul = cfg.k_co * cfg.p_ul;
    led.i_ul_ul = (1.0 - r2) * w_ul * cfg.p_ul;
    led.i_ul_dl = (cfg.k_self + cfg.k_boun) * cfg.p_dl;
    led.i_ul_rad = (cfg.k_self + k_rad_effective) * cfg.p_rad;
    return led;
}

double downlink_rate_bound(const SystemConfig& cfg) {
    const auto led = interference_ledger(cfg, 0.0);
    const double signal = cfg.rho_dl * cfg.rho_dl * cfg.tx_antennas * cfg.p_dl * omega_dl(cfg);
    return cfg.f_b * std::log2(1.0 + signal / led.downlink_denominator(cfg.sigma_z2));
}

double uplink_rate_bound(const SystemConfig& cfg, double k_rad_effective) {
    if (k_rad_effective < 0.0) throw std::invalid_argument("uplink_rate_bound: negative K_rad");
    const auto led = interference_ledger(cfg, k_rad_effective);
    const double signal = cfg.rho_ul * cfg.rho_ul * cfg.rx_antennas * cfg.p_ul * omega_ul(cfg);
    return cfg.f_b * std::log2(1.0 + signal / led.uplink_denominator(cfg.sigma_z2));
}

double residual_radar_power(const SystemConfig& cfg, std::span<const CrbMatrix> crbs,
                            const WaveformMoments& moments) {
    constexpr double four_pi2 = 4.0 * std::numbers::pi * std::numbers::pi;
    double total = 0.0;
    for (const auto& c : crbs) {
        const double ctt = c.tau_tau(), cww = c.omega_omega(), ctw = c.tau_omega();
        if (!(std::isfinite(ctt) && std::isfinite(cww) && std::isfinite(ctw)) || ctt < 0.0 || cww < 0.0) {
            throw std::invalid_argument("residual_radar_power: CRB entries must be finite and non-negative");
        }
        double per_target = four_pi2 * moments.b_rms2 * ctt + moments.mean_t2() * cww +
                            moments.mean_cross() * ctw;
        // a power bound cannot be negative; C(tau,omega) may be
        if (per_target < 0.0) per_target = 0.0;
        total += cfg.tx_antennas * cfg.p_rad * per_target;
    }
    const double floor = cfg.num_targets * cfg.sigma_02 / (cfg.duty * cfg.t_c * cfg.f_b);
    return total + floor;
}

double k_rad_star(const SystemConfig& cfg, std::span<const CrbMatrix> crbs, const WaveformMoments& moments) {
    return residual_radar_power(cfg, crbs, moments) / cfg.p_rad;
}

double instantaneous_rate(const SystemConfig& cfg, Link link, double k_rad_effective, std::uint64_t seed,
                          std::uint64_t trial) {
    const auto led = interference_ledger(cfg, k_rad_effective);
    if (link == Link::Downlink) {
        Rng rng(seed, "downlink", trial);
        const auto ch = draw_channel(omega_dl(cfg), cfg.tx_antennas, cfg.rho_dl, rng);
        const double sig = cfg.rho_dl * cfg.rho_dl * ch.h_est.squaredNorm() * cfg.p_dl;
        return cfg.f_b * std::log2(1.0 + sig / led.downlink_denominator(cfg.sigma_z2));
    }
    Rng rng(seed, "uplink", trial);
    const auto ch = draw_channel(omega_ul(cfg), cfg.rx_antennas, cfg.rho_ul, rng);
    const double sig = cfg.rho_ul * cfg.rho_ul * ch.h_est.squaredNorm() * cfg.p_ul;
    return cfg.f_b * std::log2(1.0 + sig / led.uplink_denominator(cfg.sigma_z2));
}

namespace {

McEstimate summarize(const std::vector<double>& rates) {
    McEstimate est;
    est.trials = static_cast<int>(rates.size());
    double sum = 0.0;
    for (double r : rates) sum += r;
    est.mean = sum / est.trials;
    if (est.trials > 1) {
        double ss = 0.0;
        for (double r : rates) ss += (r - est.mean) * (r - est.mean);
        est.std_error = std::sqrt(ss / (est.trials - 1) / est.trials);
    }
    return est;
}

void check_trials(int trials) {
    if (trials < 1) throw std::invalid_argument("mc_rate: trials must be at least 1");
}

}  // namespace

McEstimate mc_rate_serial(const SystemConfig& cfg, Link link, double k_rad_effective, int trials,
                          std::uint64_t seed) {
    check_trials(trials);
    std::vector<double> rates(trials);
    for (int t = 0; t < trials; ++t) rates[t] = instantaneous_rate(cfg, link, k_rad_effective, seed, t);
    return summarize(rates);
}

McEstimate mc_rate(const SystemConfig& cfg, Link link, double k_rad_effective, int trials, std::uint64_t seed) {
    check_trials(trials);
    std::vector<double> rates(trials);
    // per-trial results land in fixed slots; the sum runs serially afterwards
#pragma omp parallel for schedule(static)
    for (int t = 0; t < trials; ++t) rates[t] = instantaneous_rate(cfg, link, k_rad_effective, seed, t);
    return summarize(rates);
}

}  // namespace jrc
