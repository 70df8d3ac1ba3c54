#pragma once

#include <optional>
#include <string>
#include <vector>

#include "jrc/comm_rates.hpp"
#include "jrc/config.hpp"
#include "jrc/radar_est.hpp"
#include "jrc/waveforms.hpp"

namespace jrc {

struct SchemeSpec {
    enum class Kind { AltSic, TradSic, Tdma, Fdma };
    Kind kind = Kind::AltSic;
    double fraction = 0.5;  // eta for Tdma, mu for Fdma; unused otherwise

    static SchemeSpec alt_sic() { return {Kind::AltSic, 0.0}; }
    static SchemeSpec trad_sic() { return {Kind::TradSic, 0.0}; }
    static SchemeSpec tdma(double eta) { return {Kind::Tdma, eta}; }
    static SchemeSpec fdma(double mu) { return {Kind::Fdma, mu}; }

    void validate() const;
    std::string label() const;
};

/// Parses "alt-sic", "trad-sic", "tdma:0.3", "fdma:0.3".
SchemeSpec parse_scheme(const std::string& text);

struct RatePoint {
    std::string scheme;
    double p_rad = 0.0, p_dl = 0.0, p_ul = 0.0;  // W
    double t_c = 0.0;                            // s
    double r_dl = 0.0, r_ul = 0.0;               // bits/s
    double r_theta = 0.0, r_dist = 0.0, r_vel = 0.0;
    // information per CPI, bits (rate times the frame time)
    double info_theta = 0.0, info_dist = 0.0, info_vel = 0.0;
    double k_rad = 0.0;       // suppression factor used on the uplink, linear
    double k_rad_star = 0.0;  // theoretical limit; 0 when not evaluated
    bool k_rad_unachievable = false;  // fixed K_rad below the limit
    double sigma_bar2 = 0.0;  // noise level seen by the radar, W
    InterferenceLedger ledger;  // terms of the communication SINR denominators
    CrbMatrix crb;
};

enum class SweepAxis { PUl, PDl, PRad, TC };

SweepAxis parse_axis(const std::string& name);
std::string axis_name(SweepAxis axis);

struct SweepSpec {
    SweepAxis axis = SweepAxis::PUl;
    std::vector<double> grid;  // SI units (W or s)

    /// Grid nonempty, strictly increasing, positive and not above the
    /// configured value of the swept axis.
    void validate(const SystemConfig& cfg) const;
};

struct RegionCurve {
    std::string scheme;
    SweepSpec sweep;
    std::vector<RatePoint> points;
};

/// Temporal moments of the single-antenna reference chirp at the target
/// delay. The residual radar power bound only needs energy-normalised
/// moments, which do not depend on the number of antennas.
WaveformMoments reference_moments(const SystemConfig& cfg);

/// `moments` may be supplied to avoid resynthesising the reference waveform
/// when only powers change.
RatePoint eval_point(const SystemConfig& cfg, const SchemeSpec& scheme,
                     const std::optional<WaveformMoments>& moments = std::nullopt);

/// Monte Carlo counterparts of r_dl and r_ul for a point produced by
/// eval_point, under the same scheme (time share or bandwidth share applied).
struct McRates {
    McEstimate dl;
    McEstimate ul;
};
McRates mc_point(const SystemConfig& cfg, const SchemeSpec& scheme, const RatePoint& point, int trials,
                 std::uint64_t seed);

RegionCurve sweep_region(const SystemConfig& cfg, const SchemeSpec& scheme, const SweepSpec& sweep);
/// Single-threaded reference for sweep_region (identical output).
RegionCurve sweep_region_serial(const SystemConfig& cfg, const SchemeSpec& scheme, const SweepSpec& sweep);

/// Alternative-SIC estimation rates and per-CPI information over a grid of
/// CPI durations (each a multiple of T_R).
RegionCurve cpi_sweep(const SystemConfig& cfg, const std::vector<double>& t_c_grid);

}  // namespace jrc
