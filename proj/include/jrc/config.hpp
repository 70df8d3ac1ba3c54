#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace jrc {

/// Raised when a scenario document cannot be read (bad syntax, unknown or
/// mistyped key). The message names the offending field.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when a parsed configuration violates a physical invariant.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

double dbm_to_watts(double dbm);
double watts_to_dbm(double watts);
double db_to_linear(double db);
double linear_to_db(double linear);

struct PathlossParams {
    double sigma_s_db = 8.0;  // shadowing std, dB
    double d0 = 200.0;        // reference distance, m
    double exponent = 3.8;
    double d_dl = 500.0;      // m
    double d_ul = 500.0;      // m
};

/// Residual radar suppression factor. Either a fixed linear value or the
/// theoretical limit, which is resolved per operating point.
struct RadarSuppression {
    bool theoretical_limit = false;
    double fixed = 0.01;

    static RadarSuppression limit() { return {true, 0.0}; }
    static RadarSuppression linear(double k) { return {false, k}; }
};

/// Parameters of the (single, repeated K_t times) radar target used by the
/// scenario studies. None of these are fixed by the underlying model; the
/// defaults put a strong reflector at short range.
struct TargetParams {
    double range = 100.0;            // m
    double theta = 0.35;             // rad
    double velocity = 10.0;          // m/s, radial
    std::optional<double> alpha_gain;  // |alpha|^2 override, linear
    double sigma_theta2 = 3.0461741978670860e-4;  // (1 deg)^2, rad^2
    double sigma_d2 = 1.0;           // m^2
    double sigma_v2 = 1.0;           // (m/s)^2
};

struct SystemConfig {
    int tx_antennas = 32;
    int rx_antennas = 64;
    double p_rad = 0.1;              // W
    double p_dl = 0.19952623149688797;  // W
    double p_ul = 0.19952623149688797;  // W
    double f_b = 5e6;                // Hz
    double t_c = 0.05;               // s
    double t_r = 1e-3;               // s
    double t_0 = 1e-4;               // s
    double duty = 0.1;
    double rho_dl = 0.95;
    double rho_ul = 0.95;
    double k_self = 0.005011872336272722;
    double k_boun = 0.005011872336272722;
    double k_co = 0.005011872336272722;
    RadarSuppression k_rad = RadarSuppression::linear(0.01);
    double sigma_z2 = 1.0;           // W
    double sigma_02 = 1.0;           // W
    double omega_c = 2.0 * 3.14159265358979323846 * 5.8e9;  // rad/s
    double c0 = 299792458.0;         // m/s
    PathlossParams pathloss;
    int num_targets = 1;
    TargetParams target;

    /// Throws ValidationError if any invariant is violated.
    void validate() const;
};

struct DerivedQuantities {
    int pulse_count;        // K
    double sample_step;     // Delta t = 1/f_B
    int sample_count;       // L = round(f_B T_c)
    double xi_r;            // f_B T_c delta P_rad
};

DerivedQuantities derive(const SystemConfig& cfg);

/// The configuration used throughout the numerical study (M=32, N=64, ...).
SystemConfig paper_defaults();

/// Parses a flat YAML mapping; keys absent from the document keep their
/// default value. Powers use the `_dbm` suffix, suppression factors accept
/// either a linear value or a `_db` suffixed key.
SystemConfig parse_config(std::string_view text);
SystemConfig load_config(const std::string& path);

/// Canonical single-line rendering of every field, used for hashing.
std::string canonical_string(const SystemConfig& cfg);
std::uint64_t config_hash(const SystemConfig& cfg);

}  // namespace jrc
