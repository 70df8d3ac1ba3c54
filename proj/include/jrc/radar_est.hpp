#pragma once

#include <complex>
#include <stdexcept>

#include <Eigen/Core>

#include "jrc/channels.hpp"
#include "jrc/config.hpp"
#include "jrc/waveforms.hpp"

namespace jrc {

/// Reduced FIM could not be inverted. Carries the condition number of the
/// unit-diagonal scaled matrix.
class SingularFimError : public std::runtime_error {
public:
    SingularFimError(const std::string& what, double condition)
        : std::runtime_error(what), condition_(condition) {}
    double condition() const { return condition_; }

private:
    double condition_;
};

/// Dense FIM assembly refused because L*N exceeds the desk-scale guard.
class ProblemTooLargeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct DynamicVariances {
    double theta2 = 1.0;  // rad^2
    double dist2 = 1.0;   // m^2
    double vel2 = 1.0;    // (m/s)^2
};

struct Target {
    cd alpha{1.0, 0.0};
    double theta = 0.0;  // rad
    double tau = 0.0;    // s
    double omega = 0.0;  // rad/s
    DynamicVariances dyn;

    void validate(double t_r) const;
};

/// The target described by the scenario parameters: |alpha|^2 from the
/// override or from a two-way path loss at the target range, tau = 2R/c0 and
/// omega = 2 v omega_c / c0.
Target scenario_target(const SystemConfig& cfg);
double two_way_gain(const SystemConfig& cfg);

/// Noise plus residual interference covariance in Kronecker form
/// Cov = Gamma (temporal, L x L) (x) Lambda (spatial, N x N).
struct NoiseModel {
    Eigen::MatrixXcd spatial;
    Eigen::MatrixXcd temporal;
    double combined_scalar = 1.0;

    static NoiseModel white(double sigma_bar2, int rx_antennas, int samples);
};

/// White level seen by the radar after uplink subtraction:
/// (1-rho2^2) Omega_ul P_ul + (K_self + K_boun) P_dl + sigma_z^2.
double combined_noise(const SystemConfig& cfg);

/// Parameter order: Re(alpha), Im(alpha), theta, tau, omega.
struct FisherMatrix {
    enum Index { ReAlpha = 0, ImAlpha = 1, Theta = 2, Tau = 3, Omega = 4 };
    Eigen::Matrix<double, 5, 5> m = Eigen::Matrix<double, 5, 5>::Zero();

    double operator()(int i, int j) const { return m(i, j); }
};

/// CRB over (theta, tau, omega).
struct CrbMatrix {
    Eigen::Matrix3d m = Eigen::Matrix3d::Zero();

    double theta_theta() const { return m(0, 0); }
    double tau_tau() const { return m(1, 1); }
    double omega_omega() const { return m(2, 2); }
    double tau_omega() const { return m(1, 2); }
    double theta_tau() const { return m(0, 1); }
    double theta_omega() const { return m(0, 2); }
};

/// Noise-free return y = alpha * (y' (x) a(theta)), time-major stacking
/// (index l*N + n), together with the temporal factor y' and its partial
/// derivatives in tau and omega.
struct RadarReturn {
    Eigen::VectorXcd stacked;
    Eigen::VectorXcd temporal;
    Eigen::VectorXcd temporal_dtau;
    Eigen::VectorXcd temporal_domega;
    SteeringVector steer;
};

RadarReturn radar_return_samples(const Target& target, const SampledWaveform& w, int rx_antennas);

constexpr int kDefaultDenseLimit = 4096;

/// Full 5x5 FIM F = 2 Re{ D^H (Gamma^-1 (x) Lambda^-1) D } over the stacked
/// return. Dense path, guarded by L*N <= dense_limit.
FisherMatrix assemble_fim(const Target& target, const SampledWaveform& w, const NoiseModel& noise,
                          int dense_limit = kDefaultDenseLimit);

/// Schur complement of the alpha block, then inverse of the 3x3 remainder.
CrbMatrix reduce_crb(const FisherMatrix& fim);

/// Projection form of the direction and delay/Doppler bounds for a general
/// Kronecker noise model (Pi_perp over Lambda for theta, over Gamma for
/// tau/omega). Independent of assemble_fim; used to cross-check it.
CrbMatrix crb_projected(const Target& target, const SampledWaveform& w, const NoiseModel& noise);

constexpr double kEndfireGuard = 1e-3;

/// Closed-form direction bound for white noise and a half-wavelength ULA:
/// 6 sigma^2 / (|alpha|^2 N (N^2-1) xi_r pi^2 cos^2 theta), xi_r the sampled
/// signal energy f_B T_c delta P_rad.
double crb_theta_closed(const SystemConfig& cfg, const Target& target, double sigma_bar2);
double crb_theta_closed(const SystemConfig& cfg, const Target& target);

/// Reduced 2x2 FIM over (tau, omega) from grid sums over the per-antenna
/// waveforms, white-noise case.
Eigen::Matrix2d fim_tau_omega_general(const SampledWaveform& w, const Target& target, double sigma_bar2,
                                      const SystemConfig& cfg);

struct DelayDopplerCrb {
    double tau_tau = 0.0;
    double omega_omega = 0.0;
    double tau_omega = 0.0;
};

/// Closed-form delay/Doppler bound for the coded LFM train in white noise.
DelayDopplerCrb crb_lfm_closed(const SystemConfig& cfg, const Target& target, double sigma_bar2);
DelayDopplerCrb crb_lfm_closed(const SystemConfig& cfg, const Target& target);

/// Assembles the 3x3 CRB from the two closed forms (theta decoupled).
CrbMatrix crb_closed(const SystemConfig& cfg, const Target& target, double sigma_bar2);

struct EstimationRates {
    double theta = 0.0;  // bits/s
    double dist = 0.0;
    double vel = 0.0;

    EstimationRates& operator+=(const EstimationRates& o) {
        theta += o.theta;
        dist += o.dist;
        vel += o.vel;
        return *this;
    }
};

EstimationRates estimation_rates(const CrbMatrix& crb, const Target& target, const SystemConfig& cfg);

}  // namespace jrc
