#include "jrc/radar_est.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include <cmath>
#include <numbers>
#include <string>

namespace jrc {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kMaxCondition = 1e12;

}  // namespace

void Target::validate(double t_r) const {
    if (!(std::abs(alpha) > 0.0)) throw DomainError("target: |alpha| must be positive");
    if (!(std::abs(theta) < kPi / 2)) throw DomainError("target: |theta| must be below pi/2");
    if (tau < 0.0 || (t_r > 0.0 && tau >= t_r)) throw DomainError("target: tau must lie in [0, T_R)");
    if (!(dyn.theta2 > 0.0 && dyn.dist2 > 0.0 && dyn.vel2 > 0.0)) {
        throw DomainError("target: dynamic-process variances must be positive");
    }
}

double two_way_gain(const SystemConfig& cfg) {
    if (cfg.target.alpha_gain) return *cfg.target.alpha_gain;
    const double one_way = 1.0 / (1.0 + std::pow(cfg.target.range / cfg.pathloss.d0, cfg.pathloss.exponent));
    return one_way * one_way;
}

Target scenario_target(const SystemConfig& cfg) {
    Target t;
    t.alpha = cd{std::sqrt(two_way_gain(cfg)), 0.0};
    t.theta = cfg.target.theta;
    t.tau = 2.0 * cfg.target.range / cfg.c0;
    t.omega = 2.0 * cfg.target.velocity * cfg.omega_c / cfg.c0;
    t.dyn = {cfg.target.sigma_theta2, cfg.target.sigma_d2, cfg.target.sigma_v2};
    return t;
}

NoiseModel NoiseModel::white(double sigma_bar2, int rx_antennas, int samples) {
    NoiseModel nm;
    nm.spatial = sigma_bar2 * Eigen::MatrixXcd::Identity(rx_antennas, rx_antennas);
    nm.temporal = Eigen::MatrixXcd::Identity(samples, samples);
    nm.combined_scalar = sigma_bar2;
    return nm;
}

double combined_noise(const SystemConfig& cfg) {
    const double r2 = cfg.rho_ul * cfg.rho_ul;
    return (1.0 - r2) * omega_ul(cfg) * cfg.p_ul + (cfg.k_self + cfg.k_boun) * cfg.p_dl + cfg.sigma_z2;
}

RadarReturn radar_return_samples(const Target& target, const SampledWaveform& w, int rx_antennas) {
    const int L = w.length();
    if (target.tau < 0.0 || target.tau >= L * w.dt) {
        throw DomainError("radar_return_samples: delay shifts the waveform off the sample grid");
    }
    const SampledWaveform shifted = delayed(w, target.tau);

    RadarReturn r;
    r.steer = steering(target.theta, rx_antennas);
    r.temporal.resize(L);
    r.temporal_dtau.resize(L);
    r.temporal_domega.resize(L);
    for (int l = 0; l < L; ++l) {
        const double t = w.time(l);
        const cd doppler = std::polar(1.0, target.omega * t);
        const cd s = shifted.samples.col(l).sum();
        const cd ds = shifted.deriv.col(l).sum();
        r.temporal[l] = doppler * s;
        r.temporal_dtau[l] = -doppler * ds;
        r.temporal_domega[l] = cd{0.0, t} * r.temporal[l];
    }

    const int N = rx_antennas;
    r.stacked.resize(static_cast<Eigen::Index>(L) * N);
    for (int l = 0; l < L; ++l) {
        for (int n = 0; n < N; ++n) r.stacked[l * N + n] = target.alpha * r.temporal[l] * r.steer.values[n];
    }
    return r;
}

namespace {

Eigen::VectorXcd kron_time_space(const Eigen::VectorXcd& time, const Eigen::VectorXcd& space) {
    const auto L = time.size(), N = space.size();
    Eigen::VectorXcd out(L * N);
    for (Eigen::Index l = 0; l < L; ++l) out.segment(l * N, N) = time[l] * space;
    return out;
}

template <class Llt>
Llt factor(const Eigen::MatrixXcd& m, const char* name) {
    if (m.rows() != m.cols()) throw std::invalid_argument(std::string(name) + " covariance must be square");
    if (!m.isApprox(m.adjoint(), 1e-10)) {
        throw std::invalid_argument(std::string(name) + " covariance must be Hermitian");
    }
    Llt llt(m);
    if (llt.info() != Eigen::Success) {
        throw std::invalid_argument(std::string(name) + " covariance is not positive definite");
    }
    return llt;
}

}  // namespace

FisherMatrix assemble_fim(const Target& target, const SampledWaveform& w, const NoiseModel& noise, int dense_limit) {
    const int L = w.length();
    const int N = static_cast<int>(noise.spatial.rows());
    if (static_cast<long long>(L) * N > dense_limit) {
        throw ProblemTooLargeError("assemble_fim: L*N = " + std::to_string(static_cast<long long>(L) * N) +
                                   " exceeds the dense limit " + std::to_string(dense_limit) +
                                   "; use the closed-form bounds instead");
    }
    if (noise.temporal.rows() != L) throw std::invalid_argument("assemble_fim: temporal covariance must be L x L");

    using Llt = Eigen::LLT<Eigen::MatrixXcd>;
    const auto llt_space = factor<Llt>(noise.spatial, "spatial");
    const auto llt_time = factor<Llt>(noise.temporal, "temporal");

    const RadarReturn r = radar_return_samples(target, w, N);
    const cd a = target.alpha;

    std::array<Eigen::VectorXcd, 5> d;
    d[FisherMatrix::ReAlpha] = kron_time_space(r.temporal, r.steer.values);
    d[FisherMatrix::ImAlpha] = cd{0.0, 1.0} * d[FisherMatrix::ReAlpha];
    d[FisherMatrix::Theta] = a * kron_time_space(r.temporal, r.steer.derivative);
    d[FisherMatrix::Tau] = a * kron_time_space(r.temporal_dtau, r.steer.values);
    d[FisherMatrix::Omega] = a * kron_time_space(r.temporal_domega, r.steer.values);

    // (Gamma^-1 (x) Lambda^-1) vec(X) = vec(Lambda^-1 X Gamma^-T), X(n, l) = v[l*N + n]
    auto whiten = [&](const Eigen::VectorXcd& v) {
        Eigen::Map<const Eigen::MatrixXcd> X(v.data(), N, L);
        const Eigen::MatrixXcd left = llt_space.solve(X);
        const Eigen::MatrixXcd both = llt_time.solve(left.transpose()).transpose();
        return Eigen::VectorXcd(Eigen::Map<const Eigen::VectorXcd>(both.data(), both.size()));
    };

    std::array<Eigen::VectorXcd, 5> wd;
    for (int i = 0; i < 5; ++i) wd[i] = whiten(d[i]);

    FisherMatrix fim;
    for (int i = 0; i < 5; ++i) {
        for (int j = i; j < 5; ++j) {
            const double v = 2.0 * std::real(d[i].dot(wd[j]));  // dot() conjugates the left operand
            fim.m(i, j) = v;
            fim.m(j, i) = v;
        }
    }
    return fim;
}

CrbMatrix reduce_crb(const FisherMatrix& fim) {
    const Eigen::Matrix2d faa = fim.m.topLeftCorner<2, 2>();
    const Eigen::Matrix<double, 2, 3> fap = fim.m.topRightCorner<2, 3>();
    const Eigen::Matrix3d fpp = fim.m.bottomRightCorner<3, 3>();

    Eigen::FullPivLU<Eigen::Matrix2d> lu(faa);
    if (!lu.isInvertible()) throw SingularFimError("reduce_crb: alpha block is singular", INFINITY);

    Eigen::Matrix3d reduced = fpp - fap.transpose() * lu.solve(fap);
    reduced = 0.5 * (reduced + reduced.transpose());

    // Condition is judged on the unit-diagonal scaling, the parameters carry
    // very different units.
    Eigen::Vector3d scale;
    for (int i = 0; i < 3; ++i) {
        if (!(reduced(i, i) > 0.0)) {
            throw SingularFimError("reduce_crb: reduced FIM has a non-positive diagonal entry", INFINITY);
        }
        scale[i] = 1.0 / std::sqrt(reduced(i, i));
    }
    const Eigen::Matrix3d scaled = scale.asDiagonal() * reduced * scale.asDiagonal();
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(scaled, Eigen::EigenvaluesOnly);
    const double lo = eig.eigenvalues().minCoeff();
    const double hi = eig.eigenvalues().maxCoeff();
    const double cond = lo > 0.0 ? hi / lo : INFINITY;
    if (!(cond <= kMaxCondition)) {
        throw SingularFimError("reduce_crb: reduced FIM is singular (condition number " + std::to_string(cond) + ")",
                               cond);
    }

    Eigen::LDLT<Eigen::Matrix3d> ldlt(scaled);
    const Eigen::Matrix3d inv_scaled = ldlt.solve(Eigen::Matrix3d::Identity());
    CrbMatrix crb;
    crb.m = scale.asDiagonal() * inv_scaled * scale.asDiagonal();
    crb.m = 0.5 * (crb.m + crb.m.transpose());
    return crb;
}

CrbMatrix crb_projected(const Target& target, const SampledWaveform& w, const NoiseModel& noise) {
    const int N = static_cast<int>(noise.spatial.rows());
    using Llt = Eigen::LLT<Eigen::MatrixXcd>;
    const auto llt_space = factor<Llt>(noise.spatial, "spatial");
    const auto llt_time = factor<Llt>(noise.temporal, "temporal");
    const RadarReturn r = radar_return_samples(target, w, N);
    const double alpha2 = std::norm(target.alpha);

    // spatial: d a^H Pi_perp d a
    const Eigen::VectorXcd la = llt_space.solve(r.steer.values);
    const Eigen::VectorXcd lda = llt_space.solve(r.steer.derivative);
    const double a_la = std::real(r.steer.values.dot(la));
    const cd a_lda = r.steer.values.dot(lda);
    const double da_lda = std::real(r.steer.derivative.dot(lda));
    const double spatial_perp = da_lda - std::norm(a_lda) / a_la;

    // temporal: Pi_perp over Gamma
    const Eigen::VectorXcd gy = llt_time.solve(r.temporal);
    const Eigen::VectorXcd gdt = llt_time.solve(r.temporal_dtau);
    const Eigen::VectorXcd gdw = llt_time.solve(r.temporal_domega);
    const double y_gy = std::real(r.temporal.dot(gy));
    // u^H Pi_perp v = u^H G^-1 v - (u^H G^-1 y)(y^H G^-1 v) / (y^H G^-1 y)
    auto pi_perp = [&](const Eigen::VectorXcd& u, const Eigen::VectorXcd& v, const Eigen::VectorXcd& gv) {
        const cd u_gy = u.dot(gy);
        const cd y_gv = r.temporal.dot(gv);
        (void)v;
        return u.dot(gv) - u_gy * y_gv / y_gy;
    };
    const cd tt = pi_perp(r.temporal_dtau, r.temporal_dtau, gdt);
    const cd ww = pi_perp(r.temporal_domega, r.temporal_domega, gdw);
    const cd tw = pi_perp(r.temporal_dtau, r.temporal_domega, gdw);

    CrbMatrix crb;
    crb.m(0, 0) = 1.0 / (2.0 * alpha2 * y_gy * spatial_perp);

    const double scale = 2.0 * alpha2 * a_la;
    Eigen::Matrix2d f;
    f << scale * std::real(tt), scale * std::real(tw), scale * std::real(tw), scale * std::real(ww);
    const Eigen::Matrix2d c = f.inverse();
    crb.m(1, 1) = c(0, 0);
    crb.m(2, 2) = c(1, 1);
    crb.m(1, 2) = crb.m(2, 1) = c(0, 1);
    return crb;
}

double crb_theta_closed(const SystemConfig& cfg, const Target& target, double sigma_bar2) {
    if (std::abs(target.theta) >= kPi / 2 - kEndfireGuard) {
        throw DomainError("crb_theta_closed: direction inside the endfire guard");
    }
    const int N = cfg.rx_antennas;
    if (N < 2) throw DomainError("crb_theta_closed: at least two receive antennas are required");
    const double xi_r = derive(cfg).xi_r;
    const double c = std::cos(target.theta);
    const double n = N;
    return 6.0 * sigma_bar2 / (std::norm(target.alpha) * n * (n * n - 1.0) * xi_r * kPi * kPi * c * c);
}

double crb_theta_closed(const SystemConfig& cfg, const Target& target) {
    return crb_theta_closed(cfg, target, combined_noise(cfg));
}

Eigen::Matrix2d fim_tau_omega_general(const SampledWaveform& w, const Target& target, double sigma_bar2,
                                      const SystemConfig& cfg) {
    const SampledWaveform shifted = delayed(w, target.tau);
    cd b{}, ct{};
    double a = 0.0, t1 = 0.0, t2 = 0.0;
    for (int i = 0; i < shifted.antennas(); ++i) {
        for (int l = 0; l < shifted.length(); ++l) {
            const cd s = shifted.samples(i, l);
            const cd d = shifted.deriv(i, l);
            const double t = shifted.time(l);
            const double p = std::norm(s);
            a += std::norm(d);
            b += std::conj(d) * s;
            ct += t * std::conj(d) * s;
            t1 += t * p;
            t2 += t * t * p;
        }
    }
    const double xi = derive(cfg).xi_r;
    const double c = 2.0 * cfg.rx_antennas * std::norm(target.alpha) / sigma_bar2;
    Eigen::Matrix2d f;
    f(0, 0) = c * (a - std::norm(b) / xi);
    f(0, 1) = f(1, 0) = c * std::imag(ct - b * t1 / xi);
    f(1, 1) = c * (t2 - t1 * t1 / xi);
    return f;
}

DelayDopplerCrb crb_lfm_closed(const SystemConfig& cfg, const Target& target, double sigma_bar2) {
    const auto dq = derive(cfg);
    const double K = dq.pulse_count;
    const double tr2 = cfg.t_r * cfg.t_r;
    const double t02 = cfg.t_0 * cfg.t_0;
    const double span = (K * K - 1.0) * tr2;
    if (span <= 3.0 * t02) {
        throw DomainError("crb_lfm_closed: degenerate pulse geometry, (K^2-1) T_R^2 <= 3 T_0^2");
    }
    const double fb = cfg.f_b;
    // reduced FIM of the coded LFM train (closed-form integrals)
    const double scale = 2.0 * cfg.rx_antennas * std::norm(target.alpha) / sigma_bar2 * cfg.p_rad * fb *
                         cfg.duty * cfg.t_c;
    const double f_tt = scale * kPi * kPi * fb * fb / 3.0;
    const double f_tw = -scale * kPi * fb * cfg.t_0 / 3.0;
    const double f_ww = scale * (span + t02) / 12.0;
    const double det = f_tt * f_ww - f_tw * f_tw;

    DelayDopplerCrb c;
    c.tau_tau = f_ww / det;
    c.omega_omega = f_tt / det;
    c.tau_omega = -f_tw / det;
    return c;
}

DelayDopplerCrb crb_lfm_closed(const SystemConfig& cfg, const Target& target) {
    return crb_lfm_closed(cfg, target, combined_noise(cfg));
}

CrbMatrix crb_closed(const SystemConfig& cfg, const Target& target, double sigma_bar2) {
    const auto td = crb_lfm_closed(cfg, target, sigma_bar2);
    CrbMatrix crb;
    crb.m(0, 0) = crb_theta_closed(cfg, target, sigma_bar2);
    crb.m(1, 1) = td.tau_tau;
    crb.m(2, 2) = td.omega_omega;
    crb.m(1, 2) = crb.m(2, 1) = td.tau_omega;
    return crb;
}

EstimationRates estimation_rates(const CrbMatrix& crb, const Target& target, const SystemConfig& cfg) {
    const double inv_tc = 1.0 / cfg.t_c;
    const double c2 = cfg.c0 * cfg.c0;
    EstimationRates r;
    r.theta = inv_tc * std::log2(1.0 + target.dyn.theta2 / crb.theta_theta());
    r.dist = inv_tc * std::log2(1.0 + (4.0 / c2) * target.dyn.dist2 / crb.tau_tau());
    r.vel = inv_tc * std::log2(1.0 + (4.0 * cfg.omega_c * cfg.omega_c / c2) * target.dyn.vel2 / crb.omega_omega());
    return r;
}

}  // namespace jrc
