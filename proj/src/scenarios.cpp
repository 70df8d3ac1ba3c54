#include "jrc/scenarios.hpp"

#include <cmath>
#include <cstdio>
#include <exception>
#include <stdexcept>

namespace jrc {

void SchemeSpec::validate() const {
    if ((kind == Kind::Tdma || kind == Kind::Fdma) && !(fraction > 0.0 && fraction < 1.0)) {
        throw std::invalid_argument("scheme fraction must lie strictly inside (0, 1)");
    }
}

std::string SchemeSpec::label() const {
    char buf[48];
    switch (kind) {
        case Kind::AltSic: return "alt-sic";
        case Kind::TradSic: return "trad-sic";
        case Kind::Tdma: std::snprintf(buf, sizeof buf, "tdma:%g", fraction); return buf;
        case Kind::Fdma: std::snprintf(buf, sizeof buf, "fdma:%g", fraction); return buf;
    }
    return "unknown";
}

SchemeSpec parse_scheme(const std::string& text) {
    if (text == "alt-sic") return SchemeSpec::alt_sic();
    if (text == "trad-sic") return SchemeSpec::trad_sic();
    const auto colon = text.find(':');
    if (colon != std::string::npos) {
        const std::string head = text.substr(0, colon);
        double f = 0.0;
        try {
            std::size_t used = 0;
            f = std::stod(text.substr(colon + 1), &used);
            if (used != text.size() - colon - 1) throw std::invalid_argument("trailing text");
        } catch (const std::exception&) {
            throw std::invalid_argument("scheme '" + text + "': fraction is not a number");
        }
        SchemeSpec s;
        if (head == "tdma") s = SchemeSpec::tdma(f);
        else if (head == "fdma") s = SchemeSpec::fdma(f);
        else throw std::invalid_argument("unknown scheme '" + text + "'");
        s.validate();
        return s;
    }
    throw std::invalid_argument("unknown scheme '" + text + "' (expected alt-sic, trad-sic, tdma:F or fdma:F)");
}

SweepAxis parse_axis(const std::string& name) {
    if (name == "p_ul") return SweepAxis::PUl;
    if (name == "p_dl") return SweepAxis::PDl;
    if (name == "p_rad") return SweepAxis::PRad;
    if (name == "t_c") return SweepAxis::TC;
    throw std::invalid_argument("unknown sweep axis '" + name + "' (expected p_ul, p_dl, p_rad or t_c)");
}

std::string axis_name(SweepAxis axis) {
    switch (axis) {
        case SweepAxis::PUl: return "p_ul";
        case SweepAxis::PDl: return "p_dl";
        case SweepAxis::PRad: return "p_rad";
        case SweepAxis::TC: return "t_c";
    }
    return "?";
}

namespace {

double& axis_value(SystemConfig& cfg, SweepAxis axis) {
    switch (axis) {
        case SweepAxis::PUl: return cfg.p_ul;
        case SweepAxis::PDl: return cfg.p_dl;
        case SweepAxis::PRad: return cfg.p_rad;
        case SweepAxis::TC: return cfg.t_c;
    }
    throw std::logic_error("axis");
}

}  // namespace

void SweepSpec::validate(const SystemConfig& cfg) const {
    if (grid.empty()) throw std::invalid_argument("sweep grid is empty");
    SystemConfig copy = cfg;
    const double max = axis_value(copy, axis);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(grid[i] > 0.0) || !std::isfinite(grid[i])) {
            throw std::invalid_argument("sweep grid values must be positive and finite");
        }
        if (i > 0 && !(grid[i] > grid[i - 1])) throw std::invalid_argument("sweep grid must be strictly increasing");
        if (grid[i] > max * (1.0 + 1e-12)) {
            throw std::invalid_argument("sweep grid exceeds the configured " + axis_name(axis) + " maximum");
        }
    }
}

WaveformMoments reference_moments(const SystemConfig& cfg) {
    SystemConfig one = cfg;
    one.tx_antennas = 1;
    const auto w = lfm_pulse_train(one, zero_codes(1, in_pulse_sample_count(one)));
    return temporal_moments_serial(w, scenario_target(cfg).tau);
}

namespace {

void fill_info(RatePoint& p) {
    p.info_theta = p.r_theta * p.t_c;
    p.info_dist = p.r_dist * p.t_c;
    p.info_vel = p.r_vel * p.t_c;
}

RatePoint base_point(const SystemConfig& cfg, const SchemeSpec& scheme) {
    RatePoint p;
    p.scheme = scheme.label();
    p.p_rad = cfg.p_rad;
    p.p_dl = cfg.p_dl;
    p.p_ul = cfg.p_ul;
    p.t_c = cfg.t_c;
    return p;
}

void joint_radar(const SystemConfig& cfg, RatePoint& p) {
    const Target target = scenario_target(cfg);
    p.sigma_bar2 = combined_noise(cfg);
    p.crb = crb_closed(cfg, target, p.sigma_bar2);
    const auto r = estimation_rates(p.crb, target, cfg);
    p.r_theta = r.theta;
    p.r_dist = r.dist;
    p.r_vel = r.vel;
}

RatePoint eval_alt_sic(const SystemConfig& cfg, const SchemeSpec& scheme, const std::optional<WaveformMoments>& m) {
    RatePoint p = base_point(cfg, scheme);
    joint_radar(cfg, p);
    const WaveformMoments moments = m ? *m : reference_moments(cfg);
    const CrbMatrix crbs[] = {p.crb};
    p.k_rad_star = std::min(1.0, k_rad_star(cfg, crbs, moments));
    if (cfg.k_rad.theoretical_limit) {
        p.k_rad = p.k_rad_star;
    } else {
        p.k_rad = cfg.k_rad.fixed;
        p.k_rad_unachievable = p.k_rad < p.k_rad_star;
    }
    p.ledger = interference_ledger(cfg, p.k_rad);
    p.r_dl = downlink_rate_bound(cfg);
    p.r_ul = uplink_rate_bound(cfg, p.k_rad);
    return p;
}

RatePoint eval_trad_sic(const SystemConfig& cfg, const SchemeSpec& scheme) {
    RatePoint p = base_point(cfg, scheme);
    joint_radar(cfg, p);
    p.k_rad = two_way_gain(cfg);
    p.ledger = interference_ledger(cfg, p.k_rad);
    p.r_dl = downlink_rate_bound(cfg);
    p.r_ul = uplink_rate_bound(cfg, p.k_rad);
    return p;
}

// Radar alone on its share of the resources: white thermal noise only.
void radar_only(const SystemConfig& radar_cfg, double frame_time, RatePoint& p) {
    const Target target = scenario_target(radar_cfg);
    p.sigma_bar2 = radar_cfg.sigma_z2;
    p.crb = crb_closed(radar_cfg, target, p.sigma_bar2);
    const auto r = estimation_rates(p.crb, target, radar_cfg);
    // information gathered in the radar CPI, spread over the whole frame
    p.r_theta = r.theta * radar_cfg.t_c / frame_time;
    p.r_dist = r.dist * radar_cfg.t_c / frame_time;
    p.r_vel = r.vel * radar_cfg.t_c / frame_time;
}

RatePoint eval_tdma(const SystemConfig& cfg, const SchemeSpec& scheme) {
    RatePoint p = base_point(cfg, scheme);
    const double eta = scheme.fraction;

    SystemConfig comm = cfg;
    comm.p_rad = 0.0;
    p.ledger = interference_ledger(comm, 0.0);
    p.r_dl = eta * downlink_rate_bound(comm);
    p.r_ul = eta * uplink_rate_bound(comm, 0.0);

    const auto dq = derive(cfg);
    const int pulses = static_cast<int>(std::floor((1.0 - eta) * dq.pulse_count + 1e-9));
    if (pulses < 1) throw DomainError("tdma: radar share of the frame holds no complete pulse");
    SystemConfig radar = cfg;
    radar.t_c = pulses * cfg.t_r;
    radar_only(radar, cfg.t_c, p);
    return p;
}

RatePoint eval_fdma(const SystemConfig& cfg, const SchemeSpec& scheme) {
    RatePoint p = base_point(cfg, scheme);
    const double mu = scheme.fraction;

    SystemConfig comm = cfg;
    comm.p_rad = 0.0;
    comm.f_b = mu * cfg.f_b;
    p.ledger = interference_ledger(comm, 0.0);
    p.r_dl = downlink_rate_bound(comm);
    p.r_ul = uplink_rate_bound(comm, 0.0);

    SystemConfig radar = cfg;
    radar.f_b = (1.0 - mu) * cfg.f_b;
    radar_only(radar, cfg.t_c, p);
    return p;
}

}  // namespace

RatePoint eval_point(const SystemConfig& cfg, const SchemeSpec& scheme, const std::optional<WaveformMoments>& moments) {
    scheme.validate();
    RatePoint p;
    switch (scheme.kind) {
        case SchemeSpec::Kind::AltSic: p = eval_alt_sic(cfg, scheme, moments); break;
        case SchemeSpec::Kind::TradSic: p = eval_trad_sic(cfg, scheme); break;
        case SchemeSpec::Kind::Tdma: p = eval_tdma(cfg, scheme); break;
        case SchemeSpec::Kind::Fdma: p = eval_fdma(cfg, scheme); break;
    }
    fill_info(p);
    return p;
}

McRates mc_point(const SystemConfig& cfg, const SchemeSpec& scheme, const RatePoint& point, int trials,
                 std::uint64_t seed) {
    SystemConfig comm = cfg;
    double share = 1.0;
    double k_rad = point.k_rad;
    if (scheme.kind == SchemeSpec::Kind::Tdma || scheme.kind == SchemeSpec::Kind::Fdma) {
        comm.p_rad = 0.0;
        k_rad = 0.0;
        if (scheme.kind == SchemeSpec::Kind::Tdma) share = scheme.fraction;
        else comm.f_b = scheme.fraction * cfg.f_b;
    }
    McRates r;
    r.dl = mc_rate(comm, Link::Downlink, k_rad, trials, seed);
    r.ul = mc_rate(comm, Link::Uplink, k_rad, trials, seed);
    for (McEstimate* e : {&r.dl, &r.ul}) {
        e->mean *= share;
        e->std_error *= share;
    }
    return r;
}

namespace {

struct SweepPlan {
    std::vector<SystemConfig> cfgs;
    std::optional<WaveformMoments> shared;
};

SweepPlan plan_sweep(const SystemConfig& cfg, const SchemeSpec& scheme, const SweepSpec& sweep) {
    scheme.validate();
    sweep.validate(cfg);
    SweepPlan plan;
    for (double v : sweep.grid) {
        SystemConfig c = cfg;
        axis_value(c, sweep.axis) = v;
        c.validate();
        plan.cfgs.push_back(c);
    }
    // the reference moments depend on timing only, not on powers
    if (scheme.kind == SchemeSpec::Kind::AltSic && sweep.axis != SweepAxis::TC) {
        plan.shared = reference_moments(cfg);
    }
    return plan;
}

RegionCurve make_curve(const SchemeSpec& scheme, const SweepSpec& sweep) {
    RegionCurve curve;
    curve.scheme = scheme.label();
    curve.sweep = sweep;
    curve.points.resize(sweep.grid.size());
    return curve;
}

}  // namespace

RegionCurve sweep_region_serial(const SystemConfig& cfg, const SchemeSpec& scheme, const SweepSpec& sweep) {
    const auto plan = plan_sweep(cfg, scheme, sweep);
    RegionCurve curve = make_curve(scheme, sweep);
    for (std::size_t i = 0; i < plan.cfgs.size(); ++i) curve.points[i] = eval_point(plan.cfgs[i], scheme, plan.shared);
    return curve;
}

RegionCurve sweep_region(const SystemConfig& cfg, const SchemeSpec& scheme, const SweepSpec& sweep) {
    const auto plan = plan_sweep(cfg, scheme, sweep);
    RegionCurve curve = make_curve(scheme, sweep);
    const int n = static_cast<int>(plan.cfgs.size());
    std::vector<std::exception_ptr> errors(n);
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < n; ++i) {
        try {
            curve.points[i] = eval_point(plan.cfgs[i], scheme, plan.shared);
        } catch (...) {
            errors[i] = std::current_exception();
        }
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return curve;
}

RegionCurve cpi_sweep(const SystemConfig& cfg, const std::vector<double>& t_c_grid) {
    if (t_c_grid.empty()) throw std::invalid_argument("cpi_sweep: empty grid");
    SweepSpec sweep{SweepAxis::TC, t_c_grid};
    RegionCurve curve = make_curve(SchemeSpec::alt_sic(), sweep);
    const int n = static_cast<int>(t_c_grid.size());
    std::vector<SystemConfig> cfgs;
    for (double v : t_c_grid) {
        SystemConfig c = cfg;
        c.t_c = v;
        c.validate();
        cfgs.push_back(c);
    }
    std::vector<std::exception_ptr> errors(n);
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < n; ++i) {
        try {
            RatePoint p = base_point(cfgs[i], SchemeSpec::alt_sic());
            joint_radar(cfgs[i], p);
            fill_info(p);
            curve.points[i] = p;
        } catch (...) {
            errors[i] = std::current_exception();
        }
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return curve;
}

}  // namespace jrc
