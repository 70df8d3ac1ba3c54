#include "studies.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <numbers>
#include <random>
#include <regex>
#include <sstream>
#include <stdexcept>

#include <Eigen/LU>

#include "jrc/channels.hpp"
#include "jrc/comm_rates.hpp"
#include "jrc/radar_est.hpp"
#include "jrc/waveforms.hpp"

namespace jrc::cli {

namespace {

constexpr double kPi = std::numbers::pi;

double to_si(double v, const std::string& unit, bool power) {
    if (unit.empty()) return v;
    if (power) {
        if (unit == "dBm") return dbm_to_watts(v);
        if (unit == "W") return v;
        if (unit == "mW") return v * 1e-3;
    } else {
        if (unit == "s") return v;
        if (unit == "ms") return v * 1e-3;
        if (unit == "us") return v * 1e-6;
    }
    throw std::invalid_argument("sweep: unit '" + unit + "' does not fit the axis");
}

std::string hex64(std::uint64_t v) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::string utc_now() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string k_rad_policy(const SystemConfig& cfg) {
    if (cfg.k_rad.theoretical_limit) return "theoretical-limit";
    return "fixed " + format_number(cfg.k_rad.fixed);
}

Table make_table(const SystemConfig* cfg, const RunOptions& opt) {
    Table t;
    t.metadata.emplace_back("tool", std::string("jrc ") + JRC_VERSION);
    t.metadata.emplace_back("command", opt.command);
    if (cfg) {
        t.metadata.emplace_back("config", opt.config_path);
        t.metadata.emplace_back("config_hash", hex64(config_hash(*cfg)));
        t.metadata.emplace_back("k_rad_policy", k_rad_policy(*cfg));
    }
    t.metadata.emplace_back("seed", std::to_string(opt.seed));
    t.metadata.emplace_back("trials", std::to_string(opt.trials));
    if (!opt.reproducible) t.metadata.emplace_back("generated", utc_now());
    return t;
}

const std::vector<std::string> kPointColumns = {
    "scheme",     "p_rad_w",   "p_rad_dbm",  "p_dl_w",   "p_dl_dbm", "p_ul_w",   "p_ul_dbm",
    "t_c_s",      "r_dl",      "r_ul",       "r_theta",  "r_dist",   "r_vel",    "info_theta",
    "info_dist",  "info_vel",  "k_rad_resolved", "k_rad_star", "k_rad_unachievable", "sigma_bar2",
    "i_dl_dl",    "i_dl_rad",  "i_dl_ul",    "i_ul_ul",  "i_ul_dl",  "i_ul_rad", "sigma_z2",
    "crb_theta",  "crb_tau",   "crb_omega",  "crb_tau_omega"};

const std::vector<std::string> kMcColumns = {"mc_r_dl", "mc_r_dl_se", "mc_r_ul", "mc_r_ul_se"};

std::vector<Cell> point_row(const SystemConfig& cfg, const RatePoint& p) {
    return {p.scheme,
            p.p_rad,
            watts_to_dbm(p.p_rad),
            p.p_dl,
            watts_to_dbm(p.p_dl),
            p.p_ul,
            watts_to_dbm(p.p_ul),
            p.t_c,
            p.r_dl,
            p.r_ul,
            p.r_theta,
            p.r_dist,
            p.r_vel,
            p.info_theta,
            p.info_dist,
            p.info_vel,
            p.k_rad,
            p.k_rad_star,
            static_cast<long long>(p.k_rad_unachievable),
            p.sigma_bar2,
            p.ledger.i_dl_dl,
            p.ledger.i_dl_rad,
            p.ledger.i_dl_ul,
            p.ledger.i_ul_ul,
            p.ledger.i_ul_dl,
            p.ledger.i_ul_rad,
            cfg.sigma_z2,
            p.crb.theta_theta(),
            p.crb.tau_tau(),
            p.crb.omega_omega(),
            p.crb.tau_omega()};
}

void set_point_columns(Table& t, const RunOptions& opt) {
    t.columns = kPointColumns;
    if (opt.trials > 0) t.columns.insert(t.columns.end(), kMcColumns.begin(), kMcColumns.end());
}

void add_point(Table& t, const SystemConfig& cfg, const SchemeSpec& scheme, const RatePoint& p,
               const RunOptions& opt) {
    auto row = point_row(cfg, p);
    if (opt.trials > 0) {
        const auto mc = mc_point(cfg, scheme, p, opt.trials, opt.seed);
        row.insert(row.end(), {mc.dl.mean, mc.dl.std_error, mc.ul.mean, mc.ul.std_error});
    }
    t.add_row(std::move(row));
}

}  // namespace

SweepRequest parse_sweep(const std::string& text) {
    static const std::regex re(R"(^([a-z_]+):([-+0-9.eE]+):([-+0-9.eE]+):([0-9]+)([A-Za-z]*)$)");
    std::smatch m;
    if (!std::regex_match(text, m, re)) {
        throw std::invalid_argument("sweep '" + text + "': expected name:start:stop:count[unit]");
    }
    SweepRequest req;
    req.name = m[1];
    req.text = text;
    const double start = std::stod(m[2]);
    const double stop = std::stod(m[3]);
    const int count = std::stoi(m[4]);
    const std::string unit = m[5];
    if (count < 1) throw std::invalid_argument("sweep '" + text + "': count must be at least 1");
    if (count == 1 && start != stop) throw std::invalid_argument("sweep '" + text + "': one point needs start == stop");
    if (count > 1 && !(stop > start)) throw std::invalid_argument("sweep '" + text + "': stop must exceed start");
    const bool power = req.name != "t_c";
    for (int i = 0; i < count; ++i) {
        const double v = count == 1 ? start : start + (stop - start) * i / (count - 1);
        req.grid.push_back(to_si(v, unit, power));
    }
    return req;
}

std::vector<SchemeSpec> parse_schemes(const std::string& list) {
    std::vector<SchemeSpec> out;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(parse_scheme(item));
    }
    if (out.empty()) throw std::invalid_argument("no scheme given");
    return out;
}

Table point_table(const SystemConfig& cfg, const std::vector<SchemeSpec>& schemes, const RunOptions& opt) {
    Table t = make_table(&cfg, opt);
    set_point_columns(t, opt);
    const auto moments = reference_moments(cfg);
    for (const auto& s : schemes) add_point(t, cfg, s, eval_point(cfg, s, moments), opt);
    return t;
}

Table region_table(const SystemConfig& cfg, const std::vector<SchemeSpec>& schemes, const SweepRequest& sweep,
                   const RunOptions& opt) {
    Table t = make_table(&cfg, opt);
    t.metadata.emplace_back("sweep", sweep.text);
    set_point_columns(t, opt);
    const SweepSpec spec{parse_axis(sweep.name), sweep.grid};
    // all curves are computed before anything is written
    for (const auto& s : schemes) {
        const auto curve = sweep_region(cfg, s, spec);
        for (std::size_t i = 0; i < curve.points.size(); ++i) {
            SystemConfig c = cfg;
            switch (spec.axis) {
                case SweepAxis::PUl: c.p_ul = spec.grid[i]; break;
                case SweepAxis::PDl: c.p_dl = spec.grid[i]; break;
                case SweepAxis::PRad: c.p_rad = spec.grid[i]; break;
                case SweepAxis::TC: c.t_c = spec.grid[i]; break;
            }
            add_point(t, c, s, curve.points[i], opt);
        }
    }
    return t;
}

Table cpi_table(const SystemConfig& cfg, const SweepRequest& sweep, const RunOptions& opt) {
    if (sweep.name != "t_c") throw std::invalid_argument("cpi: the sweep axis must be t_c");
    Table t = make_table(&cfg, opt);
    t.metadata.emplace_back("sweep", sweep.text);
    t.columns = {"t_c_s",      "pulse_count", "r_theta",   "r_dist",    "r_vel",     "info_theta",
                 "info_dist",  "info_vel",    "crb_theta", "crb_tau",   "crb_omega", "sigma_bar2"};
    const auto curve = cpi_sweep(cfg, sweep.grid);
    for (const auto& p : curve.points) {
        t.add_row({p.t_c, static_cast<long long>(std::llround(p.t_c / cfg.t_r)), p.r_theta, p.r_dist, p.r_vel,
                   p.info_theta, p.info_dist, p.info_vel, p.crb.theta_theta(), p.crb.tau_tau(),
                   p.crb.omega_omega(), p.sigma_bar2});
    }
    return t;
}

int count_unachievable(const Table& t) {
    int idx = -1;
    for (std::size_t i = 0; i < t.columns.size(); ++i) {
        if (t.columns[i] == "k_rad_unachievable") idx = static_cast<int>(i);
    }
    if (idx < 0) return 0;
    int n = 0;
    for (const auto& row : t.rows) n += std::get<long long>(row[idx]) != 0;
    return n;
}

// ---------------------------------------------------------------------------
// validate

namespace {

SystemConfig desk_config(int rx, double f_b, double t_r, double t_0, int pulses) {
    SystemConfig c = paper_defaults();
    c.tx_antennas = 1;
    c.rx_antennas = rx;
    c.f_b = f_b;
    c.t_r = t_r;
    c.t_0 = t_0;
    c.duty = t_0 / t_r;
    c.t_c = pulses * t_r;
    c.validate();
    return c;
}

Target random_target(std::mt19937_64& gen, double t_r, double t_0) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Target t;
    t.alpha = std::polar(0.5 + u(gen), 2.0 * kPi * u(gen));
    t.theta = (u(gen) * 2.0 - 1.0) * kPi / 3.0;
    t.tau = u(gen) * 0.5 * (t_r - t_0);
    t.omega = (u(gen) * 2.0 - 1.0) * 2.0 * kPi * 200.0;
    return t;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

struct Check {
    std::string name;
    double value;
    double limit;
    bool pass;
};

}  // namespace

Table validate_table(const RunOptions& opt, bool& all_passed) {
    std::vector<Check> checks;
    std::mt19937_64 gen(mix_seed(opt.seed, "validate", 0));

    // direction bound: closed form against the dense FIM
    double worst_theta = 0.0, worst_coupling = 0.0;
    const int antennas[] = {2, 4, 8};
    for (int i = 0; i < 12; ++i) {
        const int n = antennas[i % 3];
        const auto cfg = desk_config(n, 100e3, 0.6e-3, 0.05e-3, 4);
        const auto w = lfm_pulse_train(cfg, zero_codes(1, in_pulse_sample_count(cfg)));
        const Target target = random_target(gen, cfg.t_r, cfg.t_0);
        const double s2 = 0.5;
        const auto crb = reduce_crb(assemble_fim(target, w, NoiseModel::white(s2, n, w.length())));
        worst_theta = std::max(worst_theta, rel(crb_theta_closed(cfg, target, s2), crb.theta_theta()));
        // correlation coefficients, so the check does not depend on units
        worst_coupling = std::max(
            {worst_coupling, std::abs(crb.theta_tau()) / std::sqrt(crb.theta_theta() * crb.tau_tau()),
             std::abs(crb.theta_omega()) / std::sqrt(crb.theta_theta() * crb.omega_omega())});
    }
    checks.push_back({"theta_closed_vs_fim", worst_theta, 1e-2, worst_theta < 1e-2});
    checks.push_back({"theta_decoupling", worst_coupling, 1e-8, worst_coupling < 1e-8});

    // delay/Doppler bound: closed form against the grid sums
    double worst_lfm = 0.0;
    for (int k : {2, 4, 8}) {
        const auto cfg = desk_config(4, 200e3, 2e-3, 0.1e-3, k);
        const auto w = lfm_pulse_train(cfg, zero_codes(1, in_pulse_sample_count(cfg)));
        Target target = random_target(gen, cfg.t_r, cfg.t_0);
        const double s2 = 0.5;
        const Eigen::Matrix2d c = fim_tau_omega_general(w, target, s2, cfg).inverse();
        const auto closed = crb_lfm_closed(cfg, target, s2);
        worst_lfm = std::max({worst_lfm, rel(closed.tau_tau, c(0, 0)), rel(closed.omega_omega, c(1, 1))});
    }
    checks.push_back({"lfm_closed_vs_general", worst_lfm, 1e-2, worst_lfm < 1e-2});

    // Jensen step on the uplink
    {
        SystemConfig cfg = paper_defaults();
        cfg.k_rad = RadarSuppression::linear(db_to_linear(-20.0));
        const int trials = opt.trials > 0 ? opt.trials : 10000;
        const double bound = uplink_rate_bound(cfg, cfg.k_rad.fixed);
        const auto mc = mc_rate(cfg, Link::Uplink, cfg.k_rad.fixed, trials, opt.seed);
        const double gap = (bound - mc.mean) / bound;
        checks.push_back({"jensen_uplink_gap", gap, 2e-2, mc.mean <= bound + 3.0 * mc.std_error && gap < 2e-2});
    }

    // suppression floor with vanishing CRB terms
    {
        const SystemConfig cfg = paper_defaults();
        const CrbMatrix zero[] = {CrbMatrix{}};
        const double k = k_rad_star(cfg, zero, WaveformMoments{});
        checks.push_back({"k_rad_floor", rel(k, 4e-4), 1e-12, rel(k, 4e-4) < 1e-12});
    }

    // ideal CSI, no leakage: plain MRC capacity
    {
        SystemConfig cfg = paper_defaults();
        cfg.rho_dl = cfg.rho_ul = 1.0;
        cfg.k_self = cfg.k_boun = cfg.k_co = 0.0;
        const double expect = cfg.f_b * std::log2(1.0 + cfg.rx_antennas * cfg.p_ul * omega_ul(cfg) / cfg.sigma_z2);
        const double e = rel(uplink_rate_bound(cfg, 0.0), expect);
        checks.push_back({"ideal_uplink_identity", e, 1e-14, e < 1e-14});
    }

    RunOptions o = opt;
    o.command = "validate";
    Table t = make_table(nullptr, o);
    t.columns = {"check", "value", "limit", "pass"};
    all_passed = true;
    for (const auto& c : checks) {
        all_passed = all_passed && c.pass;
        t.add_row({c.name, c.value, c.limit, static_cast<long long>(c.pass)});
    }
    return t;
}

}  // namespace jrc::cli
