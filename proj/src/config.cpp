#include "jrc/config.hpp"

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace jrc {

double dbm_to_watts(double dbm) { return std::pow(10.0, dbm / 10.0) * 1e-3; }

double watts_to_dbm(double watts) { return 10.0 * std::log10(watts * 1e3); }

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw ValidationError(what);
}

bool is_positive_finite(double x) { return std::isfinite(x) && x > 0.0; }

}  // namespace

void SystemConfig::validate() const {
    require(tx_antennas >= 1, "tx_antennas must be a positive integer");
    require(rx_antennas >= 1, "rx_antennas must be a positive integer");
    require(is_positive_finite(p_rad), "p_rad must be positive");
    require(is_positive_finite(p_dl), "p_dl must be positive");
    require(is_positive_finite(p_ul), "p_ul must be positive");
    require(is_positive_finite(f_b), "f_B must be positive");
    require(is_positive_finite(t_c), "T_c must be positive");
    require(is_positive_finite(t_r), "T_R must be positive");
    require(is_positive_finite(t_0), "T_0 must be positive");
    require(duty > 0.0 && duty <= 1.0, "duty must lie in (0, 1]");
    require(t_0 <= t_r * (1.0 + 1e-12), "T_0 must not exceed T_R");
    require(std::abs(duty - t_0 / t_r) <= 1e-9, "duty must equal T_0/T_R");

    const double k = std::round(t_c / t_r);
    require(k >= 1.0 && std::abs(k * t_r - t_c) <= 1e-9 * t_c,
            "T_c not integer multiple of T_R");

    require(rho_dl > 0.0 && rho_dl <= 1.0, "rho_dl must lie in (0, 1]");
    require(rho_ul > 0.0 && rho_ul <= 1.0, "rho_ul must lie in (0, 1]");
    for (auto [name, v] : {std::pair{"K_self", k_self}, std::pair{"K_boun", k_boun},
                           std::pair{"K_co", k_co}}) {
        require(std::isfinite(v) && v >= 0.0 && v <= 1.0,
                std::string(name) + " must lie in [0, 1]");
    }
    if (!k_rad.theoretical_limit) {
        require(std::isfinite(k_rad.fixed) && k_rad.fixed >= 0.0 && k_rad.fixed <= 1.0,
                "K_rad must lie in [0, 1]");
    }
    require(is_positive_finite(sigma_z2), "sigma_z2 must be positive");
    require(is_positive_finite(sigma_02), "sigma_02 must be positive");
    require(is_positive_finite(omega_c), "omega_c must be positive");
    require(is_positive_finite(c0), "c0 must be positive");
    require(std::isfinite(pathloss.sigma_s_db) && pathloss.sigma_s_db >= 0.0,
            "sigma_s must be non-negative");
    require(is_positive_finite(pathloss.d0), "d0 must be positive");
    require(std::isfinite(pathloss.exponent) && pathloss.exponent > 0.0, "l must be positive");
    require(is_positive_finite(pathloss.d_dl), "d_dl must be positive");
    require(is_positive_finite(pathloss.d_ul), "d_ul must be positive");
    require(num_targets >= 1, "K_t must be a positive integer");

    require(is_positive_finite(target.range), "target_range must be positive");
    require(std::abs(target.theta) < 1.5707963267948966, "target_theta must lie in (-pi/2, pi/2)");
    require(std::isfinite(target.velocity), "target_velocity must be finite");
    if (target.alpha_gain) require(is_positive_finite(*target.alpha_gain), "alpha_gain must be positive");
    require(is_positive_finite(target.sigma_theta2), "sigma_theta2 must be positive");
    require(is_positive_finite(target.sigma_d2), "sigma_d2 must be positive");
    require(is_positive_finite(target.sigma_v2), "sigma_v2 must be positive");
    require(2.0 * target.range / c0 < t_r, "target delay must be shorter than T_R");
}

DerivedQuantities derive(const SystemConfig& cfg) {
    DerivedQuantities d{};
    d.pulse_count = static_cast<int>(std::lround(cfg.t_c / cfg.t_r));
    d.sample_step = 1.0 / cfg.f_b;
    d.sample_count = static_cast<int>(std::lround(cfg.f_b * cfg.t_c));
    d.xi_r = cfg.f_b * cfg.t_c * cfg.duty * cfg.p_rad;
    return d;
}

SystemConfig paper_defaults() {
    SystemConfig cfg;
    cfg.p_rad = dbm_to_watts(20.0);
    cfg.p_dl = dbm_to_watts(23.0);
    cfg.p_ul = dbm_to_watts(23.0);
    cfg.k_self = db_to_linear(-23.0);
    cfg.k_boun = db_to_linear(-23.0);
    cfg.k_co = db_to_linear(-23.0);
    cfg.k_rad = RadarSuppression::linear(db_to_linear(-20.0));
    const double one_degree = 3.14159265358979323846 / 180.0;
    cfg.target.sigma_theta2 = one_degree * one_degree;
    return cfg;
}

namespace {

constexpr double kDegToRad = 3.14159265358979323846 / 180.0;

double as_double(const YAML::Node& node, const std::string& key) {
    try {
        return node.as<double>();
    } catch (const YAML::Exception&) {
        throw ParseError("field '" + key + "': expected a number");
    }
}

int as_int(const YAML::Node& node, const std::string& key) {
    const double v = as_double(node, key);
    if (v != std::floor(v) || std::abs(v) > 1e9) {
        throw ParseError("field '" + key + "': expected an integer");
    }
    return static_cast<int>(v);
}

using Setter = std::function<void(SystemConfig&, const YAML::Node&, const std::string&)>;

Setter real(double SystemConfig::*field) {
    return [field](SystemConfig& c, const YAML::Node& n, const std::string& k) {
        c.*field = as_double(n, k);
    };
}

Setter real_db(double SystemConfig::*field) {
    return [field](SystemConfig& c, const YAML::Node& n, const std::string& k) {
        c.*field = db_to_linear(as_double(n, k));
    };
}

Setter power_dbm(double SystemConfig::*field) {
    return [field](SystemConfig& c, const YAML::Node& n, const std::string& k) {
        c.*field = dbm_to_watts(as_double(n, k));
    };
}

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = {
        {"tx_antennas", [](SystemConfig& c, const YAML::Node& n, const std::string& k) { c.tx_antennas = as_int(n, k); }},
        {"rx_antennas", [](SystemConfig& c, const YAML::Node& n, const std::string& k) { c.rx_antennas = as_int(n, k); }},
        {"p_rad_dbm", power_dbm(&SystemConfig::p_rad)},
        {"p_dl_dbm", power_dbm(&SystemConfig::p_dl)},
        {"p_ul_dbm", power_dbm(&SystemConfig::p_ul)},
        {"f_B", real(&SystemConfig::f_b)},
        {"T_c", real(&SystemConfig::t_c)},
        {"T_R", real(&SystemConfig::t_r)},
        {"T_0", real(&SystemConfig::t_0)},
        {"duty", real(&SystemConfig::duty)},
        {"rho_dl", real(&SystemConfig::rho_dl)},
        {"rho_ul", real(&SystemConfig::rho_ul)},
        {"K_self", real(&SystemConfig::k_self)},
        {"K_boun", real(&SystemConfig::k_boun)},
        {"K_co", real(&SystemConfig::k_co)},
        {"K_self_db", real_db(&SystemConfig::k_self)},
        {"K_boun_db", real_db(&SystemConfig::k_boun)},
        {"K_co_db", real_db(&SystemConfig::k_co)},
        {"K_rad", [](SystemConfig& c, const YAML::Node& n, const std::string& k) {
             if (n.IsScalar() && n.Scalar() == "theoretical-limit") {
                 c.k_rad = RadarSuppression::limit();
             } else {
                 try {
                     c.k_rad = RadarSuppression::linear(n.as<double>());
                 } catch (const YAML::Exception&) {
                     throw ParseError("field '" + k + "': expected a number or \"theoretical-limit\"");
                 }
             }
         }},
        {"K_rad_db", [](SystemConfig& c, const YAML::Node& n, const std::string& k) {
             c.k_rad = RadarSuppression::linear(db_to_linear(as_double(n, k)));
         }},
        {"sigma_z2", real(&SystemConfig::sigma_z2)},
        {"sigma_02", real(&SystemConfig::sigma_02)},
        {"omega_c", real(&SystemConfig::omega_c)},
        {"c0", real(&SystemConfig::c0)},
        {"sigma_s", [](SystemConfig& c, const YAML::Node& n, const std::string& k) { c.pathloss.sigma_s_db = as_double(n, k); }},
        {"d0", [](SystemConfig& c, const YAML::Node& n, const std::string& k) { c.pathloss.d0 = as_double(n, k); }},
        {"l", [](SystemConfig& c, const YAML::Node& n, const std::string& k) { c.pathloss.exponent = as_double(n, k); }},
        {"d_dl", [](SystemConfig& c, const YAML::Node& n, const std::string& k) { c.pathloss.d_dl = as_double(n, k); }},
        {"d_ul", [](SystemConfig& c, const YAML::Node& n, const std::string& k) { c.pathloss.d_ul = as_double(n, k); }},
        {"K_t", [](SystemConfig& c, const YAML::Node& n, const std::string& k) { c.num_targets = as_int(n, k); }},
        {"target_range", [](SystemConfig& c, const YAML::Node& n, const std::string& k) { c.target.range = as_double(n, k); }},
        {"target_theta", [](SystemConfig& c, const YAML::Node& n, const std::string& k) { c.target.theta = as_double(n, k); }},
        {"target_theta_deg", [](SystemConfig& c, const YAML::Node& n, const std::string& k) { c.target.theta = as_double(n, k) * kDegToRad; }},
        {"target_velocity", [](SystemConfig& c, const YAML::Node& n, const std::string& k) { c.target.velocity = as_double(n, k); }},
        {"alpha_gain", [](SystemConfig& c, const YAML::Node& n, const std::string& k) { c.target.alpha_gain = as_double(n, k); }},
        {"sigma_theta2", [](SystemConfig& c, const YAML::Node& n, const std::string& k) { c.target.sigma_theta2 = as_double(n, k); }},
        {"sigma_theta_deg", [](SystemConfig& c, const YAML::Node& n, const std::string& k) {
             const double s = as_double(n, k) * kDegToRad;
             c.target.sigma_theta2 = s * s;
         }},
        {"sigma_d2", [](SystemConfig& c, const YAML::Node& n, const std::string& k) { c.target.sigma_d2 = as_double(n, k); }},
        {"sigma_v2", [](SystemConfig& c, const YAML::Node& n, const std::string& k) { c.target.sigma_v2 = as_double(n, k); }},
    };
    return table;
}

}  // namespace

SystemConfig parse_config(std::string_view text) {
    YAML::Node root;
    try {
        root = YAML::Load(std::string(text));
    } catch (const YAML::Exception& e) {
        throw ParseError(std::string("malformed scenario document: ") + e.what());
    }

    SystemConfig cfg = paper_defaults();
    if (root.IsNull()) {
        cfg.validate();
        return cfg;
    }
    if (!root.IsMap()) throw ParseError("scenario document must be a flat key-value mapping");

    bool duty_given = false;
    for (const auto& kv : root) {
        const auto key = kv.first.as<std::string>();
        const auto it = setters().find(key);
        if (it == setters().end()) throw ParseError("field '" + key + "': unknown key");
        if (!kv.second.IsScalar()) throw ParseError("field '" + key + "': expected a scalar value");
        it->second(cfg, kv.second, key);
        duty_given = duty_given || key == "duty";
    }
    // duty is redundant with T_0/T_R; fill it in when the document omits it.
    if (!duty_given) cfg.duty = cfg.t_0 / cfg.t_r;

    cfg.validate();
    return cfg;
}

SystemConfig load_config(const std::string& path) {
    if (path == "defaults") return paper_defaults();
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open scenario document '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string canonical_string(const SystemConfig& c) {
    std::ostringstream os;
    char buf[64];
    auto put = [&](const char* key, double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        os << key << '=' << buf << ';';
    };
    put("tx_antennas", c.tx_antennas);
    put("rx_antennas", c.rx_antennas);
    put("p_rad", c.p_rad);
    put("p_dl", c.p_dl);
    put("p_ul", c.p_ul);
    put("f_B", c.f_b);
    put("T_c", c.t_c);
    put("T_R", c.t_r);
    put("T_0", c.t_0);
    put("duty", c.duty);
    put("rho_dl", c.rho_dl);
    put("rho_ul", c.rho_ul);
    put("K_self", c.k_self);
    put("K_boun", c.k_boun);
    put("K_co", c.k_co);
    if (c.k_rad.theoretical_limit) {
        os << "K_rad=theoretical-limit;";
    } else {
        put("K_rad", c.k_rad.fixed);
    }
    put("sigma_z2", c.sigma_z2);
    put("sigma_02", c.sigma_02);
    put("omega_c", c.omega_c);
    put("c0", c.c0);
    put("sigma_s", c.pathloss.sigma_s_db);
    put("d0", c.pathloss.d0);
    put("l", c.pathloss.exponent);
    put("d_dl", c.pathloss.d_dl);
    put("d_ul", c.pathloss.d_ul);
    put("K_t", c.num_targets);
    put("target_range", c.target.range);
    put("target_theta", c.target.theta);
    put("target_velocity", c.target.velocity);
    if (c.target.alpha_gain) put("alpha_gain", *c.target.alpha_gain);
    put("sigma_theta2", c.target.sigma_theta2);
    put("sigma_d2", c.target.sigma_d2);
    put("sigma_v2", c.target.sigma_v2);
    return os.str();
}

std::uint64_t config_hash(const SystemConfig& cfg) {
    // FNV-1a, 64 bit
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : canonical_string(cfg)) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace jrc
