#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "jrc/config.hpp"
#include "jrc/scenarios.hpp"
#include "report.hpp"

namespace jrc::cli {

/// `name:start:stop:count[unit]`, e.g. `p_ul:0:20:21dBm` or `t_c:10:200:20ms`.
/// Values are spaced evenly in the given unit and converted to SI.
struct SweepRequest {
    std::string name;
    std::string text;
    std::vector<double> grid;  // SI
};
SweepRequest parse_sweep(const std::string& text);

std::vector<SchemeSpec> parse_schemes(const std::string& list);

struct RunOptions {
    std::string command;
    std::string config_path = "defaults";
    std::uint64_t seed = 1;
    int trials = 0;
    bool reproducible = false;
};

Table point_table(const SystemConfig& cfg, const std::vector<SchemeSpec>& schemes, const RunOptions& opt);
Table region_table(const SystemConfig& cfg, const std::vector<SchemeSpec>& schemes, const SweepRequest& sweep,
                   const RunOptions& opt);
Table cpi_table(const SystemConfig& cfg, const SweepRequest& sweep, const RunOptions& opt);

/// Oracle checks; the table has one row per check with a pass column.
Table validate_table(const RunOptions& opt, bool& all_passed);

/// Number of scheme points whose fixed K_rad lies below the computed limit.
int count_unachievable(const Table& t);

}  // namespace jrc::cli
