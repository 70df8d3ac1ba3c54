// jrc: command-line front end for the joint radar-communication bounds.
//
//   jrc point    --scheme alt-sic[,trad-sic,...]
//   jrc region   --sweep p_ul:0:20:21dBm --scheme alt-sic,tdma:0.5
//   jrc cpi      --sweep t_c:10:200:20ms
//   jrc validate
//
// Common flags: --config, --out, --seed, --trials, --reproducible.
// Relative --out paths are placed under $JRC_OUT_DIR when it is set.

#include <cstdlib>
#include <exception>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "jrc/config.hpp"
#include "report.hpp"
#include "studies.hpp"

namespace {

std::string resolve_out(const std::string& out, const std::string& command) {
    std::filesystem::path p = out.empty() ? std::filesystem::path(command + ".csv") : std::filesystem::path(out);
    if (p.is_relative()) {
        if (const char* dir = std::getenv("JRC_OUT_DIR"); dir && *dir) p = std::filesystem::path(dir) / p;
    }
    return p.string();
}

}  // namespace

int main(int argc, char** argv) {
    using namespace jrc::cli;

    CLI::App app{"Rate and estimation-rate bounds for a full-duplex joint radar-communication node"};
    app.require_subcommand(1);

    RunOptions opt;
    std::string out;
    app.add_option("--config", opt.config_path, "scenario YAML file, or 'defaults'");
    app.add_option("--out", out, "output CSV path (JSON sidecar written next to it)");
    app.add_option("--seed", opt.seed, "seed for Monte Carlo draws");
    app.add_option("--trials", opt.trials, "Monte Carlo trials per point (0 = bounds only)")
        ->check(CLI::NonNegativeNumber);
    app.add_flag("--reproducible", opt.reproducible, "omit the timestamp so reruns are byte-identical");

    std::string schemes = "alt-sic";
    std::string sweep;

    auto* point = app.add_subcommand("point", "evaluate one operating point per scheme");
    point->add_option("--scheme", schemes, "comma-separated: alt-sic, trad-sic, tdma:F, fdma:F");

    auto* region = app.add_subcommand("region", "sweep one power (or T_c) per scheme");
    region->add_option("--scheme", schemes, "comma-separated scheme list");
    region->add_option("--sweep", sweep, "name:start:stop:count[unit]")->required();

    auto* cpi = app.add_subcommand("cpi", "estimation rates over a grid of CPI durations");
    cpi->add_option("--sweep", sweep, "t_c:start:stop:count[unit]")->required();

    auto* validate = app.add_subcommand("validate", "run the oracle checks and print a pass/fail table");

    // global flags are accepted after the subcommand as well
    for (auto* sub : {point, region, cpi, validate}) sub->fallthrough();

    CLI11_PARSE(app, argc, argv);

    try {
        if (validate->parsed()) {
            opt.command = "validate";
            bool ok = false;
            const Table t = validate_table(opt, ok);
            for (const auto& row : t.rows) {
                std::cout << (std::get<long long>(row[3]) ? "PASS " : "FAIL ") << std::get<std::string>(row[0])
                          << "  value=" << format_cell(row[1]) << "  limit=" << format_cell(row[2]) << '\n';
            }
            emit(t, resolve_out(out, opt.command));
            return ok ? 0 : 1;
        }

        const jrc::SystemConfig cfg = jrc::load_config(opt.config_path);
        Table t;
        if (point->parsed()) {
            opt.command = "point";
            t = point_table(cfg, parse_schemes(schemes), opt);
        } else if (region->parsed()) {
            opt.command = "region";
            t = region_table(cfg, parse_schemes(schemes), parse_sweep(sweep), opt);
        } else {
            opt.command = "cpi";
            t = cpi_table(cfg, parse_sweep(sweep), opt);
        }
        if (const int n = count_unachievable(t); n > 0) {
            std::cerr << "warning: configured K_rad is below the theoretical limit K_rad* at " << n
                      << " point(s); see the k_rad_star column\n";
        }
        const std::string path = resolve_out(out, opt.command);
        emit(t, path);
        std::cout << path << '\n';
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
