#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "report.hpp"
#include "studies.hpp"

using namespace jrc;
using namespace jrc::cli;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name) {
    const fs::path d = fs::current_path() / ("cli_scratch_" + name);
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

// Runs the built binary with JRC_OUT_DIR pointing at `dir`; returns the exit code.
int run(const fs::path& dir, const std::string& args, const std::string& env = "") {
    const std::string cmd = "JRC_OUT_DIR='" + dir.string() + "' " + env + " '" + JRC_CLI_PATH + "' " + args +
                            " > '" + (dir / "stdout.txt").string() + "' 2> '" + (dir / "stderr.txt").string() + "'";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    for (std::string s; std::getline(ss, s);) out.push_back(s);
    return out;
}

std::vector<std::string> split(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    for (std::string f; std::getline(ss, f, ',');) out.push_back(f);
    return out;
}

}  // namespace

TEST_CASE("sweep syntax") {
    auto r = parse_sweep("p_ul:0:20:3dBm");
    REQUIRE(r.grid.size() == 3);
    CHECK(r.name == "p_ul");
    CHECK(r.grid[0] == doctest::Approx(1e-3));
    CHECK(r.grid[1] == doctest::Approx(1e-2));
    CHECK(r.grid[2] == doctest::Approx(1e-1));

    r = parse_sweep("t_c:10:200:20ms");
    REQUIRE(r.grid.size() == 20);
    CHECK(r.grid.front() == doctest::Approx(0.01));
    CHECK(r.grid.back() == doctest::Approx(0.2));
    CHECK(r.grid[1] == doctest::Approx(0.02));

    CHECK(parse_sweep("p_rad:50:100:2mW").grid[1] == doctest::Approx(0.1));
    CHECK(parse_sweep("p_dl:0.05:0.05:1W").grid.size() == 1);
    CHECK(parse_sweep("t_c:1000:2000:2us").grid[0] == doctest::Approx(1e-3));

    for (const char* bad : {"p_ul:0:20", "p_ul:20:0:5dBm", "p_ul:0:20:0dBm", "p_ul:0:20:3furlongs", "t_c:1:2:2dBm",
                            "p_ul:a:b:3dBm", "p_ul:0:1:1W"}) {
        CHECK_THROWS_AS(parse_sweep(bad), std::invalid_argument);
    }
}

TEST_CASE("number formatting") {
    CHECK(format_number(0.1) == "0.1");
    CHECK(format_number(1.0 / 3.0) == "0.333333333333");
    CHECK(format_number(123456789012345.0) == "1.23456789012e+14");
    CHECK(format_number(-0.0) == "0");
    CHECK(format_cell(Cell{42LL}) == "42");
    CHECK(format_cell(Cell{std::string("alt-sic")}) == "alt-sic");
}

TEST_CASE("CSV and JSON carry the same table") {
    Table t;
    t.metadata = {{"tool", "jrc"}, {"seed", "3"}};
    t.columns = {"scheme", "r_ul", "n"};
    t.add_row({std::string("alt-sic"), 7.5912345678901234e6, 3LL});
    t.add_row({std::string("tdma:0.5"), 1.0 / 7.0, 4LL});
    CHECK_THROWS(t.add_row({1.0}));

    const auto csv = lines_of(render_csv(t));
    REQUIRE(csv.size() == 5);
    CHECK(csv[0] == "# tool: jrc");
    CHECK(csv[1] == "# seed: 3");
    CHECK(csv[2] == "scheme,r_ul,n");
    CHECK(csv[3] == "alt-sic,7591234.56789,3");

    const auto j = nlohmann::json::parse(render_json(t));
    CHECK(j["metadata"]["seed"] == "3");
    CHECK(j["columns"].size() == 3);
    CHECK(j["rows"][1]["scheme"] == "tdma:0.5");
    // numbers in the sidecar are the values printed in the CSV
    CHECK(format_number(j["rows"][1]["r_ul"].get<double>()) == split(csv[4])[1]);
    CHECK(j["rows"][0]["n"] == 3);
}

TEST_CASE("atomic write and sidecar name") {
    const auto dir = scratch("atomic");
    const auto path = (dir / "x.csv").string();
    write_atomic(path, "a\n");
    write_atomic(path, "b\n");
    CHECK(slurp(path) == "b\n");
    CHECK_FALSE(fs::exists(path + ".tmp"));
    CHECK(sidecar_path(path) == (dir / "x.json").string());
    CHECK_THROWS(write_atomic((dir / "missing" / "y.csv").string(), "z"));
    Table empty;
    empty.columns = {"a"};
    CHECK_THROWS(emit(empty, path));
}

TEST_CASE("point subcommand writes CSV and sidecar under JRC_OUT_DIR") {
    const auto dir = scratch("point");
    REQUIRE(run(dir, "point --scheme alt-sic,trad-sic,tdma:0.5 --reproducible --seed 7 --out p.csv") == 0);
    const auto csv = slurp(dir / "p.csv");
    const auto lines = lines_of(csv);
    std::vector<std::string> meta, body;
    for (const auto& l : lines) (l.rfind("#", 0) == 0 ? meta : body).push_back(l);
    CHECK(csv.find("# tool: jrc ") != std::string::npos);
    CHECK(csv.find("# config_hash: ") != std::string::npos);
    CHECK(csv.find("# seed: 7") != std::string::npos);
    CHECK(csv.find("# k_rad_policy: ") != std::string::npos);
    CHECK(csv.find("generated") == std::string::npos);
    REQUIRE(body.size() == 4);
    const auto header = split(body[0]);
    for (const char* col : {"scheme", "r_dl", "r_ul", "r_theta", "r_dist", "r_vel", "k_rad_resolved", "k_rad_star",
                            "i_ul_rad", "crb_theta"}) {
        CHECK(std::find(header.begin(), header.end(), col) != header.end());
    }
    CHECK(split(body[1])[0] == "alt-sic");
    CHECK(split(body[3])[0] == "tdma:0.5");
    for (std::size_t i = 1; i < body.size(); ++i) CHECK(split(body[i]).size() == header.size());

    const auto j = nlohmann::json::parse(slurp(dir / "p.json"));
    CHECK(j["rows"].size() == 3);
    CHECK(j["metadata"]["seed"] == "7");

    // a timestamp appears only without --reproducible
    REQUIRE(run(dir, "point --out q.csv") == 0);
    CHECK(slurp(dir / "q.csv").find("# generated: ") != std::string::npos);
}

TEST_CASE("Monte Carlo columns appear with --trials") {
    const auto dir = scratch("trials");
    REQUIRE(run(dir, "point --trials 50 --reproducible --out t.csv") == 0);
    const auto text = slurp(dir / "t.csv");
    CHECK(text.find("mc_r_ul_se") != std::string::npos);
    CHECK(text.find("# trials: 50") != std::string::npos);
}

TEST_CASE("region and cpi subcommands") {
    const auto dir = scratch("region");
    REQUIRE(run(dir, "region --sweep p_ul:0:20:5dBm --scheme alt-sic,fdma:0.5 --reproducible --out r.csv") == 0);
    std::vector<std::string> body;
    for (const auto& l : lines_of(slurp(dir / "r.csv")))
        if (l.rfind("#", 0) != 0) body.push_back(l);
    CHECK(body.size() == 11);
    CHECK(slurp(dir / "r.csv").find("# sweep: p_ul:0:20:5dBm") != std::string::npos);

    REQUIRE(run(dir, "cpi --sweep t_c:10:50:5ms --reproducible --out c.csv") == 0);
    body.clear();
    for (const auto& l : lines_of(slurp(dir / "c.csv")))
        if (l.rfind("#", 0) != 0) body.push_back(l);
    CHECK(body.size() == 6);
    CHECK(split(body[0])[0] == "t_c_s");
}

TEST_CASE("failures exit nonzero and leave no output") {
    const auto dir = scratch("fail");
    std::ofstream(dir / "bad.yaml") << "rho_dl: 3\n";
    CHECK(run(dir, "point --config '" + (dir / "bad.yaml").string() + "' --out bad.csv") != 0);
    CHECK_FALSE(fs::exists(dir / "bad.csv"));
    CHECK(slurp(dir / "stderr.txt").find("error:") != std::string::npos);

    CHECK(run(dir, "region --sweep p_ul:0:40:3dBm --out big.csv") != 0);  // beyond the configured P_ul
    CHECK_FALSE(fs::exists(dir / "big.csv"));
    CHECK(run(dir, "point --scheme tdma:2 --out s.csv") != 0);
    CHECK(run(dir, "frobnicate") != 0);
}

TEST_CASE("unachievable K_rad is reported on stderr") {
    const auto dir = scratch("warn");
    std::ofstream(dir / "low.yaml") << "K_rad: 1.0e-9\n";
    REQUIRE(run(dir, "point --config '" + (dir / "low.yaml").string() + "' --out w.csv") == 0);
    CHECK(slurp(dir / "stderr.txt").find("warning") != std::string::npos);
    CHECK(slurp(dir / "w.csv").find(",1,") != std::string::npos);
}

TEST_CASE("validate subcommand passes") {
    const auto dir = scratch("validate");
    CHECK(run(dir, "validate --reproducible") == 0);
    const auto out = slurp(dir / "stdout.txt");
    CHECK(out.find("FAIL") == std::string::npos);
    CHECK(out.find("PASS theta_closed_vs_fim") != std::string::npos);
    CHECK(fs::exists(dir / "validate.csv"));
    CHECK(fs::exists(dir / "validate.json"));
}
