#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"

#include "conflab/config.hpp"
#include "conflab/errors.hpp"
#include "conflab/report.hpp"
#include "conflab/run.hpp"

using namespace conflab;
namespace fs = std::filesystem;

namespace {
fs::path scratch(const std::string& name) {
    fs::path p = fs::temp_directory_path() / ("conflab_unit_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

struct Cli {
    int code;
    std::string output;
};

Cli cli(const std::string& args, const std::string& env = "") {
    fs::path log = fs::temp_directory_path() / "conflab_unit_cli.log";
    std::string cmd = env + " " + CONFLAB_CLI_PATH + " " + args + " > " + log.string() + " 2>&1";
    int status = std::system(cmd.c_str());
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(log)};
}

const char* kRotationOne = R"({
  "system": {"kind": "rotation", "alpha": "golden"},
  "potential": {"kind": "constant", "value": 1},
  "beta": {"min": -2, "max": 2, "steps": 5},
  "horizon": 4000,
  "seeds": {"random": 2}
})";
}  // namespace

TEST_CASE("config errors name the field") {
    auto j = Json::parse(kRotationOne);
    j.erase("system");
    try {
        parse_config(j, "spectrum");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("system") != std::string::npos);
    }
    auto k = Json::parse(kRotationOne);
    k["tolerance"] = -1.0;
    CHECK_THROWS_WITH_AS(parse_config(k, "spectrum"), doctest::Contains("tolerance"), ConfigError);
    auto g = Json::parse(kRotationOne);
    g["beta"] = Json{{"min", 1}, {"max", 2}, {"steps", 3}};
    CHECK_THROWS_WITH_AS(parse_config(g, "spectrum"), doctest::Contains("beta"), ConfigError);
    auto defaults = parse_config(Json::parse(kRotationOne), "spectrum");
    CHECK(defaults.tolerance == 1e-3);
    CHECK(defaults.beta_grid.size() == 5);
}

TEST_CASE("spectrum run on rotation with constant potential") {
    auto dir = scratch("spectrum");
    write(dir / "cfg.json", kRotationOne);
    auto r = cli("spectrum --config " + (dir / "cfg.json").string() + " --out " + (dir / "a").string());
    CHECK(r.code == 0);
    auto rep = Json::parse(slurp(dir / "a" / "report.json"));
    CHECK(rep["schema_version"] == "conflab-report/1");
    CHECK(rep["result"]["classification"] == "ZeroOnly");
    CHECK(rep["exit_code"] == 0);
    // csv: comment header, column row, one row per beta
    std::istringstream csv(slurp(dir / "a" / "spectrum.csv"));
    std::string line;
    int rows = 0;
    bool columns = false;
    while (std::getline(csv, line)) {
        if (line.rfind("#", 0) == 0) continue;
        if (!columns) {
            CHECK(line == "beta,verdict,tail_max_fwd,tail_max_bwd,horizon");
            columns = true;
            continue;
        }
        ++rows;
    }
    CHECK(rows == 5);
}

TEST_CASE("identical config and seed give byte-identical reports") {
    auto dir = scratch("determinism");
    write(dir / "cfg.json", kRotationOne);
    auto cfg = (dir / "cfg.json").string();
    REQUIRE(cli("spectrum --config " + cfg + " --seed 5 --out " + (dir / "a").string()).code == 0);
    REQUIRE(cli("spectrum --config " + cfg + " --seed 5 --threads 2 --out " + (dir / "b").string()).code == 0);
    CHECK(slurp(dir / "a" / "report.json") == slurp(dir / "b" / "report.json"));
}

TEST_CASE("construct run writes measure CSV and residuals") {
    auto dir = scratch("construct");
    write(dir / "cfg.json", R"({
      "system": {"kind": "rotation", "alpha": "golden"},
      "potential": {"kind": "coboundary", "transfer": {"kind": "trig", "terms": [{"n": 1, "cos": 1}]}},
      "beta": 1, "max_horizon": 20000, "point": 0.0
    })");
    auto r = cli("construct --config " + (dir / "cfg.json").string() + " --out " + dir.string());
    CHECK(r.code == 0);
    auto rep = Json::parse(slurp(dir / "report.json"));
    CHECK(rep["result"]["hopf"].contains("residuals"));
    CHECK(rep["result"]["density"]["max_residual"].get<double>() <= 1e-8);
    std::istringstream csv(slurp(dir / "measure.csv"));
    std::string line;
    double total = 0;
    bool header = false;
    while (std::getline(csv, line)) {
        if (line.rfind("#", 0) == 0) continue;
        if (!header) {
            CHECK(line == "k,S_k,weight");
            header = true;
            continue;
        }
        total += std::stod(line.substr(line.rfind(',') + 1));
    }
    CHECK(std::abs(total - 1.0) <= 1e-9);
}

TEST_CASE("empty atomic measure gives a header-only CSV") {
    auto dir = scratch("empty");
    write_measure_csv((dir / "m.csv").string(), WeightedAtomicMeasure{}, [](std::int64_t) { return 0.0; });
    std::istringstream csv(slurp(dir / "m.csv"));
    std::string line, last;
    int data = 0;
    while (std::getline(csv, line)) {
        if (line.rfind("#", 0) == 0) continue;
        if (line != "k,S_k,weight") ++data;
    }
    CHECK(data == 0);
}

TEST_CASE("appendix_b depth 4 in float mode is a precision error") {
    auto dir = scratch("precision");
    write(dir / "cfg.json", R"({
      "system": {"kind": "rotation", "alpha": "golden"},
      "potential": {"kind": "appendix_b", "K": 4}
    })");
    auto r = cli("potential-build --config " + (dir / "cfg.json").string() + " --out " + dir.string(),
                 "CONFLAB_PRECISION=float");
    CHECK(r.code == 1);
    CHECK(r.output.find("precision") != std::string::npos);
}

TEST_CASE("malformed configs exit 1 with the field named") {
    auto dir = scratch("malformed");
    write(dir / "cfg.json", R"({"system": {"kind": "rotation", "alpha": "bogus"}, "potential": {"kind": "constant", "value": 0}})");
    auto r = cli("flow-props --config " + (dir / "cfg.json").string() + " --out " + dir.string());
    CHECK(r.code == 1);
    CHECK(r.output.find("alpha") != std::string::npos);
}
