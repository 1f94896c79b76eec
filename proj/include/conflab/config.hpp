#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "conflab/certificate.hpp"
#include "conflab/dynsys.hpp"
#include "conflab/potential.hpp"

namespace conflab {

using Json = nlohmann::ordered_json;

struct RunConfig {
    std::string command;
    Json system;
    Json potential;
    std::vector<double> beta_grid;  // spectrum runs
    double beta = 1.0;              // single-temperature runs
    std::int64_t horizon = 100000;
    std::int64_t max_horizon = 100000;
    double tolerance = 1e-3;
    double ratio_tol = 1e-2;
    std::size_t grid = 1 << 14;
    Json seeds;                      // array of coordinates/indices, or {"random": n}
    Json point;                      // base point for construct/classify
    std::vector<std::int64_t> n_list{100, 1000, 10000};
    int pairs = 100;
    std::string out_dir = "out";
    PrecisionMode precision = PrecisionMode::floating;
    std::uint64_t seed = 0;
    unsigned threads = 1;
};

// Validates and fills defaults; ConfigError names the offending field.
RunConfig parse_config(const Json& j, const std::string& command);
RunConfig load_config(const std::string& path, const std::string& command);

// Echo of every knob, defaults included.
Json to_json(const RunConfig& c);

DynSystem make_system(const Json& node);
PotentialPtr make_potential(const Json& node, const DynSystem& s, PrecisionMode mode);
Point make_point(const Json& node, const DynSystem& s);
std::vector<Point> make_seeds(const RunConfig& c, const DynSystem& s);

const char* to_string(PrecisionMode m) noexcept;

}  // namespace conflab

namespace conflab {

// CONFLAB_PRECISION in {float, exact} overrides the file; anything else is a config error.
void apply_precision_override(RunConfig& c, const char* env_value);

}  // namespace conflab
