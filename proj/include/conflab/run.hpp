#pragma once

#include <string>
#include <vector>

#include "conflab/config.hpp"

namespace conflab {

struct RunOutcome {
    int exit_code = 0;  // 0 success, 2 inconclusive-only results
    Json report;
    std::vector<std::string> files;
};

// Runs one subcommand and writes report.json plus CSVs into c.out_dir. Errors propagate as exceptions.
RunOutcome run(const RunConfig& c);

}  // namespace conflab
