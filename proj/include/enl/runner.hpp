#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "enl/verify.hpp"

namespace enl {

enum Stage : unsigned {
    kStageVerify = 1,
    kStagePrice = 2,
    kStageHedge = 4,
    kStageReport = 8,
    kStageAll = 15,
};

struct RunOptions {
    bool exact = true;
    std::optional<double> tol;
    std::optional<std::uint64_t> seed;
    std::optional<int> count;
    std::string out_dir;  // overrides the scenario output path
    unsigned stages = kStageAll;
    bool flip_ng_sign = false;
};

struct RunResult {
    json report;
    int failures = 0;
};

// Executes the requested stages in order (build, enlarge, verify, price, hedge, report).
// Domain errors after parsing are recorded in the report and counted as failures.
RunResult run_scenario(const Scenario& sc, const RunOptions& o);

// Randomized battery without a scenario.
RunResult run_random_verify(const RunOptions& o);

}  // namespace enl
