#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "enl/serialize.hpp"

namespace enl {

struct CheckResult {
    std::string name;
    bool pass = true;
    int instances = 0;
    int failures = 0;
    double max_defect = 0;
    int first_failure = -1;  // instance index
};

struct VerifyOptions {
    std::uint64_t seed = 0;
    int count = 50;
    double tol = 1e-10;
    int max_horizon = 6;
    int max_paths = 64;
    int competitors = 10;
    bool hedging = true;
    bool flip_ng_sign = false;  // mutation control: negates N^G before representing
    int workers = 0;            // 0: hardware concurrency
};

struct VerifyReport {
    std::uint64_t seed = 0;
    int count = 0;
    std::string mode;
    std::vector<CheckResult> checks;
    bool pass() const;
    json to_json() const;
};

// Names of every check in the battery, in report order.
const std::vector<std::string>& check_names();

// Battery on `count` random instances; deterministic in the seed.
template <class T>
VerifyReport verify_all(const VerifyOptions& o);

// Battery on a fixed (space, tau) with random payoffs per instance; `names` filters the
// checks ("all" or empty keeps every applicable one).
template <class T>
VerifyReport verify_bundle(const Bundle<T>& b, const VerifyOptions& o, const std::vector<std::string>& names);

}  // namespace enl
