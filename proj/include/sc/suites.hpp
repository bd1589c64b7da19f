#pragma once

#include <string>

#include "sc/protocol.hpp"

namespace sc {

// One verification suite outcome.  Each suite checks one family of
// mathematical guarantees end to end and is deterministic per
// (seed, restarts).
struct suite_result {
    std::string name;
    bool passed = false;
    int cases = 0;
    int failures = 0;
    std::vector<std::string> failure_notes;
    std::vector<std::pair<std::string, double>> metrics;
};

// axioms, nagaoka, king, chi-alpha, limits, closed-forms, success-bound,
// separability, chain, additivity
std::vector<std::string> suite_names();

suite_result run_suite(const std::string& name, std::uint64_t seed, int restarts);

}  // namespace sc
