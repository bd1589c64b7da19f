// Acceptance suite: one pass/fail line per criterion.  Criteria 1-10 map to
// the library verification suites; criterion 11 runs the CLI twice and
// byte-compares the reports.
//
// Usage: acceptance [criterion-number]

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "sc/suites.hpp"

#ifndef STRONGCONVERSE_CLI_PATH
#define STRONGCONVERSE_CLI_PATH "strongconverse"
#endif

namespace {

struct criterion {
    int number;
    const char* label;
    const char* suite;  // nullptr for the determinism criterion
};

const std::vector<criterion> criteria = {
    {1, "divergence axioms (monotonicity, DPI, alpha->1 limits)", "axioms"},
    {2, "hypothesis-testing lower bound, 1000 random cases", "nagaoka"},
    {3, "separable-operator norm inequality with grid-certified nu", "king"},
    {4, "alpha-Holevo equals alpha-information radius (two routes)", "chi-alpha"},
    {5, "alpha -> 1 limits of the Renyi quantities", "limits"},
    {6, "closed forms: BSC, depolarizing, EB boundary", "closed-forms"},
    {7, "success-probability bound: replacement equality and EB sweep", "success-bound"},
    {8, "separability of protocol states across the Alice:Bob cut", "separability"},
    {9, "mutual-information chain bound, round by round", "chain"},
    {10, "two-copy additivity probe (slow)", "additivity"},
    {11, "byte-identical verify reports for a fixed seed", nullptr},
};

bool run_determinism() {
    const std::string cli = STRONGCONVERSE_CLI_PATH;
    const std::string out1 = "acceptance_report_1.json";
    const std::string out2 = "acceptance_report_2.json";
    const std::string cmd1 = cli + " verify --suite all --seed 7 --out " + out1;
    const std::string cmd2 = cli + " verify --suite all --seed 7 --out " + out2;
    const int rc1 = std::system(cmd1.c_str());
    const int rc2 = std::system(cmd2.c_str());
    if (rc1 != 0 || rc2 != 0) {
        std::printf("  verify runs exited with %d / %d\n", rc1, rc2);
        return false;
    }
    std::ifstream f1(out1, std::ios::binary), f2(out2, std::ios::binary);
    std::stringstream s1, s2;
    s1 << f1.rdbuf();
    s2 << f2.rdbuf();
    if (s1.str().empty() || s1.str() != s2.str()) {
        std::printf("  reports differ or are empty (%zu vs %zu bytes)\n", s1.str().size(),
                    s2.str().size());
        return false;
    }
    std::remove(out1.c_str());
    std::remove(out2.c_str());
    return true;
}

bool run_criterion(const criterion& c) {
    if (c.suite == nullptr) return run_determinism();
    sc::suite_result r = sc::run_suite(c.suite, 7, 20);
    if (!r.passed) {
        for (const auto& note : r.failure_notes) std::printf("  %s\n", note.c_str());
    }
    return r.passed;
}

}  // namespace

int main(int argc, char** argv) {
    int only = 0;
    if (argc > 1) only = std::atoi(argv[1]);

    int failures = 0;
    for (const auto& c : criteria) {
        if (only != 0 && c.number != only) continue;
        const bool ok = run_criterion(c);
        std::printf("%s criterion %2d: %s\n", ok ? "PASS" : "FAIL", c.number, c.label);
        std::fflush(stdout);
        if (!ok) ++failures;
    }
    return failures == 0 ? 0 : 1;
}
