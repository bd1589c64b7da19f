#pragma once

#include <string>
#include <vector>

#include "sc/serialize.hpp"

namespace sc {

struct run_config {
    std::string command;  // divergence | capacity | exponent | eb-check | simulate | verify
    std::string channel_arg;
    std::string rho_path;
    std::string sigma_path;
    double alpha = 2.0;
    bool umegaki = false;
    double rate = -1.0;
    std::vector<double> grid;
    std::uint64_t seed = 42;
    int budget_restarts = 20;
    std::string out_path;        // empty: stdout
    std::string format = "json";  // json | csv
    std::string suite = "all";
    int rounds = 2;
    int messages = 2;
    std::string protocol_path;
    bool radius = false;
    std::string decoder = "best";
};

// thrown by parse_cli when --help was requested; carries the help text
struct cli_help : std::exception {
    std::string text;
    explicit cli_help(std::string t) : text(std::move(t)) {}
    const char* what() const noexcept override { return text.c_str(); }
};

std::string tool_version();

// strict parsing: unknown flags are usage errors (exit code 2)
run_config parse_cli(const std::vector<std::string>& args);

// executes the command; returns the process exit code (0 success, 1 failed
// verification), writes the report to cfg.out_path or stdout
int run(const run_config& cfg);

}  // namespace sc
