#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace modcalc::cli {

enum ExitCode : int { kOk = 0, kFailure = 1, kValidation = 2, kNotConverged = 3 };

struct RunConfig {
    std::string command;
    std::string space;
    std::string family;
    std::string plan;
    std::string f;
    std::string g;
    std::vector<std::string> set;      // --E / --sources
    double p = 2.0;
    double q = 2.0;
    int lambda = 0;
    double tol = 1e-8;
    std::size_t max_hops = 3;
    std::uint64_t seed = 0;
    bool truncated = false;
    std::optional<double> mesh;        // delta
    std::optional<double> cap;         // M
    std::size_t steps = 5;
    std::string output;                // empty: stdout
    std::string csv;                   // optional CSV table
};

/// Parses argv; on --help or a usage error prints to out/err and returns the exit code.
std::optional<int> parse(int argc, const char* const* argv, RunConfig& config, std::ostream& out, std::ostream& err);

/// Thread cap from MODCALC_THREADS, else the hardware concurrency.
unsigned thread_cap();

int run(const RunConfig& config, std::ostream& out, std::ostream& err);

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace modcalc::cli
