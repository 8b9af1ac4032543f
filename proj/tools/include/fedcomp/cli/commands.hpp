#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace fedcomp::cli {

/// Process exit codes. Stable across platforms.
enum ExitCode : int {
    kOk = 0,
    kInfeasible = 1,
    kParseFailure = 2,
    kInvalidInstance = 3,
    kTrainingDivergence = 4,
    kUsageError = 64,
};

struct RunConfig {
    std::string subcommand;
    std::optional<std::filesystem::path> instance;
    std::optional<std::filesystem::path> usage;
    std::optional<std::filesystem::path> config;  // custom experiment for simulate
    std::optional<std::filesystem::path> report;  // saved simulate output for report
    std::optional<std::filesystem::path> out;
    std::optional<std::filesystem::path> json_out;
    std::optional<std::string> preset;  // weak_noniid | strong_noniid
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> reps;
    std::vector<std::string> methods;
    std::string format = "csv";  // report: csv | text
    bool gap = false;            // verify: replay selection against the subset oracle
};

int run_select(const RunConfig& config, std::ostream& out, std::ostream& err);
int run_verify(const RunConfig& config, std::ostream& out, std::ostream& err);
int run_partition(const RunConfig& config, std::ostream& out, std::ostream& err);
int run_simulate(const RunConfig& config, std::ostream& out, std::ostream& err);
int run_report(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Dispatches on config.subcommand, mapping errors to exit codes.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Full command-line entry point (argument parsing included).
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fedcomp::cli
