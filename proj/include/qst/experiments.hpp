// experiments.hpp — command back ends for the qst CLI.
//
// Each command produces a ResultTable (written as CSV) plus a JSON manifest
// embedding the fully resolved configuration and seed, so every output file
// is reproducible from its manifest alone.  Identical config + seed yields
// byte-identical CSV.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qst/scheduler.hpp"

namespace qst {

inline constexpr const char* kVersion = "0.1.0";

struct RunConfig {
    std::string command;
    int n = 10;
    int n_lo = 2;
    int n_hi = 30;
    std::vector<int> n_list{5, 10, 20, 30};
    int steps = 40;             // fig3 step count / memory cap elsewhere
    double eta_target = 0.99;
    double delta = 0.1;
    int seeds = 20;
    std::uint64_t seed = 12345;
    double tau_window = 0.0;    // 0 → 6N/J default
    int grid = 2000;
    double j_kelvin = 0.0;      // 0 → natural units
    bool cooling = true;
    std::string out_dir = "out";

    void validate() const;
    SchedulerOptions scheduler_options() const;
};

struct ResultTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    void add_row(std::vector<std::string> row);
    std::string to_csv() const;
};

struct CommandResult {
    ResultTable table;
    std::string manifest_json;          // serialized run manifest
    std::vector<std::string> summary;   // printed to stdout
    bool pass = true;
};

CommandResult cmd_fig2(const RunConfig& config);
CommandResult cmd_fig3(const RunConfig& config);
CommandResult cmd_example5(const RunConfig& config);
CommandResult cmd_disorder_sweep(const RunConfig& config);
CommandResult cmd_verify(const RunConfig& config);

std::string format_number(double x);

struct OutputPaths {
    std::string csv;
    std::string manifest;
};

/// Writes <out_dir>/<command>.csv and <out_dir>/<command>_manifest.json.
OutputPaths write_outputs(const CommandResult& result, const RunConfig& config);

/// Runs the command, writes outputs, prints the summary.  Returns the
/// process exit code (0 iff all internal checks passed).
int run_command(const RunConfig& config);

}  // namespace qst
