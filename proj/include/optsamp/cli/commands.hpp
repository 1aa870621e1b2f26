#pragma once

#include "optsamp/cli/scenario.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace optsamp::cli {

enum class Format { Json, Csv };

enum ExitCode : int {
    kExitOk = 0,
    kExitFailure = 1,
    kExitSolver = 2,
    kExitIo = 3,
    kExitConfig = 4,
};

inline const std::vector<std::string> kCommands = {"solve",    "evaluate",   "compare",  "simulate",
                                                   "sweep-mu", "sweep-comm", "sequences"};

struct CommandOptions {
    std::string command;
    std::filesystem::path config;
    std::optional<std::filesystem::path> out;  ///< stdout when absent
    Format format = Format::Json;
    std::optional<std::uint64_t> seed;    ///< overrides sim.seed
    std::optional<std::uint64_t> cycles;  ///< overrides sim.cycles
    std::optional<std::filesystem::path> schedule;  ///< evaluate: schedule or solve output file
    std::string policy = "optimal";                  ///< simulate: optimal | periodic | baseline
    unsigned workers = 1;
    bool quiet = false;
};

/// Artifact of one command in both output formats.
struct CommandResult {
    Json json;        ///< {schema_version, command, scenario_echo, results}
    std::string csv;  ///< header row then data rows
    std::string summary;
};

/// Run `opts.command` on a parsed scenario. Throws on failure.
CommandResult execute(const CommandOptions& opts, const Scenario& scenario);

/// Full command: load config, execute, write the artifact. Never throws; failures print a
/// JSON error object to `err` and return the matching exit code.
int run_command(const CommandOptions& opts, std::ostream& out, std::ostream& err);

/// Shortest round-trip decimal form used for every CSV number.
std::string format_number(double v);

std::string render(const CommandResult& r, Format f);

}  // namespace optsamp::cli
