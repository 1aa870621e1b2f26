#include "optsamp/cli/commands.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <thread>

int main(int argc, char** argv) {
    using namespace optsamp::cli;

    CLI::App app{"Energy-optimal aperiodic sampling: solve, compare, simulate and sweep"};
    CommandOptions opts;
    std::string config;
    std::string out;
    std::string schedule;
    std::uint64_t seed = 0;
    std::uint64_t cycles = 0;
    std::string format = "json";

    app.add_option("command", opts.command, "solve | evaluate | compare | simulate | sweep-mu | sweep-comm | sequences")
        ->required()
        ->check(CLI::IsMember(kCommands));
    app.add_option("--config,-c", config, "scenario file (JSON)")->required();
    auto* out_opt = app.add_option("--out,-o", out, "output file (default: stdout)");
    app.add_option("--format,-f", format, "output format")->check(CLI::IsMember({"json", "csv"}));
    auto* seed_opt = app.add_option("--seed", seed, "simulation seed, overrides sim.seed");
    auto* cycles_opt = app.add_option("--cycles", cycles, "simulated cycles, overrides sim.cycles")
                           ->check(CLI::PositiveNumber);
    auto* sched_opt = app.add_option("--schedule", schedule,
                                     "evaluate: schedule file, either {instants, tail} or a solve output");
    app.add_option("--policy", opts.policy, "simulate: policy to simulate")
        ->check(CLI::IsMember({"optimal", "periodic", "baseline"}));
    app.add_option("--workers,-j", opts.workers, "worker threads (0: hardware concurrency)");
    app.add_flag("--quiet,-q", opts.quiet, "no summary line on stderr");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    opts.config = config;
    if (*out_opt) opts.out = out;
    if (*seed_opt) opts.seed = seed;
    if (*cycles_opt) opts.cycles = cycles;
    if (*sched_opt) opts.schedule = schedule;
    opts.format = format == "csv" ? Format::Csv : Format::Json;
    if (opts.workers == 0) opts.workers = std::max(1u, std::thread::hardware_concurrency());

    return run_command(opts, std::cout, std::cerr);
}
