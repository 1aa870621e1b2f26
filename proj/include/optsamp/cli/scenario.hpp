#pragma once

#include "optsamp/comparators.hpp"
#include "optsamp/dist.hpp"
#include "optsamp/errors.hpp"
#include "optsamp/schedule.hpp"
#include "optsamp/solver.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace optsamp::cli {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

/// Malformed or inconsistent scenario; `path` is a JSON pointer to the offending field.
class ConfigError : public Error {
public:
    ConfigError(std::string path, const std::string& message)
        : Error(path.empty() ? message : path + ": " + message), path_(std::move(path)) {}
    const char* kind() const noexcept override { return "config"; }
    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

/// File could not be read or written.
class IoError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "io"; }
};

struct DistributionSpec {
    Family family = Family::Rayleigh;
    double mean = 1.0;

    TteDistribution make() const { return TteDistribution::from_mean(family, mean); }
};

struct SimSpec {
    std::uint64_t cycles = 100'000;
    std::uint64_t seed = 1;
};

struct ScheduleSpec {
    std::vector<double> instants;
    std::optional<double> tail;
};

/// Grids for the sweep commands; empty means the command default.
struct SweepSpec {
    std::vector<double> mu;
    std::vector<double> tau_c;
    std::vector<double> p_comm;
    std::vector<double> t1;
    std::size_t count = 15;
};

struct Scenario {
    DistributionSpec distribution;
    std::optional<DeviceProfile> device;  ///< set when weights were derived from a device
    PenaltyWeights weights;
    SolverConfig solver;
    double baseline_period = 0.0833;
    std::optional<PeriodSearch> periodic_search;  ///< default: PeriodSearch::defaults_for
    SimSpec sim;
    std::optional<ScheduleSpec> schedule;
    SweepSpec sweep;

    PeriodSearch search_for(const TteDistribution& d) const {
        return periodic_search.value_or(PeriodSearch::defaults_for(d));
    }
};

/// Parse and validate a scenario document. Every failure is a ConfigError naming the field.
Scenario parse_scenario(std::string_view text);
Scenario load_scenario(const std::filesystem::path& path);

/// Normalised form of the scenario, with derived weights, as written into command outputs.
Json scenario_echo(const Scenario& s);

std::string read_file(const std::filesystem::path& path);

}  // namespace optsamp::cli
