#include "optsamp/cli/commands.hpp"
#include "optsamp/cli/experiments.hpp"
#include "optsamp/cli/scenario.hpp"

#include <doctest.h>

#include <cmath>
#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace optsamp;
using namespace optsamp::cli;

namespace {

const std::filesystem::path kScenarios = OPTSAMP_SCENARIO_DIR;

std::string config_error_path(const std::string& text) {
    try {
        parse_scenario(text);
    } catch (const ConfigError& e) {
        return e.path();
    }
    return "<accepted>";
}

std::filesystem::path scratch(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / "optsamp_unit";
    std::filesystem::create_directories(dir);
    return dir / name;
}

}  // namespace

TEST_CASE("device profile derives the weights") {
    const auto s = load_scenario(kScenarios / "glass.json");
    REQUIRE(s.device);
    CHECK(s.weights.alpha == doctest::Approx(5.85e-3 * (2.96 - 0.334)).epsilon(1e-14));
    CHECK(s.weights.beta == 0.334);
    CHECK(s.weights.beta / s.weights.alpha == doctest::Approx(21.7).epsilon(0.002));
    CHECK_FALSE(s.weights.normalized);
    CHECK(s.distribution.mean == 4.846);
    CHECK(s.baseline_period == 0.0833);
}

TEST_CASE("direct weights are accepted as normalized units") {
    const auto s = parse_scenario(R"({"schema_version": 1,
        "distribution": {"family": "rayleigh", "mean": 1},
        "weights": {"alpha": 1, "beta": 21}})");
    CHECK_FALSE(s.device);
    CHECK(s.weights.alpha == 1.0);
    CHECK(s.weights.beta == 21.0);
    CHECK(s.weights.normalized);

    const auto r = parse_scenario(R"({"schema_version": 1,
        "distribution": {"family": "rayleigh", "sigma": 1},
        "weights": {"beta_over_alpha": 21.7}})");
    CHECK(r.weights.beta == 21.7);
    CHECK(r.distribution.mean == doctest::Approx(std::sqrt(std::acos(-1.0) / 2.0)));
}

TEST_CASE("scenario errors carry the field path") {
    CHECK(config_error_path(read_file(kScenarios / "invalid_both_weights.json")) == "/weights");
    CHECK(config_error_path(R"({"distribution": {"family": "rayleigh", "mean": 1},
        "weights": {"alpha": 1, "beta": 21}})") == "/schema_version");
    CHECK(config_error_path(R"({"schema_version": 2, "distribution": {"family": "rayleigh", "mean": 1},
        "weights": {"alpha": 1, "beta": 21}})") == "/schema_version");
    CHECK(config_error_path(R"({"schema_version": 1, "distribution": {"family": "rayleigh", "mean": 1},
        "weights": {"alpha": 1, "beta": 21, "gamma": 3}})") == "/weights/gamma");
    CHECK(config_error_path(R"({"schema_version": 1, "distribution": {"family": "rayleigh", "mean": 1},
        "weights": {"alpha": 1, "beta": 21}, "extra": true})") == "/extra");
    CHECK(config_error_path(R"({"schema_version": 1, "distribution": {"family": "weibull", "mean": 1},
        "weights": {"alpha": 1, "beta": 21}})") == "/distribution/family");
    CHECK(config_error_path(R"({"schema_version": 1, "distribution": {"family": "rayleigh", "mean": -1},
        "weights": {"alpha": 1, "beta": 21}})") == "/distribution/mean");
    CHECK(config_error_path(R"({"schema_version": 1, "distribution": {"family": "rayleigh", "mean": 1},
        "device": {"tau_c": 0.005, "tau_s": 0.001, "P_c": 0.2, "P_0": 0.334}})") == "/device/P_c");
    CHECK(config_error_path(R"({"schema_version": 1, "distribution": {"family": "rayleigh", "mean": 1},
        "weights": {"alpha": 1, "beta": 21}, "sweep": {"mu": [1, "x"]}})") == "/sweep/mu/1");
    CHECK(config_error_path(R"({"schema_version": 1, "distribution": {"family": "rayleigh", "mean": 1},
        "weights": {"alpha": 1, "beta": 21}, "solver": {"eps": 2}})") == "/solver");
    CHECK(config_error_path("{not json") == "");
}

TEST_CASE("percentage reductions") {
    CHECK(percent_reduction(90.0, 100.0) == doctest::Approx(10.0));
    CHECK(percent_reduction(100.0, 100.0) == 0.0);
    CHECK(percent_reduction(110.0, 100.0) == doctest::Approx(-10.0));
}

TEST_CASE("sweep rows reproduce their reductions from their penalties") {
    auto s = load_scenario(kScenarios / "sweep_mu.json");
    const auto rows = sweep_mu(s, {1.0, 5.0, 10.0}, 3);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].params.front().second == 1.0);
    CHECK(rows[2].params.front().second == 10.0);
    for (const auto& r : rows) {
        const auto& c = r.comparison;
        CHECK(c.reduction_optimal_vs_periodic() ==
              100.0 * (1.0 - c.optimal.breakdown.penalty / c.periodic.breakdown.penalty));
        CHECK(c.reduction_optimal_vs_baseline() ==
              100.0 * (1.0 - c.optimal.breakdown.penalty / c.baseline_breakdown.penalty));
    }

    CommandOptions opts;
    opts.command = "sweep-mu";
    s.sweep.mu = {2.0, 4.0};
    const auto out = execute(opts, s);
    for (const auto& row : out.json["results"]["rows"]) {
        const auto& c = row["comparison"];
        const double opt = c["optimal"]["breakdown"]["penalty"].get<double>();
        const double per = c["periodic"]["breakdown"]["penalty"].get<double>();
        const double base = c["baseline"]["breakdown"]["penalty"].get<double>();
        CHECK(c["reductions_pct"]["optimal_vs_periodic"].get<double>() == percent_reduction(opt, per));
        CHECK(c["reductions_pct"]["optimal_vs_baseline"].get<double>() == percent_reduction(opt, base));
        CHECK(c["reductions_pct"]["periodic_vs_baseline"].get<double>() == percent_reduction(per, base));
    }
}

TEST_CASE("sweep ordering does not depend on the worker count") {
    const auto s = load_scenario(kScenarios / "sweep_comm.json");
    const auto one = sweep_comm(s, {0.001, 0.02}, {0.5, 5.0}, 1);
    const auto many = sweep_comm(s, {0.001, 0.02}, {0.5, 5.0}, 4);
    REQUIRE(one.size() == 4);
    for (std::size_t i = 0; i < one.size(); ++i) {
        CHECK(one[i].params == many[i].params);
        CHECK(one[i].comparison.optimal.breakdown.penalty == many[i].comparison.optimal.breakdown.penalty);
    }
    CHECK(one[1].params[0].second == 0.001);
    CHECK(one[1].params[1].second == 5.0);
}

TEST_CASE("solve output evaluates to the identical penalty") {
    const auto solved = scratch("solve.json");
    CommandOptions opts;
    opts.command = "solve";
    opts.config = kScenarios / "glass.json";
    opts.out = solved;
    opts.quiet = true;
    std::ostringstream out, err;
    REQUIRE(run_command(opts, out, err) == kExitOk);

    const auto doc = Json::parse(read_file(solved));
    CHECK(doc["schema_version"] == 1);
    CHECK(doc["command"] == "solve");
    CHECK(doc.contains("scenario_echo"));
    const double solved_penalty = doc["results"]["breakdown"]["penalty"].get<double>();

    CommandOptions eval = opts;
    eval.command = "evaluate";
    eval.schedule = solved;
    eval.out = scratch("evaluate.json");
    REQUIRE(run_command(eval, out, err) == kExitOk);
    const auto evaluated = Json::parse(read_file(*eval.out));
    CHECK(evaluated["results"]["breakdown"]["penalty"].get<double>() == solved_penalty);
    CHECK(evaluated["results"]["schedule"]["classification"]["kind"] == "Valid");
}

TEST_CASE("csv output") {
    CHECK(format_number(0.1) == "0.1");
    CHECK(format_number(1e-22) == "1e-22");
    CHECK(format_number(4.846) == "4.846");

    CommandOptions opts;
    opts.command = "compare";
    const auto r = execute(opts, load_scenario(kScenarios / "glass.json"));
    std::istringstream csv(r.csv);
    std::string header, row, extra;
    REQUIRE(std::getline(csv, header));
    REQUIRE(std::getline(csv, row));
    CHECK_FALSE(std::getline(csv, extra));
    CHECK(header.rfind("mean,alpha,beta,t1_star,", 0) == 0);
    CHECK(std::count(header.begin(), header.end(), ',') == std::count(row.begin(), row.end(), ','));
}

TEST_CASE("exit codes") {
    std::ostringstream out, err;
    CommandOptions opts;
    opts.command = "solve";
    opts.quiet = true;

    opts.config = kScenarios / "invalid_both_weights.json";
    CHECK(run_command(opts, out, err) == kExitConfig);
    const auto error = Json::parse(err.str());
    CHECK(error["error"]["kind"] == "config");
    CHECK(error["error"]["details"]["path"] == "/weights");

    err.str("");
    opts.config = kScenarios / "does_not_exist.json";
    CHECK(run_command(opts, out, err) == kExitIo);

    err.str("");
    opts.config = kScenarios / "glass.json";
    opts.out = std::filesystem::path("/nonexistent-dir/out.json");
    CHECK(run_command(opts, out, err) == kExitIo);

    const auto tight = scratch("tight.json");
    {
        std::ofstream f(tight);
        f << R"({"schema_version": 1, "distribution": {"family": "rayleigh", "mean": 1},
                 "weights": {"beta_over_alpha": 21.7},
                 "solver": {"t1_tolerance": 0, "max_iterations": 4}})";
    }
    err.str("");
    opts.config = tight;
    opts.out = scratch("tight_out.json");
    CHECK(run_command(opts, out, err) == kExitSolver);
    const auto conv = Json::parse(err.str());
    CHECK(conv["error"]["details"]["bracket_trace"].size() == 4);
}

TEST_CASE("seeded simulation is reproducible") {
    CommandOptions opts;
    opts.command = "simulate";
    opts.cycles = 20'000;
    opts.seed = 11;
    const auto s = load_scenario(kScenarios / "glass.json");
    const auto a = render(execute(opts, s), Format::Json);
    opts.workers = 3;
    const auto b = render(execute(opts, s), Format::Json);
    CHECK(a == b);
    opts.seed = 12;
    CHECK(render(execute(opts, s), Format::Json) != a);
}
