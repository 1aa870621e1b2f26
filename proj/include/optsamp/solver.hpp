#pragma once

#include "optsamp/dist.hpp"
#include "optsamp/errors.hpp"
#include "optsamp/penalty.hpp"
#include "optsamp/schedule.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace optsamp {

/// Bisection settings. The horizon t_nbar is horizon_multiplier * mean.
struct SolverConfig {
    double horizon_multiplier = 6.0;
    double eps = 1e-22;  ///< tail sample placed at inverse_ccdf(eps)
    std::optional<std::pair<double, double>> bracket;
    /// Stop once the bracket is this narrow (seconds). Defaults to
    /// kDefaultRelativeTolerance * mean.
    std::optional<double> t1_tolerance;
    int max_iterations = 200;

    static constexpr double kDefaultRelativeTolerance = 1e-15;

    void validate() const;
    double tolerance_for(const TteDistribution& d) const;
};

/// One bisection step: the bracket before the update, the midpoint tried and its class.
struct BracketStep {
    double low = 0.0;
    double high = 0.0;
    double midpoint = 0.0;
    Classification classification;
};

struct SolverResult {
    double t1_star = 0.0;
    Schedule schedule;  ///< Valid, tail appended
    PenaltyBreakdown breakdown;
    int iterations = 0;
    std::vector<BracketStep> bracket_trace;
    double horizon = 0.0;
    /// True when no midpoint stayed valid through the horizon before the bracket
    /// collapsed; schedule is then the longest valid prefix seen.
    bool degraded = false;
};

class NoValidWindowError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "no_valid_window"; }
};

class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, std::vector<BracketStep> trace)
        : Error(what), trace_(std::move(trace)) {}
    const char* kind() const noexcept override { return "convergence"; }
    const std::vector<BracketStep>& trace() const noexcept { return trace_; }

private:
    std::vector<BracketStep> trace_;
};

/// (low, high) with generate(low) ViolatesPositive and generate(high) ViolatesDecreasing.
/// Starts from (alpha/beta (1 + 1e-6), median) and halves/doubles the endpoints
/// at most 60 times each.
std::pair<double, double> initial_bracket(const TteDistribution& d, const PenaltyWeights& w,
                                          double horizon);
std::pair<double, double> initial_bracket(const TteDistribution& d, const PenaltyWeights& w);

/// Bisection on t_1 driven by the class of the generated sequence: ViolatesPositive raises
/// the low end, ViolatesDecreasing lowers the high end. Deterministic.
SolverResult solve(const TteDistribution& d, const PenaltyWeights& w, const SolverConfig& cfg = {});

}  // namespace optsamp
