#include "optsamp/solver.hpp"

#include <cmath>
#include <sstream>

namespace optsamp {

void SolverConfig::validate() const {
    if (!(horizon_multiplier > 1.0)) throw ParameterError("horizon_multiplier must exceed 1");
    if (!(eps > 0.0 && eps < 1.0)) throw ParameterError("eps must lie in (0, 1)");
    if (bracket && !(bracket->first > 0.0 && bracket->first < bracket->second)) {
        throw ParameterError("bracket must satisfy 0 < low < high");
    }
    if (t1_tolerance && !(*t1_tolerance >= 0.0)) {
        throw ParameterError("t1_tolerance must be non-negative");
    }
    if (max_iterations < 1) throw ParameterError("max_iterations must be positive");
}

double SolverConfig::tolerance_for(const TteDistribution& d) const {
    return t1_tolerance.value_or(kDefaultRelativeTolerance * d.mean());
}

namespace {

Classification classify(const TteDistribution& d, const PenaltyWeights& w, double t1,
                        double horizon) {
    if (t1 >= horizon) return {Validity::ViolatesDecreasing, 0};
    return generate(d, w, t1, horizon).classification();
}

}  // namespace

std::pair<double, double> initial_bracket(const TteDistribution& d, const PenaltyWeights& w,
                                          double horizon) {
    constexpr int kMaxExpansions = 60;
    double low = w.alpha_over_beta() * (1.0 + 1e-6);
    double high = d.median();

    int expansions = 0;
    Classification low_class = classify(d, w, low, horizon);
    while (low_class.kind != Validity::ViolatesPositive && expansions < kMaxExpansions) {
        low *= 0.5;
        low_class = classify(d, w, low, horizon);
        ++expansions;
    }
    expansions = 0;
    Classification high_class = classify(d, w, high, horizon);
    while (high_class.kind != Validity::ViolatesDecreasing && expansions < kMaxExpansions) {
        high *= 2.0;
        high_class = classify(d, w, high, horizon);
        ++expansions;
    }
    if (low_class.kind != Validity::ViolatesPositive ||
        high_class.kind != Validity::ViolatesDecreasing || !(low < high)) {
        std::ostringstream msg;
        msg << "no valid window: low=" << low << " (" << to_string(low_class) << "), high=" << high
            << " (" << to_string(high_class) << ")";
        throw NoValidWindowError(msg.str());
    }
    return {low, high};
}

std::pair<double, double> initial_bracket(const TteDistribution& d, const PenaltyWeights& w) {
    return initial_bracket(d, w, SolverConfig{}.horizon_multiplier * d.mean());
}

SolverResult solve(const TteDistribution& d, const PenaltyWeights& w, const SolverConfig& cfg) {
    cfg.validate();
    w.validate();
    const double horizon = cfg.horizon_multiplier * d.mean();
    const double tolerance = cfg.tolerance_for(d);

    auto [low, high] = cfg.bracket ? *cfg.bracket : initial_bracket(d, w, horizon);

    SolverResult result;
    result.horizon = horizon;

    std::optional<Schedule> accepted;
    double accepted_t1 = 0.0;
    std::optional<Schedule> longest;
    double longest_t1 = 0.0;

    int iteration = 0;
    bool stopped = false;
    for (; iteration < cfg.max_iterations; ++iteration) {
        if (high - low <= tolerance) {
            stopped = true;
            break;
        }
        const double mid = (low + high) / 2.0;
        if (!(mid > low && mid < high)) {
            stopped = true;
            break;
        }
        Schedule candidate = generate(d, w, mid, horizon);
        result.bracket_trace.push_back({low, high, mid, candidate.classification()});

        if (candidate.valid()) {
            accepted = std::move(candidate);
            accepted_t1 = mid;
            ++iteration;
            stopped = true;
            break;
        }
        if (!longest || candidate.size() >= longest->size()) {
            longest = candidate;
            longest_t1 = mid;
        }
        if (candidate.classification().kind == Validity::ViolatesPositive) {
            low = mid;
        } else {
            high = mid;
        }
    }

    if (!stopped) {
        throw ConvergenceError("bisection did not converge within " +
                                   std::to_string(cfg.max_iterations) + " iterations",
                               std::move(result.bracket_trace));
    }

    if (accepted) {
        result.t1_star = accepted_t1;
        result.schedule = append_tail(*accepted, d, cfg.eps);
    } else {
        if (!longest) {
            const double mid = (low + high) / 2.0;
            longest = generate(d, w, mid, horizon);
            longest_t1 = mid;
        }
        result.degraded = true;
        result.t1_star = longest_t1;
        result.schedule = append_tail(longest->valid_prefix(), d, cfg.eps);
    }
    result.iterations = iteration;
    result.breakdown = penalty_components(result.schedule, d, w);
    return result;
}

}  // namespace optsamp
