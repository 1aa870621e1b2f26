#include "optsamp/penalty.hpp"

#include "optsamp/errors.hpp"

#include <cmath>
#include <string>

namespace optsamp {

PenaltyBreakdown expected_penalty(std::span<const double> instants, double tail,
                                  const TteDistribution& d, const PenaltyWeights& w) {
    if (instants.empty()) throw ParameterError("expected_penalty: no instants");
    if (!(instants.front() > 0.0)) throw ParameterError("expected_penalty: t_1 must be positive");
    if (!(tail > instants.back())) throw ParameterError("expected_penalty: tail must exceed t_N");

    PenaltyBreakdown out;
    double prev = 0.0;
    auto add_interval = [&](std::size_t n, double t) {
        if (!(t > prev)) {
            throw ParameterError("expected_penalty: instants must be strictly increasing");
        }
        const double mass = d.probability(prev, t);
        out.expected_samples += static_cast<double>(n) * mass;
        out.expected_wait += t * mass - d.partial_expectation(prev, t);
        prev = t;
    };
    for (std::size_t i = 0; i < instants.size(); ++i) add_interval(i + 1, instants[i]);
    add_interval(instants.size() + 1, tail);

    out.penalty = w.alpha * out.expected_samples + w.beta * out.expected_wait;
    out.truncation_bound = truncation_error_bound(d, w, instants.back(), d.ccdf(tail));
    return out;
}

PenaltyBreakdown penalty_components(const Schedule& s, const TteDistribution& d,
                                    const PenaltyWeights& w) {
    if (!s.valid()) {
        throw ContractError("penalty_components requires a Valid schedule, got " +
                            to_string(s.classification()));
    }
    if (!s.tail()) throw ContractError("penalty_components requires a tail instant");
    return expected_penalty(s.instants(), *s.tail(), d, w);
}

double stationarity_residual(std::span<const double> instants, const TteDistribution& d,
                             const PenaltyWeights& w, std::size_t n) {
    if (n < 1 || n + 1 > instants.size()) {
        throw ParameterError("stationarity_residual: n=" + std::to_string(n) +
                             " is not an interior index");
    }
    const double prev = n == 1 ? 0.0 : instants[n - 2];
    const double curr = instants[n - 1];
    const double next = instants[n];
    return w.beta * d.probability(prev, curr) - d.pdf(curr) * (w.alpha + w.beta * (next - curr));
}

double stationarity_residual(const Schedule& s, const TteDistribution& d, const PenaltyWeights& w,
                             std::size_t n) {
    return stationarity_residual(s.instants(), d, w, n);
}

double truncation_error_bound(const TteDistribution& d, const PenaltyWeights& w,
                              double t_horizon, double eps) {
    const double residual_mass = d.ccdf(t_horizon);
    if (eps >= residual_mass) return 0.0;
    return (residual_mass - eps) * (w.alpha + w.beta * (d.inverse_ccdf(eps) - t_horizon));
}

}  // namespace optsamp
