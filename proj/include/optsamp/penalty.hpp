#pragma once

#include "optsamp/dist.hpp"
#include "optsamp/schedule.hpp"

#include <cstddef>
#include <span>

namespace optsamp {

/// Expected energy penalty split into its two drivers.
struct PenaltyBreakdown {
    double expected_samples = 0.0;  ///< E[S]
    double expected_wait = 0.0;     ///< E[W], seconds
    double penalty = 0.0;           ///< alpha E[S] + beta E[W], joules
    double truncation_bound = 0.0;  ///< bound on penalty not captured, joules
};

/// Expected penalty of sampling at `instants` then at `tail`, for any strictly increasing
/// instants. Per interval (t_{n-1}, t_n]: E[S] += n dF, E[W] += t_n dF - int t f(t) dt.
/// Mass beyond the tail is excluded and surfaced through truncation_bound.
PenaltyBreakdown expected_penalty(std::span<const double> instants, double tail,
                                  const TteDistribution& d, const PenaltyWeights& w);

/// expected_penalty() for a Valid schedule carrying a tail; throws ContractError otherwise.
PenaltyBreakdown penalty_components(const Schedule& s, const TteDistribution& d,
                                    const PenaltyWeights& w);

/// d(penalty)/d(t_n) = beta (F(t_n) - F(t_{n-1})) - f(t_n) (alpha + beta (t_{n+1} - t_n)),
/// for interior n in [1, N-1].
double stationarity_residual(std::span<const double> instants, const TteDistribution& d,
                             const PenaltyWeights& w, std::size_t n);
double stationarity_residual(const Schedule& s, const TteDistribution& d, const PenaltyWeights& w,
                             std::size_t n);

/// Bound on the error from optimising only up to t_horizon with a final sample at
/// inverse_ccdf(eps): (ccdf(t_h) - eps) (alpha + beta (inverse_ccdf(eps) - t_h)).
/// Zero when eps >= ccdf(t_horizon).
double truncation_error_bound(const TteDistribution& d, const PenaltyWeights& w,
                              double t_horizon, double eps);

}  // namespace optsamp
