#pragma once

#include "optsamp/dist.hpp"
#include "optsamp/penalty.hpp"
#include "optsamp/schedule.hpp"

namespace optsamp {

/// Sample every `period` seconds until the event is caught.
struct PeriodicPolicy {
    double period = 0.0833;
    double truncation_eps = 1e-22;  ///< stop summing once ccdf(nT) drops below this

    void validate() const;
};

/// Largest number of summation terms periodic_penalty_components will take.
inline constexpr double kMaxPeriodicTerms = 1e9;

/// With instants nT: S = ceil(T_tte / T), so E[S] = sum_{n>=0} ccdf(nT) and
/// E[W] = T E[S] - E[T_tte].
PenaltyBreakdown periodic_penalty_components(const PeriodicPolicy& p, const TteDistribution& d,
                                             const PenaltyWeights& w);

struct PeriodSearch {
    double t_min = 0.0;
    double t_max = 0.0;
    double tolerance = 0.0;

    /// [1e-4 mean, 10 mean] with tolerance 1e-9 mean.
    static PeriodSearch defaults_for(const TteDistribution& d);
    void validate() const;
};

struct PeriodicOptimum {
    PeriodicPolicy policy;
    PenaltyBreakdown breakdown;
    /// Coarse-scan minimum sat on a search boundary; widen the range.
    bool at_search_boundary = false;
};

/// Minimise the periodic penalty over the period: 100-point log-spaced coarse scan picks a
/// bracket around the best point, then golden-section search narrows it to `tolerance`.
PeriodicOptimum optimal_period(const TteDistribution& d, const PenaltyWeights& w,
                               const PeriodSearch& search, double truncation_eps = 1e-22);

/// The periodic policy as an explicit schedule T, 2T, ..., (M-1)T with tail MT, where MT is
/// the first multiple at or beyond inverse_ccdf(truncation_eps).
Schedule periodic_schedule(const PeriodicPolicy& p, const TteDistribution& d);

}  // namespace optsamp
