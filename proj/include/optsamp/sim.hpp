#pragma once

#include "optsamp/dist.hpp"
#include "optsamp/schedule.hpp"

#include <cstdint>
#include <optional>

namespace optsamp {

/// What happened in one monitoring cycle.
struct CycleOutcome {
    double tte = 0.0;             ///< realised time to event T
    std::uint64_t samples = 0;    ///< S, index of the successful sample
    double wait = 0.0;            ///< W = t_S - T
    double penalty_energy = 0.0;  ///< E_r = alpha S + beta W
    /// Terminal energy of the whole cycle,
    /// E = (S+1) tau_c P_c + (T + W + tau_s + 2 tau_c - (S+1) tau_c) P_0.
    /// Note the (S+1) transmissions here versus S in E_r; both are kept as printed
    /// in the model and their difference is a constant.
    std::optional<double> full_energy;
};

struct CycleResolution {
    std::uint64_t samples = 0;
    double wait = 0.0;
};

/// Successful sample for an event at time t: smallest n with t_n >= t over the instants
/// followed by the tail. Returns nullopt when t lies beyond the tail.
std::optional<CycleResolution> resolve_cycle(const Schedule& s, double t);

struct SimConfig {
    std::uint64_t cycles = 100'000;
    std::uint64_t seed = 1;
    unsigned workers = 1;

    /// Cycles per independent substream; results do not depend on `workers`.
    static constexpr std::uint64_t kBlockSize = 1u << 16;
};

/// Sample mean with its standard error.
struct Estimate {
    double mean = 0.0;
    double std_error = 0.0;
    /// Half-width of the 99% normal confidence interval.
    double ci99() const noexcept;
};

struct SimReport {
    std::uint64_t cycles = 0;
    std::uint64_t seed = 0;
    Estimate samples;
    Estimate wait;
    Estimate tte;
    Estimate penalty;
    std::optional<Estimate> full_energy;  ///< present when a device profile was given
    std::uint64_t beyond_tail_count = 0;  ///< draws past the tail, redrawn
};

inline constexpr double kZ99 = 2.5758293035489004;

/// Monte Carlo over `cycles` monitoring cycles. TTEs are drawn by inverse-CCDF transform of
/// Philox4x32-10 uniforms keyed by the seed, counter (cycle index, redraw attempt).
/// Requires a schedule with a tail and tau_s below its smallest sampling interval.
SimReport simulate(const Schedule& s, const TteDistribution& d, const DeviceProfile& profile,
                   const SimConfig& cfg);

/// Penalty-only variant for normalised weights (no full-energy estimate).
SimReport simulate(const Schedule& s, const TteDistribution& d, const PenaltyWeights& w,
                   const SimConfig& cfg);

/// Outcome of a single cycle for an event at `tte`; nullopt beyond the tail.
std::optional<CycleOutcome> cycle_outcome(const Schedule& s, double tte, const PenaltyWeights& w,
                                          const DeviceProfile* profile);

}  // namespace optsamp
