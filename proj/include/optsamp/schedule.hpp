#pragma once

#include "optsamp/dist.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace optsamp {

/// Weights of the energy penalty alpha*E[S] + beta*E[W].
struct PenaltyWeights {
    double alpha = 1.0;  ///< joules wasted per sample
    double beta = 1.0;   ///< idle power, watts
    bool normalized = false;  ///< alpha fixed to 1 J, only beta/alpha is physical

    static PenaltyWeights make(double alpha, double beta, bool normalized = false);
    static PenaltyWeights from_ratio(double beta_over_alpha);

    double alpha_over_beta() const noexcept { return alpha / beta; }
    void validate() const;
};

/// Radio/compute characteristics of the terminal.
struct DeviceProfile {
    double tau_c = 0.0;   ///< one-way communication delay, s
    double tau_s = 0.0;   ///< back-end processing delay, s
    double p_comm = 0.0;  ///< power while communicating, W
    double p_idle = 0.0;  ///< idle power, W

    void validate() const;
    /// alpha = tau_c (P_c - P_0), beta = P_0.
    PenaltyWeights weights() const;
};

enum class Validity { Valid, ViolatesPositive, ViolatesDecreasing };

std::string to_string(Validity v);

/// Validity of a generated sequence. For violations, `index` is the n at which
/// t_{n+1} - t_n broke the positive or decreasing interval condition.
struct Classification {
    Validity kind = Validity::Valid;
    std::size_t index = 0;

    bool valid() const noexcept { return kind == Validity::Valid; }
    bool operator==(const Classification&) const = default;
};

std::string to_string(const Classification& c);

/// Sampling instants t_1 < t_2 < ... < t_N of one monitoring cycle (t_0 = 0 implied),
/// optionally followed by a tail instant covering residual TTE mass.
class Schedule {
public:
    Schedule() = default;

    /// Classify arbitrary user-supplied instants by the interval conditions.
    /// Instants must be finite with t_1 > 0; tail, when given, must exceed t_N.
    static Schedule from_instants(std::vector<double> instants,
                                  std::optional<double> tail = std::nullopt);

    const std::vector<double>& instants() const noexcept { return instants_; }
    const std::optional<double>& tail() const noexcept { return tail_; }
    const Classification& classification() const noexcept { return classification_; }
    bool valid() const noexcept { return classification_.valid(); }
    std::size_t size() const noexcept { return instants_.size(); }
    double last() const { return instants_.back(); }

    /// Same instants reclassified as a valid (finite) prefix. Tail dropped.
    Schedule valid_prefix() const;
    /// Copy with the given tail instant; requires tail > last().
    Schedule with_tail(double tail) const;

    /// All instants followed by the tail (if any).
    std::vector<double> points() const;
    /// Smallest gap among (0, t_1], (t_{n-1}, t_n] and (t_N, tail].
    double min_interval() const;
    /// Index (1-based) of the interval achieving min_interval().
    std::size_t min_interval_index() const;

    bool operator==(const Schedule&) const = default;

private:
    Schedule(std::vector<double> instants, Classification c, std::optional<double> tail)
        : instants_(std::move(instants)), tail_(tail), classification_(c) {}

    friend Schedule generate(const TteDistribution&, const PenaltyWeights&, double, double);

    std::vector<double> instants_;
    std::optional<double> tail_;
    Classification classification_;
};

/// Upper bound on instants produced by one call to generate().
inline constexpr std::size_t kMaxGeneratedInstants = 1'000'000;

/// Stationarity recursion: the t_{n+1} that zeroes d(penalty)/d(t_n), given t_{n-1}, t_n.
/// Dispatches to the family's closed form (Rayleigh: exp form) when one exists.
/// Throws OverflowError when the Rayleigh exponent exceeds 700.
double next_instant(const TteDistribution& d, const PenaltyWeights& w, double t_prev, double t_curr);

/// Same recursion in the family-agnostic form t + (F(t) - F(t_prev)) / f(t) - alpha/beta.
double next_instant_general(const TteDistribution& d, const PenaltyWeights& w, double t_prev,
                            double t_curr);

/// Iterate next_instant from (0, t1) until an instant >= horizon is reached (Valid) or an
/// interval condition fails. The returned instants are the valid prefix.
Schedule generate(const TteDistribution& d, const PenaltyWeights& w, double t1, double horizon);

/// Raw iterates t_1..t_count without validity checks; stops early once the recursion is
/// undefined (non-increasing or overflowing).
std::vector<double> trajectory(const TteDistribution& d, const PenaltyWeights& w, double t1,
                               std::size_t count);

/// Append a final sample at inverse_ccdf(eps). Requires a Valid schedule.
Schedule append_tail(const Schedule& s, const TteDistribution& d, double eps);

}  // namespace optsamp
