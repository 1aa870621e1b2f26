#include "optsamp/comparators.hpp"

#include "optsamp/errors.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <vector>

namespace optsamp {

void PeriodicPolicy::validate() const {
    if (!(period > 0.0) || !std::isfinite(period)) throw ParameterError("period must be positive");
    if (!(truncation_eps > 0.0 && truncation_eps < 1.0)) {
        throw ParameterError("truncation_eps must lie in (0, 1)");
    }
}

PenaltyBreakdown periodic_penalty_components(const PeriodicPolicy& p, const TteDistribution& d,
                                             const PenaltyWeights& w) {
    p.validate();
    const double terms = d.inverse_ccdf(p.truncation_eps) / p.period + 2.0;
    if (terms > kMaxPeriodicTerms) {
        throw ResourceError("period " + std::to_string(p.period) + " needs more than 1e9 terms");
    }

    double samples = 0.0;
    std::size_t n = 0;
    for (;; ++n) {
        const double survival = d.ccdf(static_cast<double>(n) * p.period);
        if (survival < p.truncation_eps) break;
        samples += survival;
    }

    // Omitted terms: sum_{k>=n} ccdf(kT) <= ccdf(nT) + (1/T) int_{nT}^inf ccdf.
    const double cut = static_cast<double>(n) * p.period;
    const double omitted = d.ccdf(cut) + d.excess_mean(cut) / p.period;

    PenaltyBreakdown out;
    out.expected_samples = samples;
    out.expected_wait = p.period * samples - d.mean();
    out.penalty = w.alpha * out.expected_samples + w.beta * out.expected_wait;
    out.truncation_bound = (w.alpha + w.beta * p.period) * omitted;
    return out;
}

PeriodSearch PeriodSearch::defaults_for(const TteDistribution& d) {
    return {1e-4 * d.mean(), 10.0 * d.mean(), 1e-9 * d.mean()};
}

void PeriodSearch::validate() const {
    if (!(t_min > 0.0 && t_min < t_max)) throw ParameterError("period search needs 0 < t_min < t_max");
    if (!(tolerance > 0.0)) throw ParameterError("period search tolerance must be positive");
}

PeriodicOptimum optimal_period(const TteDistribution& d, const PenaltyWeights& w,
                               const PeriodSearch& search, double truncation_eps) {
    search.validate();
    auto objective = [&](double period) {
        return periodic_penalty_components({period, truncation_eps}, d, w).penalty;
    };

    constexpr std::size_t kScan = 100;
    std::array<double, kScan> grid{};
    const double log_lo = std::log(search.t_min);
    const double log_hi = std::log(search.t_max);
    std::size_t best = 0;
    double best_value = 0.0;
    for (std::size_t i = 0; i < kScan; ++i) {
        grid[i] = i + 1 == kScan ? search.t_max
                                 : std::exp(log_lo + (log_hi - log_lo) * static_cast<double>(i) /
                                                         static_cast<double>(kScan - 1));
        const double v = objective(grid[i]);
        if (i == 0 || v < best_value) {
            best = i;
            best_value = v;
        }
    }

    double a = grid[best == 0 ? 0 : best - 1];
    double b = grid[best + 1 == kScan ? kScan - 1 : best + 1];

    const double inv_phi = std::numbers::phi - 1.0;
    double c = b - inv_phi * (b - a);
    double e = a + inv_phi * (b - a);
    double fc = objective(c);
    double fe = objective(e);
    while (b - a > search.tolerance) {
        if (fc < fe) {
            b = e;
            e = c;
            fe = fc;
            c = b - inv_phi * (b - a);
            fc = objective(c);
        } else {
            a = c;
            c = e;
            fc = fe;
            e = a + inv_phi * (b - a);
            fe = objective(e);
        }
    }

    PeriodicOptimum out;
    out.policy = {(a + b) / 2.0, truncation_eps};
    out.breakdown = periodic_penalty_components(out.policy, d, w);
    out.at_search_boundary = best == 0 || best + 1 == kScan;
    return out;
}

Schedule periodic_schedule(const PeriodicPolicy& p, const TteDistribution& d) {
    p.validate();
    const double reach = d.inverse_ccdf(p.truncation_eps);
    const double count = std::ceil(reach / p.period);
    if (count > kMaxPeriodicTerms) throw ResourceError("periodic schedule too long");
    const auto m = static_cast<std::size_t>(std::max(count, 2.0));
    std::vector<double> instants;
    instants.reserve(m - 1);
    for (std::size_t n = 1; n < m; ++n) instants.push_back(static_cast<double>(n) * p.period);
    return Schedule::from_instants(std::move(instants), static_cast<double>(m) * p.period);
}

}  // namespace optsamp
