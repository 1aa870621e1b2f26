#include "optsamp/cli/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>

namespace optsamp::cli {

double percent_reduction(double a, double b) { return 100.0 * (1.0 - a / b); }

double PolicyComparison::reduction_optimal_vs_periodic() const {
    return percent_reduction(optimal.breakdown.penalty, periodic.breakdown.penalty);
}

double PolicyComparison::reduction_optimal_vs_baseline() const {
    return percent_reduction(optimal.breakdown.penalty, baseline_breakdown.penalty);
}

double PolicyComparison::reduction_periodic_vs_baseline() const {
    return percent_reduction(periodic.breakdown.penalty, baseline_breakdown.penalty);
}

PolicyComparison compare_policies(const TteDistribution& d, const PenaltyWeights& w,
                                  const SolverConfig& solver, double baseline_period,
                                  const PeriodSearch& search) {
    PolicyComparison c;
    c.mean = d.mean();
    c.weights = w;
    c.optimal = solve(d, w, solver);
    c.periodic = optimal_period(d, w, search, solver.eps);
    c.baseline = {baseline_period, solver.eps};
    c.baseline_breakdown = periodic_penalty_components(c.baseline, d, w);
    return c;
}

PolicyComparison compare_policies(const Scenario& s) {
    const auto d = s.distribution.make();
    return compare_policies(d, s.weights, s.solver, s.baseline_period, s.search_for(d));
}

namespace {

// Runs task(i) for i in [0, n) on up to `workers` threads; results land by index.
void parallel_for(std::size_t n, unsigned workers, const std::function<void(std::size_t)>& task) {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::size_t failed_at = n;
    std::mutex mu;
    auto run = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                task(i);
            } catch (...) {
                std::lock_guard lock(mu);
                // Report the lowest failing index so errors do not depend on scheduling.
                if (i < failed_at) {
                    failed_at = i;
                    failure = std::current_exception();
                }
            }
        }
    };
    const auto threads = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, workers), n));
    if (threads <= 1) {
        run();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(run);
    }
    if (failure) std::rethrow_exception(failure);
}

}  // namespace

std::vector<SweepRow> sweep_mu(const Scenario& s, const std::vector<double>& mu, unsigned workers) {
    std::vector<SweepRow> rows(mu.size());
    parallel_for(mu.size(), workers, [&](std::size_t i) {
        const auto d = TteDistribution::from_mean(s.distribution.family, mu[i]);
        rows[i].params = {{"mu", mu[i]}};
        rows[i].comparison = compare_policies(d, s.weights, s.solver, s.baseline_period, s.search_for(d));
    });
    return rows;
}

std::vector<SweepRow> sweep_comm(const Scenario& s, const std::vector<double>& tau_c,
                                 const std::vector<double>& p_comm, unsigned workers) {
    if (!s.device) throw ConfigError("/device", "sweep-comm needs a device profile");
    const auto d = s.distribution.make();
    const auto search = s.search_for(d);
    std::vector<SweepRow> rows(tau_c.size() * p_comm.size());
    parallel_for(rows.size(), workers, [&](std::size_t i) {
        DeviceProfile p = *s.device;
        p.tau_c = tau_c[i / p_comm.size()];
        p.p_comm = p_comm[i % p_comm.size()];
        p.validate();
        rows[i].params = {{"tau_c", p.tau_c}, {"P_c", p.p_comm}};
        rows[i].comparison = compare_policies(d, p.weights(), s.solver, s.baseline_period, search);
    });
    return rows;
}

}  // namespace optsamp::cli
