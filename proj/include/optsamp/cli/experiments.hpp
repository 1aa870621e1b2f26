#pragma once

#include "optsamp/cli/scenario.hpp"
#include "optsamp/comparators.hpp"
#include "optsamp/solver.hpp"

#include <string>
#include <utility>
#include <vector>

namespace optsamp::cli {

/// 100 (1 - a / b): how much lower penalty a is than penalty b, in percent of b.
double percent_reduction(double a, double b);

/// Optimal aperiodic, optimal periodic and fixed-period baseline policies on one scenario.
struct PolicyComparison {
    double mean = 0.0;
    PenaltyWeights weights;
    SolverResult optimal;
    PeriodicOptimum periodic;
    PeriodicPolicy baseline;
    PenaltyBreakdown baseline_breakdown;

    double reduction_optimal_vs_periodic() const;
    double reduction_optimal_vs_baseline() const;
    double reduction_periodic_vs_baseline() const;
};

PolicyComparison compare_policies(const TteDistribution& d, const PenaltyWeights& w,
                                  const SolverConfig& solver, double baseline_period,
                                  const PeriodSearch& search);
PolicyComparison compare_policies(const Scenario& s);

/// One grid point of a sweep: swept parameter values (name, value) plus the comparison.
struct SweepRow {
    std::vector<std::pair<std::string, double>> params;
    PolicyComparison comparison;
};

inline const std::vector<double> kDefaultMuGrid = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
inline const std::vector<double> kDefaultTauCGrid = {1e-3, 5.75e-3, 10.5e-3, 15.25e-3, 20e-3};
inline const std::vector<double> kDefaultPcGrid = {0.5, 1.625, 2.75, 3.875, 5.0};

/// Vary the mean TTE with the scenario weights fixed. Rows are ordered as `mu`.
std::vector<SweepRow> sweep_mu(const Scenario& s, const std::vector<double>& mu, unsigned workers);

/// Vary tau_c and P_c of the scenario device (P_0 and tau_s kept), row-major in tau_c.
std::vector<SweepRow> sweep_comm(const Scenario& s, const std::vector<double>& tau_c,
                                 const std::vector<double>& p_comm, unsigned workers);

}  // namespace optsamp::cli
