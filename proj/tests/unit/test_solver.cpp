#include "optsamp/errors.hpp"
#include "optsamp/solver.hpp"

#include <doctest.h>

#include <cmath>

using namespace optsamp;

namespace {
const TteDistribution kUnit = TteDistribution::from_mean(Family::Rayleigh, 1.0);
const PenaltyWeights kRatio21 = PenaltyWeights::from_ratio(21.0);
const PenaltyWeights kRatio = PenaltyWeights::from_ratio(21.7);
}  // namespace

TEST_CASE("initial bracket straddles the valid window") {
    const auto [low, high] = initial_bracket(kUnit, kRatio21);
    CHECK(low < 0.582);
    CHECK(high > 0.582);
    const double horizon = 6.0;
    CHECK(generate(kUnit, kRatio21, low, horizon).classification().kind == Validity::ViolatesPositive);
    CHECK(generate(kUnit, kRatio21, high, horizon).classification().kind == Validity::ViolatesDecreasing);

    // alpha/beta comparable to sigma: the low end has to be halved first.
    const auto heavy = PenaltyWeights::make(2.0, 1.0);
    const auto [hl, hh] = initial_bracket(kUnit, heavy);
    CHECK(hl < heavy.alpha_over_beta());
    CHECK(generate(kUnit, heavy, hl, 6.0).classification().kind == Validity::ViolatesPositive);
    CHECK(generate(kUnit, heavy, hh, 6.0).classification().kind == Validity::ViolatesDecreasing);
}

TEST_CASE("solve locates the valid window") {
    const auto r = solve(kUnit, kRatio);
    CHECK_FALSE(r.degraded);
    CHECK(r.t1_star >= 0.5815);
    CHECK(r.t1_star <= 0.5830);
    CHECK(r.schedule.valid());
    CHECK(r.schedule.last() >= 6.0);
    REQUIRE(r.schedule.tail());
    CHECK(*r.schedule.tail() > r.schedule.last());
    CHECK(r.iterations == static_cast<int>(r.bracket_trace.size()));

    // 60-digit reference for the boundary of the valid window at beta/alpha = 21.
    const auto r21 = solve(kUnit, kRatio21);
    CHECK(std::abs(r21.t1_star - 0.588829967827596) < 1e-9);
}

TEST_CASE("bisection trace") {
    const auto r = solve(kUnit, kRatio);
    const auto& trace = r.bracket_trace;
    REQUIRE(trace.size() > 10);
    const double width0 = trace.front().high - trace.front().low;
    for (std::size_t i = 0; i < trace.size(); ++i) {
        const auto& step = trace[i];
        CHECK(generate(kUnit, kRatio, step.low, r.horizon).classification().kind == Validity::ViolatesPositive);
        CHECK(generate(kUnit, kRatio, step.high, r.horizon).classification().kind == Validity::ViolatesDecreasing);
        CHECK(step.high - step.low == doctest::Approx(std::ldexp(width0, -static_cast<int>(i))).epsilon(1e-9));
        if (i > 0) {
            CHECK(step.low >= trace[i - 1].low);
            CHECK(step.high <= trace[i - 1].high);
        }
    }
    CHECK(trace.back().classification.valid());
}

TEST_CASE("solve scales with sigma and alpha") {
    const auto w = PenaltyWeights::make(1.0, 21.7);
    const auto w2 = PenaltyWeights::make(2.0, 21.7);
    const auto one = solve(kUnit, w);
    const auto two = solve(TteDistribution::from_mean(Family::Rayleigh, 2.0), w2);
    REQUIRE(one.schedule.size() == two.schedule.size());
    for (std::size_t i = 0; i < one.schedule.size(); ++i) {
        CHECK(std::abs(two.schedule.instants()[i] - 2.0 * one.schedule.instants()[i]) <=
              1e-10 * one.schedule.instants()[i]);
    }
    CHECK(two.breakdown.penalty == doctest::Approx(2.0 * one.breakdown.penalty).epsilon(1e-10));
}

TEST_CASE("perturbing t1 does not lower the penalty") {
    for (double mean : {1.0, 4.846}) {
        const auto d = TteDistribution::from_mean(Family::Rayleigh, mean);
        const auto r = solve(d, kRatio);
        for (double delta : {-1e-3, -1e-4, 1e-4, 1e-3}) {
            auto s = generate(d, kRatio, r.t1_star + delta, r.horizon);
            if (!s.valid()) s = s.valid_prefix();
            const auto b = penalty_components(append_tail(s, d, 1e-22), d, kRatio);
            CHECK(b.penalty >= r.breakdown.penalty);
        }
    }
}

TEST_CASE("solve failure modes") {
    SolverConfig tight;
    tight.t1_tolerance = 0.0;
    tight.max_iterations = 5;
    CHECK_THROWS_AS(solve(kUnit, kRatio, tight), ConvergenceError);
    try {
        solve(kUnit, kRatio, tight);
    } catch (const ConvergenceError& e) {
        CHECK(e.trace().size() == 5);
    }

    SolverConfig coarse;
    coarse.t1_tolerance = 1e-6;
    const auto degraded = solve(kUnit, kRatio, coarse);
    CHECK(degraded.degraded);
    CHECK(degraded.schedule.valid());
    CHECK(degraded.schedule.tail());
    CHECK(degraded.schedule.last() < degraded.horizon);

    SolverConfig bad;
    bad.horizon_multiplier = 1.0;
    CHECK_THROWS_AS(solve(kUnit, kRatio, bad), ParameterError);
    bad = {};
    bad.eps = 1.0;
    CHECK_THROWS_AS(solve(kUnit, kRatio, bad), ParameterError);
    bad = {};
    bad.bracket = std::pair{0.6, 0.5};
    CHECK_THROWS_AS(solve(kUnit, kRatio, bad), ParameterError);
}

TEST_CASE("explicit bracket and determinism") {
    SolverConfig cfg;
    cfg.bracket = std::pair{0.5, 0.7};
    const auto a = solve(kUnit, kRatio, cfg);
    const auto b = solve(kUnit, kRatio, cfg);
    CHECK(a.t1_star == b.t1_star);
    CHECK(a.schedule == b.schedule);
    CHECK(a.breakdown.penalty == b.breakdown.penalty);
    CHECK(a.bracket_trace.front().low == 0.5);
    CHECK(std::abs(a.t1_star - solve(kUnit, kRatio).t1_star) < 1e-12);
}
