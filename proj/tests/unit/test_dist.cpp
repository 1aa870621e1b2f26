#include "oracles.hpp"

#include "optsamp/dist.hpp"
#include "optsamp/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

using namespace optsamp;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

double rel_err(double got, double want) { return std::abs(got - want) / std::abs(want); }
}  // namespace

TEST_CASE("from_mean recovers the requested mean") {
    // sigma values frozen from 40-digit evaluation of mean * sqrt(2/pi).
    const auto d = TteDistribution::from_mean(Family::Rayleigh, 4.846);
    CHECK(rel_err(d.sigma(), 3.8665485816506856) < 1e-15);
    const double by_quadrature =
        oracle::integrate([&](double t) { return t * oracle::rayleigh_pdf(t, d.sigma()); }, 0.0,
                          20.0 * d.sigma(), 256);
    CHECK(rel_err(by_quadrature, 4.846) < 1e-12);

    const auto unit = TteDistribution::from_mean(Family::Rayleigh, 1.0);
    CHECK(rel_err(unit.sigma(), 0.79788456080286536) < 1e-15);
    CHECK(rel_err(unit.mean(), 1.0) < 1e-15);

    CHECK_THROWS_AS(TteDistribution::from_mean(Family::Rayleigh, 0.0), ParameterError);
    CHECK_THROWS_AS(TteDistribution::from_mean(Family::Rayleigh, -1.0), ParameterError);
    CHECK_THROWS_AS(TteDistribution::rayleigh(0.0), ParameterError);
}

TEST_CASE("eval closed-form points") {
    const auto d = TteDistribution::rayleigh(1.0);
    const auto p = d.eval(1.0);
    CHECK(p.cdf == doctest::Approx(1.0 - std::exp(-0.5)).epsilon(1e-15));
    CHECK(p.cdf + p.ccdf == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(p.hazard == doctest::Approx(p.pdf / p.ccdf).epsilon(1e-14));

    const auto zero = TteDistribution::rayleigh(2.5).eval(0.0);
    CHECK(zero.pdf == 0.0);
    CHECK(zero.cdf == 0.0);
    CHECK(zero.ccdf == 1.0);
    CHECK(zero.hazard == 0.0);

    CHECK(d.hazard(2.0) == doctest::Approx(2.0));
    CHECK(d.hazard(1.0) == doctest::Approx(1.0));
    CHECK(d.hazard(2.0) > d.hazard(1.0));

    CHECK_THROWS_AS(d.eval(-1e-9), DomainError);
    CHECK_THROWS_AS(d.pdf(-1.0), DomainError);
}

TEST_CASE("ccdf underflow is flushed and flagged") {
    const auto d = TteDistribution::rayleigh(1.0);
    const auto far = d.eval(40.0);  // exp(-800)
    CHECK(far.ccdf == 0.0);
    CHECK(far.ccdf_underflow);
    CHECK(far.hazard_infinite);
    CHECK(std::isinf(far.hazard));
    CHECK(far.pdf == 0.0);

    const auto near = d.eval(30.0);  // exp(-450), representable
    CHECK_FALSE(near.ccdf_underflow);
    CHECK(near.ccdf > 0.0);
}

TEST_CASE("inverse_ccdf") {
    const auto d = TteDistribution::rayleigh(1.0);
    CHECK(d.inverse_ccdf(std::exp(-0.5)) == doctest::Approx(1.0).epsilon(1e-15));

    const auto unit = TteDistribution::from_mean(Family::Rayleigh, 1.0);
    const double t = unit.inverse_ccdf(1e-22);
    CHECK(rel_err(t, 8.0310853999562003) < 1e-14);
    CHECK(rel_err(unit.ccdf(t), 1e-22) < 1e-10);

    // 6 * mean: ccdf = exp(-9 pi).
    CHECK(rel_err(unit.ccdf(6.0), 5.2554851760064486e-13) < 1e-12);

    CHECK_THROWS_AS(d.inverse_ccdf(0.0), ParameterError);
    CHECK_THROWS_AS(d.inverse_ccdf(1.0), ParameterError);
    CHECK_THROWS_AS(d.inverse_ccdf(-0.1), ParameterError);
}

TEST_CASE("partial_expectation") {
    for (double mean : {0.3, 1.0, 4.846, 50.0}) {
        const auto d = TteDistribution::from_mean(Family::Rayleigh, mean);
        CHECK(std::abs(d.partial_expectation(0.0, kInf) - mean) < 1e-8 * mean);
        CHECK(d.partial_expectation(0.7 * mean, 0.7 * mean) == 0.0);
    }

    const auto d = TteDistribution::rayleigh(1.0);
    const double closed = d.partial_expectation(0.0, 1.0);
    const double gl = oracle::integrate([](double t) { return t * oracle::rayleigh_pdf(t, 1.0); }, 0.0, 1.0);
    CHECK(rel_err(closed, 0.24909373217951538) < 1e-13);
    CHECK(rel_err(closed, gl) < 1e-10);
    CHECK(rel_err(closed, partial_expectation_quadrature(d, 0.0, 1.0)) < 1e-10);

    CHECK(rel_err(d.partial_expectation(0.5, 2.5), 1.089229712907809) < 1e-13);

    // Closed form against both quadratures over a spread of intervals, including the tail.
    for (auto [a, b] : {std::pair{0.01, 0.02}, {0.3, 0.9}, {1.5, 1.6}, {2.0, 6.0}, {5.0, 7.0}}) {
        const double want =
            oracle::integrate([](double t) { return t * oracle::rayleigh_pdf(t, 1.0); }, a, b);
        CHECK(rel_err(d.partial_expectation(a, b), want) < 1e-10);
        CHECK(rel_err(partial_expectation_quadrature(d, a, b), want) < 1e-10);
    }
    CHECK(rel_err(partial_expectation_quadrature(d, 0.0, kInf), d.mean()) < 1e-10);

    CHECK_THROWS_AS(d.partial_expectation(2.0, 1.0), ParameterError);
}

TEST_CASE("excess mean integrates the survival function") {
    const auto d = TteDistribution::rayleigh(1.3);
    for (double a : {0.0, 0.5, 2.0, 4.0}) {
        const double want = oracle::integrate(
            [](double t) { return 1.0 - oracle::rayleigh_cdf(t, 1.3); }, a, a + 15.0, 128);
        CHECK(d.excess_mean(a) == doctest::Approx(want).epsilon(1e-10));
    }
}

TEST_CASE("distribution invariants") {
    const auto d = TteDistribution::from_mean(Family::Rayleigh, 2.0);
    const double s = d.sigma();

    // inverse_ccdf o ccdf on a log grid over [0.01 sigma, 10 sigma].
    for (int i = 0; i <= 200; ++i) {
        const double t = s * std::pow(10.0, -2.0 + 3.0 * i / 200.0);
        CHECK(rel_err(d.inverse_ccdf(d.ccdf(t)), t) < 1e-9);
    }

    double prev_hazard = -1.0;
    double prev_cdf = -1.0;
    for (int i = 0; i < 1000; ++i) {
        const double t = 12.0 * s * i / 999.0;
        const auto p = d.eval(t);
        CHECK(p.hazard >= prev_hazard);
        CHECK(p.cdf >= prev_cdf);
        CHECK(p.pdf >= 0.0);
        prev_hazard = p.hazard;
        prev_cdf = p.cdf;
    }

    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 8.0 * s);
    for (int i = 0; i < 500; ++i) {
        const double t = u(rng);
        CHECK(d.cdf(t) + d.ccdf(t) == doctest::Approx(1.0).epsilon(1e-15));
        const double a = u(rng), b = u(rng);
        CHECK(d.probability(std::min(a, b), std::max(a, b)) ==
              doctest::Approx(d.cdf(std::max(a, b)) - d.cdf(std::min(a, b))).epsilon(1e-12));
    }
}
