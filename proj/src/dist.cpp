#include "optsamp/dist.hpp"

#include "optsamp/errors.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace optsamp {

namespace {

void require_time(double t) {
    if (!(t >= 0.0)) {
        throw DomainError("time must be non-negative, got " + std::to_string(t));
    }
}

double flush(double p) { return p < kUnderflowThreshold ? 0.0 : p; }

}  // namespace

std::string_view family_name(Family f) {
    switch (f) {
        case Family::Rayleigh: return "rayleigh";
    }
    return "unknown";
}

Family parse_family(std::string_view name) {
    if (name == "rayleigh" || name == "Rayleigh") return Family::Rayleigh;
    throw ParameterError("unknown distribution family '" + std::string(name) + "'");
}

TteDistribution TteDistribution::rayleigh(double sigma) {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
        throw ParameterError("Rayleigh sigma must be positive and finite");
    }
    return TteDistribution(Family::Rayleigh, sigma);
}

TteDistribution TteDistribution::from_mean(Family family, double mean) {
    if (!(mean > 0.0) || !std::isfinite(mean)) {
        throw ParameterError("mean must be positive and finite");
    }
    switch (family) {
        case Family::Rayleigh:
            return rayleigh(mean * std::sqrt(2.0 / std::numbers::pi));
    }
    throw ParameterError("unsupported family");
}

double TteDistribution::mean() const noexcept {
    return scale_ * std::sqrt(std::numbers::pi / 2.0);
}

double TteDistribution::median() const noexcept {
    return scale_ * std::sqrt(2.0 * std::numbers::ln2);
}

double TteDistribution::pdf(double t) const {
    require_time(t);
    const double s2 = scale_ * scale_;
    return flush(t / s2 * std::exp(-t * t / (2.0 * s2)));
}

double TteDistribution::cdf(double t) const {
    require_time(t);
    return -std::expm1(-t * t / (2.0 * scale_ * scale_));
}

double TteDistribution::ccdf(double t) const {
    require_time(t);
    return flush(std::exp(-t * t / (2.0 * scale_ * scale_)));
}

double TteDistribution::hazard(double t) const { return eval(t).hazard; }

DistributionPoint TteDistribution::eval(double t) const {
    require_time(t);
    DistributionPoint p;
    const double x = t * t / (2.0 * scale_ * scale_);
    const double raw_ccdf = std::exp(-x);
    p.cdf = -std::expm1(-x);
    p.ccdf = flush(raw_ccdf);
    p.ccdf_underflow = p.ccdf == 0.0;
    p.pdf = flush(t / (scale_ * scale_) * raw_ccdf);
    if (p.ccdf_underflow) {
        p.hazard = std::numeric_limits<double>::infinity();
        p.hazard_infinite = true;
    } else {
        p.hazard = t / (scale_ * scale_);
    }
    return p;
}

double TteDistribution::probability(double a, double b) const {
    require_time(a);
    if (a > b) throw ParameterError("probability: a must not exceed b");
    if (std::isinf(b)) return ccdf(a);
    if (cdf(b) <= 0.5) return cdf(b) - cdf(a);
    return ccdf(a) - ccdf(b);
}

double TteDistribution::inverse_ccdf(double eps) const {
    if (!(eps > 0.0 && eps < 1.0)) {
        throw ParameterError("inverse_ccdf: eps must lie in (0, 1)");
    }
    return scale_ * std::sqrt(-2.0 * std::log(eps));
}

double TteDistribution::partial_expectation(double a, double b) const {
    require_time(a);
    if (a > b) throw ParameterError("partial_expectation: a must not exceed b");
    if (a == b) return 0.0;

    // Antiderivative of t f(t): sigma sqrt(pi/2) erf(t / (sigma sqrt 2)) - t ccdf(t).
    const double k = scale_ * std::sqrt(std::numbers::pi / 2.0);
    const double inv = 1.0 / (scale_ * std::numbers::sqrt2);
    const double boundary_a = a * std::exp(-a * a / (2.0 * scale_ * scale_));
    if (std::isinf(b)) {
        return k * std::erfc(a * inv) + boundary_a;
    }
    const double boundary_b = b * std::exp(-b * b / (2.0 * scale_ * scale_));
    const double core = b * inv <= 1.0 ? std::erf(b * inv) - std::erf(a * inv)
                                       : std::erfc(a * inv) - std::erfc(b * inv);
    return k * core + boundary_a - boundary_b;
}

double TteDistribution::excess_mean(double a) const {
    require_time(a);
    return scale_ * std::sqrt(std::numbers::pi / 2.0) * std::erfc(a / (scale_ * std::numbers::sqrt2));
}

double partial_expectation_quadrature(const TteDistribution& d, double a, double b) {
    require_time(a);
    if (a > b) throw ParameterError("partial_expectation: a must not exceed b");
    if (a == b) return 0.0;
    auto integrand = [&d](double t) { return t * d.pdf(t); };
    double error = 0.0;
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        integrand, a, b, 15, 1e-10, &error);
}

}  // namespace optsamp
