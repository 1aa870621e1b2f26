#pragma once

#include <string_view>

namespace optsamp {

/// Distribution families for the time-to-event (TTE) of a monitoring cycle.
/// New families must provide pdf, cdf/ccdf, quantile and partial expectation;
/// everything downstream works off those primitives.
enum class Family { Rayleigh };

std::string_view family_name(Family f);
Family parse_family(std::string_view name);

/// Density, distribution and hazard at one point.
struct DistributionPoint {
    double pdf = 0.0;
    double cdf = 0.0;
    double ccdf = 1.0;
    double hazard = 0.0;
    bool ccdf_underflow = false;  ///< ccdf fell below 1e-300 and was clamped to 0
    bool hazard_infinite = false; ///< hazard reported as +inf because ccdf == 0
};

/// Probabilities below this are flushed to zero.
inline constexpr double kUnderflowThreshold = 1e-300;

/// Time-to-event distribution. Immutable value type, safe to share.
class TteDistribution {
public:
    /// Rayleigh with scale sigma (seconds), f(t) = t/sigma^2 exp(-t^2 / 2 sigma^2).
    static TteDistribution rayleigh(double sigma);

    /// Distribution of the given family whose expected value is `mean`.
    static TteDistribution from_mean(Family family, double mean);

    Family family() const noexcept { return family_; }
    double sigma() const noexcept { return scale_; }
    double mean() const noexcept;
    double median() const noexcept;

    double pdf(double t) const;
    double cdf(double t) const;
    double ccdf(double t) const;
    double hazard(double t) const;
    DistributionPoint eval(double t) const;

    /// P(a < T <= b), evaluated from whichever side keeps precision.
    double probability(double a, double b) const;

    /// t such that ccdf(t) == eps.
    double inverse_ccdf(double eps) const;

    /// Integral of t f(t) over [a, b]; b may be +infinity.
    double partial_expectation(double a, double b) const;

    /// E[(T - a)^+], integral of ccdf over [a, inf).
    double excess_mean(double a) const;

private:
    TteDistribution(Family family, double scale) : family_(family), scale_(scale) {}

    Family family_;
    double scale_;
};

/// Partial expectation by adaptive Gauss-Kronrod quadrature of t f(t)
/// (relative tolerance 1e-10). Used to validate closed forms and as the
/// fallback for families that have none.
double partial_expectation_quadrature(const TteDistribution& d, double a, double b);

}  // namespace optsamp
