#include "optsamp/schedule.hpp"

#include "optsamp/errors.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace optsamp {

PenaltyWeights PenaltyWeights::make(double alpha, double beta, bool normalized) {
    PenaltyWeights w{alpha, beta, normalized};
    w.validate();
    return w;
}

PenaltyWeights PenaltyWeights::from_ratio(double beta_over_alpha) {
    return make(1.0, beta_over_alpha, true);
}

void PenaltyWeights::validate() const {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw ParameterError("alpha must be positive");
    if (!(beta > 0.0) || !std::isfinite(beta)) throw ParameterError("beta must be positive");
}

void DeviceProfile::validate() const {
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v)) {
            throw ParameterError(std::string(name) + " must be positive");
        }
    };
    positive(tau_c, "tau_c");
    positive(tau_s, "tau_s");
    positive(p_comm, "P_c");
    positive(p_idle, "P_0");
    if (!(p_comm > p_idle)) throw ParameterError("P_c must exceed P_0");
}

PenaltyWeights DeviceProfile::weights() const {
    validate();
    return PenaltyWeights::make(tau_c * (p_comm - p_idle), p_idle, false);
}

std::string to_string(Validity v) {
    switch (v) {
        case Validity::Valid: return "Valid";
        case Validity::ViolatesPositive: return "ViolatesPositive";
        case Validity::ViolatesDecreasing: return "ViolatesDecreasing";
    }
    return "Unknown";
}

std::string to_string(const Classification& c) {
    if (c.valid()) return "Valid";
    return to_string(c.kind) + "(" + std::to_string(c.index) + ")";
}

Schedule Schedule::from_instants(std::vector<double> instants, std::optional<double> tail) {
    if (instants.empty()) throw ParameterError("schedule needs at least one instant");
    for (double t : instants) {
        if (!std::isfinite(t)) throw ParameterError("schedule instants must be finite");
    }
    if (!(instants.front() > 0.0)) throw ParameterError("first instant must be positive");
    if (tail && !(*tail > instants.back())) {
        throw ParameterError("tail instant must exceed the last instant");
    }

    Classification c;
    double prev = 0.0;
    for (std::size_t i = 0; i + 1 < instants.size(); ++i) {
        const double step = instants[i + 1] - instants[i];
        const double prev_step = instants[i] - prev;
        const std::size_t n = i + 1;
        if (!(step > 0.0)) {
            c = {Validity::ViolatesPositive, n};
            break;
        }
        if (!(step < prev_step)) {
            c = {Validity::ViolatesDecreasing, n};
            break;
        }
        prev = instants[i];
    }
    return Schedule(std::move(instants), c, tail);
}

Schedule Schedule::valid_prefix() const {
    return Schedule(instants_, Classification{}, std::nullopt);
}

Schedule Schedule::with_tail(double tail) const {
    if (!(tail > instants_.back())) {
        throw ParameterError("tail instant must exceed the last instant");
    }
    return Schedule(instants_, classification_, tail);
}

std::vector<double> Schedule::points() const {
    std::vector<double> out = instants_;
    if (tail_) out.push_back(*tail_);
    return out;
}

std::size_t Schedule::min_interval_index() const {
    const auto pts = points();
    std::size_t best = 1;
    double best_gap = pts.front();
    for (std::size_t i = 1; i < pts.size(); ++i) {
        const double gap = pts[i] - pts[i - 1];
        if (gap < best_gap) {
            best_gap = gap;
            best = i + 1;
        }
    }
    return best;
}

double Schedule::min_interval() const {
    const auto pts = points();
    const std::size_t n = min_interval_index();
    return n == 1 ? pts[0] : pts[n - 1] - pts[n - 2];
}

double next_instant(const TteDistribution& d, const PenaltyWeights& w, double t_prev, double t_curr) {
    if (!(t_prev >= 0.0 && t_prev < t_curr) || !std::isfinite(t_curr)) {
        throw ParameterError("next_instant requires 0 <= t_prev < t_curr");
    }
    switch (d.family()) {
        case Family::Rayleigh: {
            const double s2 = d.sigma() * d.sigma();
            const double x = (t_curr - t_prev) * (t_curr + t_prev) / (2.0 * s2);
            if (x > 700.0) {
                throw OverflowError("exponent " + std::to_string(x) + " exceeds 700");
            }
            return t_curr + s2 / t_curr * std::expm1(x) - w.alpha_over_beta();
        }
    }
    return next_instant_general(d, w, t_prev, t_curr);
}

double next_instant_general(const TteDistribution& d, const PenaltyWeights& w, double t_prev,
                            double t_curr) {
    if (!(t_prev >= 0.0 && t_prev < t_curr) || !std::isfinite(t_curr)) {
        throw ParameterError("next_instant requires 0 <= t_prev < t_curr");
    }
    const double density = d.pdf(t_curr);
    if (density == 0.0) {
        throw SingularityError("density vanishes at t = " + std::to_string(t_curr));
    }
    const double step = d.probability(t_prev, t_curr) / density;
    if (!std::isfinite(step)) throw OverflowError("recursion step is not finite");
    return t_curr + step - w.alpha_over_beta();
}

Schedule generate(const TteDistribution& d, const PenaltyWeights& w, double t1, double horizon) {
    if (!(t1 > 0.0) || !std::isfinite(t1)) throw ParameterError("t1 must be positive");
    if (!(horizon > t1)) throw ParameterError("horizon must exceed t1");

    std::vector<double> instants{t1};
    double prev = 0.0;
    double curr = t1;
    while (true) {
        const std::size_t n = instants.size();
        double next = 0.0;
        try {
            next = next_instant(d, w, prev, curr);
        } catch (const OverflowError&) {
            return Schedule(std::move(instants), {Validity::ViolatesDecreasing, n}, std::nullopt);
        }
        const double step = next - curr;
        if (!(step > 0.0)) {
            return Schedule(std::move(instants), {Validity::ViolatesPositive, n}, std::nullopt);
        }
        if (!(step < curr - prev)) {
            return Schedule(std::move(instants), {Validity::ViolatesDecreasing, n}, std::nullopt);
        }
        instants.push_back(next);
        if (next >= horizon) {
            return Schedule(std::move(instants), Classification{}, std::nullopt);
        }
        if (instants.size() >= kMaxGeneratedInstants) {
            throw ResourceError("generate: instant limit reached before horizon");
        }
        prev = curr;
        curr = next;
    }
}

std::vector<double> trajectory(const TteDistribution& d, const PenaltyWeights& w, double t1,
                               std::size_t count) {
    if (!(t1 > 0.0)) throw ParameterError("t1 must be positive");
    std::vector<double> out{t1};
    double prev = 0.0;
    while (out.size() < count) {
        const double curr = out.back();
        if (!(curr > prev)) break;
        try {
            out.push_back(next_instant(d, w, prev, curr));
        } catch (const OverflowError&) {
            break;
        }
        prev = curr;
    }
    return out;
}

Schedule append_tail(const Schedule& s, const TteDistribution& d, double eps) {
    if (!s.valid()) throw ContractError("append_tail requires a Valid schedule");
    const double tail = d.inverse_ccdf(eps);
    if (!(tail > s.last())) {
        throw ParameterError("tail at eps does not exceed the last instant; eps too large for horizon");
    }
    return s.with_tail(tail);
}

}  // namespace optsamp
