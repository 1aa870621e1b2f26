#include "optsamp/sim.hpp"

#include "optsamp/errors.hpp"
#include "optsamp/philox.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>
#include <thread>
#include <vector>

namespace optsamp {

double Estimate::ci99() const noexcept { return kZ99 * std_error; }

std::optional<CycleResolution> resolve_cycle(const Schedule& s, double t) {
    if (!s.tail()) throw ContractError("resolve_cycle requires a schedule with a tail");
    if (!(t > 0.0)) throw ParameterError("resolve_cycle: event time must be positive");
    const auto& inst = s.instants();
    const auto it = std::lower_bound(inst.begin(), inst.end(), t);
    if (it != inst.end()) {
        return CycleResolution{static_cast<std::uint64_t>(it - inst.begin()) + 1, *it - t};
    }
    if (t <= *s.tail()) return CycleResolution{inst.size() + 1, *s.tail() - t};
    return std::nullopt;
}

std::optional<CycleOutcome> cycle_outcome(const Schedule& s, double tte, const PenaltyWeights& w,
                                          const DeviceProfile* profile) {
    const auto r = resolve_cycle(s, tte);
    if (!r) return std::nullopt;
    CycleOutcome out;
    out.tte = tte;
    out.samples = r->samples;
    out.wait = r->wait;
    const auto samples = static_cast<double>(r->samples);
    out.penalty_energy = w.alpha * samples + w.beta * r->wait;
    if (profile) {
        const double tx = (samples + 1.0) * profile->tau_c;
        out.full_energy = tx * profile->p_comm +
                          (tte + r->wait + profile->tau_s + 2.0 * profile->tau_c - tx) * profile->p_idle;
    }
    return out;
}

namespace {

// Running mean / sum of squared deviations, mergeable in a fixed order.
struct Moments {
    double n = 0.0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x) {
        n += 1.0;
        const double delta = x - mean;
        mean += delta / n;
        m2 += delta * (x - mean);
    }

    void merge(const Moments& o) {
        if (o.n == 0.0) return;
        if (n == 0.0) {
            *this = o;
            return;
        }
        const double total = n + o.n;
        const double delta = o.mean - mean;
        mean += delta * o.n / total;
        m2 += o.m2 + delta * delta * n * o.n / total;
        n = total;
    }

    Estimate estimate() const {
        Estimate e;
        e.mean = mean;
        e.std_error = n > 1.0 ? std::sqrt(m2 / (n - 1.0) / n) : 0.0;
        return e;
    }
};

struct BlockStats {
    Moments samples, wait, tte, penalty, full;
    std::uint64_t beyond_tail = 0;

    void merge(const BlockStats& o) {
        samples.merge(o.samples);
        wait.merge(o.wait);
        tte.merge(o.tte);
        penalty.merge(o.penalty);
        full.merge(o.full);
        beyond_tail += o.beyond_tail;
    }
};

BlockStats run_block(const Schedule& s, const TteDistribution& d, const PenaltyWeights& w,
                     const DeviceProfile* profile, const Philox4x32::Key& key,
                     std::uint64_t first, std::uint64_t last) {
    BlockStats st;
    for (std::uint64_t cycle = first; cycle < last; ++cycle) {
        for (std::uint32_t attempt = 0;; ++attempt) {
            const auto bits = Philox4x32::generate(
                {static_cast<std::uint32_t>(cycle), static_cast<std::uint32_t>(cycle >> 32), attempt, 0u},
                key);
            const double tte = d.inverse_ccdf(Philox4x32::to_open_unit(bits));
            const auto outcome = cycle_outcome(s, tte, w, profile);
            if (!outcome) {
                ++st.beyond_tail;
                continue;
            }
            st.samples.add(static_cast<double>(outcome->samples));
            st.wait.add(outcome->wait);
            st.tte.add(outcome->tte);
            st.penalty.add(outcome->penalty_energy);
            if (outcome->full_energy) st.full.add(*outcome->full_energy);
            break;
        }
    }
    return st;
}

SimReport simulate_impl(const Schedule& s, const TteDistribution& d, const PenaltyWeights& w,
                        const DeviceProfile* profile, const SimConfig& cfg) {
    if (cfg.cycles < 1) throw ParameterError("simulate: cycles must be at least 1");
    if (!s.tail()) throw ContractError("simulate requires a schedule with a tail");
    w.validate();
    if (profile && !(profile->tau_s < s.min_interval())) {
        std::ostringstream msg;
        msg << "processing delay tau_s=" << profile->tau_s << " s is not below sampling interval "
            << s.min_interval_index() << " (" << s.min_interval() << " s)";
        throw ContractError(msg.str());
    }

    const auto key = Philox4x32::key_from_seed(cfg.seed);
    const std::uint64_t blocks = (cfg.cycles + SimConfig::kBlockSize - 1) / SimConfig::kBlockSize;
    std::vector<BlockStats> partial(blocks);

    std::atomic<std::uint64_t> next{0};
    auto worker = [&] {
        for (std::uint64_t b = next++; b < blocks; b = next++) {
            const std::uint64_t first = b * SimConfig::kBlockSize;
            const std::uint64_t last = std::min(cfg.cycles, first + SimConfig::kBlockSize);
            partial[b] = run_block(s, d, w, profile, key, first, last);
        }
    };
    const unsigned threads =
        static_cast<unsigned>(std::min<std::uint64_t>(std::max(1u, cfg.workers), blocks));
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
    }

    BlockStats total;
    for (const auto& p : partial) total.merge(p);

    SimReport rep;
    rep.cycles = cfg.cycles;
    rep.seed = cfg.seed;
    rep.samples = total.samples.estimate();
    rep.wait = total.wait.estimate();
    rep.tte = total.tte.estimate();
    rep.penalty = total.penalty.estimate();
    if (profile) rep.full_energy = total.full.estimate();
    rep.beyond_tail_count = total.beyond_tail;
    return rep;
}

}  // namespace

SimReport simulate(const Schedule& s, const TteDistribution& d, const DeviceProfile& profile,
                   const SimConfig& cfg) {
    profile.validate();
    return simulate_impl(s, d, profile.weights(), &profile, cfg);
}

SimReport simulate(const Schedule& s, const TteDistribution& d, const PenaltyWeights& w,
                   const SimConfig& cfg) {
    return simulate_impl(s, d, w, nullptr, cfg);
}

}  // namespace optsamp
