#include "optsamp/cli/scenario.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace optsamp::cli {

namespace {

// Reads the members of one JSON object, remembering which keys were consumed so that
// anything left over can be reported as unknown.
class Object {
public:
    Object(const Json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) throw ConfigError(path_.empty() ? "/" : path_, "expected an object");
    }

    bool has(const std::string& key) const { return j_.contains(key); }
    std::string at(const std::string& key) const { return path_ + "/" + key; }
    const std::string& path() const { return path_; }

    const Json& get(const std::string& key) {
        seen_.insert(key);
        if (!j_.contains(key)) throw ConfigError(at(key), "required field is missing");
        return j_.at(key);
    }

    double number(const std::string& key) {
        const Json& v = get(key);
        if (!v.is_number()) throw ConfigError(at(key), "expected a number");
        return v.get<double>();
    }

    double positive(const std::string& key) {
        const double v = number(key);
        if (!(v > 0.0)) throw ConfigError(at(key), "must be positive");
        return v;
    }

    std::uint64_t count(const std::string& key) {
        const Json& v = get(key);
        if (!v.is_number_unsigned()) throw ConfigError(at(key), "expected a non-negative integer");
        return v.get<std::uint64_t>();
    }

    std::string string(const std::string& key) {
        const Json& v = get(key);
        if (!v.is_string()) throw ConfigError(at(key), "expected a string");
        return v.get<std::string>();
    }

    std::vector<double> numbers(const std::string& key) {
        const Json& v = get(key);
        if (!v.is_array()) throw ConfigError(at(key), "expected an array of numbers");
        std::vector<double> out;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (!v[i].is_number()) throw ConfigError(at(key) + "/" + std::to_string(i), "expected a number");
            out.push_back(v[i].get<double>());
        }
        return out;
    }

    Object child(const std::string& key) { return Object(get(key), at(key)); }

    void finish() const {
        for (const auto& item : j_.items()) {
            if (!seen_.count(item.key())) throw ConfigError(at(item.key()), "unknown field");
        }
    }

private:
    const Json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

template <class F>
void checked(const std::string& path, F&& f) {
    try {
        f();
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        throw ConfigError(path, e.what());
    }
}

DistributionSpec parse_distribution(Object o) {
    DistributionSpec d;
    checked(o.at("family"), [&] { d.family = parse_family(o.string("family")); });
    const bool mean = o.has("mean");
    const bool sigma = o.has("sigma");
    if (mean == sigma) throw ConfigError(o.at("mean"), "give exactly one of mean or sigma");
    if (mean) {
        d.mean = o.positive("mean");
    } else {
        const double s = o.positive("sigma");
        checked(o.at("sigma"), [&] { d.mean = TteDistribution::rayleigh(s).mean(); });
    }
    o.finish();
    return d;
}

DeviceProfile parse_device(Object o) {
    DeviceProfile p;
    p.tau_c = o.positive("tau_c");
    p.tau_s = o.positive("tau_s");
    p.p_comm = o.positive("P_c");
    p.p_idle = o.positive("P_0");
    // Descriptive only; tau_c is taken as given.
    if (o.has("frame_bytes")) o.positive("frame_bytes");
    if (o.has("link_bps")) o.positive("link_bps");
    if (!(p.p_comm > p.p_idle)) throw ConfigError(o.at("P_c"), "must exceed P_0");
    o.finish();
    return p;
}

PenaltyWeights parse_weights(Object o) {
    PenaltyWeights w;
    if (o.has("beta_over_alpha")) {
        if (o.has("alpha") || o.has("beta")) {
            throw ConfigError(o.at("beta_over_alpha"), "give either beta_over_alpha or alpha and beta");
        }
        const double r = o.positive("beta_over_alpha");
        w = PenaltyWeights::from_ratio(r);
    } else {
        const double a = o.positive("alpha");
        const double b = o.positive("beta");
        checked(o.at("alpha"), [&] { w = PenaltyWeights::make(a, b); });
        w.normalized = true;
    }
    o.finish();
    return w;
}

SolverConfig parse_solver(Object o) {
    SolverConfig c;
    if (o.has("horizon_multiplier")) c.horizon_multiplier = o.number("horizon_multiplier");
    if (o.has("eps")) c.eps = o.number("eps");
    if (o.has("bracket")) {
        const auto b = o.numbers("bracket");
        if (b.size() != 2) throw ConfigError(o.at("bracket"), "expected [low, high]");
        c.bracket = std::pair{b[0], b[1]};
    }
    if (o.has("t1_tolerance")) c.t1_tolerance = o.number("t1_tolerance");
    if (o.has("max_iterations")) {
        const auto n = o.count("max_iterations");
        if (n < 1 || n > 100000) throw ConfigError(o.at("max_iterations"), "must lie in [1, 100000]");
        c.max_iterations = static_cast<int>(n);
    }
    o.finish();
    checked(o.path(), [&] { c.validate(); });
    return c;
}

PeriodSearch parse_search(Object o) {
    PeriodSearch s;
    s.t_min = o.number("t_min");
    s.t_max = o.number("t_max");
    s.tolerance = o.number("tolerance");
    o.finish();
    checked(o.path(), [&] { s.validate(); });
    return s;
}

SimSpec parse_sim(Object o) {
    SimSpec s;
    if (o.has("cycles")) {
        s.cycles = o.count("cycles");
        if (s.cycles < 1) throw ConfigError(o.at("cycles"), "must be at least 1");
    }
    if (o.has("seed")) s.seed = o.count("seed");
    o.finish();
    return s;
}

ScheduleSpec parse_schedule(Object o) {
    ScheduleSpec s;
    s.instants = o.numbers("instants");
    if (o.has("tail")) s.tail = o.number("tail");
    o.finish();
    checked(o.path(), [&] { Schedule::from_instants(s.instants, s.tail); });
    return s;
}

void require_positive(Object& o, const std::string& key, const std::vector<double>& v) {
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!(v[i] > 0.0)) throw ConfigError(o.at(key) + "/" + std::to_string(i), "must be positive");
    }
}

SweepSpec parse_sweep(Object o) {
    SweepSpec s;
    for (auto [key, field] : {std::pair{"mu", &s.mu}, std::pair{"tau_c", &s.tau_c},
                              std::pair{"P_c", &s.p_comm}, std::pair{"t1", &s.t1}}) {
        if (o.has(key)) {
            *field = o.numbers(key);
            require_positive(o, key, *field);
        }
    }
    if (o.has("count")) {
        s.count = o.count("count");
        if (s.count < 1 || s.count > 100000) throw ConfigError(o.at("count"), "must lie in [1, 100000]");
    }
    o.finish();
    return s;
}

}  // namespace

Scenario parse_scenario(std::string_view text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw ConfigError("", std::string("malformed JSON: ") + e.what());
    }
    Object root(j, "");
    if (!root.has("schema_version")) throw ConfigError("/schema_version", "required field is missing");
    if (root.count("schema_version") != kSchemaVersion) {
        throw ConfigError("/schema_version", "unsupported version, expected " + std::to_string(kSchemaVersion));
    }

    Scenario s;
    s.distribution = parse_distribution(root.child("distribution"));

    const bool device = root.has("device");
    const bool weights = root.has("weights");
    if (device && weights) throw ConfigError("/weights", "give either device or weights, not both");
    if (!device && !weights) throw ConfigError("/device", "one of device or weights is required");
    if (device) {
        s.device = parse_device(root.child("device"));
        s.weights = s.device->weights();
    } else {
        s.weights = parse_weights(root.child("weights"));
    }

    if (root.has("solver")) s.solver = parse_solver(root.child("solver"));
    if (root.has("baseline_period")) s.baseline_period = root.positive("baseline_period");
    if (root.has("periodic_search")) s.periodic_search = parse_search(root.child("periodic_search"));
    if (root.has("sim")) s.sim = parse_sim(root.child("sim"));
    if (root.has("schedule")) s.schedule = parse_schedule(root.child("schedule"));
    if (root.has("sweep")) s.sweep = parse_sweep(root.child("sweep"));
    if (root.has("description")) root.string("description");
    root.finish();
    return s;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw IoError("cannot read " + path.string());
    return buf.str();
}

Scenario load_scenario(const std::filesystem::path& path) { return parse_scenario(read_file(path)); }

Json scenario_echo(const Scenario& s) {
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["distribution"] = {{"family", std::string(family_name(s.distribution.family))}, {"mean", s.distribution.mean}};
    if (s.device) {
        j["device"] = {{"tau_c", s.device->tau_c},
                       {"tau_s", s.device->tau_s},
                       {"P_c", s.device->p_comm},
                       {"P_0", s.device->p_idle}};
    }
    j["weights"] = {{"alpha", s.weights.alpha},
                    {"beta", s.weights.beta},
                    {"normalized", s.weights.normalized}};
    Json solver = {{"horizon_multiplier", s.solver.horizon_multiplier},
                   {"eps", s.solver.eps},
                   {"max_iterations", s.solver.max_iterations}};
    if (s.solver.bracket) solver["bracket"] = {s.solver.bracket->first, s.solver.bracket->second};
    if (s.solver.t1_tolerance) solver["t1_tolerance"] = *s.solver.t1_tolerance;
    j["solver"] = solver;
    j["baseline_period"] = s.baseline_period;
    if (s.periodic_search) {
        j["periodic_search"] = {{"t_min", s.periodic_search->t_min},
                                {"t_max", s.periodic_search->t_max},
                                {"tolerance", s.periodic_search->tolerance}};
    }
    j["sim"] = {{"cycles", s.sim.cycles}, {"seed", s.sim.seed}};
    if (s.schedule) {
        Json sched = {{"instants", s.schedule->instants}};
        if (s.schedule->tail) sched["tail"] = *s.schedule->tail;
        j["schedule"] = sched;
    }
    return j;
}

}  // namespace optsamp::cli
