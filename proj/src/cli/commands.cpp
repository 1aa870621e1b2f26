#include "optsamp/cli/commands.hpp"

#include "optsamp/cli/experiments.hpp"
#include "optsamp/comparators.hpp"
#include "optsamp/penalty.hpp"
#include "optsamp/sim.hpp"
#include "optsamp/solver.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

namespace optsamp::cli {

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

namespace {

class Csv {
public:
    explicit Csv(const std::vector<std::string>& header) { row(header); }

    void row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out_ << ',';
            out_ << cells[i];
        }
        out_ << '\n';
    }

    std::string str() const { return out_.str(); }

private:
    std::ostringstream out_;
};

std::string num(double v) { return format_number(v); }
std::string num(std::uint64_t v) { return std::to_string(v); }
std::string flag(bool b) { return b ? "true" : "false"; }

Json breakdown_json(const PenaltyBreakdown& b) {
    return {{"expected_samples", b.expected_samples},
            {"expected_wait", b.expected_wait},
            {"penalty", b.penalty},
            {"truncation_bound", b.truncation_bound}};
}

Json classification_json(const Classification& c) {
    return {{"kind", to_string(c.kind)}, {"index", c.index}};
}

Json weights_json(const PenaltyWeights& w) {
    return {{"alpha", w.alpha}, {"beta", w.beta}, {"normalized", w.normalized}};
}

Json schedule_json(const Schedule& s) {
    Json j = {{"instants", s.instants()}};
    if (s.tail()) j["tail"] = *s.tail();
    j["classification"] = classification_json(s.classification());
    return j;
}

Json solver_json(const SolverResult& r) {
    Json trace = Json::array();
    for (const auto& step : r.bracket_trace) {
        trace.push_back({{"low", step.low},
                         {"high", step.high},
                         {"midpoint", step.midpoint},
                         {"classification", classification_json(step.classification)}});
    }
    return {{"t1_star", r.t1_star},
            {"iterations", r.iterations},
            {"horizon", r.horizon},
            {"degraded", r.degraded},
            {"breakdown", breakdown_json(r.breakdown)},
            {"schedule", schedule_json(r.schedule)},
            {"bracket_trace", trace}};
}

Json comparison_json(const PolicyComparison& c) {
    return {{"mean", c.mean},
            {"weights", weights_json(c.weights)},
            {"optimal",
             {{"t1_star", c.optimal.t1_star},
              {"instants", c.optimal.schedule.size()},
              {"iterations", c.optimal.iterations},
              {"degraded", c.optimal.degraded},
              {"breakdown", breakdown_json(c.optimal.breakdown)}}},
            {"periodic",
             {{"period", c.periodic.policy.period},
              {"at_search_boundary", c.periodic.at_search_boundary},
              {"breakdown", breakdown_json(c.periodic.breakdown)}}},
            {"baseline",
             {{"period", c.baseline.period}, {"breakdown", breakdown_json(c.baseline_breakdown)}}},
            {"reductions_pct",
             {{"optimal_vs_periodic", c.reduction_optimal_vs_periodic()},
              {"optimal_vs_baseline", c.reduction_optimal_vs_baseline()},
              {"periodic_vs_baseline", c.reduction_periodic_vs_baseline()}}}};
}

const std::vector<std::string> kComparisonColumns = {
    "mean",
    "alpha",
    "beta",
    "t1_star",
    "optimal_instants",
    "period_periodic",
    "period_baseline",
    "penalty_optimal",
    "penalty_periodic",
    "penalty_baseline",
    "reduction_optimal_vs_periodic_pct",
    "reduction_optimal_vs_baseline_pct",
    "reduction_periodic_vs_baseline_pct",
    "solver_iterations",
    "solver_degraded",
    "periodic_at_boundary",
};

std::vector<std::string> comparison_cells(const PolicyComparison& c) {
    return {num(c.mean),
            num(c.weights.alpha),
            num(c.weights.beta),
            num(c.optimal.t1_star),
            num(static_cast<std::uint64_t>(c.optimal.schedule.size())),
            num(c.periodic.policy.period),
            num(c.baseline.period),
            num(c.optimal.breakdown.penalty),
            num(c.periodic.breakdown.penalty),
            num(c.baseline_breakdown.penalty),
            num(c.reduction_optimal_vs_periodic()),
            num(c.reduction_optimal_vs_baseline()),
            num(c.reduction_periodic_vs_baseline()),
            num(static_cast<std::uint64_t>(c.optimal.iterations)),
            flag(c.optimal.degraded),
            flag(c.periodic.at_search_boundary)};
}

std::string fixed(double v, int digits) {
    std::ostringstream s;
    s.setf(std::ios::fixed);
    s.precision(digits);
    s << v;
    return s.str();
}

CommandResult run_solve(const Scenario& sc) {
    const auto d = sc.distribution.make();
    const auto r = solve(d, sc.weights, sc.solver);
    CommandResult out;
    out.json = solver_json(r);
    Csv csv({"n", "t", "interval", "kind"});
    double prev = 0.0;
    const auto& inst = r.schedule.instants();
    for (std::size_t i = 0; i < inst.size(); ++i) {
        csv.row({num(static_cast<std::uint64_t>(i + 1)), num(inst[i]), num(inst[i] - prev), "instant"});
        prev = inst[i];
    }
    csv.row({num(static_cast<std::uint64_t>(inst.size() + 1)), num(*r.schedule.tail()),
             num(*r.schedule.tail() - prev), "tail"});
    out.csv = csv.str();
    out.summary = "t1*=" + format_number(r.t1_star) + " s, " + std::to_string(inst.size()) +
                  " instants, penalty=" + format_number(r.breakdown.penalty) +
                  (r.degraded ? " (degraded)" : "");
    return out;
}

ScheduleSpec schedule_from_file(const std::filesystem::path& path) {
    Json j;
    try {
        j = Json::parse(read_file(path));
    } catch (const Json::parse_error& e) {
        throw ConfigError("", path.string() + ": malformed JSON: " + e.what());
    }
    std::string where;
    const Json* node = &j;
    if (j.is_object() && j.contains("results") && j["results"].is_object() &&
        j["results"].contains("schedule")) {
        node = &j["results"]["schedule"];
        where = "/results/schedule";
    }
    if (!node->is_object() || !node->contains("instants") || !(*node)["instants"].is_array()) {
        throw ConfigError(where + "/instants", path.string() + ": expected an array of instants");
    }
    ScheduleSpec s;
    for (const auto& v : (*node)["instants"]) {
        if (!v.is_number()) throw ConfigError(where + "/instants", path.string() + ": expected numbers");
        s.instants.push_back(v.get<double>());
    }
    if (node->contains("tail")) {
        if (!(*node)["tail"].is_number()) throw ConfigError(where + "/tail", path.string() + ": expected a number");
        s.tail = (*node)["tail"].get<double>();
    }
    return s;
}

CommandResult run_evaluate(const CommandOptions& opts, const Scenario& sc) {
    ScheduleSpec spec;
    if (opts.schedule) {
        spec = schedule_from_file(*opts.schedule);
    } else if (sc.schedule) {
        spec = *sc.schedule;
    } else {
        throw ConfigError("/schedule", "evaluate needs a schedule in the scenario or --schedule");
    }
    const auto d = sc.distribution.make();
    const double tail = spec.tail.value_or(d.inverse_ccdf(sc.solver.eps));
    Schedule s;
    try {
        s = Schedule::from_instants(spec.instants, tail);
    } catch (const ParameterError& e) {
        throw ConfigError("/schedule", e.what());
    }
    const auto b = expected_penalty(s.instants(), tail, d, sc.weights);

    Json residuals = Json::array();
    for (std::size_t n = 1; n < s.size(); ++n) {
        residuals.push_back(stationarity_residual(s.instants(), d, sc.weights, n));
    }
    CommandResult out;
    out.json = {{"schedule", schedule_json(s)},
                {"breakdown", breakdown_json(b)},
                {"stationarity_residuals", residuals}};
    Csv csv({"instants", "tail", "classification", "classification_index", "expected_samples",
             "expected_wait", "penalty", "truncation_bound"});
    csv.row({num(static_cast<std::uint64_t>(s.size())), num(tail), to_string(s.classification().kind),
             num(static_cast<std::uint64_t>(s.classification().index)), num(b.expected_samples),
             num(b.expected_wait), num(b.penalty), num(b.truncation_bound)});
    out.csv = csv.str();
    out.summary = "penalty=" + format_number(b.penalty) + " (" + to_string(s.classification()) + ")";
    return out;
}

CommandResult run_compare(const Scenario& sc) {
    const auto c = compare_policies(sc);
    CommandResult out;
    out.json = comparison_json(c);
    Csv csv(kComparisonColumns);
    csv.row(comparison_cells(c));
    out.csv = csv.str();
    out.summary = "reduction vs periodic " + fixed(c.reduction_optimal_vs_periodic(), 2) +
                  "%, vs baseline " + fixed(c.reduction_optimal_vs_baseline(), 2) + "%";
    return out;
}

CommandResult sweep_result(const std::vector<SweepRow>& rows, const std::string& label) {
    CommandResult out;
    Json list = Json::array();
    std::vector<std::string> header;
    if (!rows.empty()) {
        for (const auto& p : rows.front().params) header.push_back(p.first);
    }
    header.insert(header.end(), kComparisonColumns.begin(), kComparisonColumns.end());
    Csv csv(header);
    for (const auto& r : rows) {
        Json params;
        std::vector<std::string> cells;
        for (const auto& [name, value] : r.params) {
            params[name] = value;
            cells.push_back(num(value));
        }
        const auto more = comparison_cells(r.comparison);
        cells.insert(cells.end(), more.begin(), more.end());
        csv.row(cells);
        list.push_back({{"params", params}, {"comparison", comparison_json(r.comparison)}});
    }
    out.json = {{"rows", list}};
    out.csv = csv.str();
    double lo = INFINITY;
    double hi = -INFINITY;
    for (const auto& r : rows) {
        lo = std::min(lo, r.comparison.reduction_optimal_vs_periodic());
        hi = std::max(hi, r.comparison.reduction_optimal_vs_periodic());
    }
    out.summary = std::to_string(rows.size()) + " " + label + " rows, reduction vs periodic " +
                  fixed(lo, 2) + "%.." + fixed(hi, 2) + "%";
    return out;
}

Json estimate_json(const Estimate& e) {
    return {{"mean", e.mean}, {"std_error", e.std_error}, {"ci99", e.ci99()}};
}

CommandResult run_simulate(const CommandOptions& opts, const Scenario& sc) {
    const auto d = sc.distribution.make();
    Schedule schedule;
    double period = 0.0;
    if (opts.policy == "optimal") {
        schedule = solve(d, sc.weights, sc.solver).schedule;
    } else if (opts.policy == "periodic") {
        const auto opt = optimal_period(d, sc.weights, sc.search_for(d), sc.solver.eps);
        period = opt.policy.period;
        schedule = periodic_schedule(opt.policy, d);
    } else if (opts.policy == "baseline") {
        period = sc.baseline_period;
        schedule = periodic_schedule({period, sc.solver.eps}, d);
    } else {
        throw ConfigError("", "unknown policy '" + opts.policy + "' (optimal, periodic, baseline)");
    }
    const auto analytic = expected_penalty(schedule.instants(), *schedule.tail(), d, sc.weights);

    SimConfig cfg;
    cfg.cycles = opts.cycles.value_or(sc.sim.cycles);
    cfg.seed = opts.seed.value_or(sc.sim.seed);
    cfg.workers = opts.workers;
    const auto rep = sc.device ? simulate(schedule, d, *sc.device, cfg)
                               : simulate(schedule, d, sc.weights, cfg);

    const double rel = std::abs(rep.penalty.mean - analytic.penalty) / analytic.penalty;
    const bool within = std::abs(rep.penalty.mean - analytic.penalty) <= rep.penalty.ci99();

    CommandResult out;
    Json j = {{"policy", opts.policy}};
    if (period > 0.0) j["period"] = period;
    j["cycles"] = rep.cycles;
    j["seed"] = rep.seed;
    j["samples"] = estimate_json(rep.samples);
    j["wait"] = estimate_json(rep.wait);
    j["tte"] = estimate_json(rep.tte);
    j["penalty"] = estimate_json(rep.penalty);
    if (rep.full_energy) j["full_energy"] = estimate_json(*rep.full_energy);
    j["beyond_tail_count"] = rep.beyond_tail_count;
    j["analytic"] = breakdown_json(analytic);
    j["relative_error"] = rel;
    j["within_ci99"] = within;
    out.json = j;

    Csv csv({"metric", "mean", "std_error", "ci99", "analytic"});
    csv.row({"samples", num(rep.samples.mean), num(rep.samples.std_error), num(rep.samples.ci99()),
             num(analytic.expected_samples)});
    csv.row({"wait", num(rep.wait.mean), num(rep.wait.std_error), num(rep.wait.ci99()),
             num(analytic.expected_wait)});
    csv.row({"tte", num(rep.tte.mean), num(rep.tte.std_error), num(rep.tte.ci99()), num(d.mean())});
    csv.row({"penalty", num(rep.penalty.mean), num(rep.penalty.std_error), num(rep.penalty.ci99()),
             num(analytic.penalty)});
    if (rep.full_energy) {
        csv.row({"full_energy", num(rep.full_energy->mean), num(rep.full_energy->std_error),
                 num(rep.full_energy->ci99()), ""});
    }
    out.csv = csv.str();
    out.summary = opts.policy + ": penalty " + format_number(rep.penalty.mean) + " +/- " +
                  format_number(rep.penalty.ci99()) + " (analytic " + format_number(analytic.penalty) + ")";
    return out;
}

CommandResult run_sequences(const Scenario& sc) {
    const auto d = sc.distribution.make();
    const std::vector<double> t1s =
        sc.sweep.t1.empty() ? std::vector<double>{0.581 * d.mean(), 0.582 * d.mean(), 0.5825 * d.mean(),
                                                  0.583 * d.mean(), 0.584 * d.mean()}
                            : sc.sweep.t1;
    CommandResult out;
    Json list = Json::array();
    Csv csv({"t1", "n", "t", "interval", "classification", "classification_index"});
    for (double t1 : t1s) {
        const auto traj = trajectory(d, sc.weights, t1, sc.sweep.count);
        const auto cls = Schedule::from_instants(traj).classification();
        double prev = 0.0;
        for (std::size_t i = 0; i < traj.size(); ++i) {
            csv.row({num(t1), num(static_cast<std::uint64_t>(i + 1)), num(traj[i]), num(traj[i] - prev),
                     to_string(cls.kind), num(static_cast<std::uint64_t>(cls.index))});
            prev = traj[i];
        }
        list.push_back({{"t1", t1}, {"instants", traj}, {"classification", classification_json(cls)}});
    }
    out.json = {{"sequences", list}};
    out.csv = csv.str();
    out.summary = std::to_string(t1s.size()) + " sequences";
    return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open " + path.string() + " for writing");
    f << text;
    f.close();
    if (!f) throw IoError("write to " + path.string() + " failed");
}

Json error_json(const std::string& kind, const std::string& message, int code) {
    return {{"error", {{"kind", kind}, {"message", message}, {"exit_code", code}}}};
}

}  // namespace

CommandResult execute(const CommandOptions& opts, const Scenario& sc) {
    CommandResult r;
    if (opts.command == "solve") {
        r = run_solve(sc);
    } else if (opts.command == "evaluate") {
        r = run_evaluate(opts, sc);
    } else if (opts.command == "compare") {
        r = run_compare(sc);
    } else if (opts.command == "simulate") {
        r = run_simulate(opts, sc);
    } else if (opts.command == "sweep-mu") {
        r = sweep_result(sweep_mu(sc, sc.sweep.mu.empty() ? kDefaultMuGrid : sc.sweep.mu, opts.workers),
                         "grid");
    } else if (opts.command == "sweep-comm") {
        r = sweep_result(sweep_comm(sc, sc.sweep.tau_c.empty() ? kDefaultTauCGrid : sc.sweep.tau_c,
                                    sc.sweep.p_comm.empty() ? kDefaultPcGrid : sc.sweep.p_comm,
                                    opts.workers),
                         "grid");
    } else if (opts.command == "sequences") {
        r = run_sequences(sc);
    } else {
        throw ConfigError("", "unknown command '" + opts.command + "'");
    }
    Json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["command"] = opts.command;
    Scenario echoed = sc;
    if (opts.seed) echoed.sim.seed = *opts.seed;
    if (opts.cycles) echoed.sim.cycles = *opts.cycles;
    doc["scenario_echo"] = scenario_echo(echoed);
    doc["results"] = std::move(r.json);
    r.json = std::move(doc);
    return r;
}

std::string render(const CommandResult& r, Format f) {
    return f == Format::Json ? r.json.dump(2) + "\n" : r.csv;
}

int run_command(const CommandOptions& opts, std::ostream& out, std::ostream& err) {
    auto fail = [&](const std::string& kind, const std::string& message, int code, Json extra = {}) {
        Json e = error_json(kind, message, code);
        if (!extra.is_null()) e["error"]["details"] = std::move(extra);
        err << e.dump() << '\n';
        return code;
    };
    try {
        const Scenario sc = load_scenario(opts.config);
        const CommandResult r = execute(opts, sc);
        const std::string text = render(r, opts.format);
        if (opts.out) {
            write_text(*opts.out, text);
        } else {
            out << text;
        }
        if (!opts.quiet) err << opts.command << ": " << r.summary << '\n';
        return kExitOk;
    } catch (const ConvergenceError& e) {
        Json trace = Json::array();
        for (const auto& s : e.trace()) {
            trace.push_back({{"low", s.low}, {"high", s.high}, {"midpoint", s.midpoint},
                             {"classification", classification_json(s.classification)}});
        }
        return fail(e.kind(), e.what(), kExitSolver, {{"bracket_trace", trace}});
    } catch (const NoValidWindowError& e) {
        return fail(e.kind(), e.what(), kExitSolver);
    } catch (const IoError& e) {
        return fail(e.kind(), e.what(), kExitIo);
    } catch (const ConfigError& e) {
        return fail(e.kind(), e.what(), kExitConfig, {{"path", e.path()}});
    } catch (const ParameterError& e) {
        return fail(e.kind(), e.what(), kExitConfig);
    } catch (const Error& e) {
        return fail(e.kind(), e.what(), kExitFailure);
    } catch (const std::exception& e) {
        return fail("internal", e.what(), kExitFailure);
    }
}

}  // namespace optsamp::cli
