#include "fedcomp/cli/commands.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "fedcomp/cli/io.hpp"

namespace fedcomp::cli {

namespace {

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

constexpr std::uint64_t kDefaultSeed = 1;

void emit(const std::optional<std::filesystem::path>& path, const std::string& text, std::ostream& out) {
    if (!path) {
        out << text;
        return;
    }
    std::ofstream file(*path, std::ios::binary | std::ios::trunc);
    if (!file) throw UsageError("cannot write " + path->string());
    file << text;
}

ExperimentSpec preset_spec(const std::string& name, std::uint64_t seed) {
    ExperimentSpec spec;
    if (name == "weak_noniid") {
        spec.data = weak_noniid_config(seed);
        spec.competing = weak_noniid_competing();
    } else if (name == "strong_noniid") {
        spec.data = strong_noniid_config(seed);
        spec.competing = strong_noniid_competing();
    } else {
        throw UsageError("unknown preset '" + name + "' (expected weak_noniid or strong_noniid)");
    }
    spec.seed = seed;
    return spec;
}

// Preset instances carry a benefit graph estimated from the seeded task.
Instance preset_instance(const std::string& name, std::uint64_t seed) {
    const ExperimentSpec spec = preset_spec(name, seed);
    const SyntheticTask task = generate(spec.data);
    return Instance(spec.data.n, Instance::from_edges(spec.data.n, spec.competing, {}).competing(),
                    estimate_benefit(task, spec.train, seed));
}

Instance resolve_instance(const RunConfig& config) {
    if (config.instance && config.preset) throw UsageError("--instance and --preset are mutually exclusive");
    if (config.instance) return instance_from_json(load_document(*config.instance));
    if (config.preset) return preset_instance(*config.preset, config.seed.value_or(kDefaultSeed));
    throw UsageError(config.subcommand + " needs --instance PATH or --preset NAME");
}

std::string describe_path(const PathWitness& path) {
    std::string s = "(";
    for (std::size_t k = 0; k < path.nodes.size(); ++k) s += (k ? ", v" : "v") + std::to_string(path.nodes[k] + 1);
    return s + ")";
}

}  // namespace

int run_select(const RunConfig& config, std::ostream& out, std::ostream&) {
    const Instance instance = resolve_instance(config);
    const SelectionResult result = select_all(instance);

    Json doc = instance_to_json(instance);
    doc["lop"] = lop(instance);
    const Json usage = usage_to_json(result.usage);
    doc["x"] = usage["x"];
    doc["closure"] = usage["closure"];
    doc["usage_edges"] = usage["usage_edges"];
    doc["trace"] = trace_to_json(result.trace);
    doc["feasible"] = assumption_holds(instance, result.usage);
    emit(config.out, write_document(doc), out);
    return kOk;
}

int run_verify(const RunConfig& config, std::ostream& out, std::ostream& err) {
    const Instance instance = resolve_instance(config);
    if (!config.usage) throw UsageError("verify needs --usage PATH");
    const UsageGraph usage = usage_from_json(load_document(*config.usage), instance.size());
    if (!usage_within_benefit(instance, usage)) throw InvalidInstance("usage graph contains an edge that is not a benefit edge");

    const bool closure_ok = assumption_holds(instance, usage);
    Json doc;
    doc["closure_check"] = closure_ok;
    if (instance.size() <= kMaxPathOracleNodes) {
        const bool paths_ok = feasible_by_paths(instance, usage);
        doc["path_check"] = paths_ok;
        if (paths_ok != closure_ok) err << "warning: closure and path checks disagree\n";
    } else {
        doc["path_check"] = "skipped";
        doc["note"] = "n exceeds the path-enumeration limit of " + std::to_string(kMaxPathOracleNodes) + "; closure check only";
    }

    Json violations = Json::array();
    for (const auto& [from, to] : competing_reachability_violations(instance, usage)) {
        const auto path = usage_path(usage, from, to);
        Json v;
        v["from"] = from;
        v["to"] = to;
        v["path"] = path ? path->nodes : std::vector<NodeId>{};
        violations.push_back(std::move(v));
        err << "violation: v" << from + 1 << " reaches competitor v" << to + 1;
        if (path) err << " via " << describe_path(*path);
        err << '\n';
    }
    doc["violations"] = std::move(violations);

    if (config.gap) {
        Json steps = Json::array();
        if (instance.size() > kMaxPathOracleNodes || !closure_ok) {
            doc["oracle_note"] = "gap replay needs a feasible instance with at most " + std::to_string(kMaxPathOracleNodes) + " nodes";
        } else {
            UsageGraph replay(instance.size());
            for (NodeId i : processing_order(instance)) {
                if (candidate_set(instance, i).size() <= kMaxOracleCandidates)
                    steps.push_back(verdict_to_json(i, optimal_step(instance, replay, i)));
                solve_step(instance, replay, i);
            }
        }
        doc["oracle_steps"] = std::move(steps);
    }

    const bool feasible = closure_ok;
    doc["feasible"] = feasible;
    emit(config.out, write_document(doc), out);
    return feasible ? kOk : kInfeasible;
}

int run_partition(const RunConfig& config, std::ostream& out, std::ostream&) {
    const Instance instance = resolve_instance(config);
    const Partition cover = min_clique_cover(instance);
    Json doc;
    doc["clique_cover"] = partition_to_json(cover);
    doc["scc_coalitions"] = partition_to_json(scc_coalitions(instance, cover));
    emit(config.out, write_document(doc), out);
    return kOk;
}

int run_simulate(const RunConfig& config, std::ostream& out, std::ostream&) {
    if (config.preset && config.config) throw UsageError("--preset and --config are mutually exclusive");
    if (!config.preset && !config.config) throw UsageError("simulate needs --preset NAME or --config PATH");

    ExperimentSpec spec = config.preset ? preset_spec(*config.preset, config.seed.value_or(kDefaultSeed))
                                        : experiment_from_json(load_document(*config.config));
    if (config.seed) spec.seed = *config.seed;
    if (config.reps) spec.repetitions = *config.reps;
    if (!config.methods.empty()) {
        spec.methods.clear();
        for (const auto& name : config.methods) {
            const auto m = parse_method(name);
            if (!m) throw UsageError("unknown method '" + name + "'");
            spec.methods.push_back(*m);
        }
    }

    const ExperimentReport report = run_experiment(spec);
    emit(config.out, report_csv(report), out);
    if (config.json_out) emit(config.json_out, write_document(report_to_json(report)), out);
    return kOk;
}

int run_report(const RunConfig& config, std::ostream& out, std::ostream&) {
    if (!config.report) throw UsageError("report needs --report PATH (JSON written by simulate --json)");
    const ExperimentReport report = report_from_json(load_document(*config.report));
    if (config.format == "csv") {
        emit(config.out, report_csv(report), out);
    } else if (config.format == "text") {
        emit(config.out, report_table(report), out);
    } else {
        throw UsageError("unknown report format '" + config.format + "'");
    }
    return kOk;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
    try {
        if (config.subcommand == "select") return run_select(config, out, err);
        if (config.subcommand == "verify") return run_verify(config, out, err);
        if (config.subcommand == "partition") return run_partition(config, out, err);
        if (config.subcommand == "simulate") return run_simulate(config, out, err);
        if (config.subcommand == "report") return run_report(config, out, err);
        throw UsageError("unknown subcommand '" + config.subcommand + "'");
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << '\n';
        return kParseFailure;
    } catch (const InvalidInstance& e) {
        err << "invalid instance: " << e.what() << '\n';
        return kInvalidInstance;
    } catch (const TrainingDivergence& e) {
        err << "training diverged: " << e.what() << '\n';
        return kTrainingDivergence;
    } catch (const UsageError& e) {
        err << "usage: " << e.what() << '\n';
        return kUsageError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kInvalidInstance;
    }
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Conflict-free collaborator selection and federated co-simulation"};
    app.require_subcommand(1);

    RunConfig config;
    std::string preset;
    std::uint64_t seed = 0;
    std::size_t reps = 0;

    auto add_instance_inputs = [&](CLI::App* sub) {
        sub->add_option("--instance", config.instance, "Instance file (JSON)");
        sub->add_option("--preset", preset, "Built-in instance: weak_noniid | strong_noniid");
        sub->add_option("--seed", seed, "Seed for preset benefit estimation");
    };

    auto* select = app.add_subcommand("select", "Compute the conflict-free usage graph");
    add_instance_inputs(select);
    select->add_option("--out", config.out, "Output file (default: stdout)");

    auto* verify = app.add_subcommand("verify", "Check a usage graph against the competition constraint");
    add_instance_inputs(verify);
    verify->add_option("--usage", config.usage, "Usage graph file with 'x' or 'usage_edges'")->required();
    verify->add_option("--out", config.out, "Output file (default: stdout)");
    verify->add_flag("--gap", config.gap, "Replay the selection against the exhaustive per-step oracle");

    auto* partition = app.add_subcommand("partition", "Baseline clique cover and SCC coalitions");
    add_instance_inputs(partition);
    partition->add_option("--out", config.out, "Output file (default: stdout)");

    auto* simulate = app.add_subcommand("simulate", "Run the synthetic federated experiment");
    simulate->add_option("--preset", preset, "weak_noniid | strong_noniid");
    simulate->add_option("--config", config.config, "Custom experiment file (JSON)");
    simulate->add_option("--seed", seed, "Base seed; repetition r uses seed + r");
    simulate->add_option("--reps", reps, "Repetitions");
    simulate->add_option("--methods", config.methods, "Comma-separated: local,fedavg,ce,fedcompetitors")->delimiter(',');
    simulate->add_option("--out", config.out, "CSV output (default: stdout)");
    simulate->add_option("--json", config.json_out, "Structured report output");

    auto* report = app.add_subcommand("report", "Render a saved simulate report");
    report->add_option("--report", config.report, "JSON written by simulate --json")->required();
    report->add_option("--format", config.format, "csv | text");
    report->add_option("--out", config.out, "Output file (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsageError;
    }

    for (auto* sub : app.get_subcommands()) {
        config.subcommand = sub->get_name();
        auto given = [sub](const char* name) {
            const auto* opt = sub->get_option_no_throw(name);
            return opt != nullptr && opt->count() > 0;
        };
        if (given("--preset")) config.preset = preset;
        if (given("--seed")) config.seed = seed;
        if (given("--reps")) config.reps = reps;
    }
    return run(config, out, err);
}

}  // namespace fedcomp::cli
