#include "fedcomp/cli/io.hpp"

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace fedcomp::cli {

namespace {

[[noreturn]] void fail(const std::string& what) { throw ParseError(what); }

const Json& field(const Json& doc, const char* name) {
    if (!doc.is_object()) fail("expected a JSON object");
    auto it = doc.find(name);
    if (it == doc.end()) fail(std::string("missing field '") + name + "'");
    return *it;
}

std::size_t as_count(const Json& v, const char* name) {
    if (!v.is_number_integer() || v.get<long long>() < 0) fail(std::string("field '") + name + "' must be a non-negative integer");
    return v.get<std::size_t>();
}

double as_real(const Json& v, const char* name) {
    if (!v.is_number()) fail(std::string("field '") + name + "' must be a number");
    return v.get<double>();
}

std::string format_cell(double mean, double sd) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f±%.6f", mean, sd);
    return buf;
}

template <typename T>
T get_or(const Json& doc, const char* name, T fallback) {
    auto it = doc.find(name);
    if (it == doc.end()) return fallback;
    try {
        return it->get<T>();
    } catch (const nlohmann::json::exception&) {
        fail(std::string("field '") + name + "' has the wrong type");
    }
}

Json matrix_to_json(const BitMatrix& m) {
    Json rows = Json::array();
    for (std::size_t r = 0; r < m.size(); ++r) {
        Json row = Json::array();
        for (std::size_t c = 0; c < m.size(); ++c) row.push_back(m.at(r, c) ? 1 : 0);
        rows.push_back(std::move(row));
    }
    return rows;
}

Json node_sets_to_json(const std::vector<NodeSet>& sets) {
    Json out = Json::array();
    for (const auto& s : sets) out.push_back(s);
    return out;
}

Json benefit_matrix_to_json(const Instance& instance) {
    Json rows = Json::array();
    for (std::size_t j = 0; j < instance.size(); ++j) {
        Json row = Json::array();
        for (std::size_t i = 0; i < instance.size(); ++i) row.push_back(instance.benefit(j, i));
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace

Json parse_document(const std::string& text, const std::string& origin) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        fail(origin + ": " + e.what());
    }
}

Json load_document(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(path.string() + ": cannot open file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_document(buf.str(), path.string());
}

NodeId parse_node(const Json& value, std::size_t n) {
    std::size_t index = 0;
    if (value.is_number_integer()) {
        if (value.get<long long>() < 0) throw InvalidInstance("negative node index");
        index = value.get<std::size_t>();
    } else if (value.is_string()) {
        const auto s = value.get<std::string>();
        if (s.size() < 2 || (s[0] != 'v' && s[0] != 'V')) fail("node label '" + s + "' is not of the form v<k>");
        std::size_t label = 0;
        for (std::size_t k = 1; k < s.size(); ++k) {
            if (s[k] < '0' || s[k] > '9') fail("node label '" + s + "' is not of the form v<k>");
            label = label * 10 + static_cast<std::size_t>(s[k] - '0');
        }
        if (label == 0) throw InvalidInstance("node labels are 1-based; got '" + s + "'");
        index = label - 1;
    } else {
        fail("node reference must be an integer or a v<k> label");
    }
    if (index >= n) throw InvalidInstance("node " + value.dump() + " out of range for n=" + std::to_string(n));
    return index;
}

Instance instance_from_json(const Json& doc) {
    const std::size_t n = as_count(field(doc, "n"), "n");
    std::vector<CompetingEdge> competing;
    std::vector<BenefitEdge> benefit;
    if (auto it = doc.find("competing_edges"); it != doc.end()) {
        if (!it->is_array()) fail("'competing_edges' must be a list");
        for (const auto& e : *it) {
            if (!e.is_array() || e.size() != 2) fail("competing edge must be a pair, got " + e.dump());
            competing.push_back({parse_node(e[0], n), parse_node(e[1], n)});
        }
    }
    if (auto it = doc.find("benefit_edges"); it != doc.end()) {
        if (!it->is_array()) fail("'benefit_edges' must be a list");
        for (const auto& e : *it) {
            if (!e.is_array() || e.size() != 3) fail("benefit edge must be a [j, i, w] triple, got " + e.dump());
            benefit.push_back({parse_node(e[0], n), parse_node(e[1], n), as_real(e[2], "benefit weight")});
        }
    }
    return Instance::from_edges(n, competing, benefit);
}

Json instance_to_json(const Instance& instance) {
    Json doc;
    doc["n"] = instance.size();
    Json competing = Json::array();
    for (const auto& e : instance.competing_edges()) competing.push_back({e.a, e.b});
    Json benefit = Json::array();
    for (const auto& e : instance.benefit_edges()) benefit.push_back({e.from, e.to, e.weight});
    doc["competing_edges"] = std::move(competing);
    doc["benefit_edges"] = std::move(benefit);
    return doc;
}

UsageGraph usage_from_json(const Json& doc, std::size_t n) {
    BitMatrix x(n);
    if (auto it = doc.find("x"); it != doc.end()) {
        if (!it->is_array() || it->size() != n) fail("'x' must be an n-by-n matrix");
        for (std::size_t r = 0; r < n; ++r) {
            const auto& row = (*it)[r];
            if (!row.is_array() || row.size() != n) fail("'x' row " + std::to_string(r) + " must have n entries");
            for (std::size_t c = 0; c < n; ++c) {
                const auto& cell = row[c];
                if (!cell.is_number_integer() || (cell.get<int>() != 0 && cell.get<int>() != 1))
                    fail("'x' entries must be 0 or 1");
                if (cell.get<int>() == 1) x.set(r, c);
            }
        }
    } else if (auto edges = doc.find("usage_edges"); edges != doc.end()) {
        if (!edges->is_array()) fail("'usage_edges' must be a list");
        for (const auto& e : *edges) {
            if (!e.is_array() || e.size() != 2) fail("usage edge must be a pair, got " + e.dump());
            const NodeId from = parse_node(e[0], n);
            const NodeId to = parse_node(e[1], n);
            if (from == to) throw InvalidInstance("usage self edge at node " + std::to_string(from));
            if (x.at(from, to)) throw InvalidInstance("duplicate usage edge " + e.dump());
            x.set(from, to);
        }
    } else {
        fail("usage graph needs an 'x' matrix or a 'usage_edges' list");
    }
    return UsageGraph::from_matrix(std::move(x));
}

Json usage_to_json(const UsageGraph& usage) {
    Json doc;
    doc["n"] = usage.size();
    doc["x"] = matrix_to_json(usage.x());
    doc["closure"] = matrix_to_json(usage.closure());
    Json edges = Json::array();
    for (const auto& [from, to] : usage.edges()) edges.push_back({from, to});
    doc["usage_edges"] = std::move(edges);
    return doc;
}

Json trace_to_json(const SelectionTrace& trace) {
    Json doc;
    doc["order"] = trace.order;
    Json steps = Json::array();
    for (const auto& s : trace.steps) {
        Json step;
        step["participant"] = s.participant;
        step["objective"] = s.objective;
        Json cands = Json::array();
        for (const auto& d : s.candidates) {
            Json c;
            c["node"] = d.node;
            c["weight"] = d.weight;
            c["accepted"] = d.accepted;
            c["rejected_by"] = to_string(d.rejected_by);
            c["s_minus"] = d.guards.minus;
            c["s_plus"] = d.guards.plus;
            cands.push_back(std::move(c));
        }
        step["candidates"] = std::move(cands);
        steps.push_back(std::move(step));
    }
    doc["steps"] = std::move(steps);
    return doc;
}

Json partition_to_json(const Partition& partition) {
    Json doc;
    doc["kind"] = to_string(partition.kind);
    doc["mode"] = to_string(partition.mode);
    doc["groups"] = node_sets_to_json(partition.groups);
    return doc;
}

Json verdict_to_json(NodeId participant, const OracleVerdict& v) {
    Json doc;
    doc["participant"] = participant;
    doc["feasible"] = v.feasible;
    doc["optimal_value"] = v.optimal_value;
    doc["optimal_set"] = v.optimal_set;
    doc["greedy_value"] = v.greedy_value;
    doc["greedy_set"] = v.greedy_set;
    doc["gap_ratio"] = v.gap_ratio;
    return doc;
}

ExperimentSpec experiment_from_json(const Json& doc) {
    ExperimentSpec spec;
    const std::size_t n = as_count(field(doc, "n"), "n");
    spec.data.n = n;
    spec.data.rho = get_or<double>(doc, "rho", 0.01);
    spec.data.degree = get_or<std::size_t>(doc, "degree", 3);
    spec.data.noise_std = get_or<double>(doc, "noise_std", 0.1);
    spec.data.samples = get_or<std::vector<std::size_t>>(doc, "samples", std::vector<std::size_t>(n, 2000));
    spec.data.flipped = get_or<std::vector<bool>>(doc, "flipped", std::vector<bool>(n, false));
    spec.data.train_fraction = get_or<double>(doc, "train_fraction", 0.8);

    if (auto it = doc.find("competing_edges"); it != doc.end()) {
        if (!it->is_array()) fail("'competing_edges' must be a list");
        for (const auto& e : *it) {
            if (!e.is_array() || e.size() != 2) fail("competing edge must be a pair, got " + e.dump());
            spec.competing.push_back({parse_node(e[0], n), parse_node(e[1], n)});
        }
    }
    if (doc.contains("benefit_edges")) spec.benefit = instance_from_json(doc).benefit_edges();
    // Validates the competing graph shape early (self/duplicate edges, completeness).
    (void)Instance::from_edges(n, spec.competing, {});

    if (auto it = doc.find("train"); it != doc.end()) {
        spec.train.rounds = get_or<std::size_t>(*it, "rounds", spec.train.rounds);
        spec.train.local_epochs = get_or<std::size_t>(*it, "local_epochs", spec.train.local_epochs);
        spec.train.batch_size = get_or<std::size_t>(*it, "batch_size", spec.train.batch_size);
        spec.train.learning_rate = get_or<double>(*it, "learning_rate", spec.train.learning_rate);
        spec.train.feature_degree = get_or<std::size_t>(*it, "feature_degree", spec.train.feature_degree);
    }
    spec.repetitions = get_or<std::size_t>(doc, "repetitions", spec.repetitions);
    spec.seed = get_or<std::uint64_t>(doc, "seed", spec.seed);
    if (auto it = doc.find("methods"); it != doc.end()) {
        spec.methods.clear();
        for (const auto& m : *it) {
            auto parsed = m.is_string() ? parse_method(m.get<std::string>()) : std::nullopt;
            if (!parsed) fail("unknown method " + m.dump());
            spec.methods.push_back(*parsed);
        }
    }
    try {
        spec.data.validate();
        spec.train.validate();
    } catch (const std::invalid_argument& e) {
        throw InvalidInstance(e.what());
    }
    return spec;
}

Json experiment_spec_to_json(const ExperimentSpec& spec) {
    Json doc;
    doc["n"] = spec.data.n;
    doc["rho"] = spec.data.rho;
    doc["degree"] = spec.data.degree;
    doc["noise_std"] = spec.data.noise_std;
    doc["samples"] = spec.data.samples;
    doc["flipped"] = spec.data.flipped;
    doc["train_fraction"] = spec.data.train_fraction;
    Json competing = Json::array();
    for (const auto& e : spec.competing) competing.push_back({e.a, e.b});
    doc["competing_edges"] = std::move(competing);
    if (spec.benefit) {
        Json benefit = Json::array();
        for (const auto& e : *spec.benefit) benefit.push_back({e.from, e.to, e.weight});
        doc["benefit_edges"] = std::move(benefit);
    }
    doc["train"] = {{"rounds", spec.train.rounds},
                    {"local_epochs", spec.train.local_epochs},
                    {"batch_size", spec.train.batch_size},
                    {"learning_rate", spec.train.learning_rate},
                    {"feature_degree", spec.train.feature_degree}};
    doc["repetitions"] = spec.repetitions;
    doc["seed"] = spec.seed;
    Json methods = Json::array();
    for (Method m : spec.methods) methods.push_back(to_string(m));
    doc["methods"] = std::move(methods);
    return doc;
}

Json report_to_json(const ExperimentReport& report) {
    Json doc;
    doc["config"] = experiment_spec_to_json(report.spec);
    doc["aggregation"] = "personalised weighted average; self weight = max collaborator benefit; normalised";
    Json results = Json::object();
    for (std::size_t m = 0; m < report.spec.methods.size(); ++m) {
        Json r;
        r["mean"] = report.mean[m];
        r["std"] = report.stddev[m];
        results[to_string(report.spec.methods[m])] = std::move(r);
    }
    doc["results"] = std::move(results);

    Json reps = Json::array();
    for (const auto& rec : report.repetitions) {
        Json r;
        r["seed"] = rec.seed;
        r["benefit"] = benefit_matrix_to_json(rec.instance);
        r["usage_edges"] = usage_to_json(rec.usage)["usage_edges"];
        r["clique_cover"] = partition_to_json(rec.cover);
        r["scc_coalitions"] = partition_to_json(rec.coalitions);
        Json mse = Json::object();
        for (std::size_t m = 0; m < report.spec.methods.size(); ++m) mse[to_string(report.spec.methods[m])] = rec.mse[m];
        r["mse"] = std::move(mse);
        reps.push_back(std::move(r));
    }
    doc["repetitions"] = std::move(reps);
    return doc;
}

ExperimentReport report_from_json(const Json& doc) {
    ExperimentReport report;
    report.spec = experiment_from_json(field(doc, "config"));
    const auto& results = field(doc, "results");
    for (Method m : report.spec.methods) {
        const auto& r = field(results, to_string(m));
        try {
            report.mean.push_back(field(r, "mean").get<std::vector<double>>());
            report.stddev.push_back(field(r, "std").get<std::vector<double>>());
        } catch (const nlohmann::json::exception&) {
            fail(std::string("results for '") + to_string(m) + "' must be numeric lists");
        }
        if (report.mean.back().size() != report.spec.data.n || report.stddev.back().size() != report.spec.data.n)
            fail(std::string("results for '") + to_string(m) + "' must have one entry per participant");
    }
    return report;
}

std::string report_csv(const ExperimentReport& report) {
    std::ostringstream out;
    out << "participant";
    for (Method m : report.spec.methods) out << ',' << to_string(m);
    out << '\n';
    for (std::size_t i = 0; i < report.spec.data.n; ++i) {
        out << 'v' << (i + 1);
        for (std::size_t m = 0; m < report.spec.methods.size(); ++m) out << ',' << format_cell(report.mean[m][i], report.stddev[m][i]);
        out << '\n';
    }
    return out.str();
}

std::string report_table(const ExperimentReport& report) {
    std::ostringstream out;
    out << std::left << std::setw(16) << "method";
    for (std::size_t i = 0; i < report.spec.data.n; ++i) out << std::setw(24) << ("v" + std::to_string(i + 1));
    out << '\n';
    for (std::size_t m = 0; m < report.spec.methods.size(); ++m) {
        out << std::setw(16) << to_string(report.spec.methods[m]);
        // setw counts bytes; the plus-minus sign is two bytes in UTF-8.
        for (std::size_t i = 0; i < report.spec.data.n; ++i) out << std::setw(25) << format_cell(report.mean[m][i], report.stddev[m][i]);
        out << '\n';
    }
    return out.str();
}

std::string write_document(const Json& doc) { return doc.dump(2) + "\n"; }

}  // namespace fedcomp::cli
