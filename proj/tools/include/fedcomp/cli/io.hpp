#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "fedcomp/fedsim.hpp"
#include "fedcomp/graph.hpp"
#include "fedcomp/oracle.hpp"
#include "fedcomp/partition.hpp"
#include "fedcomp/selector.hpp"

namespace fedcomp::cli {

using Json = nlohmann::ordered_json;

/// Malformed input text or a missing field; the message carries the location.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Parses JSON text, turning syntax errors into ParseError with line/column.
Json parse_document(const std::string& text, const std::string& origin);
Json load_document(const std::filesystem::path& path);

/// Node reference: 0-based integer or a "v<k>" label (1-based).
NodeId parse_node(const Json& value, std::size_t n);

/// {"n": ..., "competing_edges": [[a, b], ...], "benefit_edges": [[j, i, w], ...]}
Instance instance_from_json(const Json& doc);
Json instance_to_json(const Instance& instance);

/// Accepts either an "x" 0/1 matrix or a "usage_edges" list of [j, i] pairs.
UsageGraph usage_from_json(const Json& doc, std::size_t n);
Json usage_to_json(const UsageGraph& usage);

Json trace_to_json(const SelectionTrace& trace);
Json partition_to_json(const Partition& partition);
Json verdict_to_json(NodeId participant, const OracleVerdict& verdict);

/// Custom experiment description in the instance dialect plus data and
/// training fields; see README for the field list.
ExperimentSpec experiment_from_json(const Json& doc);
Json experiment_spec_to_json(const ExperimentSpec& spec);

Json report_to_json(const ExperimentReport& report);
ExperimentReport report_from_json(const Json& doc);

/// Participants as rows, methods as columns, cells "mean±std".
std::string report_csv(const ExperimentReport& report);
/// Methods as rows, participants as columns, aligned for terminals.
std::string report_table(const ExperimentReport& report);

std::string write_document(const Json& doc);

}  // namespace fedcomp::cli
