#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "fedcomp/graph.hpp"

namespace fedcomp {

/// Why a candidate collaborator was turned down.
enum class Guard { none, minus, plus, both };

const char* to_string(Guard g) noexcept;

struct CandidateDecision {
    NodeId node;
    double weight;
    bool accepted;
    Guard rejected_by;
    CompetitorSets guards;  // as evaluated at decision time
};

struct StepTrace {
    NodeId participant;
    std::vector<CandidateDecision> candidates;  // in evaluation order
    double objective;                           // sum of accepted weights
};

struct SelectionTrace {
    std::vector<NodeId> order;
    std::vector<StepTrace> steps;  // one per entry of `order`
};

struct SelectionResult {
    UsageGraph usage;
    SelectionTrace trace;
};

/// Possible collaborators of i: non-competitors with positive benefit to i,
/// by non-increasing benefit, ties by ascending index.
std::vector<NodeId> candidate_set(const Instance& instance, NodeId i);

/// Participants by non-increasing level of potential, ties by ascending index.
std::vector<NodeId> processing_order(const Instance& instance);

/// Greedy solve of participant i's subproblem against the current usage graph.
/// Accepts a candidate when both guard sets are empty; the closure is updated
/// immediately, so later candidates of the same step see earlier acceptances.
/// Aborts if `usage` already violates the competition constraint.
StepTrace solve_step(const Instance& instance, UsageGraph& usage, NodeId i);

/// Runs solve_step for every participant in processing order starting from
/// the identity usage graph.
SelectionResult select_all(const Instance& instance);

/// Sum of benefit(j, i) over the given collaborators, accumulated in ascending
/// node order so that equal sets always give bit-equal values.
double collaboration_value(const Instance& instance, NodeId i, NodeSet collaborators);

}  // namespace fedcomp
