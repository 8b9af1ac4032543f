#pragma once

#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "fedcomp/graph.hpp"

namespace fedcomp {

/// Raised when an exhaustive check would exceed its enumeration guard.
class OracleTooLarge : public std::length_error {
public:
    using std::length_error::length_error;
};

inline constexpr std::size_t kMaxPathOracleNodes = 12;
inline constexpr std::size_t kMaxOracleCandidates = 20;

/// Competing pair whose benefit path is fully selected in the usage graph.
struct PathViolation {
    NodeId from;
    NodeId to;
    PathWitness path;
};

/// Enumerates every simple benefit-graph path between each ordered competing
/// pair and reports the first fully-selected one per pair. Throws
/// OracleTooLarge for n > kMaxPathOracleNodes.
std::vector<PathViolation> path_violations(const Instance& instance, const UsageGraph& usage);

/// Path-enumeration feasibility: every simple benefit path between two
/// competitors has at least one edge missing from the usage graph.
bool feasible_by_paths(const Instance& instance, const UsageGraph& usage);

struct OracleVerdict {
    bool feasible;          // greedy result passes the path check
    double optimal_value;
    NodeSet optimal_set;
    double greedy_value;
    NodeSet greedy_set;
    double gap_ratio;       // greedy / optimal, 1 when both are zero
};

/// Exhaustive reference for participant i's subproblem: tries every subset
/// of the candidate set on top of `usage` and keeps the best feasible one,
/// then runs the greedy step on a copy of `usage` for comparison.
/// Throws OracleTooLarge when the candidate set exceeds kMaxOracleCandidates.
OracleVerdict optimal_step(const Instance& instance, const UsageGraph& usage, NodeId i);

}  // namespace fedcomp
