#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fedcomp/bit_matrix.hpp"

namespace fedcomp {

/// Raised when an instance violates its structural invariants.
class InvalidInstance : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct CompetingEdge {
    NodeId a;
    NodeId b;
};

/// Directed benefit edge: data of `from` improves the model of `to` by `weight`.
struct BenefitEdge {
    NodeId from;
    NodeId to;
    double weight;
};

/**
 * Problem input: participant count, the undirected competing graph and the
 * directed, weighted benefit graph.
 *
 * benefit(j, i) is the benefit of j's data to participant i. The diagonal of
 * the benefit matrix is stored as zero and never read by the algorithms.
 * An entry of exactly zero means "no benefit edge".
 */
class Instance {
public:
    /// Validates and takes ownership of dense matrices. `benefit` is row-major
    /// n*n with entry [j*n + i] = benefit(j, i).
    Instance(std::size_t n, BitMatrix competing, std::vector<double> benefit);

    /// Edge-list constructor. Self edges, duplicates and non-positive benefit
    /// weights are rejected.
    static Instance from_edges(std::size_t n, const std::vector<CompetingEdge>& competing,
                               const std::vector<BenefitEdge>& benefit);

    std::size_t size() const noexcept { return n_; }
    bool competes(NodeId a, NodeId b) const noexcept { return competing_.at(a, b); }
    double benefit(NodeId from, NodeId to) const noexcept { return benefit_[from * n_ + to]; }
    bool has_benefit_edge(NodeId from, NodeId to) const noexcept { return from != to && benefit(from, to) > 0.0; }

    const BitMatrix& competing() const noexcept { return competing_; }
    const std::vector<double>& benefit_matrix() const noexcept { return benefit_; }

    std::vector<CompetingEdge> competing_edges() const;
    std::vector<BenefitEdge> benefit_edges() const;

    friend bool operator==(const Instance&, const Instance&) = default;

private:
    std::size_t n_;
    BitMatrix competing_;
    std::vector<double> benefit_;
};

/// Level of potential of every participant: the total benefit its data
/// provides to everyone else (row sums of the benefit matrix, diagonal excluded).
std::vector<double> lop(const Instance& instance);

/// Ordered node sequence witnessing a directed path; length() = edges on it.
struct PathWitness {
    std::vector<NodeId> nodes;

    std::size_t length() const noexcept { return nodes.empty() ? 0 : nodes.size() - 1; }
    friend bool operator==(const PathWitness&, const PathWitness&) = default;
};

/**
 * Data usage graph: decision matrix X (x(j, i) set means i consumes j's model
 * updates) together with its reflexive-transitive closure C.
 *
 * The diagonal of X is always set and carries no collaboration meaning. The
 * closure is kept exact by add_edge_with_closure, which is the only mutator.
 */
class UsageGraph {
public:
    explicit UsageGraph(std::size_t n);

    /// Builds a usage graph from an arbitrary decision matrix, computing the
    /// closure from scratch. The diagonal is forced to true.
    static UsageGraph from_matrix(BitMatrix x);

    std::size_t size() const noexcept { return x_.size(); }
    bool uses(NodeId from, NodeId to) const noexcept { return x_.at(from, to); }
    bool reaches(NodeId from, NodeId to) const noexcept { return closure_.at(from, to); }

    const BitMatrix& x() const noexcept { return x_; }
    const BitMatrix& closure() const noexcept { return closure_; }

    /// Off-diagonal edges (from, to) in row-major order.
    std::vector<std::pair<NodeId, NodeId>> edges() const;

    /// Sets x(from, to) and propagates reachability: every p reaching `from`
    /// now reaches every q reachable from `to`.
    void add_edge_with_closure(NodeId from, NodeId to);

    friend bool operator==(const UsageGraph&, const UsageGraph&) = default;

private:
    BitMatrix x_;
    BitMatrix closure_;
};

/// Nodes reachable from i in the usage graph, i included.
NodeSet reachable_from(const UsageGraph& usage, NodeId i);

/// Nodes that reach j in the usage graph, j included.
NodeSet reachable_to(const UsageGraph& usage, NodeId j);

/// Guard sets evaluated before letting i consume j's updates.
///
/// minus: competitors of anything reaching j that i already reaches.
/// plus:  competitors of anything i reaches that already reach j.
/// Either being non-empty means the edge (j, i) would connect a pair of
/// competitors.
struct CompetitorSets {
    NodeSet minus;
    NodeSet plus;

    bool empty() const noexcept { return minus.empty() && plus.empty(); }
};

CompetitorSets competitor_sets(const Instance& instance, const UsageGraph& usage, NodeId i, NodeId j);

/// True iff no participant reaches any of its competitors in the usage graph
/// (checked in both directions for every competing pair).
bool assumption_holds(const Instance& instance, const UsageGraph& usage);

/// Ordered competing pairs (from, to) with `from` reaching `to`.
std::vector<std::pair<NodeId, NodeId>> competing_reachability_violations(const Instance& instance,
                                                                         const UsageGraph& usage);

/// Shortest path from -> to over off-diagonal usage edges, if one exists.
std::optional<PathWitness> usage_path(const UsageGraph& usage, NodeId from, NodeId to);

/// Every off-diagonal usage edge is also a benefit edge.
bool usage_within_benefit(const Instance& instance, const UsageGraph& usage);

}  // namespace fedcomp
