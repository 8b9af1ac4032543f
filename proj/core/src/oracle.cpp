#include "fedcomp/oracle.hpp"

#include <algorithm>
#include <string>

#include "fedcomp/selector.hpp"

namespace fedcomp {

namespace {

// Depth-first enumeration of simple benefit paths from `source` to `target`.
// Stops at the first path whose every edge is selected in the usage graph.
class PathSearch {
public:
    PathSearch(const Instance& instance, const UsageGraph& usage, NodeId target)
        : instance_(instance), usage_(usage), target_(target), on_path_(instance.size(), false) {}

    bool find_selected_path(NodeId source) {
        path_.assign(1, source);
        on_path_.assign(instance_.size(), false);
        on_path_[source] = true;
        return extend(source);
    }

    const std::vector<NodeId>& path() const { return path_; }

private:
    bool extend(NodeId u) {
        for (NodeId v = 0; v < instance_.size(); ++v) {
            if (on_path_[v] || !instance_.has_benefit_edge(u, v)) continue;
            path_.push_back(v);
            if (v == target_) {
                if (fully_selected()) return true;
            } else {
                on_path_[v] = true;
                if (extend(v)) return true;
                on_path_[v] = false;
            }
            path_.pop_back();
        }
        return false;
    }

    bool fully_selected() const {
        for (std::size_t l = 0; l + 1 < path_.size(); ++l)
            if (!usage_.uses(path_[l], path_[l + 1])) return false;
        return true;
    }

    const Instance& instance_;
    const UsageGraph& usage_;
    NodeId target_;
    std::vector<bool> on_path_;
    std::vector<NodeId> path_;
};

}  // namespace

std::vector<PathViolation> path_violations(const Instance& instance, const UsageGraph& usage) {
    const std::size_t n = instance.size();
    if (n > kMaxPathOracleNodes)
        throw OracleTooLarge("path enumeration limited to " + std::to_string(kMaxPathOracleNodes) + " nodes, got " + std::to_string(n));
    if (usage.size() != n) throw std::invalid_argument("usage graph size does not match instance");

    std::vector<PathViolation> out;
    for (NodeId from = 0; from < n; ++from) {
        for (NodeId to = 0; to < n; ++to) {
            if (from == to || !instance.competes(from, to)) continue;
            PathSearch search(instance, usage, to);
            if (search.find_selected_path(from)) out.push_back({from, to, PathWitness{search.path()}});
        }
    }
    return out;
}

bool feasible_by_paths(const Instance& instance, const UsageGraph& usage) {
    return path_violations(instance, usage).empty();
}

OracleVerdict optimal_step(const Instance& instance, const UsageGraph& usage, NodeId i) {
    const auto candidates = candidate_set(instance, i);
    if (candidates.size() > kMaxOracleCandidates)
        throw OracleTooLarge("subset enumeration limited to " + std::to_string(kMaxOracleCandidates) + " candidates, got " +
                             std::to_string(candidates.size()));
    if (!feasible_by_paths(instance, usage)) throw std::invalid_argument("optimal_step: prior usage graph is infeasible");

    OracleVerdict v{};
    v.optimal_value = 0.0;
    const std::size_t subsets = std::size_t{1} << candidates.size();
    for (std::size_t mask = 1; mask < subsets; ++mask) {
        BitMatrix x = usage.x();
        NodeSet chosen;
        for (std::size_t b = 0; b < candidates.size(); ++b) {
            if (((mask >> b) & 1U) == 0) continue;
            x.set(candidates[b], i);
            chosen.push_back(candidates[b]);
        }
        const double value = collaboration_value(instance, i, chosen);
        if (value <= v.optimal_value) continue;
        if (!feasible_by_paths(instance, UsageGraph::from_matrix(std::move(x)))) continue;
        v.optimal_value = value;
        std::sort(chosen.begin(), chosen.end());
        v.optimal_set = std::move(chosen);
    }

    UsageGraph greedy = usage;
    const StepTrace step = solve_step(instance, greedy, i);
    for (const auto& d : step.candidates)
        if (d.accepted) v.greedy_set.push_back(d.node);
    std::sort(v.greedy_set.begin(), v.greedy_set.end());
    v.greedy_value = collaboration_value(instance, i, v.greedy_set);
    v.feasible = feasible_by_paths(instance, greedy);
    v.gap_ratio = v.optimal_value == 0.0 ? 1.0 : v.greedy_value / v.optimal_value;
    return v;
}

}  // namespace fedcomp
