#include "fedcomp/selector.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>

namespace fedcomp {

const char* to_string(Guard g) noexcept {
    switch (g) {
    case Guard::none: return "none";
    case Guard::minus: return "minus";
    case Guard::plus: return "plus";
    case Guard::both: return "both";
    }
    return "?";
}

std::vector<NodeId> candidate_set(const Instance& instance, NodeId i) {
    const std::size_t n = instance.size();
    if (i >= n) throw std::out_of_range("candidate_set: node out of range");
    std::vector<NodeId> out;
    for (NodeId j = 0; j < n; ++j)
        if (j != i && instance.benefit(j, i) > 0.0 && !instance.competes(j, i)) out.push_back(j);
    std::stable_sort(out.begin(), out.end(),
                     [&](NodeId a, NodeId b) { return instance.benefit(a, i) > instance.benefit(b, i); });
    return out;
}

std::vector<NodeId> processing_order(const Instance& instance) {
    const auto potential = lop(instance);
    std::vector<NodeId> order(instance.size());
    for (NodeId v = 0; v < order.size(); ++v) order[v] = v;
    std::stable_sort(order.begin(), order.end(), [&](NodeId a, NodeId b) { return potential[a] > potential[b]; });
    return order;
}

double collaboration_value(const Instance& instance, NodeId i, NodeSet collaborators) {
    std::sort(collaborators.begin(), collaborators.end());
    double total = 0.0;
    for (NodeId j : collaborators)
        if (j != i) total += instance.benefit(j, i);
    return total;
}

StepTrace solve_step(const Instance& instance, UsageGraph& usage, NodeId i) {
    if (usage.size() != instance.size() || i >= instance.size())
        throw std::invalid_argument("solve_step: node or usage graph does not match instance");
    if (!assumption_holds(instance, usage)) {
        std::fprintf(stderr, "solve_step: usage graph violates the competition constraint before step %zu\n", i);
        std::abort();
    }

    StepTrace step{i, {}, 0.0};
    NodeSet accepted;
    for (NodeId j : candidate_set(instance, i)) {
        if (usage.uses(j, i)) {
            step.candidates.push_back({j, instance.benefit(j, i), true, Guard::none, {}});
            accepted.push_back(j);
            continue;
        }
        CandidateDecision d{j, instance.benefit(j, i), false, Guard::none, competitor_sets(instance, usage, i, j)};
        if (d.guards.empty()) {
            usage.add_edge_with_closure(j, i);
            d.accepted = true;
            accepted.push_back(j);
        } else if (!d.guards.minus.empty() && !d.guards.plus.empty()) {
            d.rejected_by = Guard::both;
        } else {
            d.rejected_by = d.guards.minus.empty() ? Guard::plus : Guard::minus;
        }
        step.candidates.push_back(std::move(d));
    }
    step.objective = collaboration_value(instance, i, std::move(accepted));
    return step;
}

SelectionResult select_all(const Instance& instance) {
    SelectionResult result{UsageGraph(instance.size()), {}};
    result.trace.order = processing_order(instance);
    result.trace.steps.reserve(instance.size());
    for (NodeId i : result.trace.order) result.trace.steps.push_back(solve_step(instance, result.usage, i));
    return result;
}

}  // namespace fedcomp
