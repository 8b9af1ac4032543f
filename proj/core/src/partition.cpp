#include "fedcomp/partition.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <stdexcept>

namespace fedcomp {

const char* to_string(PartitionKind k) noexcept {
    return k == PartitionKind::clique_cover ? "clique_cover" : "scc_coalitions";
}

const char* to_string(CoverMode m) noexcept { return m == CoverMode::exact ? "exact" : "greedy"; }

std::vector<std::size_t> Partition::group_of(std::size_t n) const {
    std::vector<std::size_t> out(n, std::numeric_limits<std::size_t>::max());
    for (std::size_t g = 0; g < groups.size(); ++g)
        for (NodeId v : groups[g])
            if (v < n) out[v] = g;
    return out;
}

BitMatrix complement(const Instance& instance) {
    const std::size_t n = instance.size();
    BitMatrix out(n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            if (a != b && !instance.competes(a, b)) out.set(a, b);
    return out;
}

bool is_valid_partition(const Instance& instance, const Partition& p) {
    const std::size_t n = instance.size();
    std::vector<bool> seen(n, false);
    std::size_t covered = 0;
    for (const auto& g : p.groups) {
        if (g.empty()) return false;
        for (NodeId v : g) {
            if (v >= n || seen[v]) return false;
            seen[v] = true;
            ++covered;
        }
        if (p.kind == PartitionKind::clique_cover)
            for (std::size_t a = 0; a < g.size(); ++a)
                for (std::size_t b = a + 1; b < g.size(); ++b)
                    if (instance.competes(g[a], g[b])) return false;
    }
    return covered == n;
}

namespace {

Partition from_colours(const std::vector<std::size_t>& colour, CoverMode mode) {
    std::size_t k = 0;
    for (std::size_t c : colour) k = std::max(k, c + 1);
    Partition p;
    p.kind = PartitionKind::clique_cover;
    p.mode = mode;
    p.groups.assign(k, {});
    for (NodeId v = 0; v < colour.size(); ++v) p.groups[colour[v]].push_back(v);
    std::erase_if(p.groups, [](const NodeSet& g) { return g.empty(); });
    std::sort(p.groups.begin(), p.groups.end());
    return p;
}

std::vector<std::size_t> greedy_colouring(const Instance& instance) {
    const std::size_t n = instance.size();
    std::vector<std::size_t> degree(n, 0);
    for (NodeId v = 0; v < n; ++v) degree[v] = instance.competing().row_members(v).size();
    std::vector<NodeId> order(n);
    for (NodeId v = 0; v < n; ++v) order[v] = v;
    std::stable_sort(order.begin(), order.end(), [&](NodeId a, NodeId b) { return degree[a] > degree[b]; });

    constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> colour(n, kNone);
    for (NodeId v : order) {
        std::vector<bool> taken(n + 1, false);
        for (NodeId u : instance.competing().row_members(v))
            if (colour[u] != kNone) taken[colour[u]] = true;
        std::size_t c = 0;
        while (taken[c]) ++c;
        colour[v] = c;
    }
    return colour;
}

// Searches colour assignments in lexicographic order (node 0 first, smaller
// colours first, new colours only in first-use order), so the first complete
// assignment with at most `k` colours is the lexicographically smallest one.
bool colour_with(const Instance& instance, std::size_t k, std::vector<std::size_t>& colour) {
    const std::size_t n = instance.size();
    colour.assign(n, 0);
    std::function<bool(NodeId, std::size_t)> assign = [&](NodeId v, std::size_t used) -> bool {
        if (v == n) return true;
        const std::size_t limit = std::min(k, used + 1);
        for (std::size_t c = 0; c < limit; ++c) {
            bool clash = false;
            for (NodeId u = 0; u < v && !clash; ++u) clash = colour[u] == c && instance.competes(u, v);
            if (clash) continue;
            colour[v] = c;
            if (assign(v + 1, std::max(used, c + 1))) return true;
        }
        return false;
    };
    return assign(0, 0);
}

}  // namespace

Partition min_clique_cover(const Instance& instance) {
    return min_clique_cover(instance, instance.size() <= kMaxExactCoverNodes ? CoverMode::exact : CoverMode::greedy);
}

Partition min_clique_cover(const Instance& instance, CoverMode mode) {
    auto greedy = greedy_colouring(instance);
    if (mode == CoverMode::greedy) return from_colours(greedy, CoverMode::greedy);
    if (instance.size() > kMaxExactCoverNodes) throw std::length_error("exact clique cover limited to 16 nodes");

    std::size_t upper = 0;
    for (std::size_t c : greedy) upper = std::max(upper, c + 1);
    std::vector<std::size_t> colour;
    for (std::size_t k = 1; k <= upper; ++k)
        if (colour_with(instance, k, colour)) return from_colours(colour, CoverMode::exact);
    // Unreachable: the greedy colouring uses `upper` colours.
    return from_colours(greedy, CoverMode::exact);
}

namespace {

// Tarjan's algorithm on the benefit graph induced by `nodes`.
class Tarjan {
public:
    Tarjan(const Instance& instance, const NodeSet& nodes)
        : instance_(instance), nodes_(nodes), index_(nodes.size(), kUnvisited), low_(nodes.size(), 0), on_stack_(nodes.size(), false) {}

    std::vector<NodeSet> run() {
        for (std::size_t v = 0; v < nodes_.size(); ++v)
            if (index_[v] == kUnvisited) visit(v);
        return std::move(components_);
    }

private:
    static constexpr std::size_t kUnvisited = std::numeric_limits<std::size_t>::max();

    void visit(std::size_t v) {
        index_[v] = low_[v] = counter_++;
        stack_.push_back(v);
        on_stack_[v] = true;
        for (std::size_t w = 0; w < nodes_.size(); ++w) {
            if (!instance_.has_benefit_edge(nodes_[v], nodes_[w])) continue;
            if (index_[w] == kUnvisited) {
                visit(w);
                low_[v] = std::min(low_[v], low_[w]);
            } else if (on_stack_[w]) {
                low_[v] = std::min(low_[v], index_[w]);
            }
        }
        if (low_[v] != index_[v]) return;
        NodeSet component;
        std::size_t w;
        do {
            w = stack_.back();
            stack_.pop_back();
            on_stack_[w] = false;
            component.push_back(nodes_[w]);
        } while (w != v);
        std::sort(component.begin(), component.end());
        components_.push_back(std::move(component));
    }

    const Instance& instance_;
    const NodeSet& nodes_;
    std::vector<std::size_t> index_;
    std::vector<std::size_t> low_;
    std::vector<bool> on_stack_;
    std::vector<std::size_t> stack_;
    std::size_t counter_ = 0;
    std::vector<NodeSet> components_;
};

}  // namespace

Partition scc_coalitions(const Instance& instance, const Partition& within) {
    Partition out;
    out.kind = PartitionKind::scc_coalitions;
    out.mode = within.mode;
    for (const auto& group : within.groups) {
        for (auto& component : Tarjan(instance, group).run()) out.groups.push_back(std::move(component));
    }
    std::sort(out.groups.begin(), out.groups.end());
    return out;
}

}  // namespace fedcomp
