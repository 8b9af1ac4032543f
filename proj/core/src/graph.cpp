#include "fedcomp/graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <string>

namespace fedcomp {

namespace {

void check_node(std::size_t n, NodeId v, const char* what) {
    if (v >= n) throw std::out_of_range(std::string(what) + " index " + std::to_string(v) + " out of range for n=" + std::to_string(n));
}

}  // namespace

Instance::Instance(std::size_t n, BitMatrix competing, std::vector<double> benefit)
    : n_(n), competing_(std::move(competing)), benefit_(std::move(benefit)) {
    if (n_ == 0) throw InvalidInstance("participant count must be positive");
    if (competing_.size() != n_) throw InvalidInstance("competing matrix size does not match n");
    if (benefit_.size() != n_ * n_) throw InvalidInstance("benefit matrix size does not match n*n");

    bool has_independent_pair = false;
    for (std::size_t i = 0; i < n_; ++i) {
        if (competing_.at(i, i)) throw InvalidInstance("participant " + std::to_string(i) + " competes with itself");
        for (std::size_t j = i + 1; j < n_; ++j) {
            if (competing_.at(i, j) != competing_.at(j, i)) throw InvalidInstance("competing matrix is not symmetric");
            if (!competing_.at(i, j)) has_independent_pair = true;
        }
    }
    if (n_ >= 2 && !has_independent_pair) throw InvalidInstance("competing graph is complete; no collaboration is possible");

    for (std::size_t j = 0; j < n_; ++j) {
        for (std::size_t i = 0; i < n_; ++i) {
            double& w = benefit_[j * n_ + i];
            if (!std::isfinite(w)) throw InvalidInstance("benefit weight is not finite");
            if (w < 0.0) throw InvalidInstance("benefit weight is negative");
            if (i == j) w = 0.0;
        }
    }
}

Instance Instance::from_edges(std::size_t n, const std::vector<CompetingEdge>& competing,
                              const std::vector<BenefitEdge>& benefit) {
    if (n == 0) throw InvalidInstance("participant count must be positive");
    BitMatrix s(n);
    for (const auto& e : competing) {
        if (e.a >= n || e.b >= n) throw InvalidInstance("competing edge references a node outside 0..n-1");
        if (e.a == e.b) throw InvalidInstance("competing self edge at node " + std::to_string(e.a));
        if (s.at(e.a, e.b)) throw InvalidInstance("duplicate competing edge (" + std::to_string(e.a) + ", " + std::to_string(e.b) + ")");
        s.set(e.a, e.b);
        s.set(e.b, e.a);
    }
    std::vector<double> w(n * n, 0.0);
    for (const auto& e : benefit) {
        if (e.from >= n || e.to >= n) throw InvalidInstance("benefit edge references a node outside 0..n-1");
        if (e.from == e.to) throw InvalidInstance("benefit self edge at node " + std::to_string(e.from));
        if (!std::isfinite(e.weight) || e.weight <= 0.0) throw InvalidInstance("benefit edge weight must be finite and positive");
        double& slot = w[e.from * n + e.to];
        if (slot != 0.0) throw InvalidInstance("duplicate benefit edge (" + std::to_string(e.from) + ", " + std::to_string(e.to) + ")");
        slot = e.weight;
    }
    return Instance(n, std::move(s), std::move(w));
}

std::vector<CompetingEdge> Instance::competing_edges() const {
    std::vector<CompetingEdge> out;
    for (std::size_t a = 0; a < n_; ++a)
        for (std::size_t b = a + 1; b < n_; ++b)
            if (competing_.at(a, b)) out.push_back({a, b});
    return out;
}

std::vector<BenefitEdge> Instance::benefit_edges() const {
    std::vector<BenefitEdge> out;
    for (std::size_t j = 0; j < n_; ++j)
        for (std::size_t i = 0; i < n_; ++i)
            if (has_benefit_edge(j, i)) out.push_back({j, i, benefit(j, i)});
    return out;
}

std::vector<double> lop(const Instance& instance) {
    const std::size_t n = instance.size();
    std::vector<double> out(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (j != i) out[i] += instance.benefit(i, j);
    return out;
}

UsageGraph::UsageGraph(std::size_t n) : x_(BitMatrix::identity(n)), closure_(BitMatrix::identity(n)) {}

UsageGraph UsageGraph::from_matrix(BitMatrix x) {
    const std::size_t n = x.size();
    for (std::size_t i = 0; i < n; ++i) x.set(i, i);

    UsageGraph g(n);
    // BFS from every source over off-diagonal edges.
    std::vector<NodeId> queue;
    queue.reserve(n);
    for (std::size_t s = 0; s < n; ++s) {
        queue.assign(1, s);
        for (std::size_t head = 0; head < queue.size(); ++head) {
            const NodeId u = queue[head];
            for (NodeId v : x.row_members(u)) {
                if (!g.closure_.at(s, v)) {
                    g.closure_.set(s, v);
                    queue.push_back(v);
                }
            }
        }
    }
    g.x_ = std::move(x);
    return g;
}

std::vector<std::pair<NodeId, NodeId>> UsageGraph::edges() const {
    std::vector<std::pair<NodeId, NodeId>> out;
    for (std::size_t j = 0; j < size(); ++j)
        for (NodeId i : x_.row_members(j))
            if (i != j) out.emplace_back(j, i);
    return out;
}

void UsageGraph::add_edge_with_closure(NodeId from, NodeId to) {
    check_node(size(), from, "source");
    check_node(size(), to, "target");
    if (from == to) throw std::invalid_argument("usage self edge at node " + std::to_string(from));
    if (x_.at(from, to)) throw std::invalid_argument("usage edge (" + std::to_string(from) + ", " + std::to_string(to) + ") already present");

    x_.set(from, to);
    // Row `to` is only ever read here; p == to is a no-op union.
    for (std::size_t p = 0; p < size(); ++p)
        if (closure_.at(p, from)) closure_.or_row_into(p, to);
}

NodeSet reachable_from(const UsageGraph& usage, NodeId i) {
    check_node(usage.size(), i, "node");
    return usage.closure().row_members(i);
}

NodeSet reachable_to(const UsageGraph& usage, NodeId j) {
    check_node(usage.size(), j, "node");
    return usage.closure().column_members(j);
}

CompetitorSets competitor_sets(const Instance& instance, const UsageGraph& usage, NodeId i, NodeId j) {
    const std::size_t n = instance.size();
    check_node(n, i, "node");
    check_node(n, j, "node");
    if (usage.size() != n) throw std::invalid_argument("usage graph size does not match instance");
    if (i == j) throw std::invalid_argument("competitor sets need two distinct nodes");

    const BitMatrix& c = usage.closure();
    const BitMatrix& s = instance.competing();

    // Competitors of everything reaching j, and of everything i reaches.
    BitRow rivals_of_sources(n);
    BitRow rivals_of_sinks(n);
    for (std::size_t p = 0; p < n; ++p) {
        if (c.at(p, j)) rivals_of_sources.or_with(s.row(p));
        if (c.at(i, p)) rivals_of_sinks.or_with(s.row(p));
    }

    CompetitorSets out;
    for (std::size_t k = 0; k < n; ++k) {
        if (rivals_of_sources.test(k) && c.at(i, k)) out.minus.push_back(k);
        if (rivals_of_sinks.test(k) && c.at(k, j)) out.plus.push_back(k);
    }
    return out;
}

bool assumption_holds(const Instance& instance, const UsageGraph& usage) {
    const std::size_t n = instance.size();
    const BitMatrix& c = usage.closure();
    const BitMatrix& s = instance.competing();
    for (std::size_t p = 0; p < n; ++p) {
        const BitMatrix::Word* reach = c.row(p);
        const BitMatrix::Word* rivals = s.row(p);
        for (std::size_t k = 0; k < c.words_per_row(); ++k)
            if ((reach[k] & rivals[k]) != 0) return false;
    }
    return true;
}

std::vector<std::pair<NodeId, NodeId>> competing_reachability_violations(const Instance& instance,
                                                                         const UsageGraph& usage) {
    std::vector<std::pair<NodeId, NodeId>> out;
    const std::size_t n = instance.size();
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            if (a != b && instance.competes(a, b) && usage.reaches(a, b)) out.emplace_back(a, b);
    return out;
}

std::optional<PathWitness> usage_path(const UsageGraph& usage, NodeId from, NodeId to) {
    const std::size_t n = usage.size();
    check_node(n, from, "source");
    check_node(n, to, "target");
    if (from == to || !usage.reaches(from, to)) return std::nullopt;

    constexpr NodeId kUnseen = static_cast<NodeId>(-1);
    std::vector<NodeId> parent(n, kUnseen);
    std::deque<NodeId> queue{from};
    parent[from] = from;
    while (!queue.empty()) {
        const NodeId u = queue.front();
        queue.pop_front();
        if (u == to) break;
        for (NodeId v : usage.x().row_members(u)) {
            if (v == u || parent[v] != kUnseen) continue;
            parent[v] = u;
            queue.push_back(v);
        }
    }
    if (parent[to] == kUnseen) return std::nullopt;

    PathWitness w;
    for (NodeId v = to; v != from; v = parent[v]) w.nodes.push_back(v);
    w.nodes.push_back(from);
    std::reverse(w.nodes.begin(), w.nodes.end());
    return w;
}

bool usage_within_benefit(const Instance& instance, const UsageGraph& usage) {
    if (usage.size() != instance.size()) return false;
    for (const auto& [from, to] : usage.edges())
        if (!instance.has_benefit_edge(from, to)) return false;
    return true;
}

}  // namespace fedcomp
