#pragma once

#include <cstddef>
#include <vector>

#include "fedcomp/graph.hpp"

namespace fedcomp {

enum class PartitionKind { clique_cover, scc_coalitions };
enum class CoverMode { exact, greedy };

const char* to_string(PartitionKind k) noexcept;
const char* to_string(CoverMode m) noexcept;

/// Disjoint grouping of all participants. Groups are sorted internally and
/// ordered by their smallest member.
struct Partition {
    std::vector<NodeSet> groups;
    PartitionKind kind = PartitionKind::clique_cover;
    CoverMode mode = CoverMode::exact;

    /// Index of the group containing each node.
    std::vector<std::size_t> group_of(std::size_t n) const;

    friend bool operator==(const Partition&, const Partition&) = default;
};

inline constexpr std::size_t kMaxExactCoverNodes = 16;

/// Complement of the competing graph (independence graph), diagonal false.
BitMatrix complement(const Instance& instance);

/// Groups are disjoint, cover 0..n-1, and (for clique covers) contain no
/// competing pair.
bool is_valid_partition(const Instance& instance, const Partition& p);

/// Minimum clique cover of the independence graph, i.e. a minimum colouring
/// of the competing graph. Exact branch and bound for n <= kMaxExactCoverNodes
/// returning the lexicographically smallest colour assignment among minimum
/// ones; largest-first greedy colouring above that.
Partition min_clique_cover(const Instance& instance);
Partition min_clique_cover(const Instance& instance, CoverMode mode);

/// Refines each group into strongly connected components of the benefit
/// graph restricted to that group.
Partition scc_coalitions(const Instance& instance, const Partition& within);

}  // namespace fedcomp
