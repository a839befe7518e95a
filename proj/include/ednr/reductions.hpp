#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <vector>

#include "ednr/common.hpp"
#include "ednr/instance.hpp"
#include "ednr/spanning_tree.hpp"

namespace ednr {

/// Items are addressed by 0-based index throughout.
struct PartitionInstance {
  std::vector<std::int64_t> a;
};

struct ThreePartitionInstance {
  std::uint32_t n = 0;
  std::vector<std::int64_t> a;  // 3n items
};

struct ReductionArtifact {
  Instance instance;
  /// YES iff some spanning tree has loss <= threshold.
  Rational threshold;
  /// item_vertices[k]: grid vertices carrying item k (one for Partition,
  /// the chain in order from its entry for 3-Partition).
  std::vector<std::vector<VertexId>> item_vertices;
  /// 3-Partition only: the resistance-1 feeder edges, one per group slot.
  std::vector<std::uint32_t> feeder_edges;
  std::optional<std::int64_t> width;  // W
  std::optional<std::int64_t> r_inf;
};

/// 3 x (m+1) grid rooted at (0,0); item k sits at (1,k+1). The two root
/// edges have resistance 1, all others 0. Throws InvalidArgument for an
/// empty list or a non-positive item.
ReductionArtifact encode_partition(const PartitionInstance& p);

/// Items whose vertex hangs below the root edge {(0,0),(0,1)}.
std::set<std::uint32_t> decode_partition(const ReductionArtifact& artifact, const SpanningTree& tree);

/// Tree with loss (sum over I)^2 + (sum outside I)^2.
SpanningTree witness_tree_partition(const ReductionArtifact& artifact, const std::set<std::uint32_t>& items);

/// Throws WindowViolated or NonDivisible; also InvalidArgument when the
/// item count is not 3n, W < 1 or R_inf < 2. Defaults: W = n^5,
/// R_inf = S^3 + 1. TooLarge when the grid would not fit in memory.
ReductionArtifact encode_3partition(const ThreePartitionInstance& q, std::optional<std::int64_t> width = std::nullopt,
                                    std::optional<std::int64_t> r_inf = std::nullopt);

struct StructureReport {
  /// Each chain has exactly one incident edge below R_inf leading outside it.
  bool single_entry_per_chain = false;
  std::uint32_t unit_edges = 0;
  bool unit_edge_count_ok = false;
  /// Every vertex is reachable from the root over edges below R_inf.
  bool reachable_below_rinf = false;
  /// No demand vertex is reachable from the root over edges of resistance 0.
  bool demand_behind_unit_edges = false;

  [[nodiscard]] bool ok() const {
    return single_entry_per_chain && unit_edge_count_ok && reachable_below_rinf && demand_behind_unit_edges;
  }
};

StructureReport check_3partition_structure(const ReductionArtifact& artifact);

/// Routes group i's chains through the i-th feeder edge over
/// resistance-0 edges. Throws NotAPartition, Unbalanced, or RoutingFailed
/// when W is too small to route the groups disjointly.
SpanningTree witness_tree_3partition(const ReductionArtifact& artifact,
                                     const std::vector<std::vector<std::uint32_t>>& groups);

}  // namespace ednr
