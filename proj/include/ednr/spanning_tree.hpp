#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ednr/common.hpp"
#include "ednr/instance.hpp"

namespace ednr {

inline constexpr VertexId kNoParent = static_cast<VertexId>(-1);

/// Spanning tree rooted at the instance root, stored as a parent map.
/// Every non-root vertex has exactly one parent and the parent edge exists
/// in the owning instance.
class SpanningTree {
 public:
  /// Orients the given instance edges toward the root. Throws NotSpanning on
  /// a cycle, a disconnection, a wrong edge count, or an edge absent from the
  /// instance.
  static SpanningTree from_edges(const Instance& instance, std::span<const std::uint32_t> edge_indices);
  static SpanningTree from_vertex_pairs(const Instance& instance,
                                        std::span<const std::pair<VertexId, VertexId>> pairs);
  /// Validates a raw parent vector (kNoParent at the root).
  static SpanningTree from_parents(const Instance& instance, std::vector<VertexId> parent);

  [[nodiscard]] VertexId root() const { return root_; }
  [[nodiscard]] std::uint32_t vertex_count() const { return static_cast<std::uint32_t>(parent_.size()); }
  [[nodiscard]] VertexId parent(VertexId v) const { return parent_[v]; }
  [[nodiscard]] const std::vector<VertexId>& parents() const { return parent_; }
  /// Instance edge index of v's parent edge (undefined for the root).
  [[nodiscard]] std::uint32_t parent_edge(VertexId v) const { return parent_edge_[v]; }
  /// Instance edge indices of the tree, ascending.
  [[nodiscard]] std::vector<std::uint32_t> edge_indices() const;
  /// Vertices ordered so every parent precedes its children.
  [[nodiscard]] const std::vector<VertexId>& top_down_order() const { return order_; }
  [[nodiscard]] std::vector<std::vector<VertexId>> children() const;

  bool operator==(const SpanningTree& other) const { return root_ == other.root_ && parent_ == other.parent_; }

 private:
  SpanningTree() = default;

  VertexId root_ = 0;
  std::vector<VertexId> parent_;
  std::vector<std::uint32_t> parent_edge_;
  std::vector<VertexId> order_;
};

struct LossReport {
  BigInt total;
  /// L_k for k = 1..n+m-2 at index k-1; empty for non-grid instances.
  std::vector<BigInt> per_level;
  /// Downstream demand per instance edge; nullopt for edges outside the tree.
  std::vector<std::optional<BigInt>> downstream_demand;
};

LossReport evaluate(const Instance& instance, const SpanningTree& tree);

/// Subtree vertex counts |V(T_v)| for every vertex.
std::vector<std::uint64_t> subtree_sizes(const SpanningTree& tree);

/// Sorted subtree sizes a_k^1 <= ... <= a_k^{|V_k|} for k = 1..n+m-2, index k-1.
struct SubtreeProfile {
  std::uint32_t n = 0;
  std::uint32_t m = 0;
  std::vector<std::vector<std::uint64_t>> sizes;

  [[nodiscard]] const std::vector<std::uint64_t>& level(std::uint32_t k) const { return sizes.at(k - 1); }
  [[nodiscard]] std::uint32_t depth() const { return static_cast<std::uint32_t>(sizes.size()); }
  /// Sum over levels of the squared sizes; equals the loss of a uniform tree
  /// whose level-k vertices all hang off level k-1.
  [[nodiscard]] BigInt loss() const;
  bool operator==(const SubtreeProfile&) const = default;
};

/// Throws NotAGrid for non-grid instances.
SubtreeProfile subtree_size_profile(const Instance& instance, const SpanningTree& tree);

/// Graphviz rendering; grid vertices get pinned positions (j, -i).
std::string export_dot(const Instance& instance, const SpanningTree& tree);

}  // namespace ednr
