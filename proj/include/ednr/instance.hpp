#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "ednr/common.hpp"

namespace ednr {

struct GridShape {
  std::uint32_t rows = 0;  // n
  std::uint32_t cols = 0;  // m

  [[nodiscard]] VertexId id(std::uint32_t i, std::uint32_t j) const { return i * cols + j; }
  [[nodiscard]] std::uint32_t row(VertexId v) const { return v / cols; }
  [[nodiscard]] std::uint32_t col(VertexId v) const { return v % cols; }
  [[nodiscard]] std::uint32_t level(VertexId v) const { return row(v) + col(v); }
  [[nodiscard]] std::uint32_t max_level() const { return rows + cols - 2; }

  bool operator==(const GridShape&) const = default;
};

/// An undirected edge with u < v.
struct Edge {
  VertexId u = 0;
  VertexId v = 0;
  std::int64_t resistance = 0;

  [[nodiscard]] VertexId other(VertexId w) const { return w == u ? v : u; }
  bool operator==(const Edge&) const = default;
};

struct EdgeSpec {
  VertexId u = 0;
  VertexId v = 0;
  std::int64_t resistance = 0;
};

struct Incidence {
  VertexId neighbor;
  std::uint32_t edge;
};

/// Rooted undirected graph with integral demands and resistances.
///
/// Immutable once built. Edges are kept in canonical order, sorted by
/// (min endpoint, max endpoint); the root carries demand 0.
class Instance {
 public:
  /// Validating constructor. Throws Error with one of Disconnected,
  /// DuplicateEdge, SelfLoop, NegativeValue, RootDemandPresent,
  /// VertexOutOfRange, NotAGrid.
  static Instance make_general(std::uint32_t vertex_count, std::span<const EdgeSpec> edges,
                               VertexId root, const std::map<VertexId, std::int64_t>& demands,
                               std::optional<GridShape> grid = std::nullopt);

  [[nodiscard]] std::uint32_t vertex_count() const { return vertex_count_; }
  [[nodiscard]] VertexId root() const { return root_; }
  [[nodiscard]] const std::vector<Edge>& edges() const { return edges_; }
  [[nodiscard]] const std::vector<std::int64_t>& demands() const { return demands_; }
  [[nodiscard]] std::int64_t demand(VertexId v) const { return demands_[v]; }
  [[nodiscard]] const std::optional<GridShape>& grid() const { return grid_; }
  [[nodiscard]] std::span<const Incidence> neighbors(VertexId v) const {
    return {incidence_.data() + offsets_[v], incidence_.data() + offsets_[v + 1]};
  }

  /// Index of edge {a,b}, if present.
  [[nodiscard]] std::optional<std::uint32_t> find_edge(VertexId a, VertexId b) const;

  [[nodiscard]] std::int64_t total_demand() const;
  [[nodiscard]] std::int64_t total_resistance() const;

  /// True for a grid rooted at (0,0) with every demand and resistance equal to 1.
  [[nodiscard]] bool is_uniform_corner_grid() const;

  bool operator==(const Instance& other) const {
    return vertex_count_ == other.vertex_count_ && root_ == other.root_ &&
           edges_ == other.edges_ && demands_ == other.demands_ && grid_ == other.grid_;
  }

 private:
  Instance() = default;

  std::uint32_t vertex_count_ = 0;
  VertexId root_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::int64_t> demands_;
  std::optional<GridShape> grid_;
  std::vector<std::uint32_t> offsets_;
  std::vector<Incidence> incidence_;
};

/// All edges of the n x m grid in canonical order, with the given resistance.
std::vector<EdgeSpec> grid_edges(std::uint32_t n, std::uint32_t m, std::int64_t resistance = 1);

/// n x m grid, root (0,0), unit demands and resistances.
Instance make_uniform_grid(std::uint32_t n, std::uint32_t m);

/// Grid with caller-chosen demand and resistance functions. Root stays (0,0).
Instance make_grid(std::uint32_t n, std::uint32_t m, const std::map<VertexId, std::int64_t>& demands,
                   const std::map<std::pair<VertexId, VertexId>, std::int64_t>& resistances,
                   std::int64_t default_resistance = 1);

struct RandomInstanceOptions {
  std::uint32_t vertices = 6;
  std::uint32_t extra_edges = 4;  // on top of a random spanning tree
  std::int64_t max_demand = 5;
  std::int64_t max_resistance = 3;
  std::uint64_t seed = 1;
};

/// Random connected simple graph with root 0. Deterministic in the seed.
Instance make_random(const RandomInstanceOptions& options);

/// Anti-diagonal structure of a grid rooted at its (0,0) corner.
struct GridLevels {
  std::vector<std::uint32_t> level_of;      // per vertex, k = i + j
  std::vector<std::uint32_t> level_sizes;   // |V_k|, k = 0..n+m-2
  std::vector<std::vector<std::uint32_t>> level_edges;  // E_k as edge indices; E_0 empty

  /// |V_{>=k}|.
  [[nodiscard]] std::uint64_t at_or_beyond(std::uint32_t k) const;
};

/// Throws NotAGrid when the instance carries no grid shape.
GridLevels levels(const Instance& instance);

/// |V_k| for an n x m grid without building the instance.
std::uint32_t level_size(std::uint32_t n, std::uint32_t m, std::uint32_t k);

}  // namespace ednr
