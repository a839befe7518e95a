#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ednr/instance.hpp"
#include "ednr/spanning_tree.hpp"

namespace ednr {

enum class SolveStatus { Optimal, BudgetExhausted };

std::string_view to_string(SolveStatus status);

struct SolveResult {
  SpanningTree best_tree;
  BigInt best_loss;
  SolveStatus status = SolveStatus::Optimal;
  std::uint64_t nodes_explored = 0;
  /// Lower bound at the search root (branch and bound only).
  std::optional<std::int64_t> root_bound;
};

/// Number of spanning trees by the matrix-tree theorem (floating point,
/// used as a size guard).
long double spanning_tree_count(const Instance& instance);

/// Calls `visit` once per spanning tree (as ascending edge indices). Stops
/// early when `visit` returns false.
void for_each_spanning_tree(const Instance& instance,
                            const std::function<bool(const std::vector<std::uint32_t>&)>& visit);

inline constexpr std::uint64_t kDefaultEnumerationLimit = 20'000'000;

/// Exhaustive minimum over all spanning trees. Throws TooLarge when the
/// matrix-tree count exceeds `limit`.
SolveResult enumerate_all(const Instance& instance, std::uint64_t limit = kDefaultEnumerationLimit);

enum class BranchOrder {
  /// FarFirst when some edge has resistance 0, else NearFirst. Free edges
  /// make the deep structure decide the flows; on positive-resistance grids
  /// deciding the heavy edges near the root prunes far more.
  Auto,
  /// Edges nearest the root first.
  NearFirst,
  /// Edges of the deepest BFS layer cut first.
  FarFirst,
};

struct SolveBudget {
  /// Deterministic node limit; nullopt = unlimited.
  std::optional<std::uint64_t> max_nodes;
  /// Wall-clock limit; results under it are not reproducible.
  std::optional<std::chrono::milliseconds> max_time;
  unsigned threads = 1;
  BranchOrder order = BranchOrder::Auto;
  /// Extra starting incumbent (e.g. a known good tree).
  std::optional<SpanningTree> incumbent;
};

/// Branch and bound over edge include/exclude decisions.
///
/// The bound sums, over the cuts between consecutive BFS layers, the least
/// possible sum r_e f_e^2 on that cut: flow beyond the cut that already hangs
/// off the root through committed edges is pinned to its crossing edge, and
/// committed non-root components beyond the cut move as indivisible items.
/// The incumbent starts from the shortest-path tree (and the Min-Min tree on
/// uniform corner grids). When Optimal, the reported tree is the first
/// optimal tree in the serial search order, independent of thread count.
SolveResult solve_bnb(const Instance& instance, const SolveBudget& budget = {});

enum class EdgeState : std::uint8_t { Undecided, Included, Excluded };

/// Branch-and-bound lower bound for the subproblem where `states` fixes some
/// edges. Returns nullopt when no spanning tree is consistent with the
/// decisions found infeasible by the bound itself (included cycle or excluded
/// cut). Exposed for admissibility testing.
std::optional<std::int64_t> node_lower_bound(const Instance& instance, const std::vector<EdgeState>& states);

struct Table1Row {
  std::uint32_t n = 0;
  BigInt minmin_loss;
  std::int64_t expected_minmin = 0;
  /// Best loss found; proven optimal iff status is Optimal.
  BigInt best_loss;
  SolveStatus status = SolveStatus::Optimal;
  std::int64_t expected_optimal = 0;
  std::uint64_t nodes_explored = 0;
  [[nodiscard]] bool proven() const { return status == SolveStatus::Optimal; }
};

struct Table1Options {
  std::uint32_t max_n = 8;
  /// Rows up to this n are solved without a budget.
  std::uint32_t proven_max_n = 5;
  /// Node budget for the rows beyond proven_max_n.
  std::uint64_t stretch_nodes = 2'000'000;
  unsigned threads = 1;
};

/// Min-Min and exact losses on the uniform n x n corner grids, n = 2..max_n,
/// next to the published values.
std::vector<Table1Row> verify_table1(const Table1Options& options = {});

}  // namespace ednr
