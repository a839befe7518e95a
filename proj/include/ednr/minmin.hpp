#pragma once

#include <cstdint>
#include <map>
#include <optional>

#include "ednr/instance.hpp"
#include "ednr/spanning_tree.hpp"

namespace ednr {

/// Size profile of the Min-Min tree on the n x m grid, from the recurrence
/// alone (no embedding):
///   k >= m-1        : (1, 2, ..., n+m-1-k)
///   n-1 <= k <= m-1 : (m-k, ..., n+m-k-1)
///   1 <= k <= n-2   : merge the two smallest level-(k+1) entries, +1 to all
/// Requires 2 <= n <= m; throws InvalidShape otherwise.
SubtreeProfile minmin_profile(std::uint32_t n, std::uint32_t m);

/// Embedded Min-Min tree of the uniform n x m grid rooted at (0,0).
///
/// Beyond anti-diagonal n-1 every subtree is a path. Below it, each level
/// adopts the next one-to-one except for a single vertex taking the two
/// smallest subtrees. The row order of the path lengths is chosen so those
/// two always sit on adjacent rows. For n > m the transposed grid is solved
/// and mapped back.
SpanningTree minmin_tree(std::uint32_t n, std::uint32_t m);

/// For every k in {n-1..m-1}: each V_k vertex hangs off V_{k-1}, its subtree
/// is a path, and the |V_k| path lengths are pairwise distinct. Uses the
/// transposed orientation when n > m.
bool check_property_a(const Instance& instance, const SpanningTree& tree);

/// For every k in {1..n-2}: exactly one V_k vertex has tree degree three, its
/// two children root the two smallest level-(k+1) subtrees, and every other
/// V_k vertex has degree two.
bool check_property_b(const Instance& instance, const SpanningTree& tree);

/// Deepest level whose largest subtree exceeds 2n, if any.
std::optional<std::uint32_t> beta(const SubtreeProfile& profile);

/// Shortest resistance-distance tree from the root; among equally short
/// parents the smallest vertex id wins.
SpanningTree shortest_path_tree(const Instance& instance);

struct NonuniformEvaluation {
  LossReport report;
  Rational alpha;              // d_max / d_min
  Rational uniform_ratio;      // ratio certificate of the uniform grid
  Rational certificate;        // alpha^2 * uniform_ratio
};

/// Loss of the uniform Min-Min tree under the given (positive) demands.
/// `demands` maps every non-root vertex; missing entries count as zero and
/// raise ZeroMinDemand like explicit zeros.
NonuniformEvaluation evaluate_nonuniform(std::uint32_t n, std::uint32_t m,
                                         const std::map<VertexId, std::int64_t>& demands);

}  // namespace ednr
