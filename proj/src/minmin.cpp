#include "ednr/minmin.hpp"

#include <algorithm>
#include <cassert>
#include <limits>
#include <deque>
#include <queue>

#include "ednr/analysis.hpp"

namespace ednr {

namespace {

void require_shape(std::uint32_t n, std::uint32_t m) {
  if (n < 2 || n > m)
    throw Error(ErrorCode::InvalidShape,
                "Min-Min needs 2 <= n <= m, got n=" + std::to_string(n) + ", m=" + std::to_string(m));
}

// Min-Min parent map for 2 <= n <= m on the row-major n x m grid.
//
// Below level n-1 the embedding is forced up to the merge row: level-k row
// z adopts level-(k+1) rows z and z+1, every other row adopts its own row
// (or the one below, past z). So the two smallest subtrees must sit on
// adjacent rows. The row order of the path lengths at level n-1 is free
// (paths may step down a row past the last column), so it is planned
// backwards from level 1 by splitting each merged subtree in place.
std::vector<VertexId> minmin_parents(std::uint32_t n, std::uint32_t m) {
  const GridShape g{n, m};
  const SubtreeProfile profile = minmin_profile(n, m);
  std::vector<VertexId> parent(std::size_t{n} * m, kNoParent);

  // merge_row[k]: level-k row taking two children; the root takes both.
  std::vector<std::uint32_t> merge_row(n, 0);
  std::vector<std::uint64_t> order = profile.level(1);
  for (std::uint32_t k = 1; k + 1 <= n - 1; ++k) {
    const auto& below = profile.level(k + 1);
    const std::uint64_t merged = below[0] + below[1] + 1;
    const auto z = static_cast<std::uint32_t>(std::find(order.begin(), order.end(), merged) - order.begin());
    if (z == order.size())
      throw Error(ErrorCode::MergeInfeasible, "profile level " + std::to_string(k) + " lacks the merged subtree");
    merge_row[k] = z;
    std::vector<std::uint64_t> next;
    for (std::uint32_t r = 0; r < order.size(); ++r) {
      if (r == z) {
        next.push_back(below[0]);
        next.push_back(below[1]);
      } else {
        next.push_back(order[r] - 1);
      }
    }
    order = std::move(next);
  }

  // Merge levels: level-(k+1) row r hangs off level-k row r, or r-1 past z.
  for (std::int64_t k = static_cast<std::int64_t>(n) - 2; k >= 0; --k) {
    const std::uint32_t z = merge_row[k];
    for (std::uint32_t r = 0; r <= k + 1; ++r) {
      const std::uint32_t parent_row = r <= z ? r : r - 1;
      parent[g.id(r, static_cast<std::uint32_t>(k + 1 - r))] =
          g.id(parent_row, static_cast<std::uint32_t>(k - parent_row));
    }
  }

  // Straight rows up to level m-1.
  for (std::uint32_t i = 0; i < n; ++i)
    for (std::uint32_t j = n - i; j + i <= m - 1; ++j) parent[g.id(i, j)] = g.id(i, j - 1);

  // Past level m-1 one path ends per level; rows above it step down.
  std::vector<std::uint64_t> left(n);  // path vertices from level m-1 on, by row
  for (std::uint32_t i = 0; i < n; ++i) left[i] = order[i] - (m - n);
  for (std::uint32_t k = m - 1; k + 1 <= n + m - 2; ++k) {
    const std::uint32_t first = k + 1 - m;
    std::uint32_t p = first;
    while (left[p] != 1) ++p;
    std::vector<std::uint64_t> next(n, 0);
    for (std::uint32_t r = first + 1; r < n; ++r) {
      const std::uint32_t parent_row = r <= p ? r - 1 : r;
      parent[g.id(r, k + 1 - r)] = g.id(parent_row, k - parent_row);
      next[r] = left[parent_row] - 1;
    }
    left = std::move(next);
  }
  return parent;
}

}  // namespace

SubtreeProfile minmin_profile(std::uint32_t n, std::uint32_t m) {
  require_shape(n, m);
  SubtreeProfile profile;
  profile.n = n;
  profile.m = m;
  const std::uint32_t top = n + m - 2;
  profile.sizes.assign(top, {});
  for (std::uint32_t k = top; k >= n - 1 && k >= 1; --k) {
    auto& level = profile.sizes[k - 1];
    if (k >= m - 1) {
      for (std::uint64_t s = 1; s <= n + m - 1 - k; ++s) level.push_back(s);
    } else {
      for (std::uint64_t s = m - k; s <= n + m - k - 1; ++s) level.push_back(s);
    }
    if (k == 1) break;
  }
  for (std::uint32_t k = n - 2; k >= 1; --k) {
    const auto& below = profile.sizes[k];
    std::vector<std::uint64_t> level;
    level.reserve(below.size() - 1);
    level.push_back(below[0] + below[1] + 1);
    for (std::size_t l = 2; l < below.size(); ++l) level.push_back(below[l] + 1);
    std::sort(level.begin(), level.end());
    profile.sizes[k - 1] = std::move(level);
  }
  return profile;
}

SpanningTree minmin_tree(std::uint32_t n, std::uint32_t m) {
  if (n < 2 || m < 2) throw Error(ErrorCode::InvalidShape, "Min-Min needs both grid sides >= 2");
  const Instance grid = make_uniform_grid(n, m);
  if (n <= m) return SpanningTree::from_parents(grid, minmin_parents(n, m));

  // Solve the m x n grid and transpose (i,j) <-> (j,i).
  const auto t = minmin_parents(m, n);
  const GridShape small{m, n};
  const GridShape big{n, m};
  std::vector<VertexId> parent(t.size(), kNoParent);
  for (VertexId v = 0; v < t.size(); ++v) {
    if (t[v] == kNoParent) continue;
    const VertexId w = big.id(small.col(v), small.row(v));
    parent[w] = big.id(small.col(t[v]), small.row(t[v]));
  }
  return SpanningTree::from_parents(grid, std::move(parent));
}

bool check_property_a(const Instance& instance, const SpanningTree& tree) {
  const auto& g = instance.grid();
  if (!g) return false;
  const std::uint32_t n = std::min(g->rows, g->cols);
  const std::uint32_t m = std::max(g->rows, g->cols);
  if (n < 1) return false;
  const auto size = subtree_sizes(tree);
  const auto kids = tree.children();
  for (std::uint32_t k = std::max<std::uint32_t>(n - 1, 1); k <= m - 1; ++k) {
    std::vector<std::uint64_t> lengths;
    for (VertexId v = 0; v < instance.vertex_count(); ++v) {
      if (g->level(v) != k) continue;
      if (g->level(tree.parent(v)) + 1 != k) return false;
      // A path: every vertex in T_v has at most one child.
      for (VertexId w = v;;) {
        if (kids[w].size() > 1) return false;
        if (kids[w].empty()) break;
        w = kids[w].front();
      }
      lengths.push_back(size[v]);
    }
    std::sort(lengths.begin(), lengths.end());
    if (std::adjacent_find(lengths.begin(), lengths.end()) != lengths.end()) return false;
  }
  return true;
}

bool check_property_b(const Instance& instance, const SpanningTree& tree) {
  const auto& g = instance.grid();
  if (!g) return false;
  const std::uint32_t n = std::min(g->rows, g->cols);
  if (n < 3) return true;
  const auto size = subtree_sizes(tree);
  const auto kids = tree.children();
  std::vector<std::vector<VertexId>> by_level(g->max_level() + 1);
  for (VertexId v = 0; v < instance.vertex_count(); ++v) by_level[g->level(v)].push_back(v);

  for (std::uint32_t k = 1; k <= n - 2; ++k) {
    std::vector<std::uint64_t> next_sizes;
    for (const VertexId w : by_level[k + 1]) next_sizes.push_back(size[w]);
    std::sort(next_sizes.begin(), next_sizes.end());

    std::optional<VertexId> z;
    for (const VertexId v : by_level[k]) {
      const std::size_t degree = kids[v].size() + 1;
      if (degree == 3) {
        if (z) return false;
        z = v;
      } else if (degree != 2) {
        return false;
      }
    }
    if (!z) return false;
    std::vector<std::uint64_t> merged;
    for (const VertexId c : kids[*z]) {
      if (g->level(c) != k + 1) return false;
      merged.push_back(size[c]);
    }
    std::sort(merged.begin(), merged.end());
    if (next_sizes.size() < 2 || merged[0] != next_sizes[0] || merged[1] != next_sizes[1]) return false;
  }
  return true;
}

std::optional<std::uint32_t> beta(const SubtreeProfile& profile) {
  for (std::uint32_t k = profile.depth(); k >= 1; --k) {
    const auto& level = profile.level(k);
    if (!level.empty() && level.back() > 2ull * profile.n) return k;
  }
  // No level exceeds 2n; then nm = 1 + a_1^1 + a_1^2 <= 4n + 1.
  assert(std::uint64_t{profile.n} * profile.m <= 4ull * profile.n + 1);
  return std::nullopt;
}

SpanningTree shortest_path_tree(const Instance& instance) {
  const std::uint32_t nv = instance.vertex_count();
  constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max();
  std::vector<std::int64_t> dist(nv, kInf);
  std::vector<char> done(nv, 0);
  using Item = std::pair<std::int64_t, VertexId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  dist[instance.root()] = 0;
  queue.emplace(0, instance.root());
  while (!queue.empty()) {
    const auto [d, v] = queue.top();
    queue.pop();
    if (done[v]) continue;
    done[v] = 1;
    for (const auto& inc : instance.neighbors(v)) {
      const std::int64_t nd = d + instance.edges()[inc.edge].resistance;
      if (nd < dist[inc.neighbor]) {
        dist[inc.neighbor] = nd;
        queue.emplace(nd, inc.neighbor);
      }
    }
  }
  // Parent = smallest-id neighbour on a shortest path. Zero-resistance edges
  // make equidistant neighbours possible, so among those only a neighbour
  // with smaller hop depth over tight edges qualifies (no cycles).
  std::vector<std::uint32_t> hops(nv, std::numeric_limits<std::uint32_t>::max());
  hops[instance.root()] = 0;
  std::deque<VertexId> q{instance.root()};
  while (!q.empty()) {
    const VertexId v = q.front();
    q.pop_front();
    for (const auto& inc : instance.neighbors(v)) {
      const VertexId w = inc.neighbor;
      if (hops[w] != std::numeric_limits<std::uint32_t>::max()) continue;
      if (dist[v] + instance.edges()[inc.edge].resistance != dist[w]) continue;
      hops[w] = hops[v] + 1;
      q.push_back(w);
    }
  }
  std::vector<VertexId> parent(nv, kNoParent);
  for (VertexId v = 0; v < nv; ++v) {
    if (v == instance.root()) continue;
    for (const auto& inc : instance.neighbors(v)) {
      const VertexId u = inc.neighbor;
      if (dist[u] + instance.edges()[inc.edge].resistance != dist[v]) continue;
      if (dist[u] == dist[v] && hops[u] >= hops[v]) continue;
      if (parent[v] == kNoParent || u < parent[v]) parent[v] = u;
    }
  }
  return SpanningTree::from_parents(instance, std::move(parent));
}

NonuniformEvaluation evaluate_nonuniform(std::uint32_t n, std::uint32_t m,
                                         const std::map<VertexId, std::int64_t>& demands) {
  const Instance uniform = make_uniform_grid(n, m);
  std::map<VertexId, std::int64_t> full;
  std::int64_t dmin = std::numeric_limits<std::int64_t>::max();
  std::int64_t dmax = 0;
  for (VertexId v = 1; v < uniform.vertex_count(); ++v) {
    const auto it = demands.find(v);
    const std::int64_t d = it == demands.end() ? 0 : it->second;
    full[v] = d;
    dmin = std::min(dmin, d);
    dmax = std::max(dmax, d);
  }
  for (const auto& [v, d] : demands)
    if (v == 0 || v >= uniform.vertex_count())
      throw Error(ErrorCode::VertexOutOfRange, "demand on vertex " + std::to_string(v));
  if (dmin <= 0) throw Error(ErrorCode::ZeroMinDemand, "demands must be positive");

  const auto edges = grid_edges(n, m, 1);
  const Instance inst = Instance::make_general(n * m, edges, 0, full, GridShape{n, m});
  const SpanningTree tree = minmin_tree(n, m);
  NonuniformEvaluation out;
  out.report = evaluate(inst, tree);
  out.alpha = Rational(dmax, dmin);
  out.uniform_ratio = ratio_certificate(n, m).ratio_upper;
  out.certificate = out.alpha * out.alpha * out.uniform_ratio;
  return out;
}

}  // namespace ednr
