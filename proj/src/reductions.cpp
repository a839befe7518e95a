#include "ednr/reductions.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <queue>
#include <random>

namespace ednr {

namespace {

constexpr std::uint64_t kMaxReductionVertices = 20'000'000;

std::int64_t checked_sum(const std::vector<std::int64_t>& a) {
  std::int64_t s = 0;
  for (const auto x : a) {
    if (x < 1) throw Error(ErrorCode::InvalidArgument, "items must be positive integers");
    if (__builtin_add_overflow(s, x, &s)) throw Error(ErrorCode::TooLarge, "item sum overflows");
  }
  return s;
}

}  // namespace

ReductionArtifact encode_partition(const PartitionInstance& p) {
  if (p.a.empty()) throw Error(ErrorCode::InvalidArgument, "partition needs at least one item");
  const std::int64_t total = checked_sum(p.a);
  const auto m = static_cast<std::uint32_t>(p.a.size());
  const GridShape g{3, m + 1};
  std::map<VertexId, std::int64_t> demands;
  for (std::uint32_t k = 0; k < m; ++k) demands[g.id(1, k + 1)] = p.a[k];
  const std::map<std::pair<VertexId, VertexId>, std::int64_t> res{{{g.id(0, 0), g.id(0, 1)}, 1},
                                                                   {{g.id(0, 0), g.id(1, 0)}, 1}};
  ReductionArtifact art{make_grid(3, m + 1, demands, res, 0), Rational(BigInt{total} * total, 2), {}, {}, {}, {}};
  for (std::uint32_t k = 0; k < m; ++k) art.item_vertices.push_back({g.id(1, k + 1)});
  return art;
}

std::set<std::uint32_t> decode_partition(const ReductionArtifact& artifact, const SpanningTree& tree) {
  const GridShape& g = *artifact.instance.grid();
  std::set<std::uint32_t> items;
  const VertexId top = g.id(0, 1);
  if (tree.parent(top) != g.id(0, 0)) return items;
  for (std::uint32_t k = 0; k < artifact.item_vertices.size(); ++k) {
    // Walk up until the root; downstream of the edge iff we pass (0,1).
    for (VertexId v = artifact.item_vertices[k].front(); v != tree.root(); v = tree.parent(v)) {
      if (v == top) {
        items.insert(k);
        break;
      }
    }
  }
  return items;
}

SpanningTree witness_tree_partition(const ReductionArtifact& artifact, const std::set<std::uint32_t>& items) {
  const GridShape& g = *artifact.instance.grid();
  const std::uint32_t m = g.cols - 1;
  for (const auto k : items)
    if (k >= m) throw Error(ErrorCode::InvalidArgument, "item " + std::to_string(k) + " out of range");
  std::vector<std::pair<VertexId, VertexId>> pairs;
  for (std::uint32_t j = 0; j < m; ++j) {
    pairs.emplace_back(g.id(0, j), g.id(0, j + 1));
    pairs.emplace_back(g.id(2, j), g.id(2, j + 1));
  }
  pairs.emplace_back(g.id(0, 0), g.id(1, 0));
  pairs.emplace_back(g.id(1, 0), g.id(2, 0));
  for (std::uint32_t k = 0; k < m; ++k) {
    if (items.contains(k)) {
      pairs.emplace_back(g.id(0, k + 1), g.id(1, k + 1));
    } else {
      pairs.emplace_back(g.id(1, k + 1), g.id(2, k + 1));
    }
  }
  return SpanningTree::from_vertex_pairs(artifact.instance, pairs);
}

ReductionArtifact encode_3partition(const ThreePartitionInstance& q, std::optional<std::int64_t> width,
                                    std::optional<std::int64_t> r_inf) {
  if (q.n == 0) throw Error(ErrorCode::InvalidArgument, "n must be positive");
  if (q.a.size() != 3ull * q.n)
    throw Error(ErrorCode::InvalidArgument,
                "expected " + std::to_string(3ull * q.n) + " items, got " + std::to_string(q.a.size()));
  const std::int64_t total = checked_sum(q.a);
  const std::int64_t n = q.n;
  for (std::size_t j = 0; j < q.a.size(); ++j) {
    if (!(4 * n * q.a[j] > total && 2 * n * q.a[j] < total))
      throw Error(ErrorCode::WindowViolated, "item " + std::to_string(j) + " = " + std::to_string(q.a[j]) +
                                                 " is outside (S/4n, S/2n) for S = " + std::to_string(total));
  }
  if (total % n != 0)
    throw Error(ErrorCode::NonDivisible, "S = " + std::to_string(total) + " is not divisible by n = " +
                                             std::to_string(n) + "; trivially NO");

  BigInt w_big = width ? BigInt{*width} : BigInt{n} * n * n * n * n;
  BigInt r_big = r_inf ? BigInt{*r_inf} : BigInt{total} * total * total + 1;
  if (w_big < 1) throw Error(ErrorCode::InvalidArgument, "W must be at least 1");
  if (r_big < 2) throw Error(ErrorCode::InvalidArgument, "R_inf must be at least 2");
  const std::int64_t a_max = *std::max_element(q.a.begin(), q.a.end());
  const BigInt rows_big = 3 * BigInt{n} * (w_big + 1) + w_big;
  const BigInt cols_big = 2 + BigInt{a_max} + 2 * w_big;
  if (rows_big * cols_big > kMaxReductionVertices)
    throw Error(ErrorCode::TooLarge, "grid " + rows_big.str() + " x " + cols_big.str() + " is too large to build");
  if (r_big > BigInt{std::numeric_limits<std::int64_t>::max() / 4})
    throw Error(ErrorCode::TooLarge, "R_inf does not fit in 64 bits");
  const auto w = w_big.convert_to<std::int64_t>();
  const auto big_r = r_big.convert_to<std::int64_t>();
  const auto rows = rows_big.convert_to<std::uint32_t>();
  const auto cols = cols_big.convert_to<std::uint32_t>();
  const GridShape g{rows, cols};

  std::vector<std::int32_t> chain_of(std::size_t{rows} * cols, -1);
  std::map<VertexId, std::int64_t> demands;
  std::vector<std::vector<VertexId>> chains(q.a.size());
  for (std::uint32_t t = 0; t < q.a.size(); ++t) {
    const auto row = static_cast<std::uint32_t>((t + 1) * (w + 1));
    for (std::int64_t c = 0; c < q.a[t]; ++c) {
      const VertexId v = g.id(row, static_cast<std::uint32_t>(w + 2 + c));
      chains[t].push_back(v);
      chain_of[v] = static_cast<std::int32_t>(t);
      demands[v] = 1;
    }
  }
  std::vector<char> feeder_row(rows, 0);
  for (std::int64_t k = 0; k < n; ++k) feeder_row[(3 * k + 2) * (w + 1)] = 1;

  auto edges = grid_edges(rows, cols, 0);
  for (auto& e : edges) {
    const std::int32_t cu = chain_of[e.u];
    const std::int32_t cv = chain_of[e.v];
    if (g.col(e.u) == 0 && g.col(e.v) == 1) {
      e.resistance = feeder_row[g.row(e.u)] ? 1 : big_r;
    } else if (cu >= 0 || cv >= 0) {
      const bool internal = cu == cv;
      // Entry edge: (row, W+1) -- first chain vertex.
      const bool entry = cu < 0 && e.v == chains[cv].front() && e.u + 1 == e.v;
      e.resistance = internal || entry ? 0 : big_r;
    }
  }
  Instance inst = Instance::make_general(rows * cols, edges, 0, demands, g);
  ReductionArtifact art{std::move(inst), Rational(BigInt{total} * total, BigInt{n}), std::move(chains), {}, w,
                        big_r};
  for (std::int64_t k = 0; k < n; ++k) {
    const auto row = static_cast<std::uint32_t>((3 * k + 2) * (w + 1));
    art.feeder_edges.push_back(*art.instance.find_edge(g.id(row, 0), g.id(row, 1)));
  }
  return art;
}

StructureReport check_3partition_structure(const ReductionArtifact& artifact) {
  const Instance& inst = artifact.instance;
  const std::int64_t big_r = artifact.r_inf.value_or(std::numeric_limits<std::int64_t>::max());
  StructureReport rep;
  std::vector<std::int32_t> chain_of(inst.vertex_count(), -1);
  for (std::uint32_t t = 0; t < artifact.item_vertices.size(); ++t)
    for (const VertexId v : artifact.item_vertices[t]) chain_of[v] = static_cast<std::int32_t>(t);

  std::vector<std::uint32_t> exits(artifact.item_vertices.size(), 0);
  for (const auto& e : inst.edges()) {
    if (e.resistance == 1) ++rep.unit_edges;
    if (e.resistance >= big_r || chain_of[e.u] == chain_of[e.v]) continue;
    if (chain_of[e.u] >= 0) ++exits[chain_of[e.u]];
    if (chain_of[e.v] >= 0) ++exits[chain_of[e.v]];
  }
  rep.single_entry_per_chain = std::all_of(exits.begin(), exits.end(), [](auto c) { return c == 1; });
  rep.unit_edge_count_ok = rep.unit_edges == artifact.feeder_edges.size();

  auto flood = [&](std::int64_t below) {
    std::vector<char> seen(inst.vertex_count(), 0);
    std::vector<VertexId> stack{inst.root()};
    seen[inst.root()] = 1;
    while (!stack.empty()) {
      const VertexId v = stack.back();
      stack.pop_back();
      for (const auto& inc : inst.neighbors(v)) {
        if (seen[inc.neighbor] || inst.edges()[inc.edge].resistance >= below) continue;
        seen[inc.neighbor] = 1;
        stack.push_back(inc.neighbor);
      }
    }
    return seen;
  };
  const auto all = flood(big_r);
  rep.reachable_below_rinf = std::all_of(all.begin(), all.end(), [](char c) { return c != 0; });
  const auto free = flood(1);
  rep.demand_behind_unit_edges = true;
  for (VertexId v = 0; v < inst.vertex_count(); ++v)
    if (free[v] && inst.demand(v) > 0) rep.demand_behind_unit_edges = false;
  return rep;
}

namespace {

constexpr int kRoutingAttempts = 64;
constexpr int kPathTries = 16;

// One routing attempt; empty result on failure.
std::vector<VertexId> route_groups(const ReductionArtifact& artifact,
                                   const std::vector<std::vector<std::uint32_t>>& groups, int attempt) {
  const Instance& inst = artifact.instance;
  const GridShape& g = *inst.grid();
  const auto nv = inst.vertex_count();
  std::mt19937 rng(static_cast<std::uint32_t>(attempt));

  constexpr std::int32_t kFree = -1;
  constexpr std::int32_t kBlocked = -2;
  std::vector<std::int32_t> owner(nv, kFree);
  std::vector<VertexId> parent(nv, kNoParent);
  for (std::uint32_t i = 0; i < g.rows; ++i) owner[g.id(i, 0)] = kBlocked;
  for (const auto& chain : artifact.item_vertices)
    for (const VertexId v : chain) owner[v] = kBlocked;

  const auto group_count = static_cast<std::uint32_t>(groups.size());
  std::vector<VertexId> source(group_count);
  for (std::uint32_t i = 0; i < group_count; ++i) {
    const auto& e = inst.edges()[artifact.feeder_edges[i]];
    source[i] = g.col(e.u) == 1 ? e.u : e.v;
    owner[source[i]] = static_cast<std::int32_t>(i);
  }
  // Terminal = the vertex just left of a chain's entry.
  auto terminal = [&](std::uint32_t item) { return artifact.item_vertices[item].front() - 1; };
  for (std::uint32_t i = 0; i < group_count; ++i)
    for (const auto item : groups[i]) owner[terminal(item)] = static_cast<std::int32_t>(i);
  std::vector<std::uint32_t> group_order(group_count);
  std::iota(group_order.begin(), group_order.end(), 0u);
  std::array<std::pair<int, int>, 4> dirs{{{-1, 0}, {0, -1}, {0, 1}, {1, 0}}};
  if (attempt > 0) {
    std::shuffle(group_order.begin(), group_order.end(), rng);
    std::shuffle(dirs.begin(), dirs.end(), rng);
  }

  std::vector<char> in_tree(nv, 0);
  std::vector<std::vector<VertexId>> members(group_count);
  for (std::uint32_t i = 0; i < group_count; ++i) {
    members[i] = {source[i]};
    in_tree[source[i]] = 1;
  }

  auto for_each_neighbour = [&](VertexId v, auto&& visit) {
    const auto r = static_cast<std::int64_t>(g.row(v));
    const auto c = static_cast<std::int64_t>(g.col(v));
    for (const auto& [dr, dc] : dirs) {
      const std::int64_t nr = r + dr;
      const std::int64_t nc = c + dc;
      if (nr < 0 || nc < 0 || nr >= g.rows || nc >= g.cols) continue;
      visit(g.id(static_cast<std::uint32_t>(nr), static_cast<std::uint32_t>(nc)));
    }
  };

  // Every group can still reach each of its unrouted terminals through free
  // cells and cells it owns.
  std::vector<std::uint32_t> stamp(nv, 0);
  std::uint32_t round = 0;
  std::vector<VertexId> queue;
  auto all_reachable = [&] {
    for (std::uint32_t h = 0; h < group_count; ++h) {
      ++round;
      queue = members[h];
      for (const VertexId v : queue) stamp[v] = round;
      for (std::size_t head = 0; head < queue.size(); ++head)
        for_each_neighbour(queue[head], [&](VertexId w) {
          if (stamp[w] == round) return;
          if (owner[w] != kFree && owner[w] != static_cast<std::int32_t>(h)) return;
          stamp[w] = round;
          queue.push_back(w);
        });
      for (const auto item : groups[h])
        if (stamp[terminal(item)] != round) return false;
    }
    return true;
  };
  if (!all_reachable()) return {};

  // Cheapest path from the group's tree to `target` under random cell costs
  // (unit costs on the first try).
  std::vector<std::uint64_t> dist(nv);
  std::vector<VertexId> pred(nv);
  std::vector<std::uint8_t> cost(nv, 1);
  auto find_path = [&](std::uint32_t gi, VertexId target) -> std::vector<VertexId> {
    using Item = std::pair<std::uint64_t, VertexId>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    ++round;
    for (const VertexId v : members[gi]) {
      stamp[v] = round;
      dist[v] = 0;
      heap.emplace(0, v);
    }
    while (!heap.empty()) {
      const auto [d, v] = heap.top();
      heap.pop();
      if (d != dist[v]) continue;
      if (v == target) break;
      for_each_neighbour(v, [&](VertexId w) {
        if (w != target && owner[w] != kFree) return;
        const std::uint64_t nd = d + cost[w];
        if (stamp[w] == round && dist[w] <= nd) return;
        stamp[w] = round;
        dist[w] = nd;
        pred[w] = v;
        heap.emplace(nd, w);
      });
    }
    if (stamp[target] != round) return {};
    std::vector<VertexId> path;
    for (VertexId v = target; !in_tree[v]; v = pred[v]) path.push_back(v);
    return path;
  };

  std::uniform_int_distribution<int> random_cost(1, 4);
  for (const auto gi : group_order) {
    std::vector<std::uint32_t> items = groups[gi];
    const auto src_row = static_cast<std::int64_t>(g.row(source[gi]));
    std::sort(items.begin(), items.end(), [&](auto x, auto y) {
      return std::llabs(g.row(terminal(x)) - src_row) < std::llabs(g.row(terminal(y)) - src_row);
    });
    if (attempt > 1) std::shuffle(items.begin(), items.end(), rng);
    for (const auto item : items) {
      const VertexId target = terminal(item);
      if (in_tree[target]) continue;
      bool placed = false;
      for (int t = 0; t < kPathTries && !placed; ++t) {
        for (auto& c : cost) c = t == 0 ? 1 : static_cast<std::uint8_t>(random_cost(rng));
        const auto path = find_path(gi, target);
        if (path.empty()) return {};
        for (const VertexId v : path) owner[v] = static_cast<std::int32_t>(gi);
        const auto before = members[gi].size();
        members[gi].insert(members[gi].end(), path.begin(), path.end());
        if (all_reachable()) {
          for (const VertexId v : path) {
            in_tree[v] = 1;
            parent[v] = pred[v];
          }
          placed = true;
        } else {
          members[gi].resize(before);
          for (const VertexId v : path) owner[v] = v == target ? static_cast<std::int32_t>(gi) : kFree;
        }
      }
      if (!placed) return {};
    }
  }

  // Column 0 spine, feeders, chains.
  for (std::uint32_t i = 1; i < g.rows; ++i) parent[g.id(i, 0)] = g.id(i - 1, 0);
  for (std::uint32_t i = 0; i < group_count; ++i) parent[source[i]] = source[i] - 1;
  for (const auto& chain : artifact.item_vertices) {
    parent[chain.front()] = chain.front() - 1;
    for (std::size_t c = 1; c < chain.size(); ++c) parent[chain[c]] = chain[c - 1];
  }
  // Attach what is left as zero-demand leaves.
  std::vector<char> attached(nv, 0);
  queue.clear();
  for (VertexId v = 0; v < nv; ++v) {
    if (v == inst.root() || parent[v] != kNoParent) {
      attached[v] = 1;
      queue.push_back(v);
    }
  }
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const VertexId v = queue[head];
    for (const auto& inc : inst.neighbors(v)) {
      if (attached[inc.neighbor]) continue;
      attached[inc.neighbor] = 1;
      parent[inc.neighbor] = v;
      queue.push_back(inc.neighbor);
    }
  }
  return parent;
}

}  // namespace

SpanningTree witness_tree_3partition(const ReductionArtifact& artifact,
                                     const std::vector<std::vector<std::uint32_t>>& groups) {
  const auto items = static_cast<std::uint32_t>(artifact.item_vertices.size());
  const auto n = static_cast<std::uint32_t>(artifact.feeder_edges.size());
  if (groups.size() != n)
    throw Error(ErrorCode::NotAPartition, "expected " + std::to_string(n) + " groups, got " +
                                              std::to_string(groups.size()));
  std::vector<int> seen(items, 0);
  for (const auto& group : groups)
    for (const auto k : group) {
      if (k >= items) throw Error(ErrorCode::NotAPartition, "item " + std::to_string(k) + " out of range");
      ++seen[k];
    }
  for (std::uint32_t k = 0; k < items; ++k)
    if (seen[k] != 1) throw Error(ErrorCode::NotAPartition, "item " + std::to_string(k) + " used " +
                                                                std::to_string(seen[k]) + " times");
  std::int64_t total = 0;
  for (const auto& chain : artifact.item_vertices) total += static_cast<std::int64_t>(chain.size());
  for (std::uint32_t i = 0; i < n; ++i) {
    std::int64_t sum = 0;
    for (const auto k : groups[i]) sum += static_cast<std::int64_t>(artifact.item_vertices[k].size());
    if (sum * n != total)
      throw Error(ErrorCode::Unbalanced, "group " + std::to_string(i) + " sums to " + std::to_string(sum) +
                                             ", target " + std::to_string(total / n));
  }
  for (int attempt = 0; attempt < kRoutingAttempts; ++attempt) {
    auto parent = route_groups(artifact, groups, attempt);
    if (parent.empty()) continue;
    SpanningTree tree = SpanningTree::from_parents(artifact.instance, std::move(parent));
    if (Rational(evaluate(artifact.instance, tree).total) == artifact.threshold) return tree;
  }
  throw Error(ErrorCode::RoutingFailed, "could not route the groups disjointly; try a larger W");
}

}  // namespace ednr
