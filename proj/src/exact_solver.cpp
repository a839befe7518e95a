#include "ednr/exact_solver.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <numeric>
#include <queue>
#include <thread>

#include "ednr/minmin.hpp"

namespace ednr {

std::string_view to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Optimal: return "Optimal";
    case SolveStatus::BudgetExhausted: return "BudgetExhausted";
  }
  return "Unknown";
}

namespace {

constexpr std::int64_t kInfinity = std::numeric_limits<std::int64_t>::max();

// Union-find with undo; no path compression so unions can be reverted.
class RollbackDsu {
 public:
  explicit RollbackDsu(std::uint32_t n) : parent_(n), size_(n, 1) {
    std::iota(parent_.begin(), parent_.end(), 0u);
  }

  [[nodiscard]] std::uint32_t find(std::uint32_t x) const {
    while (parent_[x] != x) x = parent_[x];
    return x;
  }

  bool unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    history_.push_back(b);
    return true;
  }

  void undo() {
    const std::uint32_t b = history_.back();
    history_.pop_back();
    size_[parent_[b]] -= size_[b];
    parent_[b] = b;
  }

 private:
  std::vector<std::uint32_t> parent_;
  std::vector<std::uint32_t> size_;
  std::vector<std::uint32_t> history_;
};

}  // namespace

long double spanning_tree_count(const Instance& instance) {
  const std::uint32_t nv = instance.vertex_count();
  if (nv <= 1) return 1.0L;
  // Laplacian with the root row/column removed.
  std::vector<std::uint32_t> index(nv);
  std::uint32_t next = 0;
  for (VertexId v = 0; v < nv; ++v) index[v] = v == instance.root() ? nv : next++;
  const std::uint32_t dim = nv - 1;
  std::vector<long double> a(std::size_t{dim} * dim, 0.0L);
  auto at = [&](std::uint32_t i, std::uint32_t j) -> long double& { return a[std::size_t{i} * dim + j]; };
  for (const auto& e : instance.edges()) {
    const auto iu = index[e.u];
    const auto iv = index[e.v];
    if (iu < dim) at(iu, iu) += 1;
    if (iv < dim) at(iv, iv) += 1;
    if (iu < dim && iv < dim) {
      at(iu, iv) -= 1;
      at(iv, iu) -= 1;
    }
  }
  long double det = 1.0L;
  for (std::uint32_t c = 0; c < dim; ++c) {
    std::uint32_t pivot = c;
    for (std::uint32_t r = c + 1; r < dim; ++r)
      if (std::fabs(at(r, c)) > std::fabs(at(pivot, c))) pivot = r;
    if (at(pivot, c) == 0.0L) return 0.0L;
    if (pivot != c) {
      for (std::uint32_t j = 0; j < dim; ++j) std::swap(at(pivot, j), at(c, j));
      det = -det;
    }
    det *= at(c, c);
    for (std::uint32_t r = c + 1; r < dim; ++r) {
      const long double f = at(r, c) / at(c, c);
      if (f == 0.0L) continue;
      for (std::uint32_t j = c; j < dim; ++j) at(r, j) -= f * at(c, j);
    }
  }
  return std::fabs(det);
}

void for_each_spanning_tree(const Instance& instance,
                            const std::function<bool(const std::vector<std::uint32_t>&)>& visit) {
  const std::uint32_t nv = instance.vertex_count();
  const auto& edges = instance.edges();
  const auto ne = static_cast<std::uint32_t>(edges.size());
  RollbackDsu dsu(nv);
  std::vector<char> excluded(ne, 0);
  std::vector<std::uint32_t> chosen;
  std::vector<char> seen(nv);
  std::vector<VertexId> stack;

  // Is the graph without excluded edges still connected?
  auto connected = [&]() {
    std::fill(seen.begin(), seen.end(), 0);
    stack.assign(1, instance.root());
    seen[instance.root()] = 1;
    std::uint32_t count = 1;
    while (!stack.empty()) {
      const VertexId v = stack.back();
      stack.pop_back();
      for (const auto& inc : instance.neighbors(v)) {
        if (excluded[inc.edge] || seen[inc.neighbor]) continue;
        seen[inc.neighbor] = 1;
        ++count;
        stack.push_back(inc.neighbor);
      }
    }
    return count == nv;
  };

  bool keep_going = true;
  std::function<void(std::uint32_t)> recurse = [&](std::uint32_t i) {
    if (!keep_going) return;
    if (chosen.size() + 1 == nv) {
      keep_going = visit(chosen);
      return;
    }
    if (i == ne) return;
    const auto& e = edges[i];
    if (dsu.unite(e.u, e.v)) {
      chosen.push_back(i);
      recurse(i + 1);
      chosen.pop_back();
      dsu.undo();
    }
    excluded[i] = 1;
    if (connected()) recurse(i + 1);
    excluded[i] = 0;
  };
  if (nv == 1) {
    visit(chosen);
    return;
  }
  recurse(0);
}

SolveResult enumerate_all(const Instance& instance, std::uint64_t limit) {
  const long double count = spanning_tree_count(instance);
  if (count > static_cast<long double>(limit) + 0.5L)
    throw Error(ErrorCode::TooLarge, "about " + std::to_string(static_cast<double>(count)) +
                                         " spanning trees exceed the enumeration limit " + std::to_string(limit));
  std::optional<SpanningTree> best;
  BigInt best_loss;
  std::uint64_t visited = 0;
  for_each_spanning_tree(instance, [&](const std::vector<std::uint32_t>& edges) {
    ++visited;
    SpanningTree tree = SpanningTree::from_edges(instance, edges);
    BigInt loss = evaluate(instance, tree).total;
    if (!best || loss < best_loss) {
      best_loss = std::move(loss);
      best = std::move(tree);
    }
    return true;
  });
  return SolveResult{std::move(*best), best_loss, SolveStatus::Optimal, visited, std::nullopt};
}

namespace {

// Static data shared by every search worker.
struct Problem {
  const Instance* instance = nullptr;
  std::uint32_t nv = 0;
  std::uint32_t ne = 0;
  std::vector<std::uint32_t> eu, ev;
  std::vector<std::int64_t> res;
  std::vector<std::int64_t> dem;
  std::vector<std::uint32_t> layer;
  std::uint32_t max_layer = 0;
  std::vector<std::vector<VertexId>> layer_vertices;
  // Edges whose lower endpoint layer is k (both endpoints in V_{>=k}).
  std::vector<std::vector<std::uint32_t>> edges_from_layer;
  // Edges joining w to the previous layer.
  std::vector<std::vector<std::uint32_t>> up_edges;
  std::vector<std::uint32_t> order;

  Problem(const Instance& inst, BranchOrder branch_order) : instance(&inst) {
    nv = inst.vertex_count();
    ne = static_cast<std::uint32_t>(inst.edges().size());
    for (const auto& e : inst.edges()) {
      eu.push_back(e.u);
      ev.push_back(e.v);
      res.push_back(e.resistance);
    }
    if (branch_order == BranchOrder::Auto)
      branch_order = std::find(res.begin(), res.end(), 0) != res.end() ? BranchOrder::FarFirst : BranchOrder::NearFirst;
    dem = inst.demands();
    layer.assign(nv, std::numeric_limits<std::uint32_t>::max());
    std::vector<VertexId> queue{inst.root()};
    layer[inst.root()] = 0;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const VertexId v = queue[head];
      for (const auto& inc : inst.neighbors(v)) {
        if (layer[inc.neighbor] != std::numeric_limits<std::uint32_t>::max()) continue;
        layer[inc.neighbor] = layer[v] + 1;
        queue.push_back(inc.neighbor);
      }
    }
    max_layer = *std::max_element(layer.begin(), layer.end());
    layer_vertices.assign(max_layer + 1, {});
    for (VertexId v = 0; v < nv; ++v) layer_vertices[layer[v]].push_back(v);
    edges_from_layer.assign(max_layer + 1, {});
    up_edges.assign(nv, {});
    for (std::uint32_t i = 0; i < ne; ++i) {
      const auto lu = layer[eu[i]];
      const auto lv = layer[ev[i]];
      edges_from_layer[std::min(lu, lv)].push_back(i);
      if (lu + 1 == lv) up_edges[ev[i]].push_back(i);
      if (lv + 1 == lu) up_edges[eu[i]].push_back(i);
    }
    order.resize(ne);
    std::iota(order.begin(), order.end(), 0u);
    auto key = [&](std::uint32_t i) {
      const auto lo = std::min(layer[eu[i]], layer[ev[i]]);
      const auto hi = std::max(layer[eu[i]], layer[ev[i]]);
      // Cut edges of layer hi sort before same-layer edges of hi.
      return std::pair<std::uint32_t, std::uint32_t>(hi, lo == hi ? 1u : 0u);
    };
    std::stable_sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
      const auto ka = key(a);
      const auto kb = key(b);
      if (ka.first != kb.first)
        return branch_order == BranchOrder::FarFirst ? ka.first > kb.first : ka.first < kb.first;
      return ka.second < kb.second;
    });
  }
};

struct Bin {
  std::int64_t resistance;
  std::int64_t preload;
};

constexpr std::int64_t kSubsetSumCap = 1 << 14;
constexpr std::int64_t kUnitCap = 1 << 16;

// Least sum r_b (preload_b + load_b)^2 over assignments of the items to bins,
// relaxed where exact assignment is too costly. kInfinity if items cannot
// be placed at all.
std::int64_t allocate(const std::vector<Bin>& bins, const std::vector<std::int64_t>& items) {
  std::int64_t base = 0;
  bool zero_bin = false;
  for (const auto& b : bins) {
    base += b.resistance * b.preload * b.preload;
    zero_bin = zero_bin || b.resistance == 0;
  }
  std::int64_t total = 0;
  for (const auto x : items) total += x;
  if (total == 0 || zero_bin) return base;
  if (bins.empty()) return kInfinity;
  if (bins.size() == 1) {
    const auto& b = bins.front();
    return b.resistance * (b.preload + total) * (b.preload + total);
  }
  if (bins.size() == 2 && total <= kSubsetSumCap) {
    std::vector<char> reach(total + 1, 0);
    reach[0] = 1;
    std::int64_t hi = 0;
    for (const auto x : items) {
      for (std::int64_t s = hi; s >= 0; --s)
        if (reach[s]) reach[s + x] = 1;
      hi += x;
    }
    const auto& a = bins[0];
    const auto& b = bins[1];
    std::int64_t best = kInfinity;
    for (std::int64_t s = 0; s <= total; ++s) {
      if (!reach[s]) continue;
      const std::int64_t la = a.preload + s;
      const std::int64_t lb = b.preload + total - s;
      best = std::min(best, a.resistance * la * la + b.resistance * lb * lb);
    }
    return best;
  }
  // Items split into gcd-sized units; greedy marginal allocation is optimal
  // for this separable convex relaxation.
  std::int64_t unit = 0;
  for (const auto x : items) unit = std::gcd(unit, x);
  const std::int64_t units = total / unit;
  if (units > kUnitCap) return base;
  using Slot = std::pair<std::int64_t, std::uint32_t>;  // (marginal cost, bin)
  std::priority_queue<Slot, std::vector<Slot>, std::greater<>> heap;
  std::vector<std::int64_t> load(bins.size());
  auto marginal = [&](std::uint32_t i) {
    const std::int64_t cur = bins[i].preload + load[i];
    return bins[i].resistance * ((cur + unit) * (cur + unit) - cur * cur);
  };
  for (std::uint32_t i = 0; i < bins.size(); ++i) heap.emplace(marginal(i), i);
  std::int64_t cost = base;
  for (std::int64_t u = 0; u < units; ++u) {
    const auto [c, i] = heap.top();
    heap.pop();
    cost += c;
    load[i] += unit;
    heap.emplace(marginal(i), i);
  }
  return cost;
}

// Scratch buffers for the bound; one per worker.
struct BoundScratch {
  std::vector<std::uint32_t> piece;      // union-find parent over V_{>=k}
  std::vector<std::int64_t> piece_demand;
  std::vector<char> in_root;
  std::vector<VertexId> root_parent;
  std::vector<std::uint32_t> root_parent_edge;
  std::vector<VertexId> queue;
  std::vector<std::vector<std::pair<VertexId, std::uint32_t>>> tree_adj;
  std::vector<Bin> bins;
  std::vector<std::int64_t> items;

  explicit BoundScratch(std::uint32_t nv)
      : piece(nv), piece_demand(nv), in_root(nv), root_parent(nv), root_parent_edge(nv), tree_adj(nv) {}

  std::uint32_t find(std::uint32_t x) {
    while (piece[x] != x) {
      piece[x] = piece[piece[x]];
      x = piece[x];
    }
    return x;
  }
};

std::int64_t compute_bound(const Problem& p, const std::vector<EdgeState>& states, BoundScratch& s) {
  // Root component over included edges, oriented away from the root.
  for (VertexId v = 0; v < p.nv; ++v) s.tree_adj[v].clear();
  for (std::uint32_t i = 0; i < p.ne; ++i) {
    if (states[i] != EdgeState::Included) continue;
    s.tree_adj[p.eu[i]].emplace_back(p.ev[i], i);
    s.tree_adj[p.ev[i]].emplace_back(p.eu[i], i);
  }
  std::fill(s.in_root.begin(), s.in_root.end(), 0);
  const VertexId root = p.instance->root();
  s.queue.assign(1, root);
  s.in_root[root] = 1;
  for (std::size_t head = 0; head < s.queue.size(); ++head) {
    const VertexId v = s.queue[head];
    for (const auto& [w, e] : s.tree_adj[v]) {
      if (s.in_root[w]) continue;
      s.in_root[w] = 1;
      s.root_parent[w] = v;
      s.root_parent_edge[w] = e;
      s.queue.push_back(w);
    }
  }

  std::int64_t bound = 0;
  for (std::uint32_t k = p.max_layer; k >= 1; --k) {
    for (const VertexId v : p.layer_vertices[k]) {
      s.piece[v] = v;
      s.piece_demand[v] = p.dem[v];
    }
    for (const auto i : p.edges_from_layer[k]) {
      if (states[i] != EdgeState::Included) continue;
      const auto a = s.find(p.eu[i]);
      const auto b = s.find(p.ev[i]);
      if (a == b) continue;
      s.piece[b] = a;
      s.piece_demand[a] += s.piece_demand[b];
    }

    s.bins.clear();
    for (const VertexId w : p.layer_vertices[k]) {
      if (s.in_root[w]) {
        if (p.layer[s.root_parent[w]] + 1 == k)
          s.bins.push_back({p.res[s.root_parent_edge[w]], s.piece_demand[s.find(w)]});
        continue;
      }
      std::int64_t best = kInfinity;
      for (const auto i : p.up_edges[w])
        if (states[i] != EdgeState::Excluded) best = std::min(best, p.res[i]);
      if (best != kInfinity) s.bins.push_back({best, 0});
    }
    s.items.clear();
    for (std::uint32_t l = k; l <= p.max_layer; ++l) {
      for (const VertexId v : p.layer_vertices[l]) {
        if (s.in_root[v] || s.piece[v] != v) continue;
        if (s.piece_demand[v] > 0) s.items.push_back(s.piece_demand[v]);
      }
    }
    const std::int64_t cut = allocate(s.bins, s.items);
    if (cut == kInfinity) return kInfinity;
    bound += cut;
  }
  return bound;
}

// Exact loss of a complete tree given by included edges.
std::int64_t leaf_loss(const Problem& p, const std::vector<EdgeState>& states, BoundScratch& s,
                       std::vector<VertexId>* parents) {
  for (VertexId v = 0; v < p.nv; ++v) s.tree_adj[v].clear();
  for (std::uint32_t i = 0; i < p.ne; ++i) {
    if (states[i] != EdgeState::Included) continue;
    s.tree_adj[p.eu[i]].emplace_back(p.ev[i], i);
    s.tree_adj[p.ev[i]].emplace_back(p.eu[i], i);
  }
  const VertexId root = p.instance->root();
  std::fill(s.in_root.begin(), s.in_root.end(), 0);
  s.queue.assign(1, root);
  s.in_root[root] = 1;
  for (std::size_t head = 0; head < s.queue.size(); ++head) {
    const VertexId v = s.queue[head];
    for (const auto& [w, e] : s.tree_adj[v]) {
      if (s.in_root[w]) continue;
      s.in_root[w] = 1;
      s.root_parent[w] = v;
      s.root_parent_edge[w] = e;
      s.queue.push_back(w);
    }
  }
  std::vector<std::int64_t>& below = s.piece_demand;
  for (VertexId v = 0; v < p.nv; ++v) below[v] = p.dem[v];
  std::int64_t loss = 0;
  for (std::size_t idx = s.queue.size(); idx-- > 1;) {
    const VertexId v = s.queue[idx];
    loss += p.res[s.root_parent_edge[v]] * below[v] * below[v];
    below[s.root_parent[v]] += below[v];
  }
  if (parents) {
    parents->assign(p.nv, kNoParent);
    for (std::size_t idx = 1; idx < s.queue.size(); ++idx) (*parents)[s.queue[idx]] = s.root_parent[s.queue[idx]];
  }
  return loss;
}

struct Shared {
  std::atomic<std::int64_t> best{kInfinity};
  std::mutex mutex;
  std::vector<VertexId> best_parents;
  std::atomic<std::uint64_t> nodes{0};
  std::atomic<bool> stop{false};
  std::atomic<bool> exhausted{false};
  std::optional<std::uint64_t> max_nodes;
  std::optional<std::chrono::steady_clock::time_point> deadline;
  bool stop_at_first = false;

  void offer(std::int64_t loss, const std::vector<VertexId>& parents) {
    std::lock_guard lock(mutex);
    if (loss < best.load()) {
      best.store(loss);
      best_parents = parents;
    }
    if (stop_at_first) stop.store(true);
  }
};

struct Task {
  std::vector<EdgeState> states;
  std::uint32_t position = 0;
  std::uint32_t included = 0;
};

class Searcher {
 public:
  Searcher(const Problem& p, Shared& shared)
      : p_(p), shared_(shared), dsu_(p.nv), scratch_(p.nv), seen_(p.nv) {}

  void run(const Task& task, std::optional<std::uint32_t> split_depth = std::nullopt,
           std::vector<Task>* tasks = nullptr) {
    states_ = task.states;
    dsu_ = RollbackDsu(p_.nv);
    for (std::uint32_t i = 0; i < p_.ne; ++i)
      if (states_[i] == EdgeState::Included) dsu_.unite(p_.eu[i], p_.ev[i]);
    split_depth_ = split_depth;
    tasks_ = tasks;
    recurse(task.position, task.included, 0);
  }

  std::int64_t bound_now() { return compute_bound(p_, states_, scratch_); }

 private:
  bool connected_without(std::uint32_t edge) {
    // Bridge test: can eu reach ev without `edge` over non-excluded edges?
    const VertexId from = p_.eu[edge];
    const VertexId to = p_.ev[edge];
    std::fill(seen_.begin(), seen_.end(), 0);
    stack_.assign(1, from);
    seen_[from] = 1;
    while (!stack_.empty()) {
      const VertexId v = stack_.back();
      stack_.pop_back();
      for (const auto& inc : p_.instance->neighbors(v)) {
        if (inc.edge == edge || states_[inc.edge] == EdgeState::Excluded || seen_[inc.neighbor]) continue;
        if (inc.neighbor == to) return true;
        seen_[inc.neighbor] = 1;
        stack_.push_back(inc.neighbor);
      }
    }
    return false;
  }

  bool count_node() {
    const auto n = shared_.nodes.fetch_add(1, std::memory_order_relaxed) + 1;
    if (shared_.max_nodes && n > *shared_.max_nodes) {
      shared_.exhausted.store(true);
      shared_.stop.store(true);
      return false;
    }
    if (shared_.deadline && (n & 1023) == 0 && std::chrono::steady_clock::now() > *shared_.deadline) {
      shared_.exhausted.store(true);
      shared_.stop.store(true);
      return false;
    }
    return true;
  }

  void recurse(std::uint32_t position, std::uint32_t included, std::uint32_t depth) {
    if (shared_.stop.load(std::memory_order_relaxed)) return;
    if (included + 1 == p_.nv) {
      const std::int64_t loss = leaf_loss(p_, states_, scratch_, &parents_);
      if (loss < shared_.best.load()) shared_.offer(loss, parents_);
      return;
    }
    if (split_depth_ && depth == *split_depth_) {
      tasks_->push_back(Task{states_, position, included});
      return;
    }
    const std::uint32_t edge = p_.order[position];

    struct Child {
      EdgeState state;
      std::int64_t bound;
    };
    Child children[2];
    int count = 0;
    const bool can_include = dsu_.find(p_.eu[edge]) != dsu_.find(p_.ev[edge]);
    const bool can_exclude = connected_without(edge);
    for (const EdgeState choice : {EdgeState::Included, EdgeState::Excluded}) {
      if (choice == EdgeState::Included ? !can_include : !can_exclude) continue;
      if (!count_node()) return;
      states_[edge] = choice;
      std::int64_t b;
      if (choice == EdgeState::Included && included + 2 == p_.nv) {
        b = leaf_loss(p_, states_, scratch_, nullptr);
      } else {
        b = compute_bound(p_, states_, scratch_);
      }
      states_[edge] = EdgeState::Undecided;
      if (b < shared_.best.load(std::memory_order_relaxed)) children[count++] = {choice, b};
    }
    if (count == 2 && children[1].bound < children[0].bound) std::swap(children[0], children[1]);
    for (int c = 0; c < count; ++c) {
      if (children[c].bound >= shared_.best.load(std::memory_order_relaxed)) continue;
      states_[edge] = children[c].state;
      if (children[c].state == EdgeState::Included) {
        dsu_.unite(p_.eu[edge], p_.ev[edge]);
        recurse(position + 1, included + 1, depth + 1);
        dsu_.undo();
      } else {
        recurse(position + 1, included, depth + 1);
      }
      states_[edge] = EdgeState::Undecided;
    }
  }

  const Problem& p_;
  Shared& shared_;
  RollbackDsu dsu_;
  BoundScratch scratch_;
  std::vector<char> seen_;
  std::vector<VertexId> stack_;
  std::vector<EdgeState> states_;
  std::vector<VertexId> parents_;
  std::optional<std::uint32_t> split_depth_;
  std::vector<Task>* tasks_ = nullptr;
};

void check_width(const Instance& instance) {
  const BigInt d = instance.total_demand();
  const BigInt r = std::max<std::int64_t>(1, instance.total_resistance());
  if (d * d * r > (BigInt{1} << 62))
    throw Error(ErrorCode::TooLarge, "(total demand)^2 * total resistance exceeds 64-bit search arithmetic");
}

}  // namespace

std::optional<std::int64_t> node_lower_bound(const Instance& instance, const std::vector<EdgeState>& states) {
  check_width(instance);
  if (states.size() != instance.edges().size())
    throw Error(ErrorCode::InvalidArgument, "one state per edge expected");
  const Problem p(instance, BranchOrder::Auto);
  BoundScratch scratch(p.nv);
  const std::int64_t b = compute_bound(p, states, scratch);
  if (b == kInfinity) return std::nullopt;
  return b;
}

SolveResult solve_bnb(const Instance& instance, const SolveBudget& budget) {
  check_width(instance);
  const Problem p(instance, budget.order);
  Shared shared;
  shared.max_nodes = budget.max_nodes;
  if (budget.max_time) shared.deadline = std::chrono::steady_clock::now() + *budget.max_time;

  // Heuristic incumbents.
  std::vector<SpanningTree> seeds{shortest_path_tree(instance)};
  if (instance.is_uniform_corner_grid() && instance.grid()->rows >= 2 && instance.grid()->cols >= 2)
    seeds.push_back(minmin_tree(instance.grid()->rows, instance.grid()->cols));
  if (budget.incumbent) seeds.push_back(*budget.incumbent);
  for (const auto& t : seeds) {
    const auto loss = evaluate(instance, t).total.convert_to<std::int64_t>();
    if (loss < shared.best.load()) {
      shared.best.store(loss);
      shared.best_parents = t.parents();
    }
  }
  const std::int64_t seeded = shared.best.load();

  Task root_task{std::vector<EdgeState>(p.ne, EdgeState::Undecided), 0, 0};
  SolveResult result{SpanningTree::from_parents(instance, shared.best_parents), 0, SolveStatus::Optimal, 0,
                     std::nullopt};
  if (p.nv == 1) {
    result.best_loss = 0;
    result.root_bound = 0;
    return result;
  }
  BoundScratch scratch(p.nv);
  result.root_bound = compute_bound(p, root_task.states, scratch);

  const unsigned threads = std::max(1u, budget.threads);
  if (threads == 1) {
    Searcher s(p, shared);
    s.run(root_task);
  } else {
    std::vector<Task> tasks;
    std::uint32_t depth = 1;
    // Deepen the split until there is enough work to share.
    for (; depth < p.ne; depth += 2) {
      tasks.clear();
      Searcher splitter(p, shared);
      splitter.run(root_task, depth, &tasks);
      if (tasks.size() >= 64 * threads || shared.stop.load()) break;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        Searcher s(p, shared);
        for (std::size_t i = next++; i < tasks.size(); i = next++) {
          if (shared.stop.load()) break;
          s.run(tasks[i]);
        }
      });
    }
    for (auto& th : pool) th.join();
  }

  result.nodes_explored = shared.nodes.load();
  result.status = shared.exhausted.load() ? SolveStatus::BudgetExhausted : SolveStatus::Optimal;
  const std::int64_t best = shared.best.load();
  result.best_loss = best;

  if (result.status == SolveStatus::Optimal) {
    // Canonical witness: first optimal leaf in serial order.
    Shared witness;
    witness.best.store(best + 1);
    witness.stop_at_first = true;
    Searcher s(p, witness);
    s.run(root_task);
    if (witness.best.load() == best) {
      result.best_tree = SpanningTree::from_parents(instance, witness.best_parents);
      return result;
    }
  }
  result.best_tree = SpanningTree::from_parents(instance, shared.best_parents);
  (void)seeded;
  return result;
}

std::vector<Table1Row> verify_table1(const Table1Options& options) {
  static constexpr std::int64_t kMinMin[] = {6, 52, 224, 660, 1570, 3246, 6068};
  static constexpr std::int64_t kOptimal[] = {6, 52, 224, 660, 1570, 3242, 6040};
  std::vector<Table1Row> rows;
  for (std::uint32_t n = 2; n <= options.max_n; ++n) {
    const Instance grid = make_uniform_grid(n, n);
    Table1Row row;
    row.n = n;
    row.minmin_loss = evaluate(grid, minmin_tree(n, n)).total;
    if (n - 2 < std::size(kMinMin)) {
      row.expected_minmin = kMinMin[n - 2];
      row.expected_optimal = kOptimal[n - 2];
    }
    SolveBudget budget;
    budget.threads = options.threads;
    if (n > options.proven_max_n) budget.max_nodes = options.stretch_nodes;
    const SolveResult r = solve_bnb(grid, budget);
    row.best_loss = r.best_loss;
    row.status = r.status;
    row.nodes_explored = r.nodes_explored;
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace ednr
