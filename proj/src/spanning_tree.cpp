#include "ednr/spanning_tree.hpp"

#include <algorithm>
#include <sstream>

namespace ednr {

namespace {

// Orients an adjacency structure restricted to the chosen edges by BFS from
// the root. Returns false if some vertex is unreachable.
bool orient(const Instance& instance, std::span<const std::uint32_t> edge_indices,
            std::vector<VertexId>& parent, std::vector<std::uint32_t>& parent_edge,
            std::vector<VertexId>& order) {
  const std::uint32_t nv = instance.vertex_count();
  std::vector<std::vector<std::pair<VertexId, std::uint32_t>>> adj(nv);
  for (const auto idx : edge_indices) {
    const auto& e = instance.edges()[idx];
    adj[e.u].emplace_back(e.v, idx);
    adj[e.v].emplace_back(e.u, idx);
  }
  parent.assign(nv, kNoParent);
  parent_edge.assign(nv, 0);
  std::vector<char> seen(nv, 0);
  order.clear();
  order.reserve(nv);
  order.push_back(instance.root());
  seen[instance.root()] = 1;
  for (std::size_t head = 0; head < order.size(); ++head) {
    const VertexId v = order[head];
    for (const auto& [w, idx] : adj[v]) {
      if (seen[w]) continue;
      seen[w] = 1;
      parent[w] = v;
      parent_edge[w] = idx;
      order.push_back(w);
    }
  }
  return order.size() == nv;
}

}  // namespace

SpanningTree SpanningTree::from_edges(const Instance& instance, std::span<const std::uint32_t> edge_indices) {
  const std::uint32_t nv = instance.vertex_count();
  if (edge_indices.size() + 1 != nv)
    throw Error(ErrorCode::NotSpanning, "expected " + std::to_string(nv - 1) + " edges, got " +
                                            std::to_string(edge_indices.size()));
  for (const auto idx : edge_indices)
    if (idx >= instance.edges().size()) throw Error(ErrorCode::NotSpanning, "edge index out of range");
  SpanningTree t;
  t.root_ = instance.root();
  // |V|-1 edges reaching every vertex cannot contain a cycle.
  if (!orient(instance, edge_indices, t.parent_, t.parent_edge_, t.order_))
    throw Error(ErrorCode::NotSpanning, "edges contain a cycle or leave vertices disconnected");
  return t;
}

SpanningTree SpanningTree::from_vertex_pairs(const Instance& instance,
                                             std::span<const std::pair<VertexId, VertexId>> pairs) {
  std::vector<std::uint32_t> idx;
  idx.reserve(pairs.size());
  for (const auto& [a, b] : pairs) {
    const auto e = instance.find_edge(a, b);
    if (!e)
      throw Error(ErrorCode::NotSpanning,
                  "{" + std::to_string(a) + "," + std::to_string(b) + "} is not an instance edge");
    idx.push_back(*e);
  }
  return from_edges(instance, idx);
}

SpanningTree SpanningTree::from_parents(const Instance& instance, std::vector<VertexId> parent) {
  const std::uint32_t nv = instance.vertex_count();
  if (parent.size() != nv) throw Error(ErrorCode::NotSpanning, "parent map has the wrong size");
  std::vector<std::uint32_t> idx;
  for (VertexId v = 0; v < nv; ++v) {
    if (v == instance.root()) {
      if (parent[v] != kNoParent) throw Error(ErrorCode::NotSpanning, "root has a parent");
      continue;
    }
    if (parent[v] == kNoParent)
      throw Error(ErrorCode::NotSpanning, "vertex " + std::to_string(v) + " has no parent");
    const auto e = instance.find_edge(v, parent[v]);
    if (!e)
      throw Error(ErrorCode::NotSpanning, "parent edge of vertex " + std::to_string(v) + " is not an instance edge");
    idx.push_back(*e);
  }
  SpanningTree t = from_edges(instance, idx);
  // BFS orientation is unique for a tree, so it must agree with the input.
  if (t.parent_ != parent) throw Error(ErrorCode::NotSpanning, "parent map contains a cycle");
  return t;
}

std::vector<std::uint32_t> SpanningTree::edge_indices() const {
  std::vector<std::uint32_t> out;
  out.reserve(parent_.size());
  for (VertexId v = 0; v < parent_.size(); ++v)
    if (v != root_) out.push_back(parent_edge_[v]);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::vector<VertexId>> SpanningTree::children() const {
  std::vector<std::vector<VertexId>> out(parent_.size());
  for (VertexId v = 0; v < parent_.size(); ++v)
    if (v != root_) out[parent_[v]].push_back(v);
  return out;
}

LossReport evaluate(const Instance& instance, const SpanningTree& tree) {
  const std::uint32_t nv = instance.vertex_count();
  std::vector<BigInt> below(nv);
  for (VertexId v = 0; v < nv; ++v) below[v] = instance.demand(v);
  const auto& order = tree.top_down_order();
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const VertexId v = *it;
    if (v != tree.root()) below[tree.parent(v)] += below[v];
  }

  LossReport report;
  report.downstream_demand.assign(instance.edges().size(), std::nullopt);
  const auto& grid = instance.grid();
  if (grid) report.per_level.assign(grid->max_level(), BigInt{0});
  for (VertexId v = 0; v < nv; ++v) {
    if (v == tree.root()) continue;
    const std::uint32_t idx = tree.parent_edge(v);
    const BigInt edge_loss = BigInt{instance.edges()[idx].resistance} * below[v] * below[v];
    report.total += edge_loss;
    report.downstream_demand[idx] = below[v];
    if (grid) {
      const auto& e = instance.edges()[idx];
      const std::uint32_t k = std::max(grid->level(e.u), grid->level(e.v));
      report.per_level[k - 1] += edge_loss;
    }
  }
  return report;
}

std::vector<std::uint64_t> subtree_sizes(const SpanningTree& tree) {
  std::vector<std::uint64_t> size(tree.vertex_count(), 1);
  const auto& order = tree.top_down_order();
  for (auto it = order.rbegin(); it != order.rend(); ++it)
    if (*it != tree.root()) size[tree.parent(*it)] += size[*it];
  return size;
}

BigInt SubtreeProfile::loss() const {
  BigInt sum = 0;
  for (const auto& level : sizes)
    for (const auto a : level) sum += BigInt{a} * a;
  return sum;
}

SubtreeProfile subtree_size_profile(const Instance& instance, const SpanningTree& tree) {
  const auto& grid = instance.grid();
  if (!grid) throw Error(ErrorCode::NotAGrid, "subtree profile needs a grid instance");
  SubtreeProfile profile;
  profile.n = grid->rows;
  profile.m = grid->cols;
  profile.sizes.assign(grid->max_level(), {});
  const auto size = subtree_sizes(tree);
  for (VertexId v = 0; v < instance.vertex_count(); ++v) {
    const std::uint32_t k = grid->level(v);
    if (k > 0) profile.sizes[k - 1].push_back(size[v]);
  }
  for (auto& level : profile.sizes) std::sort(level.begin(), level.end());
  return profile;
}

std::string export_dot(const Instance& instance, const SpanningTree& tree) {
  std::ostringstream os;
  const auto& grid = instance.grid();
  os << "graph ednr {\n";
  os << "  node [shape=circle, fontsize=10, width=0.3, fixedsize=true];\n";
  os << "  edge [color=gray80];\n";
  for (VertexId v = 0; v < instance.vertex_count(); ++v) {
    os << "  v" << v << " [label=\"";
    if (v == instance.root()) {
      os << "r";
    } else {
      os << instance.demand(v);
    }
    os << "\"";
    if (v == instance.root()) os << ", style=filled, fillcolor=black, fontcolor=white";
    if (grid) os << ", pos=\"" << grid->col(v) << "," << -static_cast<long>(grid->row(v)) << "!\"";
    os << "];\n";
  }
  std::vector<char> in_tree(instance.edges().size(), 0);
  for (const auto idx : tree.edge_indices()) in_tree[idx] = 1;
  for (std::uint32_t i = 0; i < instance.edges().size(); ++i) {
    const auto& e = instance.edges()[i];
    os << "  v" << e.u << " -- v" << e.v << " [label=\"" << e.resistance << "\"";
    if (in_tree[i]) os << ", color=red, penwidth=2.5";
    os << "];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace ednr
