#include "ednr/instance.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

namespace ednr {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::Disconnected: return "Disconnected";
    case ErrorCode::DuplicateEdge: return "DuplicateEdge";
    case ErrorCode::SelfLoop: return "SelfLoop";
    case ErrorCode::NegativeValue: return "NegativeValue";
    case ErrorCode::RootDemandPresent: return "RootDemandPresent";
    case ErrorCode::VertexOutOfRange: return "VertexOutOfRange";
    case ErrorCode::NotAGrid: return "NotAGrid";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::NotSpanning: return "NotSpanning";
    case ErrorCode::InvalidShape: return "InvalidShape";
    case ErrorCode::MergeInfeasible: return "MergeInfeasible";
    case ErrorCode::ZeroMinDemand: return "ZeroMinDemand";
    case ErrorCode::CapExceeded: return "CapExceeded";
    case ErrorCode::BetaAbsent: return "BetaAbsent";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::WindowViolated: return "WindowViolated";
    case ErrorCode::NonDivisible: return "NonDivisible";
    case ErrorCode::NotAPartition: return "NotAPartition";
    case ErrorCode::Unbalanced: return "Unbalanced";
    case ErrorCode::RoutingFailed: return "RoutingFailed";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

std::string format_rational(const Rational& value) {
  const BigInt num = boost::multiprecision::numerator(value);
  const BigInt den = boost::multiprecision::denominator(value);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

double to_double(const Rational& value) { return value.convert_to<double>(); }

namespace {

std::string edge_name(VertexId u, VertexId v) {
  std::ostringstream os;
  os << "{" << u << "," << v << "}";
  return os.str();
}

}  // namespace

Instance Instance::make_general(std::uint32_t vertex_count, std::span<const EdgeSpec> edges,
                                VertexId root, const std::map<VertexId, std::int64_t>& demands,
                                std::optional<GridShape> grid) {
  if (vertex_count == 0) throw Error(ErrorCode::InvalidArgument, "instance needs at least one vertex");
  if (root >= vertex_count) throw Error(ErrorCode::VertexOutOfRange, "root " + std::to_string(root));

  Instance inst;
  inst.vertex_count_ = vertex_count;
  inst.root_ = root;
  inst.grid_ = grid;

  std::set<std::pair<VertexId, VertexId>> seen;
  inst.edges_.reserve(edges.size());
  for (const auto& e : edges) {
    if (e.u >= vertex_count || e.v >= vertex_count)
      throw Error(ErrorCode::VertexOutOfRange, "edge " + edge_name(e.u, e.v));
    if (e.u == e.v) throw Error(ErrorCode::SelfLoop, "edge " + edge_name(e.u, e.v));
    if (e.resistance < 0)
      throw Error(ErrorCode::NegativeValue, "resistance of edge " + edge_name(e.u, e.v));
    const auto key = std::minmax(e.u, e.v);
    if (!seen.insert(key).second) throw Error(ErrorCode::DuplicateEdge, "edge " + edge_name(e.u, e.v));
    inst.edges_.push_back({key.first, key.second, e.resistance});
  }
  std::sort(inst.edges_.begin(), inst.edges_.end(),
            [](const Edge& a, const Edge& b) { return std::tie(a.u, a.v) < std::tie(b.u, b.v); });

  inst.demands_.assign(vertex_count, 0);
  for (const auto& [v, d] : demands) {
    if (v >= vertex_count) throw Error(ErrorCode::VertexOutOfRange, "demand on vertex " + std::to_string(v));
    if (v == root) throw Error(ErrorCode::RootDemandPresent, "root " + std::to_string(v) + " carries a demand");
    if (d < 0) throw Error(ErrorCode::NegativeValue, "demand of vertex " + std::to_string(v));
    inst.demands_[v] = d;
  }

  // CSR adjacency.
  inst.offsets_.assign(vertex_count + 1, 0);
  for (const auto& e : inst.edges_) {
    ++inst.offsets_[e.u + 1];
    ++inst.offsets_[e.v + 1];
  }
  std::partial_sum(inst.offsets_.begin(), inst.offsets_.end(), inst.offsets_.begin());
  inst.incidence_.resize(2 * inst.edges_.size());
  std::vector<std::uint32_t> fill(inst.offsets_.begin(), inst.offsets_.end() - 1);
  for (std::uint32_t i = 0; i < inst.edges_.size(); ++i) {
    const auto& e = inst.edges_[i];
    inst.incidence_[fill[e.u]++] = {e.v, i};
    inst.incidence_[fill[e.v]++] = {e.u, i};
  }

  // Connectivity.
  std::vector<char> reached(vertex_count, 0);
  std::vector<VertexId> stack{root};
  reached[root] = 1;
  std::uint32_t count = 1;
  while (!stack.empty()) {
    const VertexId v = stack.back();
    stack.pop_back();
    for (const auto& inc : inst.neighbors(v)) {
      if (!reached[inc.neighbor]) {
        reached[inc.neighbor] = 1;
        ++count;
        stack.push_back(inc.neighbor);
      }
    }
  }
  if (count != vertex_count)
    throw Error(ErrorCode::Disconnected,
                std::to_string(vertex_count - count) + " vertices unreachable from the root");

  if (grid) {
    if (grid->rows == 0 || grid->cols == 0 || std::uint64_t{grid->rows} * grid->cols != vertex_count)
      throw Error(ErrorCode::NotAGrid, "grid shape does not match the vertex count");
    const auto expected = grid_edges(grid->rows, grid->cols);
    bool same = expected.size() == inst.edges_.size();
    for (std::size_t i = 0; same && i < expected.size(); ++i)
      same = expected[i].u == inst.edges_[i].u && expected[i].v == inst.edges_[i].v;
    if (!same) throw Error(ErrorCode::NotAGrid, "edge set differs from the grid edges");
  }
  return inst;
}

std::optional<std::uint32_t> Instance::find_edge(VertexId a, VertexId b) const {
  if (a >= vertex_count_ || b >= vertex_count_) return std::nullopt;
  for (const auto& inc : neighbors(a))
    if (inc.neighbor == b) return inc.edge;
  return std::nullopt;
}

std::int64_t Instance::total_demand() const {
  return std::accumulate(demands_.begin(), demands_.end(), std::int64_t{0});
}

std::int64_t Instance::total_resistance() const {
  std::int64_t sum = 0;
  for (const auto& e : edges_) sum += e.resistance;
  return sum;
}

bool Instance::is_uniform_corner_grid() const {
  if (!grid_ || root_ != 0) return false;
  for (VertexId v = 0; v < vertex_count_; ++v)
    if (v != root_ && demands_[v] != 1) return false;
  return std::all_of(edges_.begin(), edges_.end(), [](const Edge& e) { return e.resistance == 1; });
}

std::vector<EdgeSpec> grid_edges(std::uint32_t n, std::uint32_t m, std::int64_t resistance) {
  std::vector<EdgeSpec> out;
  out.reserve(std::size_t{n} * (m - 1) + std::size_t{m} * (n - 1));
  // Row-major ids make "right" then "down" neighbours already canonical.
  for (std::uint32_t i = 0; i < n; ++i) {
    for (std::uint32_t j = 0; j < m; ++j) {
      const VertexId v = i * m + j;
      if (j + 1 < m) out.push_back({v, v + 1, resistance});
      if (i + 1 < n) out.push_back({v, v + m, resistance});
    }
  }
  return out;
}

Instance make_uniform_grid(std::uint32_t n, std::uint32_t m) {
  if (n == 0 || m == 0) throw Error(ErrorCode::InvalidShape, "grid dimensions must be positive");
  std::map<VertexId, std::int64_t> demands;
  for (VertexId v = 1; v < n * m; ++v) demands[v] = 1;
  const auto edges = grid_edges(n, m, 1);
  return Instance::make_general(n * m, edges, 0, demands, GridShape{n, m});
}

Instance make_grid(std::uint32_t n, std::uint32_t m, const std::map<VertexId, std::int64_t>& demands,
                   const std::map<std::pair<VertexId, VertexId>, std::int64_t>& resistances,
                   std::int64_t default_resistance) {
  if (n == 0 || m == 0) throw Error(ErrorCode::InvalidShape, "grid dimensions must be positive");
  auto edges = grid_edges(n, m, default_resistance);
  for (auto& e : edges) {
    if (auto it = resistances.find({e.u, e.v}); it != resistances.end()) e.resistance = it->second;
  }
  return Instance::make_general(n * m, edges, 0, demands, GridShape{n, m});
}

Instance make_random(const RandomInstanceOptions& opt) {
  if (opt.vertices == 0) throw Error(ErrorCode::InvalidArgument, "random instance needs vertices");
  std::mt19937_64 rng(opt.seed);
  const std::uint32_t nv = opt.vertices;
  std::set<std::pair<VertexId, VertexId>> used;
  std::vector<EdgeSpec> edges;
  std::uniform_int_distribution<std::int64_t> res(0, opt.max_resistance);
  auto add = [&](VertexId a, VertexId b) {
    const auto key = std::minmax(a, b);
    if (a == b || !used.insert(key).second) return false;
    edges.push_back({key.first, key.second, res(rng)});
    return true;
  };
  for (VertexId v = 1; v < nv; ++v) {
    std::uniform_int_distribution<VertexId> pick(0, v - 1);
    add(pick(rng), v);
  }
  const std::uint64_t max_edges = std::uint64_t{nv} * (nv - 1) / 2;
  std::uniform_int_distribution<VertexId> any(0, nv - 1);
  for (std::uint32_t added = 0; added < opt.extra_edges && used.size() < max_edges;) {
    if (add(any(rng), any(rng))) ++added;
  }
  std::map<VertexId, std::int64_t> demands;
  std::uniform_int_distribution<std::int64_t> dem(0, opt.max_demand);
  for (VertexId v = 1; v < nv; ++v) demands[v] = dem(rng);
  return Instance::make_general(nv, edges, 0, demands);
}

std::uint64_t GridLevels::at_or_beyond(std::uint32_t k) const {
  std::uint64_t sum = 0;
  for (std::uint32_t l = k; l < level_sizes.size(); ++l) sum += level_sizes[l];
  return sum;
}

std::uint32_t level_size(std::uint32_t n, std::uint32_t m, std::uint32_t k) {
  if (k > n + m - 2) return 0;
  return std::min({k, n - 1, m - 1, n + m - 2 - k}) + 1;
}

GridLevels levels(const Instance& instance) {
  const auto& grid = instance.grid();
  if (!grid) throw Error(ErrorCode::NotAGrid, "instance has no grid shape");
  GridLevels out;
  const std::uint32_t top = grid->max_level();
  out.level_of.resize(instance.vertex_count());
  out.level_sizes.assign(top + 1, 0);
  out.level_edges.assign(top + 1, {});
  for (VertexId v = 0; v < instance.vertex_count(); ++v) {
    out.level_of[v] = grid->level(v);
    ++out.level_sizes[out.level_of[v]];
  }
  for (std::uint32_t i = 0; i < instance.edges().size(); ++i) {
    const auto& e = instance.edges()[i];
    out.level_edges[std::max(out.level_of[e.u], out.level_of[e.v])].push_back(i);
  }
  return out;
}

}  // namespace ednr
