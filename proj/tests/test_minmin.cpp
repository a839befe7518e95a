#include <doctest.h>

#include <numeric>

#include "ednr/analysis.hpp"
#include "ednr/exact_solver.hpp"
#include "ednr/minmin.hpp"
#include "oracles.hpp"

using namespace ednr;

TEST_CASE("profile examples") {
  const SubtreeProfile p2 = minmin_profile(2, 2);
  CHECK(p2.sizes == std::vector<std::vector<std::uint64_t>>{{1, 2}, {1}});
  const SubtreeProfile p3 = minmin_profile(3, 3);
  CHECK(p3.sizes == std::vector<std::vector<std::uint64_t>>{{4, 4}, {1, 2, 3}, {1, 2}, {1}});
  CHECK(p3.loss() == 52);
  for (std::uint32_t n = 2; n <= 9; ++n)
    for (std::uint32_t m = n; m <= 12; ++m) {
      std::vector<std::uint64_t> ramp(n);
      std::iota(ramp.begin(), ramp.end(), 1u);
      CHECK(minmin_profile(n, m).level(m - 1) == ramp);
    }
  CHECK_THROWS_AS(minmin_profile(1, 4), Error);
  CHECK_THROWS_AS(minmin_profile(4, 3), Error);
}

TEST_CASE("profile recurrence agrees with the merge simulation") {
  for (std::uint32_t n = 2; n <= 30; ++n)
    for (std::uint32_t m = n; m <= 30; ++m) CHECK(minmin_profile(n, m).sizes == oracle::minmin_profile(n, m));
}

TEST_CASE("Min-Min tree examples") {
  const Instance g2 = make_uniform_grid(2, 2);
  const SpanningTree t2 = minmin_tree(2, 2);
  CHECK(evaluate(g2, t2).total == 6);

  const std::int64_t table[] = {6, 52, 224, 660, 1570, 3246, 6068};
  for (std::uint32_t n = 2; n <= 8; ++n) {
    const Instance g = make_uniform_grid(n, n);
    const SpanningTree t = minmin_tree(n, n);
    CHECK(evaluate(g, t).total == table[n - 2]);
    CHECK(oracle::loss(g, t.parents()) == table[n - 2]);
  }

  const Instance g716 = make_uniform_grid(7, 16);
  CHECK(subtree_size_profile(g716, minmin_tree(7, 16)) == minmin_profile(7, 16));
}

TEST_CASE("transposed shapes") {
  for (std::uint32_t n = 2; n <= 7; ++n)
    for (std::uint32_t m = n + 1; m <= 9; ++m) {
      const Instance wide = make_uniform_grid(n, m);
      const Instance tall = make_uniform_grid(m, n);
      const BigInt a = evaluate(wide, minmin_tree(n, m)).total;
      const BigInt b = evaluate(tall, minmin_tree(m, n)).total;
      CHECK(a == b);
      CHECK(check_property_a(tall, minmin_tree(m, n)));
      CHECK(check_property_b(tall, minmin_tree(m, n)));
    }
  CHECK_THROWS_AS(minmin_tree(1, 5), Error);
}

TEST_CASE("embedding, properties and conservation for all 2 <= n <= m <= 30") {
  for (std::uint32_t n = 2; n <= 30; ++n) {
    for (std::uint32_t m = n; m <= 30; ++m) {
      const Instance g = make_uniform_grid(n, m);
      const SpanningTree t = minmin_tree(n, m);
      const SubtreeProfile p = minmin_profile(n, m);
      const SubtreeProfile e = subtree_size_profile(g, t);
      CHECK(e == p);
      CHECK(check_property_a(g, t));
      CHECK(check_property_b(g, t));
      const LossReport r = evaluate(g, t);
      CHECK(r.total == p.loss());
      for (std::uint32_t k = 1; k <= p.depth(); ++k) {
        std::uint64_t s = 0;
        for (auto x : p.level(k)) s += x;
        CHECK(s == oracle::cells_beyond(n, m, k));
      }
      const auto b = beta(p);
      if (b) {
        CHECK(*b < m - 1);
        CHECK(p.level(*b).back() > 2ull * n);
        for (std::uint32_t k = *b + 1; k <= p.depth(); ++k) CHECK(p.level(k).back() <= 2ull * n);
        for (std::uint32_t k = 1; k <= *b; ++k) CHECK(p.level(k).back() <= 2 * p.level(k).front());
      } else {
        CHECK(std::uint64_t{n} * m <= 4ull * n + 1);
      }
    }
  }
}

TEST_CASE("property checkers reject other trees") {
  // 2x2: the path r-(0,1)-(1,1)-(1,0) hangs (1,0) below level 2.
  const Instance g2 = make_uniform_grid(2, 2);
  const SpanningTree path = SpanningTree::from_parents(g2, {kNoParent, 0, 3, 1});
  CHECK_FALSE(check_property_a(g2, path));
  std::uint32_t accepted = 0;
  oracle::for_each_tree(g2, [&](const std::vector<VertexId>& parent) {
    const SpanningTree t = SpanningTree::from_parents(g2, parent);
    accepted += check_property_a(g2, t);
  });
  CHECK(accepted == 2);  // the two mirror images of the Min-Min tree

  CHECK(check_property_a(make_uniform_grid(3, 5), minmin_tree(3, 5)));
  CHECK(check_property_b(make_uniform_grid(4, 6), minmin_tree(4, 6)));
  CHECK(check_property_b(g2, path));  // nothing to check for n = 2

  // 3x3 tree merging the two largest level-2 subtrees under (1,0).
  const Instance g3 = make_uniform_grid(3, 3);
  const SpanningTree largest = SpanningTree::from_parents(g3, {kNoParent, 0, 1, 0, 3, 4, 3, 6, 7});
  CHECK(check_property_a(g3, largest));
  CHECK_FALSE(check_property_b(g3, largest));
}

TEST_CASE("beta examples") {
  CHECK(!beta(minmin_profile(3, 3)));
  const auto b7 = beta(minmin_profile(7, 7));
  REQUIRE(b7);
  CHECK(*b7 >= 1);
  CHECK(minmin_profile(7, 7).level(1).back() >= 24);
}

TEST_CASE("shortest path tree") {
  const Instance g2 = make_uniform_grid(2, 2);
  const SpanningTree t = shortest_path_tree(g2);
  CHECK(t.parent(3) == 1);
  CHECK(evaluate(g2, t).total == 6);

  const Instance line = make_uniform_grid(1, 6);
  CHECK(evaluate(line, shortest_path_tree(line)).total == 25 + 16 + 9 + 4 + 1);

  const BigInt l3 = evaluate(make_uniform_grid(3, 3), shortest_path_tree(make_uniform_grid(3, 3))).total;
  CHECK(l3 >= 52);
  CHECK(l3 <= 9 * 52);

  // Distances by Bellman-Ford; every tree path must be shortest.
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    RandomInstanceOptions o;
    o.vertices = 3 + seed % 9;
    o.extra_edges = seed % 8;
    o.seed = seed;
    const Instance inst = make_random(o);
    std::vector<std::int64_t> dist(inst.vertex_count(), std::numeric_limits<std::int64_t>::max() / 4);
    dist[inst.root()] = 0;
    for (std::uint32_t it = 0; it < inst.vertex_count(); ++it)
      for (const auto& e : inst.edges()) {
        dist[e.v] = std::min(dist[e.v], dist[e.u] + e.resistance);
        dist[e.u] = std::min(dist[e.u], dist[e.v] + e.resistance);
      }
    const SpanningTree spt = shortest_path_tree(inst);
    for (VertexId v = 0; v < inst.vertex_count(); ++v) {
      if (v == inst.root()) continue;
      const auto& e = inst.edges()[spt.parent_edge(v)];
      CHECK(dist[spt.parent(v)] + e.resistance == dist[v]);
    }
  }
}

TEST_CASE("nonuniform demands") {
  const GridShape g{2, 2};
  const auto two = evaluate_nonuniform(2, 2, {{g.id(0, 1), 2}, {g.id(1, 0), 1}, {g.id(1, 1), 1}});
  const std::vector<EdgeSpec> edges = grid_edges(2, 2);
  const Instance weighted = Instance::make_general(4, edges, 0, {{1, 2}, {2, 1}, {3, 1}}, g);
  CHECK(two.report.total == oracle::loss(weighted, minmin_tree(2, 2).parents()));
  CHECK(two.alpha == 2);
  CHECK(two.certificate == 4 * ratio_certificate(2, 2).ratio_upper);

  std::map<VertexId, std::int64_t> ones, fives;
  for (VertexId v = 1; v < 20; ++v) {
    ones[v] = 1;
    fives[v] = 5;
  }
  const auto u = evaluate_nonuniform(4, 5, ones);
  CHECK(u.alpha == 1);
  CHECK(u.report.total == evaluate(make_uniform_grid(4, 5), minmin_tree(4, 5)).total);
  CHECK(evaluate_nonuniform(4, 5, fives).report.total == 25 * u.report.total);

  ones.erase(7);
  try {
    evaluate_nonuniform(4, 5, ones);
    FAIL("expected ZeroMinDemand");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ZeroMinDemand);
  }
}
