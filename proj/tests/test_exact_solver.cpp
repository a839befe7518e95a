#include <doctest.h>

#include <numeric>
#include <random>

#include "ednr/analysis.hpp"
#include "ednr/exact_solver.hpp"
#include "ednr/minmin.hpp"
#include "ednr/reductions.hpp"
#include "oracles.hpp"

using namespace ednr;

namespace {

Instance random_instance(std::uint64_t seed) {
  RandomInstanceOptions o;
  o.vertices = 2 + seed % 9;
  o.extra_edges = (seed * 7) % 9;
  o.seed = seed;
  return make_random(o);
}

// Same graph with vertex ids permuted (root included).
Instance relabel(const Instance& inst, std::mt19937_64& rng) {
  std::vector<VertexId> perm(inst.vertex_count());
  std::iota(perm.begin(), perm.end(), 0u);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<EdgeSpec> edges;
  for (const auto& e : inst.edges()) edges.push_back({perm[e.u], perm[e.v], e.resistance});
  std::map<VertexId, std::int64_t> demands;
  for (VertexId v = 0; v < inst.vertex_count(); ++v)
    if (inst.demand(v) > 0) demands[perm[v]] = inst.demand(v);
  return Instance::make_general(inst.vertex_count(), edges, perm[inst.root()], demands);
}

}  // namespace

TEST_CASE("enumeration examples") {
  CHECK(enumerate_all(make_uniform_grid(2, 2)).best_loss == 6);
  CHECK(enumerate_all(make_uniform_grid(3, 3)).best_loss == 52);
  const auto art = encode_partition({{1, 2}});
  const SolveResult r = enumerate_all(art.instance);
  CHECK(r.best_loss == 5);
  CHECK(Rational(r.best_loss) > art.threshold);
  CHECK(enumerate_all(make_uniform_grid(1, 1)).best_loss == 0);
}

TEST_CASE("tree counts") {
  CHECK(spanning_tree_count(make_uniform_grid(2, 2)) == doctest::Approx(4));
  CHECK(spanning_tree_count(make_uniform_grid(3, 3)) == doctest::Approx(192));
  CHECK(spanning_tree_count(make_uniform_grid(5, 5)) == doctest::Approx(557568000.0).epsilon(1e-9));
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const Instance inst = random_instance(seed);
    std::uint64_t visited = 0;
    for_each_spanning_tree(inst, [&](const std::vector<std::uint32_t>&) {
      ++visited;
      return true;
    });
    const auto expected = oracle::tree_count(inst);
    CHECK(visited == expected);
    CHECK(spanning_tree_count(inst) == doctest::Approx(static_cast<double>(expected)));
  }
  CHECK_THROWS_AS(enumerate_all(make_uniform_grid(5, 5)), Error);
  try {
    enumerate_all(make_uniform_grid(3, 3), 100);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::TooLarge);
  }
}

TEST_CASE("enumeration and branch and bound agree with the subset oracle") {
  for (std::uint64_t seed = 1; seed <= 80; ++seed) {
    const Instance inst = random_instance(seed);
    const BigInt truth = oracle::min_loss(inst);
    const SolveResult e = enumerate_all(inst);
    const SolveResult b = solve_bnb(inst);
    CHECK(e.best_loss == truth);
    CHECK(b.best_loss == truth);
    CHECK(b.status == SolveStatus::Optimal);
    CHECK(evaluate(inst, b.best_tree).total == truth);
    CHECK(evaluate(inst, e.best_tree).total == truth);
    REQUIRE(b.root_bound);
    CHECK(BigInt{*b.root_bound} <= truth);
  }
}

TEST_CASE("small grids") {
  const std::int64_t expected[] = {6, 52, 224};
  for (std::uint32_t n = 2; n <= 4; ++n) {
    const SolveResult r = solve_bnb(make_uniform_grid(n, n));
    CHECK(r.status == SolveStatus::Optimal);
    CHECK(r.best_loss == expected[n - 2]);
    CHECK(Rational(r.best_loss) > lower_bound(n, n).sum_bound);
  }
  for (std::uint32_t n = 2; n <= 3; ++n)
    for (std::uint32_t m = n; m <= 5; ++m) {
      const BigInt a = solve_bnb(make_uniform_grid(n, m)).best_loss;
      CHECK(a == solve_bnb(make_uniform_grid(m, n)).best_loss);
      CHECK(Rational(a) > lower_bound(n, m).sum_bound);
      if (n * m <= 12) CHECK(a == enumerate_all(make_uniform_grid(n, m)).best_loss);
    }
}

TEST_CASE("relabeling leaves the optimum unchanged") {
  std::mt19937_64 rng(11);
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    const Instance inst = random_instance(seed);
    const Instance other = relabel(inst, rng);
    CHECK(solve_bnb(inst).best_loss == solve_bnb(other).best_loss);
  }
}

TEST_CASE("node bound is admissible") {
  std::mt19937_64 rng(21);
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    const Instance inst = random_instance(seed);
    const auto ne = inst.edges().size();
    std::vector<std::vector<VertexId>> trees;
    oracle::for_each_tree(inst, [&](const std::vector<VertexId>& p) { trees.push_back(p); });
    for (int rep = 0; rep < 8; ++rep) {
      std::vector<EdgeState> states(ne, EdgeState::Undecided);
      std::uniform_int_distribution<int> pick(0, 2);
      for (auto& s : states) s = static_cast<EdgeState>(pick(rng));
      std::optional<BigInt> best;
      for (const auto& p : trees) {
        bool consistent = true;
        std::vector<char> used(ne, 0);
        for (VertexId v = 0; v < inst.vertex_count(); ++v)
          if (v != inst.root()) used[*inst.find_edge(v, p[v])] = 1;
        for (std::size_t i = 0; i < ne; ++i) {
          if (states[i] == EdgeState::Included && !used[i]) consistent = false;
          if (states[i] == EdgeState::Excluded && used[i]) consistent = false;
        }
        if (!consistent) continue;
        const BigInt l = oracle::loss(inst, p);
        if (!best || l < *best) best = l;
      }
      const auto bound = node_lower_bound(inst, states);
      if (bound && best) CHECK(BigInt{*bound} <= *best);
      if (!best) continue;
      CHECK(bound.has_value());
    }
  }
  // Partition instances: zero-resistance edges and indivisible items.
  for (const auto& a : std::vector<std::vector<std::int64_t>>{{1, 2}, {2, 3, 5}, {1, 1, 2}, {3, 1, 1, 1}}) {
    const auto art = encode_partition({a});
    const auto bound = node_lower_bound(art.instance, std::vector<EdgeState>(art.instance.edges().size()));
    REQUIRE(bound);
    CHECK(BigInt{*bound} <= enumerate_all(art.instance).best_loss);
  }
}

TEST_CASE("budgets and determinism") {
  const Instance g = make_uniform_grid(4, 4);
  SolveBudget tiny;
  tiny.max_nodes = 10;
  const SolveResult r = solve_bnb(g, tiny);
  CHECK(r.status == SolveStatus::BudgetExhausted);
  CHECK(r.best_loss == 224);  // Min-Min incumbent
  CHECK(solve_bnb(g, tiny).best_tree == r.best_tree);

  SolveBudget timed;
  timed.max_time = std::chrono::milliseconds(0);
  timed.max_nodes = 5000;
  CHECK_NOTHROW(solve_bnb(g, timed));

  const SolveResult one = solve_bnb(g);
  for (unsigned threads : {2u, 3u, 4u}) {
    SolveBudget b;
    b.threads = threads;
    const SolveResult many = solve_bnb(g, b);
    CHECK(many.status == SolveStatus::Optimal);
    CHECK(many.best_loss == one.best_loss);
    CHECK(many.best_tree == one.best_tree);
  }
  const Instance r7 = random_instance(7);
  SolveBudget b;
  b.threads = 3;
  CHECK(solve_bnb(r7, b).best_tree == solve_bnb(r7).best_tree);
}

TEST_CASE("every branch order gives the same optimum") {
  for (const auto order : {BranchOrder::NearFirst, BranchOrder::FarFirst}) {
    SolveBudget b;
    b.order = order;
    CHECK(solve_bnb(make_uniform_grid(3, 4), b).best_loss == solve_bnb(make_uniform_grid(3, 4)).best_loss);
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      const Instance inst = random_instance(seed);
      CHECK(solve_bnb(inst, b).best_loss == enumerate_all(inst).best_loss);
    }
  }
}

TEST_CASE("external incumbent is used") {
  const Instance g = make_uniform_grid(3, 3);
  SolveBudget b;
  b.incumbent = minmin_tree(3, 3);
  b.max_nodes = 1;
  CHECK(solve_bnb(g, b).best_loss == 52);
}

TEST_CASE("overflow guard") {
  const std::vector<EdgeSpec> edges{{0, 1, 1'000'000}};
  const Instance inst = Instance::make_general(2, edges, 0, {{1, 3'000'000'000}});
  CHECK_THROWS_AS(solve_bnb(inst), Error);
  CHECK(enumerate_all(inst).best_loss == BigInt{1'000'000} * 3'000'000'000 * 3'000'000'000);
}
