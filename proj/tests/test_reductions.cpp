#include <doctest.h>

#include "ednr/exact_solver.hpp"
#include "ednr/reductions.hpp"
#include "oracles.hpp"

using namespace ednr;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::InvalidArgument;
}

std::int64_t sum_of(const std::vector<std::int64_t>& a, const std::set<std::uint32_t>& items, bool inside) {
  std::int64_t s = 0;
  for (std::uint32_t k = 0; k < a.size(); ++k)
    if (items.contains(k) == inside) s += a[k];
  return s;
}

// Multisets of positive integers with sum <= cap, as non-decreasing lists.
void multisets(std::int64_t cap, std::vector<std::int64_t>& cur, std::int64_t low,
               std::vector<std::vector<std::int64_t>>& out) {
  if (!cur.empty()) out.push_back(cur);
  for (std::int64_t x = low; x <= cap; ++x) {
    cur.push_back(x);
    multisets(cap - x, cur, x, out);
    cur.pop_back();
  }
}

}  // namespace

TEST_CASE("partition encoding") {
  const auto art = encode_partition({{1, 1}});
  const GridShape g = *art.instance.grid();
  CHECK(g.rows == 3);
  CHECK(g.cols == 3);
  CHECK(art.instance.demand(g.id(1, 1)) == 1);
  CHECK(art.instance.demand(g.id(1, 2)) == 1);
  CHECK(art.instance.total_demand() == 2);
  CHECK(art.threshold == 2);
  std::uint32_t unit = 0;
  for (const auto& e : art.instance.edges()) {
    if (e.resistance == 1) {
      ++unit;
      CHECK(e.u == 0);
    } else {
      CHECK(e.resistance == 0);
    }
  }
  CHECK(unit == 2);
  CHECK(enumerate_all(art.instance).best_loss == 2);

  CHECK(encode_partition({{1, 2}}).threshold == Rational(9, 2));
  const auto big = encode_partition({{2, 3, 5}});
  CHECK(big.threshold == 50);
  CHECK(enumerate_all(big.instance).best_loss == 50);
  CHECK(evaluate(big.instance, witness_tree_partition(big, {0, 1})).total == 50);

  CHECK(code_of([] { encode_partition({{}}); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { encode_partition({{1, 0}}); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("partition witnesses and decoding") {
  const auto a11 = encode_partition({{1, 1}});
  CHECK(evaluate(a11.instance, witness_tree_partition(a11, {0})).total == 2);
  const auto a12 = encode_partition({{1, 2}});
  CHECK(evaluate(a12.instance, witness_tree_partition(a12, {})).total == 9);
  CHECK_THROWS_AS(witness_tree_partition(a12, {5}), Error);

  const SolveResult opt = solve_bnb(a11.instance);
  const auto decoded = decode_partition(a11, opt.best_tree);
  CHECK(sum_of({1, 1}, decoded, true) == 1);

  for (const auto& a : std::vector<std::vector<std::int64_t>>{{1, 2, 3}, {4, 1, 1, 2}, {5}, {2, 2, 2, 2, 2}}) {
    const auto art = encode_partition({a});
    for (std::uint32_t mask = 0; mask < (1u << a.size()); ++mask) {
      std::set<std::uint32_t> items;
      for (std::uint32_t k = 0; k < a.size(); ++k)
        if (mask >> k & 1) items.insert(k);
      const SpanningTree t = witness_tree_partition(art, items);
      CHECK(decode_partition(art, t) == items);
      const std::int64_t in = sum_of(a, items, true);
      const std::int64_t out = sum_of(a, items, false);
      CHECK(evaluate(art.instance, t).total == in * in + out * out);
      CHECK(oracle::loss(art.instance, t.parents()) == in * in + out * out);
    }
  }
}

TEST_CASE("decoded sets of NO instances never balance") {
  for (const auto& a : std::vector<std::vector<std::int64_t>>{{1, 2}, {1, 1, 1}, {1, 4}}) {
    const auto art = encode_partition({a});
    for_each_spanning_tree(art.instance, [&](const std::vector<std::uint32_t>& edges) {
      const SpanningTree t = SpanningTree::from_edges(art.instance, edges);
      const auto items = decode_partition(art, t);
      CHECK(sum_of(a, items, true) != sum_of(a, items, false));
      return true;
    });
  }
}

TEST_CASE("partition soundness for item multisets with sum <= 12") {
  std::vector<std::vector<std::int64_t>> all;
  std::vector<std::int64_t> cur;
  multisets(12, cur, 1, all);
  CHECK(all.size() == 271);
  for (const auto& a : all) {
    const auto art = encode_partition({a});
    const SolveResult r = solve_bnb(art.instance);
    REQUIRE(r.status == SolveStatus::Optimal);
    const bool yes = Rational(r.best_loss) <= art.threshold;
    CHECK_MESSAGE(yes == oracle::has_balanced_subset(a), "items of size " << a.size());
    if (yes) {
      const auto items = decode_partition(art, r.best_tree);
      CHECK(2 * sum_of(a, items, true) == art.instance.total_demand());
    }
  }
}

TEST_CASE("3-partition encoding") {
  const auto small = encode_3partition({1, {1, 1, 1}}, 1);
  const GridShape g = *small.instance.grid();
  CHECK(g.rows == 7);
  CHECK(g.cols == 5);
  CHECK(small.threshold == 9);
  CHECK(small.feeder_edges.size() == 1);
  CHECK(small.item_vertices.size() == 3);
  CHECK(*small.width == 1);
  CHECK(*small.r_inf == 28);
  for (std::uint32_t k = 0; k < 3; ++k) {
    CHECK(g.row(small.item_vertices[k].front()) == (k + 1) * 2);
    CHECK(g.col(small.item_vertices[k].front()) == 3);
  }
  const StructureReport rep = check_3partition_structure(small);
  CHECK(rep.single_entry_per_chain);
  CHECK(rep.unit_edges == 1);
  CHECK(rep.reachable_below_rinf);
  CHECK(rep.demand_behind_unit_edges);

  const auto six = encode_3partition({2, {3, 3, 3, 3, 3, 3}}, 2);
  CHECK(six.instance.grid()->rows == 20);
  CHECK(six.instance.grid()->cols == 9);
  CHECK(six.threshold == 162);
  CHECK(check_3partition_structure(six).ok());
  CHECK(check_3partition_structure(six).unit_edges == 2);

  // Default parameters: W = n^5, R_inf = S^3 + 1.
  const auto dflt = encode_3partition({2, {3, 3, 3, 3, 3, 3}});
  CHECK(*dflt.width == 32);
  CHECK(*dflt.r_inf == 18 * 18 * 18 + 1);
  CHECK(check_3partition_structure(dflt).ok());

  CHECK(code_of([] { encode_3partition({1, {1, 1, 2}}); }) == ErrorCode::WindowViolated);
  CHECK(code_of([] { encode_3partition({2, {4, 4, 4, 4, 4, 5}}); }) == ErrorCode::NonDivisible);
  CHECK(code_of([] { encode_3partition({2, {3, 3, 3}}); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { encode_3partition({1, {1, 1, 1}}, 0); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { encode_3partition({5, std::vector<std::int64_t>(15, 1)}); }) == ErrorCode::TooLarge);
}

TEST_CASE("3-partition witnesses") {
  const auto small = encode_3partition({1, {1, 1, 1}}, 1);
  const SpanningTree t = witness_tree_3partition(small, {{0, 1, 2}});
  CHECK(evaluate(small.instance, t).total == 9);

  const auto six = encode_3partition({2, {3, 3, 3, 3, 3, 3}}, 2);
  for (std::uint32_t mask = 0; mask < 64; ++mask) {
    if (__builtin_popcount(mask) != 3) continue;
    std::vector<std::vector<std::uint32_t>> groups(2);
    for (std::uint32_t k = 0; k < 6; ++k) groups[mask >> k & 1].push_back(k);
    const SpanningTree w = witness_tree_3partition(six, groups);
    CHECK(evaluate(six.instance, w).total == 162);
    CHECK(oracle::loss(six.instance, w.parents()) == 162);
  }

  // Uneven items: S = 30, n = 2, window (3.75, 7.5), each group sums to 15.
  const std::vector<std::int64_t> a{4, 5, 6, 4, 5, 6};
  const auto uneven = encode_3partition({2, a}, 3);
  CHECK(check_3partition_structure(uneven).ok());
  CHECK(evaluate(uneven.instance, witness_tree_3partition(uneven, {{0, 1, 2}, {3, 4, 5}})).total == 450);
  CHECK(evaluate(uneven.instance, witness_tree_3partition(uneven, {{0, 4, 2}, {3, 1, 5}})).total == 450);
  CHECK(code_of([&] { witness_tree_3partition(uneven, {{0, 1, 3}, {2, 4, 5}}); }) == ErrorCode::Unbalanced);
  CHECK(code_of([&] { witness_tree_3partition(uneven, {{0, 1, 2}, {2, 4, 5}}); }) == ErrorCode::NotAPartition);
  CHECK(code_of([&] { witness_tree_3partition(uneven, {{0, 1, 2, 3, 4, 5}}); }) == ErrorCode::NotAPartition);
  CHECK(code_of([&] { witness_tree_3partition(uneven, {{0, 1, 2}, {3, 4, 9}}); }) == ErrorCode::NotAPartition);

  const auto three = encode_3partition({3, {5, 5, 5, 5, 5, 5, 5, 5, 5}}, 3);
  CHECK(check_3partition_structure(three).ok());
  CHECK(evaluate(three.instance, witness_tree_3partition(three, {{0, 4, 8}, {1, 5, 6}, {2, 3, 7}})).total == 675);
  // Fully interleaved groups need more room between the chains.
  const auto roomy = encode_3partition({3, {5, 5, 5, 5, 5, 5, 5, 5, 5}}, 8);
  CHECK(evaluate(roomy.instance, witness_tree_3partition(roomy, {{0, 3, 6}, {1, 4, 7}, {2, 5, 8}})).total == 675);
}
