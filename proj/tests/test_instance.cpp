#include <doctest.h>

#include "ednr/json_io.hpp"
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

}  // namespace

TEST_CASE("uniform grid shapes") {
  const Instance one = make_uniform_grid(1, 1);
  CHECK(one.vertex_count() == 1);
  CHECK(one.edges().empty());

  const Instance two = make_uniform_grid(2, 2);
  CHECK(two.vertex_count() == 4);
  CHECK(two.edges().size() == 4);
  CHECK(two.total_demand() == 3);
  for (const auto& e : two.edges()) CHECK(e.resistance == 1);
  CHECK(two.demand(0) == 0);
  CHECK(two.is_uniform_corner_grid());

  CHECK(make_uniform_grid(3, 3).edges().size() == 12);
  for (std::uint32_t n = 1; n <= 7; ++n)
    for (std::uint32_t m = 1; m <= 7; ++m)
      CHECK(make_uniform_grid(n, m).edges().size() == n * (m - 1) + m * (n - 1));
  CHECK(code_of([] { make_uniform_grid(0, 3); }) == ErrorCode::InvalidShape);
}

TEST_CASE("make_general validation") {
  const std::vector<EdgeSpec> triangle{{0, 1, 1}, {1, 2, 1}, {0, 2, 1}};
  const Instance t = Instance::make_general(3, triangle, 0, {{1, 1}, {2, 1}});
  CHECK(t.edges().size() == 3);
  CHECK(!t.grid());

  const std::vector<EdgeSpec> split{{0, 1, 1}, {2, 3, 1}};
  CHECK(code_of([&] { Instance::make_general(4, split, 0, {}); }) == ErrorCode::Disconnected);
  const std::vector<EdgeSpec> loop{{0, 0, 1}, {0, 1, 1}};
  CHECK(code_of([&] { Instance::make_general(2, loop, 0, {}); }) == ErrorCode::SelfLoop);
  const std::vector<EdgeSpec> dup{{0, 1, 1}, {1, 0, 2}};
  CHECK(code_of([&] { Instance::make_general(2, dup, 0, {}); }) == ErrorCode::DuplicateEdge);
  const std::vector<EdgeSpec> neg{{0, 1, -1}};
  CHECK(code_of([&] { Instance::make_general(2, neg, 0, {}); }) == ErrorCode::NegativeValue);
  const std::vector<EdgeSpec> ok{{0, 1, 1}};
  CHECK(code_of([&] { Instance::make_general(2, ok, 0, {{1, -2}}); }) == ErrorCode::NegativeValue);
  CHECK(code_of([&] { Instance::make_general(2, ok, 0, {{0, 1}}); }) == ErrorCode::RootDemandPresent);
  CHECK(code_of([&] { Instance::make_general(2, ok, 0, {{5, 1}}); }) == ErrorCode::VertexOutOfRange);
  const std::vector<EdgeSpec> far{{0, 7, 1}};
  CHECK(code_of([&] { Instance::make_general(2, far, 0, {}); }) == ErrorCode::VertexOutOfRange);

  // A grid shape must match the edge set exactly.
  auto edges = grid_edges(2, 2);
  edges.pop_back();
  CHECK(code_of([&] { Instance::make_general(4, edges, 0, {}, GridShape{2, 2}); }) == ErrorCode::NotAGrid);
}

TEST_CASE("edges are canonical regardless of input order") {
  const std::vector<EdgeSpec> a{{2, 1, 3}, {0, 2, 1}, {1, 0, 2}};
  const std::vector<EdgeSpec> b{{0, 1, 2}, {1, 2, 3}, {2, 0, 1}};
  const Instance x = Instance::make_general(3, a, 0, {{1, 4}});
  const Instance y = Instance::make_general(3, b, 0, {{1, 4}});
  CHECK(x == y);
  for (std::size_t i = 1; i < x.edges().size(); ++i) {
    const auto& p = x.edges()[i - 1];
    const auto& q = x.edges()[i];
    CHECK(std::pair(p.u, p.v) < std::pair(q.u, q.v));
  }
  REQUIRE(x.find_edge(2, 1));
  CHECK(x.edges()[*x.find_edge(2, 1)].resistance == 3);
  CHECK(!x.find_edge(0, 0));
}

TEST_CASE("levels") {
  CHECK(levels(make_uniform_grid(2, 2)).level_sizes == std::vector<std::uint32_t>{1, 2, 1});
  CHECK(levels(make_uniform_grid(3, 3)).level_sizes == std::vector<std::uint32_t>{1, 2, 3, 2, 1});

  const GridLevels l = levels(make_uniform_grid(7, 16));
  std::uint32_t sum = 0;
  for (std::uint32_t k = 0; k < l.level_sizes.size(); ++k) {
    sum += l.level_sizes[k];
    CHECK(l.level_sizes[k] == oracle::cells_on(7, 16, k));
  }
  CHECK(sum == 112);
  CHECK(*std::max_element(l.level_sizes.begin(), l.level_sizes.end()) == 7);

  for (std::uint32_t n = 1; n <= 6; ++n) {
    for (std::uint32_t m = 1; m <= 6; ++m) {
      const Instance g = make_uniform_grid(n, m);
      const GridLevels gl = levels(g);
      std::vector<int> owner(g.edges().size(), 0);
      for (std::uint32_t k = 0; k < gl.level_edges.size(); ++k) {
        CHECK((k >= 1 && k <= n + m - 2) == !gl.level_edges[k].empty());
        for (const auto e : gl.level_edges[k]) {
          ++owner[e];
          const auto& edge = g.edges()[e];
          CHECK(std::max(gl.level_of[edge.u], gl.level_of[edge.v]) == k);
        }
      }
      for (const int c : owner) CHECK(c == 1);
      for (std::uint32_t k = 0; k <= n + m - 2; ++k) {
        CHECK(level_size(n, m, k) == oracle::cells_on(n, m, k));
        CHECK(gl.at_or_beyond(k) == oracle::cells_beyond(n, m, k));
      }
    }
  }
  const std::vector<EdgeSpec> path{{0, 1, 1}};
  CHECK(code_of([&] { levels(Instance::make_general(2, path, 0, {})); }) == ErrorCode::NotAGrid);
}

TEST_CASE("json round trip") {
  const Instance g = make_uniform_grid(2, 2);
  CHECK(parse_instance(serialize(g)) == g);
  CHECK(serialize(parse_instance(serialize(g))) == serialize(g));

  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    RandomInstanceOptions o;
    o.vertices = 2 + seed % 9;
    o.extra_edges = seed % 5;
    o.seed = seed;
    const Instance r = make_random(o);
    CHECK(parse_instance(serialize(r)) == r);
  }

  const Instance general = parse_instance(R"({"vertices": 3, "root": 0, "edges": [[0,1,2],[1,2,1]], "demands": {"2": 4}})");
  CHECK(!general.grid());
  CHECK(general.demand(2) == 4);
}

TEST_CASE("json errors") {
  CHECK(code_of([] { parse_instance(R"({"vertices": 2, "root": 0, "edges": [[0,1,-1]]})"); }) == ErrorCode::ParseError);
  try {
    parse_instance("{\n  \"vertices\": 2,\n  \"root\": 0,\n  \"edges\": [[0,1,1]\n}");
    FAIL("expected ParseError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ParseError);
    CHECK(std::string(e.what()).find("line") != std::string::npos);
  }
  try {
    parse_instance(R"({"vertices": 2, "root": 0, "edges": [[0,"x",1]]})");
    FAIL("expected ParseError");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("edges") != std::string::npos);
  }
  CHECK(code_of([] { parse_instance(R"({"root": 0, "edges": []})"); }) == ErrorCode::ParseError);
  CHECK(code_of([] { parse_instance("[]"); }) == ErrorCode::ParseError);
  CHECK(code_of([] { parse_instance(""); }) == ErrorCode::ParseError);
}

TEST_CASE("random instances are connected and deterministic") {
  RandomInstanceOptions o;
  o.vertices = 9;
  o.extra_edges = 5;
  o.seed = 77;
  CHECK(make_random(o) == make_random(o));
  const Instance r = make_random(o);
  CHECK(r.vertex_count() == 9);
  CHECK(r.edges().size() == 13);
  CHECK(r.demand(r.root()) == 0);
  for (const auto& e : r.edges()) {
    CHECK(e.resistance >= 0);
    CHECK(e.resistance <= 3);
  }
}
