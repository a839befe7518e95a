#include "ednr/json_io.hpp"

#include <json.hpp>

#include <algorithm>
#include <limits>

namespace ednr {

using nlohmann::ordered_json;

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw Error(ErrorCode::ParseError, where + ": " + what);
}

// Line/column of a byte offset, for syntax errors.
std::string locate(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

ordered_json parse_json(std::string_view text) {
  try {
    return ordered_json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    fail(locate(text, e.byte == 0 ? 0 : e.byte - 1), "malformed JSON");
  }
}

std::int64_t get_int(const ordered_json& node, const std::string& where, bool allow_negative = false) {
  if (!node.is_number_integer()) fail(where, "expected an integer");
  const auto value = node.get<std::int64_t>();
  if (!allow_negative && value < 0) fail(where, "negative value " + std::to_string(value));
  return value;
}

std::uint32_t get_index(const ordered_json& node, const std::string& where) {
  const auto value = get_int(node, where);
  if (value > std::numeric_limits<std::uint32_t>::max()) fail(where, "index too large");
  return static_cast<std::uint32_t>(value);
}

std::uint32_t key_index(const std::string& key, const std::string& where) {
  std::size_t pos = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(key, &pos);
  } catch (const std::exception&) {
    fail(where, "key \"" + key + "\" is not a vertex id");
  }
  if (pos != key.size() || key.empty() || key[0] == '-' || v > std::numeric_limits<std::uint32_t>::max())
    fail(where, "key \"" + key + "\" is not a vertex id");
  return static_cast<std::uint32_t>(v);
}

}  // namespace

std::string serialize(const Instance& instance) {
  ordered_json j;
  j["vertices"] = instance.vertex_count();
  j["root"] = instance.root();
  if (const auto& g = instance.grid()) {
    j["grid"] = {{"n", g->rows}, {"m", g->cols}};
  } else {
    j["grid"] = nullptr;
  }
  auto edges = ordered_json::array();
  for (const auto& e : instance.edges()) edges.push_back({e.u, e.v, e.resistance});
  j["edges"] = std::move(edges);
  auto demands = ordered_json::object();
  for (VertexId v = 0; v < instance.vertex_count(); ++v)
    if (instance.demand(v) != 0) demands[std::to_string(v)] = instance.demand(v);
  j["demands"] = std::move(demands);
  return j.dump(1) + "\n";
}

Instance parse_instance(std::string_view text) {
  const ordered_json j = parse_json(text);
  if (!j.is_object()) fail("document", "expected a JSON object");
  for (const char* key : {"vertices", "root", "edges"})
    if (!j.contains(key)) fail(std::string("field '") + key + "'", "missing");

  const std::uint32_t nv = get_index(j["vertices"], "field 'vertices'");
  const VertexId root = get_index(j["root"], "field 'root'");

  std::optional<GridShape> grid;
  if (j.contains("grid") && !j["grid"].is_null()) {
    const auto& g = j["grid"];
    if (!g.is_object() || !g.contains("n") || !g.contains("m")) fail("field 'grid'", "expected {\"n\":int,\"m\":int} or null");
    grid = GridShape{get_index(g["n"], "field 'grid.n'"), get_index(g["m"], "field 'grid.m'")};
  }

  const auto& jedges = j["edges"];
  if (!jedges.is_array()) fail("field 'edges'", "expected an array");
  std::vector<EdgeSpec> edges;
  edges.reserve(jedges.size());
  for (std::size_t i = 0; i < jedges.size(); ++i) {
    const std::string where = "field 'edges[" + std::to_string(i) + "]'";
    const auto& e = jedges[i];
    if (!e.is_array() || e.size() != 3) fail(where, "expected [u, v, resistance]");
    edges.push_back({get_index(e[0], where + "[0]"), get_index(e[1], where + "[1]"),
                     get_int(e[2], where + "[2] (resistance)")});
  }

  std::map<VertexId, std::int64_t> demands;
  if (j.contains("demands")) {
    const auto& jd = j["demands"];
    if (!jd.is_object()) fail("field 'demands'", "expected an object");
    for (const auto& [key, value] : jd.items()) {
      const std::string where = "field 'demands." + key + "'";
      demands[key_index(key, where)] = get_int(value, where);
    }
  }

  try {
    return Instance::make_general(nv, edges, root, demands, grid);
  } catch (const Error& e) {
    throw Error(ErrorCode::ParseError, std::string("invalid instance: ") + e.what());
  }
}

std::string serialize(const SpanningTree& tree) {
  ordered_json j;
  j["root"] = tree.root();
  auto parents = ordered_json::object();
  for (VertexId v = 0; v < tree.vertex_count(); ++v)
    if (v != tree.root()) parents[std::to_string(v)] = tree.parent(v);
  j["parent"] = std::move(parents);
  return j.dump(1) + "\n";
}

SpanningTree parse_tree(const Instance& instance, std::string_view text) {
  const ordered_json j = parse_json(text);
  if (!j.is_object() || !j.contains("root") || !j.contains("parent"))
    fail("document", "expected {\"root\": int, \"parent\": {...}}");
  const VertexId root = get_index(j["root"], "field 'root'");
  if (root != instance.root()) fail("field 'root'", "does not match the instance root");
  const auto& jp = j["parent"];
  if (!jp.is_object()) fail("field 'parent'", "expected an object");
  std::vector<VertexId> parent(instance.vertex_count(), kNoParent);
  for (const auto& [key, value] : jp.items()) {
    const std::string where = "field 'parent." + key + "'";
    const VertexId v = key_index(key, where);
    if (v >= instance.vertex_count()) fail(where, "vertex out of range");
    parent[v] = get_index(value, where);
  }
  try {
    return SpanningTree::from_parents(instance, std::move(parent));
  } catch (const Error& e) {
    throw Error(ErrorCode::ParseError, std::string("invalid tree: ") + e.what());
  }
}

}  // namespace ednr
