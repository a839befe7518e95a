#include "ednr/cli.hpp"

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "ednr/analysis.hpp"
#include "ednr/exact_solver.hpp"
#include "ednr/json_io.hpp"
#include "ednr/minmin.hpp"
#include "ednr/reductions.hpp"

namespace ednr::cli {

namespace {

using Json = nlohmann::ordered_json;

// Integers that fit in 64 bits are JSON numbers, larger ones strings.
Json big(const BigInt& x) {
  if (x >= std::numeric_limits<std::int64_t>::min() && x <= std::numeric_limits<std::int64_t>::max())
    return x.convert_to<std::int64_t>();
  return x.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + path);
  out << text;
}

void emit(std::ostream& out, const std::string& output, const std::string& text) {
  if (output.empty()) {
    out << text;
  } else {
    write_file(output, text);
  }
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json levels_json(const LossReport& report) {
  Json a = Json::array();
  for (const auto& x : report.per_level) a.push_back(big(x));
  return a;
}

Json profile_json(const SubtreeProfile& p) {
  Json a = Json::array();
  for (const auto& level : p.sizes) a.push_back(level);
  return a;
}

Rational parse_rational(const std::string& s) {
  try {
    const auto slash = s.find('/');
    if (slash == std::string::npos) return Rational(BigInt(s));
    const BigInt den(s.substr(slash + 1));
    if (den == 0) throw Error(ErrorCode::InvalidArgument, "zero denominator in " + s);
    return Rational(BigInt(s.substr(0, slash)), den);
  } catch (const std::runtime_error&) {
    throw Error(ErrorCode::InvalidArgument, "not a rational: " + s);
  }
}

// Writes the tree next to the report: DOT for *.dot paths, tree JSON otherwise.
void emit_tree(const std::string& path, const Instance& inst, const SpanningTree& tree) {
  if (path.empty()) return;
  const bool dot = path.size() >= 4 && path.compare(path.size() - 4, 4, ".dot") == 0;
  write_file(path, dot ? export_dot(inst, tree) : serialize(tree));
}

std::optional<std::uint64_t> env_budget() {
  const char* v = std::getenv("EDNR_BUDGET_NODES");
  if (!v || !*v) return std::nullopt;
  char* end = nullptr;
  const auto x = std::strtoull(v, &end, 10);
  if (*end != '\0') throw Error(ErrorCode::InvalidArgument, "EDNR_BUDGET_NODES is not a number");
  return x;
}

Json artifact_sidecar(const std::string& problem, const ReductionArtifact& art, const std::vector<std::int64_t>& a) {
  Json j;
  j["problem"] = problem;
  j["a"] = a;
  j["threshold"] = format_rational(art.threshold);
  Json items = Json::array();
  for (std::size_t k = 0; k < art.item_vertices.size(); ++k) {
    const GridShape& g = *art.instance.grid();
    Json cells = Json::array();
    for (const VertexId v : art.item_vertices[k]) cells.push_back({g.row(v), g.col(v)});
    items.push_back({{"item", k}, {"value", a[k]}, {"vertices", art.item_vertices[k]}, {"cells", cells}});
  }
  j["sourceMap"]["items"] = items;
  if (!art.feeder_edges.empty()) {
    Json feeders = Json::array();
    for (const auto e : art.feeder_edges) {
      const auto& edge = art.instance.edges()[e];
      feeders.push_back({edge.u, edge.v});
    }
    j["sourceMap"]["feederEdges"] = feeders;
  }
  if (art.width) j["params"]["W"] = *art.width;
  if (art.r_inf) j["params"]["Rinf"] = *art.r_inf;
  return j;
}

struct Options {
  std::string input, tree, output, emit, sidecar, format = "json", method = "bnb", kind = "grid", a_list, c_value;
  std::uint32_t n = 0, m = 0, t = 0, cap = kDefaultBauerCap, vertices = 8, extra_edges = 6, max_n = 5;
  std::int64_t demand = 1, resistance = 1, max_demand = 5, max_resistance = 3;
  std::optional<std::int64_t> width, r_inf;
  std::uint64_t seed = 1, limit = kDefaultEnumerationLimit;
  std::optional<std::uint64_t> budget_nodes, time_limit_ms;
  unsigned threads = 1;
  std::string order = "auto";
};

std::vector<std::int64_t> parse_list(const std::string& s) {
  std::vector<std::int64_t> a;
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, ',')) {
    try {
      std::size_t used = 0;
      a.push_back(std::stoll(part, &used));
      if (used != part.size()) throw std::invalid_argument(part);
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidArgument, "bad list entry '" + part + "'");
    }
  }
  if (a.empty()) throw Error(ErrorCode::InvalidArgument, "empty list");
  return a;
}

int cmd_gen(const Options& o, std::ostream& out) {
  if (o.kind == "random") {
    RandomInstanceOptions r;
    r.vertices = o.vertices;
    r.extra_edges = o.extra_edges;
    r.max_demand = o.max_demand;
    r.max_resistance = o.max_resistance;
    r.seed = o.seed;
    emit(out, o.output, serialize(make_random(r)));
    return kExitOk;
  }
  if (o.n == 0 || o.m == 0) throw Error(ErrorCode::InvalidShape, "gen grid needs --n and --m");
  std::map<VertexId, std::int64_t> demands;
  for (VertexId v = 1; v < o.n * o.m; ++v) demands[v] = o.demand;
  emit(out, o.output, serialize(make_grid(o.n, o.m, demands, {}, o.resistance)));
  return kExitOk;
}

int cmd_eval(const Options& o, std::ostream& out) {
  const Instance inst = parse_instance(read_file(o.input));
  const SpanningTree tree = parse_tree(inst, read_file(o.tree));
  const LossReport r = evaluate(inst, tree);
  Json j;
  j["loss"] = big(r.total);
  if (inst.grid()) j["perLevel"] = levels_json(r);
  emit(out, o.output, dump(j));
  return kExitOk;
}

int cmd_minmin(const Options& o, std::ostream& out) {
  const Instance grid = make_uniform_grid(o.n, o.m);
  const SpanningTree tree = minmin_tree(o.n, o.m);
  const LossReport r = evaluate(grid, tree);
  const SubtreeProfile profile = subtree_size_profile(grid, tree);
  Json j;
  j["n"] = o.n;
  j["m"] = o.m;
  j["loss"] = big(r.total);
  j["perLevel"] = levels_json(r);
  j["profile"] = profile_json(profile);
  j["propertyA"] = check_property_a(grid, tree);
  j["propertyB"] = check_property_b(grid, tree);
  const auto b = beta(minmin_profile(std::min(o.n, o.m), std::max(o.n, o.m)));
  j["beta"] = b ? Json(*b) : Json(nullptr);
  emit_tree(o.emit, grid, tree);
  emit(out, o.output, dump(j));
  return kExitOk;
}

int cmd_spt(const Options& o, std::ostream& out) {
  const Instance inst = parse_instance(read_file(o.input));
  const SpanningTree tree = shortest_path_tree(inst);
  Json j;
  j["loss"] = big(evaluate(inst, tree).total);
  j["tree"] = Json::parse(serialize(tree));
  emit_tree(o.emit, inst, tree);
  emit(out, o.output, dump(j));
  return kExitOk;
}

int cmd_exact(const Options& o, std::ostream& out, std::ostream& err) {
  const Instance inst = parse_instance(read_file(o.input));
  SolveResult r = [&] {
    if (o.method == "enumerate") return enumerate_all(inst, o.limit);
    SolveBudget b;
    b.max_nodes = o.budget_nodes ? o.budget_nodes : env_budget();
    if (o.time_limit_ms) b.max_time = std::chrono::milliseconds(*o.time_limit_ms);
    b.threads = std::max(1u, o.threads);
    b.order = o.order == "near" ? BranchOrder::NearFirst : o.order == "far" ? BranchOrder::FarFirst : BranchOrder::Auto;
    return solve_bnb(inst, b);
  }();
  Json j;
  j["status"] = std::string(to_string(r.status));
  j["bestLoss"] = big(r.best_loss);
  j["method"] = o.method;
  if (o.method == "bnb") {
    j["rootBound"] = r.root_bound ? Json(*r.root_bound) : Json(nullptr);
    if (o.time_limit_ms) j["nondeterministic"] = true;
  }
  j["bestTree"] = Json::parse(serialize(r.best_tree));
  // Node counts vary with the thread schedule; keep them off stdout.
  err << "nodes explored: " << r.nodes_explored << "\n";
  emit_tree(o.emit, inst, r.best_tree);
  emit(out, o.output, dump(j));
  return r.status == SolveStatus::Optimal ? kExitOk : kExitBudget;
}

int cmd_bound(const Options& o, std::ostream& out) {
  const BoundReport r = lower_bound(o.n, o.m);
  Json j;
  j["n"] = r.n;
  j["m"] = r.m;
  j["sumBound"] = format_rational(r.sum_bound);
  j["sumBoundDecimal"] = to_double(r.sum_bound);
  j["logBound"] = r.log_bound;
  emit(out, o.output, dump(j));
  return kExitOk;
}

int cmd_certify(const Options& o, std::ostream& out) {
  const RatioCertificate c = ratio_certificate(o.n, o.m);
  Json j;
  j["n"] = c.n;
  j["m"] = c.m;
  j["minminLoss"] = big(c.minmin_loss);
  j["lowerBound"] = format_rational(c.lower_bound);
  j["ratioUpper"] = format_rational(c.ratio_upper);
  j["ratioUpperDecimal"] = to_double(c.ratio_upper);
  j["beta"] = c.beta ? Json(*c.beta) : Json(nullptr);
  j["headLoss"] = big(c.head_loss);
  j["tailLoss"] = big(c.tail_loss);
  if (c.beta) {
    const auto profile = minmin_profile(c.n, c.m);
    const auto tail = right_part_bound(c.n, c.m, profile, c.beta);
    const auto head = left_part_bound(c.n, c.m, profile, c.beta);
    j["tailBound"] = {{"sum", big(tail.tail_sum)}, {"bound", big(tail.bound)}, {"holds", tail.holds}};
    j["headBound"] = {{"sum", big(head.head_sum)}, {"bound", format_rational(head.bound)}, {"holds", head.holds}};
  }
  emit(out, o.output, dump(j));
  return kExitOk;
}

int cmd_bauer(const Options& o, std::ostream& out) {
  const Rational total = parse_rational(o.c_value);
  const BauerResult r = bauer_bruteforce(o.t, total, o.cap);
  Json j;
  j["t"] = r.t;
  j["C"] = format_rational(r.total);
  Json per_k = Json::array();
  for (const auto& x : r.per_k) per_k.push_back(format_rational(x));
  j["perK"] = per_k;
  j["argmax"] = r.argmax;
  j["bruteMax"] = format_rational(r.brute_max);
  j["closedBound"] = format_rational(r.closed_bound);
  j["tight"] = r.brute_max == r.closed_bound;
  Json point = Json::array();
  for (const auto& x : r.maximiser) point.push_back(format_rational(x));
  j["maximiser"] = point;
  emit(out, o.output, dump(j));
  return kExitOk;
}

void write_reduction(const Options& o, std::ostream& out, const std::string& problem, const ReductionArtifact& art,
                     const std::vector<std::int64_t>& a) {
  emit(out, o.output, serialize(art.instance));
  std::string sidecar = o.sidecar;
  if (sidecar.empty() && !o.output.empty()) {
    sidecar = o.output;
    if (sidecar.size() > 5 && sidecar.compare(sidecar.size() - 5, 5, ".json") == 0) sidecar.resize(sidecar.size() - 5);
    sidecar += ".sidecar.json";
  }
  if (!sidecar.empty()) write_file(sidecar, dump(artifact_sidecar(problem, art, a)));
}

int cmd_bench(const Options& o, std::ostream& out) {
  Table1Options t;
  t.max_n = o.max_n;
  t.threads = std::max(1u, o.threads);
  if (auto b = o.budget_nodes ? o.budget_nodes : env_budget()) t.stretch_nodes = *b;
  const auto rows = verify_table1(t);
  std::ostringstream s;
  if (o.format == "csv") {
    s << "n,optimal_loss,minmin_loss,optimal_status\n";
    for (const auto& r : rows) s << r.n << ',' << r.best_loss << ',' << r.minmin_loss << ',' << to_string(r.status) << '\n';
  } else if (o.format == "markdown") {
    s << "| n | Optimal loss | Loss by Min-Min |\n|---:|---:|---:|\n";
    bool footnote = false;
    for (const auto& r : rows) {
      s << "| " << r.n << " | " << r.best_loss << (r.proven() ? "" : "*") << " | " << r.minmin_loss << " |\n";
      footnote = footnote || !r.proven();
    }
    if (footnote) s << "\n\\* best found within the node budget, not proven optimal\n";
  } else {
    Json a = Json::array();
    for (const auto& r : rows)
      a.push_back({{"n", r.n}, {"optimalLoss", big(r.best_loss)}, {"status", std::string(to_string(r.status))},
                   {"minminLoss", big(r.minmin_loss)}});
    s << dump(a);
  }
  emit(out, o.output, s.str());
  return kExitOk;
}

int cmd_render(const Options& o, std::ostream& out) {
  if (!o.input.empty()) {
    const Instance inst = parse_instance(read_file(o.input));
    const SpanningTree tree = o.tree.empty() ? shortest_path_tree(inst) : parse_tree(inst, read_file(o.tree));
    emit(out, o.output, export_dot(inst, tree));
    return kExitOk;
  }
  if (o.n == 0 || o.m == 0) throw Error(ErrorCode::InvalidArgument, "render needs --input or --n/--m");
  emit(out, o.output, export_dot(make_uniform_grid(o.n, o.m), minmin_tree(o.n, o.m)));
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Loss-minimising spanning trees for distribution networks", "ednr"};
  app.require_subcommand(1);
  Options o;

  auto* gen = app.add_subcommand("gen", "Write an instance: uniform-style grid or random graph");
  gen->add_option("kind", o.kind, "grid or random")->check(CLI::IsMember({"grid", "random"}));
  gen->add_option("--n", o.n, "Grid rows");
  gen->add_option("--m", o.m, "Grid columns");
  gen->add_option("--demand", o.demand, "Demand on every non-root grid vertex");
  gen->add_option("--resistance", o.resistance, "Resistance of every grid edge");
  gen->add_option("--vertices", o.vertices, "Random graph size");
  gen->add_option("--extra-edges", o.extra_edges, "Edges beyond a random spanning tree");
  gen->add_option("--max-demand", o.max_demand);
  gen->add_option("--max-resistance", o.max_resistance);
  gen->add_option("--seed", o.seed);
  gen->add_option("--output", o.output);

  auto* ev = app.add_subcommand("eval", "Loss of a tree");
  ev->add_option("--input", o.input, "Instance JSON")->required();
  ev->add_option("--tree", o.tree, "Tree JSON")->required();
  ev->add_option("--output", o.output);

  auto* mm = app.add_subcommand("minmin", "Min-Min tree of the uniform n x m grid");
  mm->add_option("--n", o.n)->required();
  mm->add_option("--m", o.m)->required();
  mm->add_option("--emit", o.emit, "Also write the tree (*.dot for DOT, else JSON)");
  mm->add_option("--output", o.output);

  auto* spt = app.add_subcommand("spt", "Shortest-path tree");
  spt->add_option("--input", o.input)->required();
  spt->add_option("--emit", o.emit);
  spt->add_option("--output", o.output);

  auto* ex = app.add_subcommand("exact", "Optimal tree by branch and bound or enumeration");
  ex->add_option("--input", o.input)->required();
  ex->add_option("--method", o.method)->check(CLI::IsMember({"bnb", "enumerate"}));
  ex->add_option("--budget-nodes", o.budget_nodes, "Node budget (default $EDNR_BUDGET_NODES or none)");
  ex->add_option("--time-limit-ms", o.time_limit_ms, "Wall-clock budget; makes the result nondeterministic");
  ex->add_option("--threads", o.threads);
  ex->add_option("--limit", o.limit, "Tree-count guard for --method enumerate");
  ex->add_option("--order", o.order, "Branch order: auto, near or far")->check(CLI::IsMember({"auto", "near", "far"}));
  ex->add_option("--emit", o.emit);
  ex->add_option("--output", o.output);

  auto* bd = app.add_subcommand("bound", "Level-cut lower bound for the uniform grid");
  bd->add_option("--n", o.n)->required();
  bd->add_option("--m", o.m)->required();
  bd->add_option("--output", o.output);

  auto* ce = app.add_subcommand("certify", "Ratio certificate of the Min-Min tree");
  ce->add_option("--n", o.n)->required();
  ce->add_option("--m", o.m)->required();
  ce->add_option("--output", o.output);

  auto* ba = app.add_subcommand("bauer", "Extreme-point check of the 9/8 bound");
  ba->add_option("--t", o.t)->required();
  ba->add_option("--C", o.c_value, "Sum, integer or p/q")->required();
  ba->add_option("--cap", o.cap);
  ba->add_option("--output", o.output);

  auto* re = app.add_subcommand("reduce", "Hardness reduction instances");
  re->require_subcommand(1);
  auto* rp = re->add_subcommand("partition", "Partition to a 3-row grid");
  rp->add_option("--a", o.a_list, "Comma-separated items")->required();
  rp->add_option("--output", o.output);
  rp->add_option("--sidecar", o.sidecar, "Threshold and source map JSON");
  auto* r3 = re->add_subcommand("3partition", "3-Partition to a 0/1-demand grid");
  r3->add_option("--n", o.n)->required();
  r3->add_option("--a", o.a_list)->required();
  r3->add_option("--W", o.width);
  r3->add_option("--rinf", o.r_inf);
  r3->add_option("--output", o.output);
  r3->add_option("--sidecar", o.sidecar);

  auto* be = app.add_subcommand("bench", "Benchmarks");
  be->require_subcommand(1);
  auto* t1 = be->add_subcommand("table1", "Optimal and Min-Min losses on n x n grids");
  t1->add_option("--max-n", o.max_n);
  t1->add_option("--format", o.format)->check(CLI::IsMember({"json", "csv", "markdown"}));
  t1->add_option("--budget-nodes", o.budget_nodes, "Node budget for rows with n > 5");
  t1->add_option("--threads", o.threads);
  t1->add_option("--output", o.output);

  auto* rd = app.add_subcommand("render", "DOT drawing of a tree");
  rd->add_option("--input", o.input);
  rd->add_option("--tree", o.tree, "Tree JSON (default: shortest-path tree)");
  rd->add_option("--n", o.n);
  rd->add_option("--m", o.m);
  rd->add_option("--output", o.output);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  }

  try {
    if (*gen) return cmd_gen(o, out);
    if (*ev) return cmd_eval(o, out);
    if (*mm) return cmd_minmin(o, out);
    if (*spt) return cmd_spt(o, out);
    if (*ex) return cmd_exact(o, out, err);
    if (*bd) return cmd_bound(o, out);
    if (*ce) return cmd_certify(o, out);
    if (*ba) return cmd_bauer(o, out);
    if (*rp) {
      const auto a = parse_list(o.a_list);
      write_reduction(o, out, "partition", encode_partition({a}), a);
      return kExitOk;
    }
    if (*r3) {
      const auto a = parse_list(o.a_list);
      write_reduction(o, out, "3partition", encode_3partition({o.n, a}, o.width, o.r_inf), a);
      return kExitOk;
    }
    if (*t1) return cmd_bench(o, out);
    if (*rd) return cmd_render(o, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitInvalid;
}

}  // namespace ednr::cli
