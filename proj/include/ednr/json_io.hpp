#pragma once

#include <string>
#include <string_view>

#include "ednr/instance.hpp"
#include "ednr/spanning_tree.hpp"

namespace ednr {

/// Instance schema:
///   { "vertices": int, "root": int, "grid": {"n": int, "m": int} | null,
///     "edges": [[u, v, resistance], ...], "demands": {"<id>": int, ...} }
/// Edges are written in canonical order; zero demands are omitted.
std::string serialize(const Instance& instance);

/// Throws Error(ParseError) naming the offending line/field. Validation
/// failures of the decoded data are reported the same way.
Instance parse_instance(std::string_view text);

/// Tree schema: { "root": int, "parent": {"<v>": int, ...} }.
std::string serialize(const SpanningTree& tree);
SpanningTree parse_tree(const Instance& instance, std::string_view text);

}  // namespace ednr
