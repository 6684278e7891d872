#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "bnsl/graph.hpp"

namespace bnsl {

/// Graphviz DOT. Directed arcs are written as `a -> b;`, undirected edges
/// as `a -> b [dir=none];`. Names that are not plain identifiers are quoted.
std::string to_dot(const Pdag& g, std::span<const std::string> names);

/// Arc-list CSV with header `parent,child,directed`; directed is 1 or 0.
/// Undirected edges are written once, lower index first.
std::string to_arc_csv(const Pdag& g, std::span<const std::string> names);

/// Parses an arc-list CSV against a known variable list. Throws DataError on
/// unknown names, malformed rows, or conflicting duplicate pairs.
Pdag read_arc_csv(std::istream& in, std::span<const std::string> names);
Pdag load_arc_csv(const std::string& path, std::span<const std::string> names);

}  // namespace bnsl
