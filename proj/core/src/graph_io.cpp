#include "bnsl/graph_io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "bnsl/errors.hpp"

namespace bnsl {

namespace {

std::string dot_id(const std::string& name) {
  bool plain = !name.empty() && !std::isdigit(static_cast<unsigned char>(name.front()));
  for (char c : name) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) plain = false;
  }
  if (plain) return name;
  std::string out = "\"";
  for (char c : name) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  out += '"';
  return out;
}

std::string trim(std::string s) {
  auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

}  // namespace

std::string to_dot(const Pdag& g, std::span<const std::string> names) {
  if (static_cast<int>(names.size()) != g.size()) throw std::invalid_argument("to_dot: name count mismatch");
  std::ostringstream out;
  out << "digraph {\n";
  for (const auto& name : names) out << "  " << dot_id(name) << ";\n";
  for (const auto& [a, b] : g.directed_arcs()) {
    out << "  " << dot_id(names[a]) << " -> " << dot_id(names[b]) << ";\n";
  }
  for (const auto& [a, b] : g.undirected_edges()) {
    out << "  " << dot_id(names[a]) << " -> " << dot_id(names[b]) << " [dir=none];\n";
  }
  out << "}\n";
  return out.str();
}

std::string to_arc_csv(const Pdag& g, std::span<const std::string> names) {
  if (static_cast<int>(names.size()) != g.size()) throw std::invalid_argument("to_arc_csv: name count mismatch");
  std::ostringstream out;
  out << "parent,child,directed\n";
  for (const auto& [a, b] : g.directed_arcs()) out << names[a] << ',' << names[b] << ",1\n";
  for (const auto& [a, b] : g.undirected_edges()) out << names[a] << ',' << names[b] << ",0\n";
  return out.str();
}

Pdag read_arc_csv(std::istream& in, std::span<const std::string> names) {
  std::unordered_map<std::string, int> index;
  for (std::size_t i = 0; i < names.size(); ++i) index.emplace(names[i], static_cast<int>(i));
  Pdag g(static_cast<int>(names.size()));
  std::string line;
  int line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
    if (!header_seen) {
      header_seen = true;
      if (cells.size() >= 2 && cells[0] == "parent" && cells[1] == "child") continue;
    }
    if (cells.size() != 2 && cells.size() != 3) {
      throw DataError("arc list line " + std::to_string(line_no) + ": expected parent,child[,directed]");
    }
    auto find = [&](const std::string& name) {
      auto it = index.find(name);
      if (it == index.end()) throw DataError("arc list line " + std::to_string(line_no) + ": unknown variable '" + name + "'");
      return it->second;
    };
    const int a = find(cells[0]);
    const int b = find(cells[1]);
    if (a == b) throw DataError("arc list line " + std::to_string(line_no) + ": self-loop");
    const bool directed = cells.size() == 2 || cells[2] == "1";
    if (cells.size() == 3 && cells[2] != "0" && cells[2] != "1") {
      throw DataError("arc list line " + std::to_string(line_no) + ": directed flag must be 0 or 1");
    }
    if (g.adjacent(a, b)) {
      const bool same = directed ? g.has_directed(a, b) : g.has_undirected(a, b);
      if (same) continue;
      throw DataError("arc list line " + std::to_string(line_no) + ": conflicting entries for one pair");
    }
    if (directed) {
      g.add_directed(a, b);
    } else {
      g.add_undirected(a, b);
    }
  }
  if (!g.directed_part_acyclic()) throw DataError("arc list: directed arcs form a cycle");
  return g;
}

Pdag load_arc_csv(const std::string& path, std::span<const std::string> names) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open arc list '" + path + "'");
  return read_arc_csv(in, names);
}

}  // namespace bnsl
