#include "bnsl/knowledge.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <sstream>
#include <unordered_map>

#include "bnsl/errors.hpp"

namespace bnsl {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::pair<std::string, std::string> parse_arc(const std::string& body, int line_no) {
  const auto arrow = body.find("->");
  if (arrow == std::string::npos) {
    throw ConfigError("knowledge line " + std::to_string(line_no) + ": expected '<a> -> <b>'");
  }
  auto a = trim(body.substr(0, arrow));
  auto b = trim(body.substr(arrow + 2));
  if (a.empty() || b.empty()) throw ConfigError("knowledge line " + std::to_string(line_no) + ": empty variable name");
  if (a == b) throw ConfigError("knowledge line " + std::to_string(line_no) + ": self-loop");
  return {a, b};
}

template <typename Key>
bool arcs_acyclic(const std::set<std::pair<Key, Key>>& arcs) {
  std::map<Key, std::vector<Key>> out;
  std::map<Key, int> indegree;
  for (const auto& [a, b] : arcs) {
    out[a].push_back(b);
    indegree[a];
    ++indegree[b];
  }
  std::vector<Key> ready;
  for (const auto& [v, d] : indegree) {
    if (d == 0) ready.push_back(v);
  }
  std::size_t seen = 0;
  while (!ready.empty()) {
    Key v = ready.back();
    ready.pop_back();
    ++seen;
    for (const auto& w : out[v]) {
      if (--indegree[w] == 0) ready.push_back(w);
    }
  }
  return seen == indegree.size();
}

template <typename Key>
void check_invariants(const std::map<Key, int>& tiers, const std::set<std::pair<Key, Key>>& required,
                      const std::set<std::pair<Key, Key>>& forbidden, auto&& label) {
  for (const auto& [v, t] : tiers) {
    if (t < 1) throw ConfigError("knowledge: tier of " + label(v) + " must be a positive integer");
  }
  for (const auto& arc : required) {
    if (forbidden.count(arc)) {
      throw ConfigError("knowledge: arc " + label(arc.first) + " -> " + label(arc.second) +
                        " is both required and forbidden");
    }
    auto ta = tiers.find(arc.first);
    auto tb = tiers.find(arc.second);
    if (ta != tiers.end() && tb != tiers.end() && ta->second > tb->second) {
      throw ConfigError("knowledge: required arc " + label(arc.first) + " -> " + label(arc.second) +
                        " points to an earlier tier");
    }
  }
  if (!arcs_acyclic(required)) throw ConfigError("knowledge: required arcs form a cycle");
}

}  // namespace

std::size_t KnowledgeSpec::tier_count() const {
  std::set<int> distinct;
  for (const auto& [name, t] : tiers) distinct.insert(t);
  return distinct.size();
}

KnowledgeSpec parse_knowledge(std::istream& in) {
  KnowledgeSpec spec;
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    const auto line = trim(raw);
    if (line.empty()) continue;
    std::istringstream words(line);
    std::string keyword;
    words >> keyword;
    const auto rest = trim(std::string_view(line).substr(keyword.size()));
    if (keyword == "tier") {
      const auto colon = rest.find(':');
      if (colon == std::string::npos) throw ConfigError("knowledge line " + std::to_string(line_no) + ": expected 'tier <k>: names'");
      const auto num = trim(rest.substr(0, colon));
      int tier = 0;
      try {
        std::size_t used = 0;
        tier = std::stoi(num, &used);
        if (used != num.size()) throw std::invalid_argument(num);
      } catch (const std::exception&) {
        throw ConfigError("knowledge line " + std::to_string(line_no) + ": bad tier index '" + num + "'");
      }
      std::stringstream names(rest.substr(colon + 1));
      std::string name;
      while (std::getline(names, name, ',')) {
        name = trim(name);
        if (name.empty()) continue;
        auto [it, inserted] = spec.tiers.emplace(name, tier);
        if (!inserted && it->second != tier) {
          throw ConfigError("knowledge line " + std::to_string(line_no) + ": '" + name + "' assigned to two tiers");
        }
      }
    } else if (keyword == "require") {
      spec.required.insert(parse_arc(rest, line_no));
    } else if (keyword == "forbid") {
      spec.forbidden.insert(parse_arc(rest, line_no));
    } else {
      throw ConfigError("knowledge line " + std::to_string(line_no) + ": unknown statement '" + keyword + "'");
    }
  }
  check_invariants(spec.tiers, spec.required, spec.forbidden, [](const std::string& s) { return "'" + s + "'"; });
  return spec;
}

KnowledgeSpec load_knowledge(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open knowledge file '" + path.string() + "'");
  return parse_knowledge(in);
}

Knowledge::Knowledge(int n, std::map<int, int> tiers, std::set<Arc> required, std::set<Arc> forbidden)
    : tiers_(std::move(tiers)), required_(std::move(required)), forbidden_(std::move(forbidden)) {
  auto in_range = [n](int v) { return v >= 0 && v < n; };
  for (const auto& [v, t] : tiers_) {
    if (!in_range(v)) throw ConfigError("knowledge: tier variable index out of range");
  }
  for (const auto* set : {&required_, &forbidden_}) {
    for (const auto& [a, b] : *set) {
      if (!in_range(a) || !in_range(b) || a == b) throw ConfigError("knowledge: invalid arc");
    }
  }
  check_invariants(tiers_, required_, forbidden_, [](int v) { return "#" + std::to_string(v); });
}

Knowledge Knowledge::bind(const KnowledgeSpec& spec, std::span<const std::string> names) {
  std::unordered_map<std::string, int> index;
  for (std::size_t i = 0; i < names.size(); ++i) index.emplace(names[i], static_cast<int>(i));
  auto resolve = [&](const std::string& name) {
    auto it = index.find(name);
    if (it == index.end()) throw ConfigError("knowledge refers to unknown variable '" + name + "'");
    return it->second;
  };
  std::map<int, int> tiers;
  for (const auto& [name, t] : spec.tiers) tiers.emplace(resolve(name), t);
  std::set<Arc> required;
  for (const auto& [a, b] : spec.required) required.emplace(resolve(a), resolve(b));
  std::set<Arc> forbidden;
  for (const auto& [a, b] : spec.forbidden) forbidden.emplace(resolve(a), resolve(b));
  return Knowledge(static_cast<int>(names.size()), std::move(tiers), std::move(required), std::move(forbidden));
}

std::optional<int> Knowledge::tier(int v) const {
  auto it = tiers_.find(v);
  if (it == tiers_.end()) return std::nullopt;
  return it->second;
}

bool Knowledge::arc_allowed(int a, int b) const {
  if (required(a, b)) return true;
  if (forbidden_.count({a, b})) return false;
  auto ta = tier(a);
  auto tb = tier(b);
  return !(ta && tb && *ta > *tb);
}

ArcFilter Knowledge::filter() const {
  if (empty()) return {};
  return [k = *this](int a, int b) { return k.arc_allowed(a, b); };
}

std::string describe(const Violation& v, std::span<const std::string> names) {
  auto name = [&](int i) {
    return i >= 0 && static_cast<std::size_t>(i) < names.size() ? names[i] : "#" + std::to_string(i);
  };
  const auto arc = name(v.from) + " -> " + name(v.to);
  switch (v.kind) {
    case Violation::Kind::ForbiddenArc:
      return "disallowed arc " + arc;
    case Violation::Kind::MissingRequired:
      return "missing required arc " + arc;
    case Violation::Kind::MisdirectedRequired:
      return "required arc " + arc + " not directed as required";
    case Violation::Kind::UnorientedEdge:
      return "undirected edge " + name(v.from) + " -- " + name(v.to) + " has a disallowed direction";
  }
  return "violation";
}

std::vector<Violation> validate_output(const Knowledge& k, const Pdag& g) {
  std::vector<Violation> out;
  for (const auto& [a, b] : g.directed_arcs()) {
    if (!k.arc_allowed(a, b)) out.push_back({Violation::Kind::ForbiddenArc, a, b});
  }
  for (const auto& [a, b] : g.undirected_edges()) {
    if (k.pair_required(a, b)) continue;  // reported below
    if (!k.arc_allowed(a, b) || !k.arc_allowed(b, a)) out.push_back({Violation::Kind::UnorientedEdge, a, b});
  }
  for (const auto& [a, b] : k.required_arcs()) {
    if (a >= g.size() || b >= g.size()) {
      out.push_back({Violation::Kind::MissingRequired, a, b});
    } else if (!g.adjacent(a, b)) {
      out.push_back({Violation::Kind::MissingRequired, a, b});
    } else if (!g.has_directed(a, b)) {
      out.push_back({Violation::Kind::MisdirectedRequired, a, b});
    }
  }
  return out;
}

std::vector<Violation> validate_output(const Knowledge& k, const Dag& g) {
  return validate_output(k, Pdag::from_dag(g));
}

}  // namespace bnsl
