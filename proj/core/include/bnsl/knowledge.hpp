#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bnsl/graph.hpp"

namespace bnsl {

/// Knowledge as written in a file, by variable name.
///
/// File grammar (one statement per line, `#` starts a comment):
///
///     tier <k>: <name>[, <name>...]     k is a positive integer
///     require <a> -> <b>
///     forbid <a> -> <b>
struct KnowledgeSpec {
  std::map<std::string, int> tiers;
  std::set<std::pair<std::string, std::string>> required;
  std::set<std::pair<std::string, std::string>> forbidden;

  /// Number of distinct tier indices in use.
  std::size_t tier_count() const;
  bool empty() const { return tiers.empty() && required.empty() && forbidden.empty(); }
};

/// Parses and checks name-level invariants: no variable in two tiers, no
/// arc both required and forbidden, required arcs never point to an earlier
/// tier, required arcs acyclic. Throws ConfigError.
KnowledgeSpec parse_knowledge(std::istream& in);
KnowledgeSpec load_knowledge(const std::filesystem::path& path);

/// Index-level knowledge bound to one variable list.
class Knowledge {
 public:
  /// Permissive knowledge for any graph.
  Knowledge() = default;
  /// Throws ConfigError when the invariants do not hold.
  Knowledge(int n, std::map<int, int> tiers, std::set<Arc> required, std::set<Arc> forbidden);

  /// Resolves names against `names`; unknown names throw ConfigError.
  static Knowledge bind(const KnowledgeSpec& spec, std::span<const std::string> names);

  /// False iff a -> b is forbidden, or both tiers are known and tier(a) >
  /// tier(b). Required arcs are always allowed.
  bool arc_allowed(int a, int b) const;
  bool required(int a, int b) const { return required_.count({a, b}) > 0; }
  /// Required in either direction.
  bool pair_required(int a, int b) const { return required(a, b) || required(b, a); }

  std::optional<int> tier(int v) const;
  const std::map<int, int>& tiers() const { return tiers_; }
  const std::set<Arc>& required_arcs() const { return required_; }
  const std::set<Arc>& forbidden_arcs() const { return forbidden_; }
  bool empty() const { return tiers_.empty() && required_.empty() && forbidden_.empty(); }

  ArcFilter filter() const;

 private:
  std::map<int, int> tiers_;
  std::set<Arc> required_;
  std::set<Arc> forbidden_;
};

struct Violation {
  enum class Kind {
    ForbiddenArc,       ///< directed arc a -> b that arc_allowed rejects
    MissingRequired,    ///< required a -> b with a and b non-adjacent
    MisdirectedRequired,///< required a -> b present as b -> a or undirected
    UnorientedEdge,     ///< undirected a -- b where a direction is disallowed
  };
  Kind kind;
  int from = 0;
  int to = 0;
};

std::string describe(const Violation& v, std::span<const std::string> names);

/// Every knowledge violation in g; empty for compliant graphs.
std::vector<Violation> validate_output(const Knowledge& k, const Pdag& g);
std::vector<Violation> validate_output(const Knowledge& k, const Dag& g);

}  // namespace bnsl
