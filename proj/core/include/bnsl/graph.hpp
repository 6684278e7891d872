#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace bnsl {

/// A categorical variable: a name and its ordered list of state labels.
struct Variable {
  std::string name;
  std::vector<std::string> states;

  int cardinality() const { return static_cast<int>(states.size()); }

  friend bool operator==(const Variable&, const Variable&) = default;
};

/// Directed arc (parent, child) over variable indices.
using Arc = std::pair<int, int>;

/// Unshielded collider a -> b <- c, normalized so that a < c.
using VStructure = std::array<int, 3>;

/// Predicate deciding whether an arc a -> b may be placed in a graph.
using ArcFilter = std::function<bool(int, int)>;

/// Thrown when the greedy random orientation cannot complete a PDAG.
class UnextendableError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

bool is_acyclic(std::span<const Arc> arcs, int n);

/// Directed acyclic graph over variables 0..n-1.
///
/// Parent and child lists are kept sorted, so equality and iteration order
/// are canonical. Every mutation preserves acyclicity or throws.
class Dag {
 public:
  Dag() = default;
  explicit Dag(int n);
  Dag(int n, std::span<const Arc> arcs);

  int size() const { return n_; }
  std::size_t num_arcs() const { return num_arcs_; }

  bool has_arc(int from, int to) const;
  bool adjacent(int a, int b) const { return has_arc(a, b) || has_arc(b, a); }
  const std::vector<int>& parents(int v) const { return parents_[v]; }
  const std::vector<int>& children(int v) const { return children_[v]; }
  std::vector<Arc> arcs() const;

  /// True when a directed path from -> ... -> to exists (from != to).
  bool has_path(int from, int to) const;
  /// True when adding from -> to would close a directed cycle.
  bool creates_cycle(int from, int to) const { return from == to || has_path(to, from); }

  void add_arc(int from, int to);
  void remove_arc(int from, int to);
  void reverse_arc(int from, int to);

  std::vector<int> topological_order() const;
  /// Ancestors of v, not including v itself.
  std::vector<int> ancestors(int v) const;

  friend bool operator==(const Dag&, const Dag&) = default;

 private:
  void check_index(int v) const;

  int n_ = 0;
  std::size_t num_arcs_ = 0;
  std::vector<std::vector<int>> parents_;
  std::vector<std::vector<int>> children_;
};

/// Partially directed graph: each adjacent pair is either a directed arc or
/// an undirected edge. The directed part is kept acyclic by the learners; the
/// class itself only rejects self-loops and duplicate adjacencies.
class Pdag {
 public:
  Pdag() = default;
  explicit Pdag(int n);
  static Pdag from_dag(const Dag& dag);

  int size() const { return n_; }

  bool has_directed(int from, int to) const { return mark(from, to) && !mark(to, from); }
  bool has_undirected(int a, int b) const { return mark(a, b) && mark(b, a); }
  bool adjacent(int a, int b) const { return mark(a, b) || mark(b, a); }

  void add_directed(int from, int to);
  void add_undirected(int a, int b);
  /// Turns the undirected edge from -- to into from -> to.
  void orient(int from, int to);
  void remove_edge(int a, int b);

  std::vector<int> parents(int v) const;
  std::vector<int> children(int v) const;
  std::vector<int> neighbors(int v) const;
  std::vector<int> adjacents(int v) const;
  int degree(int v) const;

  std::vector<Arc> directed_arcs() const;
  /// Undirected edges as pairs (a, b) with a < b.
  std::vector<Arc> undirected_edges() const;
  std::size_t num_edges() const;

  /// Directed path over directed arcs only.
  bool has_directed_path(int from, int to) const;
  bool directed_part_acyclic() const;
  bool fully_directed() const;
  /// Requires fully_directed().
  Dag to_dag() const;

  friend bool operator==(const Pdag&, const Pdag&) = default;

 private:
  bool mark(int a, int b) const { return marks_[static_cast<std::size_t>(a) * n_ + b] != 0; }
  void set_mark(int a, int b, bool on) {
    marks_[static_cast<std::size_t>(a) * n_ + b] = on ? 1 : 0;
  }
  void check_pair(int a, int b) const;

  int n_ = 0;
  std::vector<std::uint8_t> marks_;
};

std::vector<VStructure> v_structures(const Pdag& g);
std::vector<VStructure> v_structures(const Dag& g);

/// d-separation of x and y given z, via a reachability (Bayes-ball) sweep.
/// Throws std::invalid_argument if x == y or either endpoint lies in z.
bool d_separated(const Dag& g, int x, int y, std::span<const int> z);

/// Orients every undirected edge at random (coin derived from seed and the
/// edge's endpoints); when the drawn direction closes a cycle the opposite
/// direction is used. Directed arcs of the input are kept.
/// Throws UnextendableError if both directions of an edge close a cycle or
/// the directed part is already cyclic.
Dag extend_to_dag(const Pdag& p, std::uint64_t seed);

/// Dor-Tarsi consistent extension: a DAG with the same skeleton and
/// v-structures as p, or nullopt if none exists.
std::optional<Dag> consistent_extension(const Pdag& p);

/// Applies Meek rules R1-R4 until no rule fires. When `allowed` is set, an
/// orientation a -> b is only made if allowed(a, b) holds. Orientations that
/// would close a directed cycle are skipped.
Pdag meek_orient(Pdag p, const ArcFilter& allowed = {});

/// Completed PDAG of the Markov equivalence class of g.
Pdag cpdag(const Dag& g);

/// Uniform random weakly connected DAG with degree bounds (edge-toggle Markov
/// chain). burn_in defaults to 50 * n^2 toggle attempts.
Dag random_connected_dag(int n, int max_in, int max_out, std::uint64_t seed,
                         std::optional<std::size_t> burn_in = std::nullopt);

Dag empty_graph(int n);

/// Number of weakly connected components.
int fragments(const Dag& g);
int fragments(const Pdag& g);

}  // namespace bnsl
