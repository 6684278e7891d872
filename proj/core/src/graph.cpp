#include "bnsl/graph.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <string>

#include "bnsl/random.hpp"

namespace bnsl {

namespace {

bool sorted_contains(const std::vector<int>& v, int x) {
  return std::binary_search(v.begin(), v.end(), x);
}

void sorted_insert(std::vector<int>& v, int x) {
  v.insert(std::lower_bound(v.begin(), v.end(), x), x);
}

void sorted_erase(std::vector<int>& v, int x) {
  auto it = std::lower_bound(v.begin(), v.end(), x);
  if (it != v.end() && *it == x) v.erase(it);
}

struct DisjointSets {
  explicit DisjointSets(int n) : parent(static_cast<std::size_t>(n)) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[std::max(a, b)] = std::min(a, b);
    return true;
  }
  std::vector<int> parent;
};

}  // namespace

bool is_acyclic(std::span<const Arc> arcs, int n) {
  std::vector<std::vector<int>> out(static_cast<std::size_t>(n));
  std::vector<int> indegree(static_cast<std::size_t>(n), 0);
  for (const auto& [a, b] : arcs) {
    if (a == b) return false;
    out[a].push_back(b);
    ++indegree[b];
  }
  std::vector<int> ready;
  for (int v = 0; v < n; ++v) {
    if (indegree[v] == 0) ready.push_back(v);
  }
  int seen = 0;
  while (!ready.empty()) {
    int v = ready.back();
    ready.pop_back();
    ++seen;
    for (int w : out[v]) {
      if (--indegree[w] == 0) ready.push_back(w);
    }
  }
  return seen == n;
}

// ---------------------------------------------------------------------------
// Dag

Dag::Dag(int n) : n_(n), parents_(static_cast<std::size_t>(n)), children_(static_cast<std::size_t>(n)) {
  if (n < 0) throw std::invalid_argument("Dag: negative size");
}

Dag::Dag(int n, std::span<const Arc> arcs) : Dag(n) {
  for (const auto& [a, b] : arcs) {
    check_index(a);
    check_index(b);
    if (a == b) throw std::invalid_argument("Dag: self-loop");
    if (has_arc(a, b)) continue;
    sorted_insert(parents_[b], a);
    sorted_insert(children_[a], b);
    ++num_arcs_;
  }
  if (!is_acyclic(this->arcs(), n)) throw std::invalid_argument("Dag: arcs contain a directed cycle");
}

void Dag::check_index(int v) const {
  if (v < 0 || v >= n_) throw std::out_of_range("Dag: variable index " + std::to_string(v));
}

bool Dag::has_arc(int from, int to) const {
  if (from < 0 || from >= n_ || to < 0 || to >= n_) return false;
  return sorted_contains(children_[from], to);
}

std::vector<Arc> Dag::arcs() const {
  std::vector<Arc> out;
  out.reserve(num_arcs_);
  for (int a = 0; a < n_; ++a) {
    for (int b : children_[a]) out.emplace_back(a, b);
  }
  return out;
}

bool Dag::has_path(int from, int to) const {
  if (from == to) return false;
  std::vector<char> seen(static_cast<std::size_t>(n_), 0);
  std::vector<int> stack{from};
  seen[from] = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int c : children_[v]) {
      if (c == to) return true;
      if (!seen[c]) {
        seen[c] = 1;
        stack.push_back(c);
      }
    }
  }
  return false;
}

void Dag::add_arc(int from, int to) {
  check_index(from);
  check_index(to);
  if (adjacent(from, to)) throw std::invalid_argument("Dag::add_arc: pair already adjacent");
  if (creates_cycle(from, to)) throw std::invalid_argument("Dag::add_arc: arc would create a cycle");
  sorted_insert(parents_[to], from);
  sorted_insert(children_[from], to);
  ++num_arcs_;
}

void Dag::remove_arc(int from, int to) {
  if (!has_arc(from, to)) throw std::invalid_argument("Dag::remove_arc: no such arc");
  sorted_erase(parents_[to], from);
  sorted_erase(children_[from], to);
  --num_arcs_;
}

void Dag::reverse_arc(int from, int to) {
  remove_arc(from, to);
  if (has_path(from, to)) {
    sorted_insert(parents_[to], from);
    sorted_insert(children_[from], to);
    ++num_arcs_;
    throw std::invalid_argument("Dag::reverse_arc: reversal would create a cycle");
  }
  sorted_insert(parents_[from], to);
  sorted_insert(children_[to], from);
  ++num_arcs_;
}

std::vector<int> Dag::topological_order() const {
  std::vector<int> indegree(static_cast<std::size_t>(n_));
  for (int v = 0; v < n_; ++v) indegree[v] = static_cast<int>(parents_[v].size());
  std::vector<int> order;
  order.reserve(static_cast<std::size_t>(n_));
  // Smallest ready index first keeps the order canonical.
  std::vector<int> ready;
  for (int v = n_ - 1; v >= 0; --v) {
    if (indegree[v] == 0) ready.push_back(v);
  }
  while (!ready.empty()) {
    int v = ready.back();
    ready.pop_back();
    order.push_back(v);
    for (int c : children_[v]) {
      if (--indegree[c] == 0) {
        ready.insert(std::upper_bound(ready.begin(), ready.end(), c, std::greater<>()), c);
      }
    }
  }
  return order;
}

std::vector<int> Dag::ancestors(int v) const {
  std::vector<char> seen(static_cast<std::size_t>(n_), 0);
  std::vector<int> stack{v};
  while (!stack.empty()) {
    int x = stack.back();
    stack.pop_back();
    for (int p : parents_[x]) {
      if (!seen[p]) {
        seen[p] = 1;
        stack.push_back(p);
      }
    }
  }
  std::vector<int> out;
  for (int x = 0; x < n_; ++x) {
    if (seen[x] && x != v) out.push_back(x);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Pdag

Pdag::Pdag(int n) : n_(n), marks_(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0) {
  if (n < 0) throw std::invalid_argument("Pdag: negative size");
}

Pdag Pdag::from_dag(const Dag& dag) {
  Pdag p(dag.size());
  for (const auto& [a, b] : dag.arcs()) p.set_mark(a, b, true);
  return p;
}

void Pdag::check_pair(int a, int b) const {
  if (a < 0 || a >= n_ || b < 0 || b >= n_) throw std::out_of_range("Pdag: variable index out of range");
  if (a == b) throw std::invalid_argument("Pdag: self-loop");
}

void Pdag::add_directed(int from, int to) {
  check_pair(from, to);
  if (adjacent(from, to)) throw std::invalid_argument("Pdag::add_directed: pair already adjacent");
  set_mark(from, to, true);
}

void Pdag::add_undirected(int a, int b) {
  check_pair(a, b);
  if (adjacent(a, b)) throw std::invalid_argument("Pdag::add_undirected: pair already adjacent");
  set_mark(a, b, true);
  set_mark(b, a, true);
}

void Pdag::orient(int from, int to) {
  check_pair(from, to);
  if (!has_undirected(from, to)) throw std::invalid_argument("Pdag::orient: edge is not undirected");
  set_mark(to, from, false);
}

void Pdag::remove_edge(int a, int b) {
  check_pair(a, b);
  set_mark(a, b, false);
  set_mark(b, a, false);
}

std::vector<int> Pdag::parents(int v) const {
  std::vector<int> out;
  for (int u = 0; u < n_; ++u) {
    if (u != v && has_directed(u, v)) out.push_back(u);
  }
  return out;
}

std::vector<int> Pdag::children(int v) const {
  std::vector<int> out;
  for (int u = 0; u < n_; ++u) {
    if (u != v && has_directed(v, u)) out.push_back(u);
  }
  return out;
}

std::vector<int> Pdag::neighbors(int v) const {
  std::vector<int> out;
  for (int u = 0; u < n_; ++u) {
    if (u != v && has_undirected(u, v)) out.push_back(u);
  }
  return out;
}

std::vector<int> Pdag::adjacents(int v) const {
  std::vector<int> out;
  for (int u = 0; u < n_; ++u) {
    if (u != v && adjacent(u, v)) out.push_back(u);
  }
  return out;
}

int Pdag::degree(int v) const {
  int d = 0;
  for (int u = 0; u < n_; ++u) {
    if (u != v && adjacent(u, v)) ++d;
  }
  return d;
}

std::vector<Arc> Pdag::directed_arcs() const {
  std::vector<Arc> out;
  for (int a = 0; a < n_; ++a) {
    for (int b = 0; b < n_; ++b) {
      if (a != b && has_directed(a, b)) out.emplace_back(a, b);
    }
  }
  return out;
}

std::vector<Arc> Pdag::undirected_edges() const {
  std::vector<Arc> out;
  for (int a = 0; a < n_; ++a) {
    for (int b = a + 1; b < n_; ++b) {
      if (has_undirected(a, b)) out.emplace_back(a, b);
    }
  }
  return out;
}

std::size_t Pdag::num_edges() const {
  std::size_t count = 0;
  for (int a = 0; a < n_; ++a) {
    for (int b = a + 1; b < n_; ++b) {
      if (adjacent(a, b)) ++count;
    }
  }
  return count;
}

bool Pdag::has_directed_path(int from, int to) const {
  if (from == to) return false;
  std::vector<char> seen(static_cast<std::size_t>(n_), 0);
  std::vector<int> stack{from};
  seen[from] = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int c = 0; c < n_; ++c) {
      if (c == v || !has_directed(v, c)) continue;
      if (c == to) return true;
      if (!seen[c]) {
        seen[c] = 1;
        stack.push_back(c);
      }
    }
  }
  return false;
}

bool Pdag::directed_part_acyclic() const {
  auto arcs = directed_arcs();
  return is_acyclic(arcs, n_);
}

bool Pdag::fully_directed() const { return undirected_edges().empty(); }

Dag Pdag::to_dag() const {
  if (!fully_directed()) throw std::invalid_argument("Pdag::to_dag: graph has undirected edges");
  auto arcs = directed_arcs();
  return Dag(n_, arcs);
}

// ---------------------------------------------------------------------------
// Structural algorithms

std::vector<VStructure> v_structures(const Pdag& g) {
  std::vector<VStructure> out;
  const int n = g.size();
  for (int b = 0; b < n; ++b) {
    auto pa = g.parents(b);
    for (std::size_t i = 0; i < pa.size(); ++i) {
      for (std::size_t j = i + 1; j < pa.size(); ++j) {
        if (!g.adjacent(pa[i], pa[j])) out.push_back({pa[i], b, pa[j]});
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<VStructure> v_structures(const Dag& g) { return v_structures(Pdag::from_dag(g)); }

bool d_separated(const Dag& g, int x, int y, std::span<const int> z) {
  const int n = g.size();
  if (x < 0 || x >= n || y < 0 || y >= n) throw std::out_of_range("d_separated: index out of range");
  if (x == y) throw std::invalid_argument("d_separated: x and y must differ");
  std::vector<char> in_z(static_cast<std::size_t>(n), 0);
  for (int v : z) {
    if (v == x || v == y) throw std::invalid_argument("d_separated: x or y is in the conditioning set");
    in_z[v] = 1;
  }
  // Z together with its ancestors: colliders there are open.
  std::vector<char> anc(static_cast<std::size_t>(n), 0);
  std::vector<int> stack(z.begin(), z.end());
  for (int v : z) anc[v] = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int p : g.parents(v)) {
      if (!anc[p]) {
        anc[p] = 1;
        stack.push_back(p);
      }
    }
  }
  // Traversal state: (node, arrived-from-child) = "up", (node, arrived-from-parent) = "down".
  std::vector<char> visited_up(static_cast<std::size_t>(n), 0);
  std::vector<char> visited_down(static_cast<std::size_t>(n), 0);
  std::vector<std::pair<int, bool>> frontier{{x, true}};
  while (!frontier.empty()) {
    auto [v, up] = frontier.back();
    frontier.pop_back();
    auto& visited = up ? visited_up : visited_down;
    if (visited[v]) continue;
    visited[v] = 1;
    if (!in_z[v] && v == y) return false;
    if (up) {
      if (in_z[v]) continue;
      for (int p : g.parents(v)) frontier.emplace_back(p, true);
      for (int c : g.children(v)) frontier.emplace_back(c, false);
    } else {
      if (!in_z[v]) {
        for (int c : g.children(v)) frontier.emplace_back(c, false);
      }
      if (anc[v]) {
        for (int p : g.parents(v)) frontier.emplace_back(p, true);
      }
    }
  }
  return true;
}

Dag extend_to_dag(const Pdag& p, std::uint64_t seed) {
  const int n = p.size();
  auto directed = p.directed_arcs();
  if (!is_acyclic(directed, n)) throw UnextendableError("extend_to_dag: directed part is cyclic");
  Dag dag(n, directed);
  for (const auto& [a, b] : p.undirected_edges()) {
    const std::uint64_t coin = mix64(seed ^ mix64(static_cast<std::uint64_t>(a) * static_cast<std::uint64_t>(n) +
                                                  static_cast<std::uint64_t>(b)));
    int from = a;
    int to = b;
    if (coin & 1U) std::swap(from, to);
    if (dag.creates_cycle(from, to)) std::swap(from, to);
    if (dag.creates_cycle(from, to)) {
      throw UnextendableError("extend_to_dag: both orientations of an edge create a cycle");
    }
    dag.add_arc(from, to);
  }
  return dag;
}

std::optional<Dag> consistent_extension(const Pdag& p) {
  const int n = p.size();
  Pdag work = p;
  Dag out(n);
  for (const auto& [a, b] : p.directed_arcs()) {
    if (out.creates_cycle(a, b)) return std::nullopt;
    out.add_arc(a, b);
  }
  std::vector<char> removed(static_cast<std::size_t>(n), 0);
  for (int remaining = n; remaining > 0; --remaining) {
    int pick = -1;
    for (int x = 0; x < n && pick < 0; ++x) {
      if (removed[x]) continue;
      // x must be a sink among remaining nodes.
      bool sink = true;
      for (int c = 0; c < n && sink; ++c) {
        if (!removed[c] && c != x && work.has_directed(x, c)) sink = false;
      }
      if (!sink) continue;
      // Every undirected neighbor of x must be adjacent to all other adjacents of x.
      std::vector<int> adj;
      std::vector<int> nbr;
      for (int u = 0; u < n; ++u) {
        if (removed[u] || u == x || !work.adjacent(u, x)) continue;
        adj.push_back(u);
        if (work.has_undirected(u, x)) nbr.push_back(u);
      }
      bool ok = true;
      for (int y : nbr) {
        for (int w : adj) {
          if (w != y && !work.adjacent(y, w)) {
            ok = false;
            break;
          }
        }
        if (!ok) break;
      }
      if (ok) pick = x;
    }
    if (pick < 0) return std::nullopt;
    for (int u = 0; u < n; ++u) {
      if (!removed[u] && u != pick && work.has_undirected(u, pick)) {
        if (out.creates_cycle(u, pick)) return std::nullopt;
        out.add_arc(u, pick);
      }
    }
    removed[pick] = 1;
  }
  return out;
}

namespace {

// Whether some Meek rule forces a -> b for the undirected edge a -- b.
bool meek_forces(const Pdag& g, int a, int b) {
  const int n = g.size();
  // R1: c -> a, c and b non-adjacent.
  for (int c = 0; c < n; ++c) {
    if (c != a && c != b && g.has_directed(c, a) && !g.adjacent(c, b)) return true;
  }
  // R2: a -> c -> b.
  for (int c = 0; c < n; ++c) {
    if (c != a && c != b && g.has_directed(a, c) && g.has_directed(c, b)) return true;
  }
  // R3: a -- c -> b, a -- d -> b, c and d non-adjacent.
  std::vector<int> kite;
  for (int c = 0; c < n; ++c) {
    if (c != a && c != b && g.has_undirected(a, c) && g.has_directed(c, b)) kite.push_back(c);
  }
  for (std::size_t i = 0; i < kite.size(); ++i) {
    for (std::size_t j = i + 1; j < kite.size(); ++j) {
      if (!g.adjacent(kite[i], kite[j])) return true;
    }
  }
  // R4: a -- c -> d -> b, c and b non-adjacent, a adjacent to d.
  for (int c = 0; c < n; ++c) {
    if (c == a || c == b || !g.has_undirected(a, c) || g.adjacent(c, b)) continue;
    for (int d = 0; d < n; ++d) {
      if (d == a || d == b || d == c) continue;
      if (g.has_directed(c, d) && g.has_directed(d, b) && g.adjacent(a, d)) return true;
    }
  }
  return false;
}

}  // namespace

Pdag meek_orient(Pdag p, const ArcFilter& allowed) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& [a, b] : p.undirected_edges()) {
      for (const auto& [from, to] : {Arc{a, b}, Arc{b, a}}) {
        if (!p.has_undirected(from, to)) break;
        if (!meek_forces(p, from, to)) continue;
        if (allowed && !allowed(from, to)) continue;
        if (p.has_directed_path(to, from)) continue;
        p.orient(from, to);
        changed = true;
      }
    }
  }
  return p;
}

Pdag cpdag(const Dag& g) {
  const int n = g.size();
  Pdag p(n);
  for (const auto& [a, b] : g.arcs()) p.add_undirected(a, b);
  for (const auto& v : v_structures(g)) {
    if (p.has_undirected(v[0], v[1])) p.orient(v[0], v[1]);
    if (p.has_undirected(v[2], v[1])) p.orient(v[2], v[1]);
  }
  return meek_orient(std::move(p));
}

namespace {

bool weakly_connected(const Dag& g) {
  const int n = g.size();
  if (n <= 1) return true;
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int count = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (const auto* list : {&g.parents(v), &g.children(v)}) {
      for (int u : *list) {
        if (!seen[u]) {
          seen[u] = 1;
          ++count;
          stack.push_back(u);
        }
      }
    }
  }
  return count == n;
}

}  // namespace

Dag random_connected_dag(int n, int max_in, int max_out, std::uint64_t seed, std::optional<std::size_t> burn_in) {
  if (n < 0) throw std::invalid_argument("random_connected_dag: negative size");
  if (n >= 2 && (max_in < 1 || max_out < 1)) {
    throw std::invalid_argument("random_connected_dag: degree bounds must be at least 1 for a connected graph");
  }
  Dag g(n);
  if (n < 2) return g;
  for (int v = 0; v + 1 < n; ++v) g.add_arc(v, v + 1);
  const std::size_t steps = burn_in.value_or(50U * static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
  Rng rng(seed);
  for (std::size_t s = 0; s < steps; ++s) {
    int i = static_cast<int>(rng.below(static_cast<std::size_t>(n)));
    int j = static_cast<int>(rng.below(static_cast<std::size_t>(n - 1)));
    if (j >= i) ++j;
    if (g.has_arc(i, j)) {
      g.remove_arc(i, j);
      if (!weakly_connected(g)) g.add_arc(i, j);
    } else if (!g.has_arc(j, i)) {
      if (static_cast<int>(g.children(i).size()) >= max_out) continue;
      if (static_cast<int>(g.parents(j).size()) >= max_in) continue;
      if (g.creates_cycle(i, j)) continue;
      g.add_arc(i, j);
    }
  }
  return g;
}

Dag empty_graph(int n) { return Dag(n); }

int fragments(const Dag& g) {
  DisjointSets sets(g.size());
  int count = g.size();
  for (const auto& [a, b] : g.arcs()) {
    if (sets.unite(a, b)) --count;
  }
  return count;
}

int fragments(const Pdag& g) {
  DisjointSets sets(g.size());
  int count = g.size();
  for (int a = 0; a < g.size(); ++a) {
    for (int b = a + 1; b < g.size(); ++b) {
      if (g.adjacent(a, b) && sets.unite(a, b)) --count;
    }
  }
  return count;
}

}  // namespace bnsl
