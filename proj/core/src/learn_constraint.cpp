#include "bnsl/learn_constraint.hpp"

#include <algorithm>
#include <cstddef>

#include "subsets.hpp"

namespace bnsl {
namespace {

Arc pair_key(int a, int b) { return {std::min(a, b), std::max(a, b)}; }

bool contains(const std::vector<int>& v, int x) { return std::find(v.begin(), v.end(), x) != v.end(); }

std::vector<int> without(std::vector<int> v, int x) {
  v.erase(std::remove(v.begin(), v.end(), x), v.end());
  return v;
}

std::size_t conditioning_cap(const CiConfig& cfg, std::size_t fallback) {
  if (!cfg.max_conditioning) return fallback;
  return static_cast<std::size_t>(std::max(0, *cfg.max_conditioning));
}

bool pair_admissible(const Knowledge& k, int a, int b) {
  return k.pair_required(a, b) || k.arc_allowed(a, b) || k.arc_allowed(b, a);
}

// Orients an existing undirected edge from -> to when knowledge and
// acyclicity permit. Returns false on conflict.
bool try_orient(Pdag& g, const Knowledge& k, int from, int to) {
  if (g.has_directed(from, to)) return true;
  if (g.has_directed(to, from)) return false;
  if (!k.arc_allowed(from, to) || g.has_directed_path(to, from)) return false;
  g.orient(from, to);
  return true;
}

void shrink(CiTester& tester, int target, std::vector<int>& mb) {
  for (const int x : std::vector<int>(mb)) {
    const auto rest = without(mb, x);
    if (tester.independent(target, x, rest)) mb = rest;
  }
}

}  // namespace

Pdag orient_skeleton(Pdag g, const SepsetMap& sepsets, const Knowledge& k, ConstraintDiagnostics* diag) {
  ConstraintDiagnostics local;
  ConstraintDiagnostics& d = diag ? *diag : local;
  const int n = g.size();

  for (const auto& [a, b] : k.required_arcs()) {
    if (g.has_directed(a, b)) continue;
    if (g.adjacent(a, b)) g.remove_edge(a, b);
    g.add_directed(a, b);
  }

  for (const auto& [a, b] : g.undirected_edges()) {
    const bool ab = k.arc_allowed(a, b);
    const bool ba = k.arc_allowed(b, a);
    if (ab && ba) continue;
    if (!ab && !ba) {
      g.remove_edge(a, b);
      ++d.dropped_edges;
      continue;
    }
    const int from = ab ? a : b;
    const int to = ab ? b : a;
    if (g.has_directed_path(to, from)) {
      g.remove_edge(a, b);
      ++d.dropped_edges;
    } else {
      g.orient(from, to);
    }
  }

  for (int b = 0; b < n; ++b) {
    const auto adj = g.adjacents(b);
    for (std::size_t i = 0; i < adj.size(); ++i) {
      for (std::size_t j = i + 1; j < adj.size(); ++j) {
        const int a = adj[i];
        const int c = adj[j];
        if (g.adjacent(a, c)) continue;
        const auto it = sepsets.find(pair_key(a, c));
        if (it == sepsets.end() || contains(it->second, b)) continue;
        if (!try_orient(g, k, a, b)) ++d.orientation_conflicts;
        if (!try_orient(g, k, c, b)) ++d.orientation_conflicts;
      }
    }
  }

  return meek_orient(std::move(g), k.filter());
}

Pdag pc_skeleton(const Dataset& data, CiTester& tester, const Knowledge& k, SepsetMap& sepsets) {
  const int n = data.num_vars();
  Pdag g(n);
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      if (pair_admissible(k, a, b)) g.add_undirected(a, b);
    }
  }

  const std::size_t cap = conditioning_cap(tester.config(), static_cast<std::size_t>(n));
  for (std::size_t level = 0; level <= cap; ++level) {
    std::vector<std::vector<int>> snapshot(n);
    for (int v = 0; v < n; ++v) snapshot[v] = g.adjacents(v);

    bool any_testable = false;
    for (int x = 0; x < n; ++x) {
      for (const int y : snapshot[x]) {
        if (!g.adjacent(x, y) || k.pair_required(x, y)) continue;
        const auto pool = without(snapshot[x], y);
        if (pool.size() < level) continue;
        any_testable = true;
        detail::for_each_subset(std::span<const int>(pool), level, [&](const std::vector<int>& s) {
          if (!tester.independent(x, y, s)) return false;
          g.remove_edge(x, y);
          sepsets.emplace(pair_key(x, y), s);
          return true;
        });
      }
    }
    if (!any_testable) break;
  }
  return g;
}

Pdag pc_stable(const Dataset& data, const CiConfig& cfg, const Knowledge& k, ConstraintDiagnostics* diag) {
  CiTester tester(data, cfg);
  SepsetMap sepsets;
  Pdag skeleton = pc_skeleton(data, tester, k, sepsets);
  Pdag out = orient_skeleton(std::move(skeleton), sepsets, k, diag);
  if (diag) diag->tests_run = tester.tests_run();
  return out;
}

std::vector<int> markov_blanket_gs(CiTester& tester, int target) {
  const int n = tester.data().num_vars();
  const std::size_t cap = conditioning_cap(tester.config(), static_cast<std::size_t>(n));
  std::vector<int> mb;
  for (bool changed = true; changed;) {
    changed = false;
    for (int x = 0; x < n && mb.size() < cap; ++x) {
      if (x == target || contains(mb, x)) continue;
      if (!tester.independent(target, x, mb)) {
        mb.insert(std::upper_bound(mb.begin(), mb.end(), x), x);
        changed = true;
      }
    }
  }
  shrink(tester, target, mb);
  return mb;
}

std::vector<int> markov_blanket_iamb(CiTester& tester, int target) {
  const int n = tester.data().num_vars();
  const std::size_t cap = conditioning_cap(tester.config(), static_cast<std::size_t>(n));
  std::vector<int> mb;
  while (mb.size() < cap) {
    int best = -1;
    TestResult best_r;
    for (int x = 0; x < n; ++x) {
      if (x == target || contains(mb, x)) continue;
      const auto r = tester.test(target, x, mb);
      if (best < 0 || stronger_association(r, best_r)) {
        best = x;
        best_r = r;
      }
    }
    if (best < 0 || tester.independent(target, best, mb)) break;
    mb.insert(std::upper_bound(mb.begin(), mb.end(), best), best);
  }
  shrink(tester, target, mb);
  return mb;
}

std::vector<int> markov_blanket_gs(const Dataset& data, int target, const CiConfig& cfg) {
  CiTester tester(data, cfg);
  return markov_blanket_gs(tester, target);
}

std::vector<int> markov_blanket_iamb(const Dataset& data, int target, const CiConfig& cfg) {
  CiTester tester(data, cfg);
  return markov_blanket_iamb(tester, target);
}

Pdag mb_to_graph(CiTester& tester, const std::vector<std::vector<int>>& blankets, const Knowledge& k,
                 ConstraintDiagnostics* diag) {
  const int n = static_cast<int>(blankets.size());
  const std::size_t cap = conditioning_cap(tester.config(), static_cast<std::size_t>(n));
  Pdag g(n);
  SepsetMap sepsets;
  for (int x = 0; x < n; ++x) {
    for (int y = x + 1; y < n; ++y) {
      if (k.pair_required(x, y)) {
        g.add_undirected(x, y);
        continue;
      }
      if (!pair_admissible(k, x, y)) continue;
      const bool y_in_x = contains(blankets[x], y);
      const bool x_in_y = contains(blankets[y], x);
      if (!y_in_x || !x_in_y) {
        sepsets.emplace(Arc{x, y}, y_in_x ? without(blankets[y], x) : without(blankets[x], y));
        continue;
      }
      const auto bx = without(blankets[x], y);
      const auto by = without(blankets[y], x);
      const auto& pool = by.size() < bx.size() ? by : bx;
      std::vector<int> found;
      const bool separated =
          detail::for_each_subset_upto(std::span<const int>(pool), cap, [&](const std::vector<int>& s) {
            if (!tester.independent(x, y, s)) return false;
            found = s;
            return true;
          });
      if (separated) {
        sepsets.emplace(Arc{x, y}, std::move(found));
      } else {
        g.add_undirected(x, y);
      }
    }
  }
  Pdag out = orient_skeleton(std::move(g), sepsets, k, diag);
  if (diag) diag->tests_run = tester.tests_run();
  return out;
}

Pdag grow_shrink(const Dataset& data, const CiConfig& cfg, const Knowledge& k, ConstraintDiagnostics* diag) {
  CiTester tester(data, cfg);
  std::vector<std::vector<int>> blankets(data.num_vars());
  for (int v = 0; v < data.num_vars(); ++v) blankets[v] = markov_blanket_gs(tester, v);
  return mb_to_graph(tester, blankets, k, diag);
}

Pdag iamb(const Dataset& data, const CiConfig& cfg, const Knowledge& k, ConstraintDiagnostics* diag) {
  CiTester tester(data, cfg);
  std::vector<std::vector<int>> blankets(data.num_vars());
  for (int v = 0; v < data.num_vars(); ++v) blankets[v] = markov_blanket_iamb(tester, v);
  return mb_to_graph(tester, blankets, k, diag);
}

}  // namespace bnsl
