#include "bnsl/learn_score.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <tuple>

#include "bnsl/errors.hpp"
#include "subsets.hpp"

namespace bnsl {
namespace {

constexpr double kMinImprovement = 1e-7;

bool ties(double a, double b) { return std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)}); }

struct Candidate {
  Move move;
  double delta = 0.0;
};

bool better(const Candidate& c, const std::optional<Candidate>& best) {
  if (!best) return true;
  if (ties(c.delta, best->delta)) return c.move < best->move;
  return c.delta > best->delta;
}

Move inverse(const Move& m) {
  switch (m.kind) {
    case MoveKind::Add:
      return {MoveKind::Delete, m.from, m.to};
    case MoveKind::Delete:
      return {MoveKind::Add, m.from, m.to};
    case MoveKind::Reverse:
      return {MoveKind::Reverse, m.to, m.from};
  }
  return m;
}

int dag_degree(const Dag& g, int v) {
  return static_cast<int>(g.parents(v).size() + g.children(v).size());
}

class MoveSearch {
 public:
  MoveSearch(const SearchConfig& cfg, const Knowledge& k, const PairMask* mask, ScoreCache& cache)
      : cfg_(cfg), k_(k), mask_(mask), cache_(cache) {}

  std::optional<Candidate> best(const Dag& g, const std::deque<Move>& tabu) const {
    const int n = g.size();
    std::optional<Candidate> best;
    auto consider = [&](const Move& m) {
      if (std::find(tabu.begin(), tabu.end(), m) != tabu.end()) return;
      Candidate c{m, delta_bic(g, m, cache_)};
      if (better(c, best)) best = c;
    };
    for (int from = 0; from < n; ++from) {
      for (int to = 0; to < n; ++to) {
        if (from == to) continue;
        if (g.has_arc(from, to)) {
          if (k_.required(from, to)) continue;
          consider({MoveKind::Delete, from, to});
          if (k_.arc_allowed(to, from) && move_legal(g, {MoveKind::Reverse, from, to})) {
            consider({MoveKind::Reverse, from, to});
          }
        } else if (!g.has_arc(to, from) && add_allowed(g, from, to)) {
          consider({MoveKind::Add, from, to});
        }
      }
    }
    return best;
  }

 private:
  bool add_allowed(const Dag& g, int from, int to) const {
    if (!k_.arc_allowed(from, to)) return false;
    if (mask_ && !mask_->test(from, to)) return false;
    if (cfg_.max_degree && (dag_degree(g, from) >= *cfg_.max_degree || dag_degree(g, to) >= *cfg_.max_degree)) {
      return false;
    }
    return !g.creates_cycle(from, to);
  }

  const SearchConfig& cfg_;
  const Knowledge& k_;
  const PairMask* mask_;
  ScoreCache& cache_;
};

Dag required_graph(int n, const Knowledge& k) {
  std::vector<Arc> arcs(k.required_arcs().begin(), k.required_arcs().end());
  return Dag(n, arcs);
}

bool iteration_left(const SearchConfig& cfg, std::size_t done) {
  return !cfg.max_iterations || done < *cfg.max_iterations;
}

}  // namespace

void SearchConfig::validate() const {
  if (tabu_length < 0) throw ConfigError("tabu list length must be non-negative");
  if (tabu_budget < 0) throw ConfigError("tabu budget must be non-negative");
  if (max_degree && *max_degree < 1) throw ConfigError("max degree must be positive");
  if (max_iterations && *max_iterations == 0) throw ConfigError("max iterations must be positive");
}

Dag score_search(const Dataset& data, const SearchConfig& cfg, const Knowledge& k, bool use_tabu,
                 const PairMask* restrict_adds, ScoreCache& cache, SearchStats* stats) {
  cfg.validate();
  SearchStats local;
  SearchStats& st = stats ? *stats : local;
  st = SearchStats{};

  Dag g = required_graph(data.num_vars(), k);
  double score = graph_bic(data, g, cache).bic;
  st.trajectory.push_back(score);
  const MoveSearch search(cfg, k, restrict_adds, cache);
  const std::deque<Move> no_tabu;

  std::size_t done = 0;
  while (iteration_left(cfg, done)) {
    const auto c = search.best(g, no_tabu);
    if (!c || c->delta <= kMinImprovement) break;
    g = apply_move(std::move(g), c->move);
    score += c->delta;
    st.trajectory.push_back(score);
    ++done;
  }
  st.iterations = done;
  if (!use_tabu || cfg.tabu_budget == 0) return g;

  Dag best = g;
  double best_score = score;
  std::deque<Move> tabu;
  int fails = 0;
  while (fails < cfg.tabu_budget && iteration_left(cfg, done)) {
    const auto c = search.best(g, tabu);
    if (!c) break;
    g = apply_move(std::move(g), c->move);
    score += c->delta;
    st.trajectory.push_back(score);
    ++done;
    if (c->delta <= kMinImprovement) ++st.worsening_moves;
    if (cfg.tabu_length > 0) {
      tabu.push_back(inverse(c->move));
      if (tabu.size() > static_cast<std::size_t>(cfg.tabu_length)) tabu.pop_front();
    }
    if (score > best_score + kMinImprovement) {
      best = g;
      best_score = score;
      fails = 0;
    } else {
      ++fails;
    }
  }
  st.iterations = done;
  return best;
}

Dag hill_climb(const Dataset& data, const SearchConfig& cfg, const Knowledge& k, SearchStats* stats) {
  ScoreCache cache(data);
  return score_search(data, cfg, k, false, nullptr, cache, stats);
}

Dag tabu_search(const Dataset& data, const SearchConfig& cfg, const Knowledge& k, SearchStats* stats) {
  ScoreCache cache(data);
  return score_search(data, cfg, k, true, nullptr, cache, stats);
}

Pdag apply_knowledge(Pdag p, const Knowledge& k) {
  for (const auto& [a, b] : p.undirected_edges()) {
    if (k.required(a, b)) {
      p.orient(a, b);
    } else if (k.required(b, a)) {
      p.orient(b, a);
    } else {
      const bool ab = k.arc_allowed(a, b);
      const bool ba = k.arc_allowed(b, a);
      if (ab != ba) {
        const int from = ab ? a : b;
        const int to = ab ? b : a;
        if (!p.has_directed_path(to, from)) p.orient(from, to);
      }
    }
  }
  return meek_orient(std::move(p), k.filter());
}

namespace {

std::vector<int> sorted_union(std::vector<int> a, const std::vector<int>& b) {
  a.insert(a.end(), b.begin(), b.end());
  std::sort(a.begin(), a.end());
  a.erase(std::unique(a.begin(), a.end()), a.end());
  return a;
}

std::vector<int> erase_value(std::vector<int> v, int x) {
  v.erase(std::remove(v.begin(), v.end(), x), v.end());
  return v;
}

bool is_clique(const Pdag& p, const std::vector<int>& s) {
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t j = i + 1; j < s.size(); ++j) {
      if (!p.adjacent(s[i], s[j])) return false;
    }
  }
  return true;
}

// A path from -> ... -> to along directed or undirected edges, never
// entering a blocked node.
bool semi_directed_path(const Pdag& p, int from, int to, const std::vector<int>& blocked) {
  const int n = p.size();
  std::vector<char> seen(n, 0);
  for (const int b : blocked) seen[b] = 1;
  std::vector<int> stack{from};
  seen[from] = 1;
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    for (int v = 0; v < n; ++v) {
      if (seen[v] || !(p.has_directed(u, v) || p.has_undirected(u, v))) continue;
      if (v == to) return true;
      seen[v] = 1;
      stack.push_back(v);
    }
  }
  return false;
}

struct Operator {
  int x = 0;
  int y = 0;
  std::vector<int> set;  // T for inserts, H for deletes
  double delta = 0.0;

  auto key() const { return std::tie(x, y, set); }
};

bool op_before(const Operator& a, const Operator& b) {
  if (!ties(a.delta, b.delta)) return a.delta > b.delta;
  return a.key() < b.key();
}

constexpr std::size_t kFullSubsetLimit = 12;
constexpr std::size_t kLargeSubsetSize = 3;

std::size_t subset_cap(std::size_t pool) { return pool <= kFullSubsetLimit ? pool : kLargeSubsetSize; }

std::vector<Operator> insert_operators(const Pdag& p, const SearchConfig& cfg, const Knowledge& k, ScoreCache& cache) {
  const int n = p.size();
  std::vector<Operator> ops;
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) {
      if (x == y || p.adjacent(x, y) || !k.arc_allowed(x, y)) continue;
      if (cfg.max_degree && (p.degree(x) >= *cfg.max_degree || p.degree(y) >= *cfg.max_degree)) continue;
      std::vector<int> na;
      std::vector<int> t0;
      for (const int t : p.neighbors(y)) (p.adjacent(t, x) ? na : t0).push_back(t);
      const auto pa_y = p.parents(y);
      detail::for_each_subset_upto(std::span<const int>(t0), subset_cap(t0.size()), [&](const std::vector<int>& t) {
        for (const int v : t) {
          if (!k.arc_allowed(v, y)) return false;
        }
        const auto s = sorted_union(na, t);
        if (!is_clique(p, s) || semi_directed_path(p, y, x, s)) return false;
        const auto old_parents = sorted_union(s, pa_y);
        const auto new_parents = sorted_union(old_parents, {x});
        const double delta = cache.bic(y, new_parents) - cache.bic(y, old_parents);
        if (delta > kMinImprovement) ops.push_back({x, y, t, delta});
        return false;
      });
    }
  }
  std::sort(ops.begin(), ops.end(), op_before);
  return ops;
}

std::vector<Operator> delete_operators(const Pdag& p, const Knowledge& k, ScoreCache& cache) {
  const int n = p.size();
  std::vector<Operator> ops;
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) {
      if (x == y || !(p.has_directed(x, y) || p.has_undirected(x, y)) || k.pair_required(x, y)) continue;
      std::vector<int> h0;
      for (const int h : p.neighbors(y)) {
        if (h != x && p.adjacent(h, x)) h0.push_back(h);
      }
      const auto pa_y = p.parents(y);
      detail::for_each_subset_upto(std::span<const int>(h0), subset_cap(h0.size()), [&](const std::vector<int>& h) {
        for (const int v : h) {
          if (!k.arc_allowed(y, v)) return false;
          if (p.has_undirected(x, v) && !k.arc_allowed(x, v)) return false;
        }
        std::vector<int> rest;
        std::set_difference(h0.begin(), h0.end(), h.begin(), h.end(), std::back_inserter(rest));
        if (!is_clique(p, rest)) return false;
        const auto base = erase_value(sorted_union(rest, pa_y), x);
        const auto with_x = sorted_union(base, {x});
        const double delta = cache.bic(y, base) - cache.bic(y, with_x);
        if (delta > kMinImprovement) ops.push_back({x, y, h, delta});
        return false;
      });
    }
  }
  std::sort(ops.begin(), ops.end(), op_before);
  return ops;
}

std::optional<Pdag> complete(const Pdag& p, const Knowledge& k) {
  const auto d = consistent_extension(p);
  if (!d) return std::nullopt;
  return apply_knowledge(cpdag(*d), k);
}

std::optional<Pdag> apply_insert(Pdag p, const Operator& op, const Knowledge& k) {
  p.add_directed(op.x, op.y);
  for (const int t : op.set) p.orient(t, op.y);
  return complete(p, k);
}

std::optional<Pdag> apply_delete(Pdag p, const Operator& op, const Knowledge& k) {
  p.remove_edge(op.x, op.y);
  for (const int h : op.set) {
    p.orient(op.y, h);
    if (p.has_undirected(op.x, h)) p.orient(op.x, h);
  }
  return complete(p, k);
}

}  // namespace

Pdag ges(const Dataset& data, const SearchConfig& cfg, const Knowledge& k, ScoreCache& cache, SearchStats* stats) {
  cfg.validate();
  SearchStats local;
  SearchStats& st = stats ? *stats : local;
  st = SearchStats{};

  const int n = data.num_vars();
  Pdag p = apply_knowledge(cpdag(required_graph(n, k)), k);
  auto current_score = [&](const Pdag& q) {
    const auto d = consistent_extension(q);
    return d ? graph_bic(data, *d, cache).bic : -HUGE_VAL;
  };
  st.trajectory.push_back(current_score(p));

  auto run_phase = [&](auto&& operators, auto&& apply) {
    std::size_t done = 0;
    while (iteration_left(cfg, done)) {
      bool applied = false;
      for (const auto& op : operators(p)) {
        if (auto next = apply(p, op)) {
          p = std::move(*next);
          applied = true;
          break;
        }
      }
      if (!applied) break;
      st.trajectory.push_back(current_score(p));
      ++done;
    }
    st.iterations += done;
  };

  run_phase([&](const Pdag& q) { return insert_operators(q, cfg, k, cache); },
            [&](const Pdag& q, const Operator& op) { return apply_insert(q, op, k); });
  run_phase([&](const Pdag& q) { return delete_operators(q, k, cache); },
            [&](const Pdag& q, const Operator& op) { return apply_delete(q, op, k); });
  return p;
}

Pdag ges(const Dataset& data, const SearchConfig& cfg, const Knowledge& k, SearchStats* stats) {
  ScoreCache cache(data);
  return ges(data, cfg, k, cache, stats);
}

}  // namespace bnsl
