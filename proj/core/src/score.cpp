#include "bnsl/score.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <stdexcept>

#include "bnsl/errors.hpp"

namespace bnsl {

double FamilyScore::penalty() const {
  if (n == 0) return 0.0;
  return 0.5 * static_cast<double>(free_params) * std::log(static_cast<double>(n));
}

std::int64_t free_parameters(const Dataset& data, int child, std::span<const int> parents) {
  std::int64_t q = 1;
  for (int p : parents) {
    const std::int64_t card = data.cardinality(p);
    if (q > std::numeric_limits<std::int64_t>::max() / card) return std::numeric_limits<std::int64_t>::max();
    q *= card;
  }
  return (data.cardinality(child) - 1) * q;
}

FamilyScore family_bic(const Dataset& data, int child, std::span<const int> parents) {
  FamilyScore fs;
  fs.child = child;
  fs.parents.assign(parents.begin(), parents.end());
  std::sort(fs.parents.begin(), fs.parents.end());
  fs.n = data.num_rows();
  fs.free_params = free_parameters(data, child, fs.parents);
  const auto t = contingency(data, child, fs.parents);
  double ll = 0.0;
  for (std::size_t s = 0; s < t.strata; ++s) {
    const auto total = t.stratum_totals[s];
    if (total == 0) continue;
    const double log_total = std::log(static_cast<double>(total));
    for (int c = 0; c < t.child_card; ++c) {
      const auto k = t.count(s, c);
      if (k > 0) ll += static_cast<double>(k) * (std::log(static_cast<double>(k)) - log_total);
    }
  }
  fs.log_likelihood = std::min(ll, 0.0);
  return fs;
}

std::size_t ScoreCache::KeyHash::operator()(const std::vector<int>& key) const noexcept {
  std::uint64_t h = 1469598103934665603ULL;
  for (int v : key) {
    h ^= static_cast<std::uint64_t>(static_cast<std::uint32_t>(v));
    h *= 1099511628211ULL;
  }
  return static_cast<std::size_t>(h);
}

ScoreCache::ScoreCache(const Dataset& data) : data_(&data) {}

const FamilyScore& ScoreCache::family(int child, std::span<const int> parents) {
  std::vector<int> key;
  key.reserve(parents.size() + 1);
  key.push_back(child);
  key.insert(key.end(), parents.begin(), parents.end());
  std::sort(key.begin() + 1, key.end());
  {
    std::shared_lock lock(mu_);
    auto it = memo_.find(key);
    if (it != memo_.end()) {
      ++hits_;
      return it->second;
    }
  }
  auto fs = family_bic(*data_, child, std::span<const int>(key).subspan(1));
  std::unique_lock lock(mu_);
  auto [it, inserted] = memo_.emplace(std::move(key), std::move(fs));
  if (inserted) {
    ++misses_;
  } else {
    ++hits_;
  }
  return it->second;
}

std::size_t ScoreCache::size() const {
  std::shared_lock lock(mu_);
  return memo_.size();
}

namespace {

GraphScore accumulate(const Dag& g, auto&& family) {
  GraphScore out;
  for (int v = 0; v < g.size(); ++v) {
    const FamilyScore& fs = family(v, g.parents(v));
    out.log_likelihood += fs.log_likelihood;
    out.penalty += fs.penalty();
    out.free_params += fs.free_params;
  }
  out.bic = out.log_likelihood - out.penalty;
  return out;
}

void check_dims(const Dataset& data, const Dag& g) {
  if (g.size() > data.num_vars()) throw std::invalid_argument("graph_bic: graph has more variables than the data");
}

}  // namespace

GraphScore graph_bic(const Dataset& data, const Dag& g, ScoreCache& cache) {
  if (&cache.dataset() != &data) throw std::invalid_argument("graph_bic: score cache is bound to another dataset");
  check_dims(data, g);
  return accumulate(g, [&](int v, const std::vector<int>& pa) -> const FamilyScore& { return cache.family(v, pa); });
}

GraphScore graph_bic(const Dataset& data, const Dag& g) {
  check_dims(data, g);
  FamilyScore scratch;
  return accumulate(g, [&](int v, const std::vector<int>& pa) -> const FamilyScore& {
    scratch = family_bic(data, v, pa);
    return scratch;
  });
}

bool move_legal(const Dag& g, const Move& m) {
  const int n = g.size();
  if (m.from < 0 || m.from >= n || m.to < 0 || m.to >= n || m.from == m.to) return false;
  switch (m.kind) {
    case MoveKind::Add:
      return !g.adjacent(m.from, m.to) && !g.creates_cycle(m.from, m.to);
    case MoveKind::Delete:
      return g.has_arc(m.from, m.to);
    case MoveKind::Reverse: {
      if (!g.has_arc(m.from, m.to)) return false;
      Dag h = g;
      h.remove_arc(m.from, m.to);
      return !h.creates_cycle(m.to, m.from);
    }
  }
  return false;
}

Dag apply_move(Dag g, const Move& m) {
  if (!move_legal(g, m)) throw std::invalid_argument("apply_move: illegal move");
  switch (m.kind) {
    case MoveKind::Add:
      g.add_arc(m.from, m.to);
      break;
    case MoveKind::Delete:
      g.remove_arc(m.from, m.to);
      break;
    case MoveKind::Reverse:
      g.reverse_arc(m.from, m.to);
      break;
  }
  return g;
}

double delta_bic(const Dag& g, const Move& m, ScoreCache& cache) {
  if (!move_legal(g, m)) throw std::invalid_argument("delta_bic: illegal move");
  auto with = [](std::vector<int> v, int x) {
    v.insert(std::lower_bound(v.begin(), v.end(), x), x);
    return v;
  };
  auto without = [](std::vector<int> v, int x) {
    v.erase(std::find(v.begin(), v.end(), x));
    return v;
  };
  const auto& pa_to = g.parents(m.to);
  switch (m.kind) {
    case MoveKind::Add:
      return cache.bic(m.to, with(pa_to, m.from)) - cache.bic(m.to, pa_to);
    case MoveKind::Delete:
      return cache.bic(m.to, without(pa_to, m.from)) - cache.bic(m.to, pa_to);
    case MoveKind::Reverse: {
      const auto& pa_from = g.parents(m.from);
      return cache.bic(m.to, without(pa_to, m.from)) - cache.bic(m.to, pa_to) +
             cache.bic(m.from, with(pa_from, m.to)) - cache.bic(m.from, pa_from);
    }
  }
  return 0.0;
}

}  // namespace bnsl
