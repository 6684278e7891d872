#pragma once

#include <atomic>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <shared_mutex>
#include <span>
#include <unordered_map>
#include <vector>

#include "bnsl/dataset.hpp"
#include "bnsl/graph.hpp"

namespace bnsl {

/// Log-likelihood and complexity of one family (child + parent set).
struct FamilyScore {
  int child = 0;
  std::vector<int> parents;
  double log_likelihood = 0.0;  ///< nats
  std::int64_t free_params = 0;
  std::size_t n = 0;

  double penalty() const;
  double bic() const { return log_likelihood - penalty(); }
};

/// (|states(child)| - 1) * product of parent cardinalities.
std::int64_t free_parameters(const Dataset& data, int child, std::span<const int> parents);

/// Maximum-likelihood family score on complete data. Strata with no rows
/// contribute nothing to the log-likelihood but count fully in free_params.
FamilyScore family_bic(const Dataset& data, int child, std::span<const int> parents);

/// Memo of family scores for one dataset. Safe for concurrent use.
class ScoreCache {
 public:
  explicit ScoreCache(const Dataset& data);
  ScoreCache(const ScoreCache&) = delete;
  ScoreCache& operator=(const ScoreCache&) = delete;

  const Dataset& dataset() const { return *data_; }

  /// Parents need not be sorted.
  const FamilyScore& family(int child, std::span<const int> parents);
  double bic(int child, std::span<const int> parents) { return family(child, parents).bic(); }

  std::size_t hits() const { return hits_.load(); }
  std::size_t misses() const { return misses_.load(); }
  std::size_t size() const;

 private:
  struct KeyHash {
    std::size_t operator()(const std::vector<int>& key) const noexcept;
  };

  const Dataset* data_;
  mutable std::shared_mutex mu_;
  // Node-based map: references handed out stay valid across rehashing.
  std::unordered_map<std::vector<int>, FamilyScore, KeyHash> memo_;
  std::atomic<std::size_t> hits_{0};
  std::atomic<std::size_t> misses_{0};
};

struct GraphScore {
  double bic = 0.0;
  double log_likelihood = 0.0;
  double penalty = 0.0;
  std::int64_t free_params = 0;
};

/// Sum of family scores. The cache must be bound to `data`.
GraphScore graph_bic(const Dataset& data, const Dag& g, ScoreCache& cache);
/// Uncached recomputation.
GraphScore graph_bic(const Dataset& data, const Dag& g);

/// Local edit of a DAG. The enumerator order (Add < Delete < Reverse) is the
/// first key of the search tie-break.
enum class MoveKind { Add = 0, Delete = 1, Reverse = 2 };

struct Move {
  MoveKind kind = MoveKind::Add;
  int from = 0;
  int to = 0;

  friend auto operator<=>(const Move&, const Move&) = default;
};

bool move_legal(const Dag& g, const Move& m);
/// Throws std::invalid_argument for an illegal move.
Dag apply_move(Dag g, const Move& m);

/// BIC change of applying m, from the affected families only.
/// Throws std::invalid_argument for an illegal move.
double delta_bic(const Dag& g, const Move& m, ScoreCache& cache);

}  // namespace bnsl
