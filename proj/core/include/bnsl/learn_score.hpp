#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "bnsl/dataset.hpp"
#include "bnsl/graph.hpp"
#include "bnsl/knowledge.hpp"
#include "bnsl/score.hpp"

namespace bnsl {

struct SearchConfig {
  /// Cap on applied moves or operators per phase; unset means unlimited.
  std::optional<std::size_t> max_iterations;
  int tabu_length = 10;
  /// Non-improving moves allowed after the last new best (0 reduces tabu to
  /// hill climbing).
  int tabu_budget = 15;
  /// Largest number of adjacencies a node may acquire through an addition.
  std::optional<int> max_degree;
  /// Recorded for provenance. The searches themselves break ties
  /// lexicographically and draw no random numbers.
  std::uint64_t seed = 0;

  /// Throws ConfigError for negative lengths or a non-positive degree cap.
  void validate() const;
};

struct SearchStats {
  /// Graph BIC after each applied move, starting with the initial graph.
  std::vector<double> trajectory;
  std::size_t iterations = 0;
  std::size_t worsening_moves = 0;
};

/// Symmetric n x n mask of pairs an addition may connect; row-major.
struct PairMask {
  int n = 0;
  std::vector<std::uint8_t> bits;

  explicit PairMask(int size = 0) : n(size), bits(static_cast<std::size_t>(size) * size, 0) {}
  bool test(int a, int b) const { return bits[static_cast<std::size_t>(a) * n + b] != 0; }
  void set(int a, int b) {
    bits[static_cast<std::size_t>(a) * n + b] = 1;
    bits[static_cast<std::size_t>(b) * n + a] = 1;
  }
};

/// Greedy search over single-arc moves from the required-arc graph. Equal
/// deltas (relative 1e-9) go to the smallest (kind, from, to).
Dag hill_climb(const Dataset& data, const SearchConfig& cfg, const Knowledge& k = {},
               SearchStats* stats = nullptr);

/// hill_climb followed by a tabu phase; returns the best graph visited.
Dag tabu_search(const Dataset& data, const SearchConfig& cfg, const Knowledge& k = {},
                SearchStats* stats = nullptr);

/// Shared engine. `restrict_adds`, when given, limits additions to masked
/// pairs (required arcs are seeded regardless).
Dag score_search(const Dataset& data, const SearchConfig& cfg, const Knowledge& k, bool use_tabu,
                 const PairMask* restrict_adds, ScoreCache& cache, SearchStats* stats = nullptr);

/// Greedy equivalence search: forward insert phase then backward delete
/// phase over completed PDAGs, with knowledge-forced orientations applied
/// after each operator.
Pdag ges(const Dataset& data, const SearchConfig& cfg, const Knowledge& k = {},
         SearchStats* stats = nullptr);
Pdag ges(const Dataset& data, const SearchConfig& cfg, const Knowledge& k, ScoreCache& cache,
         SearchStats* stats = nullptr);

/// Orients undirected edges that knowledge admits in one direction only
/// (or that are required), then runs Meek completion with the knowledge
/// filter.
Pdag apply_knowledge(Pdag p, const Knowledge& k);

}  // namespace bnsl
