#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "bnsl/citest.hpp"
#include "bnsl/dataset.hpp"
#include "bnsl/graph.hpp"
#include "bnsl/knowledge.hpp"
#include "bnsl/learn_score.hpp"

namespace bnsl {

/// Per-variable candidate neighbor sets, sorted; symmetric by construction.
using CandidateSets = std::vector<std::vector<int>>;

enum class RestrictMethod { Mmpc, GsBlankets, IambBlankets, HitonStyle };
enum class MaximizeMethod { HillClimb, Tabu };

/// "mmpc", "gs", "iamb", "hiton". Throws ConfigError otherwise.
RestrictMethod parse_restrict(std::string_view name);
/// "hc", "tabu". Throws ConfigError otherwise.
MaximizeMethod parse_maximize(std::string_view name);

struct HybridDiagnostics {
  std::size_t tests_run = 0;
  /// Required pairs added to the candidate skeleton.
  std::vector<Arc> widened_pairs;
};

/// Max-min parents and children. Pairs that knowledge rules out in both
/// directions are never candidates.
CandidateSets mmpc(CiTester& tester, const Knowledge& k = {});
CandidateSets mmpc(const Dataset& data, const CiConfig& cfg, const Knowledge& k = {});

/// Interleaved grow-prune candidate search (HITON-PC without the wrapper
/// step): candidates are admitted in order of marginal association and the
/// current set is pruned after every admission.
CandidateSets hiton_style(CiTester& tester, const Knowledge& k = {});

/// Blankets from GS or IAMB, symmetrized with the AND rule.
CandidateSets blanket_candidates(CiTester& tester, RestrictMethod method, const Knowledge& k = {});

/// Maximize phase over a given candidate skeleton. Required pairs outside
/// the skeleton are added to it and reported in diag->widened_pairs.
Dag maximize_restricted(const Dataset& data, const CandidateSets& skeleton, MaximizeMethod maximize,
                        const SearchConfig& search, const Knowledge& k, HybridDiagnostics* diag = nullptr);

Dag restrict_maximize(const Dataset& data, RestrictMethod restrict, MaximizeMethod maximize, const CiConfig& ci,
                      const SearchConfig& search, const Knowledge& k = {}, HybridDiagnostics* diag = nullptr);

/// restrict_maximize(Mmpc, HillClimb).
Dag mmhc(const Dataset& data, const CiConfig& ci, const SearchConfig& search, const Knowledge& k = {},
         HybridDiagnostics* diag = nullptr);

}  // namespace bnsl
