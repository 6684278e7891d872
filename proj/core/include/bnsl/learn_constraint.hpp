#pragma once

#include <cstddef>
#include <map>
#include <vector>

#include "bnsl/citest.hpp"
#include "bnsl/dataset.hpp"
#include "bnsl/graph.hpp"
#include "bnsl/knowledge.hpp"

namespace bnsl {

/// Separating sets keyed by the pair (a, b) with a < b.
using SepsetMap = std::map<Arc, std::vector<int>>;

struct ConstraintDiagnostics {
  std::size_t tests_run = 0;
  /// V-structure orientations rejected because the edge was already
  /// oriented the other way, disallowed, or would close a cycle.
  std::size_t orientation_conflicts = 0;
  /// Edges removed because knowledge left no admissible direction.
  std::size_t dropped_edges = 0;
};

/// Shared orientation stage: knowledge-forced orientations (required arcs
/// and edges with a single allowed direction), then v-structures from the
/// separating sets (first writer wins), then Meek completion restricted to
/// allowed arcs. Required pairs absent from the skeleton are added.
Pdag orient_skeleton(Pdag skeleton, const SepsetMap& sepsets, const Knowledge& k,
                     ConstraintDiagnostics* diag = nullptr);

/// PC-stable. Adjacency sets are frozen at the start of each conditioning
/// level, so the skeleton does not depend on variable order.
Pdag pc_stable(const Dataset& data, const CiConfig& cfg, const Knowledge& k = {},
               ConstraintDiagnostics* diag = nullptr);

/// Skeleton phase of pc_stable only (all edges undirected).
Pdag pc_skeleton(const Dataset& data, CiTester& tester, const Knowledge& k, SepsetMap& sepsets);

std::vector<int> markov_blanket_gs(CiTester& tester, int target);
std::vector<int> markov_blanket_iamb(CiTester& tester, int target);
std::vector<int> markov_blanket_gs(const Dataset& data, int target, const CiConfig& cfg);
std::vector<int> markov_blanket_iamb(const Dataset& data, int target, const CiConfig& cfg);

/// Builds a PDAG from per-variable blankets: AND symmetrization, spouse
/// removal by conditional-independence search inside the smaller blanket,
/// then orient_skeleton.
Pdag mb_to_graph(CiTester& tester, const std::vector<std::vector<int>>& blankets,
                 const Knowledge& k, ConstraintDiagnostics* diag = nullptr);

Pdag grow_shrink(const Dataset& data, const CiConfig& cfg, const Knowledge& k = {},
                 ConstraintDiagnostics* diag = nullptr);
Pdag iamb(const Dataset& data, const CiConfig& cfg, const Knowledge& k = {},
          ConstraintDiagnostics* diag = nullptr);

}  // namespace bnsl
