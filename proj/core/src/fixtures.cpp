#include "bnsl/fixtures.hpp"

#include <cmath>

#include "bnsl/random.hpp"

namespace bnsl::fixtures {
namespace {

Variable var(std::string name, std::vector<std::string> states) { return {std::move(name), std::move(states)}; }

ParameterizedBn build(std::vector<Variable> vars, const std::vector<Arc>& arcs, const std::vector<std::vector<double>>& rows) {
  const int n = static_cast<int>(vars.size());
  Dag dag(n, arcs);
  std::vector<Cpt> cpts(n);
  for (int v = 0; v < n; ++v) {
    Cpt& c = cpts[v];
    c.child = v;
    c.parents = dag.parents(v);
    c.child_card = vars[v].cardinality();
    for (const int p : c.parents) c.parent_cards.push_back(vars[p].cardinality());
    c.probs = rows[v];
  }
  return ParameterizedBn(std::move(vars), std::move(dag), std::move(cpts));
}

const std::vector<std::string> kBinary{"0", "1"};

}  // namespace

ParameterizedBn chain_bn() {
  return build({var("A", kBinary), var("B", kBinary), var("C", kBinary)}, {{0, 1}, {1, 2}},
               {{0.5, 0.5}, {0.8, 0.2, 0.2, 0.8}, {0.8, 0.2, 0.2, 0.8}});
}

ParameterizedBn collider_bn() {
  return build({var("A", kBinary), var("B", kBinary), var("C", kBinary)}, {{0, 1}, {2, 1}},
               {{0.5, 0.5}, {0.9, 0.1, 0.3, 0.7, 0.3, 0.7, 0.1, 0.9}, {0.5, 0.5}});
}

ParameterizedBn survey_bn() {
  const std::vector<std::string> improved{"unimproved", "improved"};
  const std::vector<std::string> yes_no{"no", "yes"};
  std::vector<Variable> vars{
      var("GEO_Region", {"north", "central", "south"}),
      var("CUL_Religion", {"majority", "minority"}),
      var("ECO_WealthQuintile", {"poor", "middle", "rich"}),
      var("MTH_Education", {"none", "primary", "secondary"}),
      var("HOU_ImprovedWater", improved),
      var("HOU_Sanitation", improved),
      var("CHI_Breastfed", yes_no),
      var("CHI_Immunised", yes_no),
      var("CHI_WeightForHeight", {"normal", "wasted"}),
      var(kSurveyTarget, yes_no),
  };
  const std::vector<Arc> arcs{{1, 2}, {0, 2}, {2, 3}, {2, 4}, {3, 5}, {3, 6},
                              {3, 7}, {6, 8}, {2, 8}, {4, 9}, {8, 9}, {7, 9}};

  // Target rows: water + 2 * immunised + 4 * weight_for_height.
  std::vector<double> diarrhoea;
  for (int wfh = 0; wfh < 2; ++wfh) {
    for (int imm = 0; imm < 2; ++imm) {
      for (int water = 0; water < 2; ++water) {
        const double yes = 0.05 + 0.25 * (water == 0) + 0.25 * (wfh == 1) + 0.2 * (imm == 0);
        diarrhoea.push_back(1.0 - yes);
        diarrhoea.push_back(yes);
      }
    }
  }

  const std::vector<std::vector<double>> rows{
      {0.35, 0.40, 0.25},
      {0.6, 0.4},
      // region + 3 * religion
      {0.6, 0.3, 0.1, 0.2, 0.4, 0.4, 0.4, 0.4, 0.2, 0.8, 0.15, 0.05, 0.35, 0.4, 0.25, 0.6, 0.3, 0.1},
      {0.6, 0.3, 0.1, 0.25, 0.5, 0.25, 0.1, 0.3, 0.6},
      {0.7, 0.3, 0.4, 0.6, 0.1, 0.9},
      {0.75, 0.25, 0.45, 0.55, 0.15, 0.85},
      {0.55, 0.45, 0.35, 0.65, 0.15, 0.85},
      {0.6, 0.4, 0.3, 0.7, 0.1, 0.9},
      // wealth + 3 * breastfed
      {0.55, 0.45, 0.7, 0.3, 0.85, 0.15, 0.8, 0.2, 0.88, 0.12, 0.95, 0.05},
      diarrhoea,
  };
  return build(std::move(vars), arcs, rows);
}

KnowledgeSpec survey_knowledge(bool required, bool wash) {
  KnowledgeSpec k;
  k.tiers = {
      {"GEO_Region", 1},        {"CUL_Religion", 2},        {"ECO_WealthQuintile", 3},
      {"MTH_Education", 4},     {"HOU_ImprovedWater", 5},   {"HOU_Sanitation", 5},
      {"CHI_Breastfed", 6},     {"CHI_Immunised", 6},       {"CHI_WeightForHeight", 7},
      {kSurveyTarget, 8},
  };
  if (wash) k.tiers.emplace("HOU_WASH", 6);
  if (required) {
    for (const auto& cause : survey_causes(wash)) k.required.emplace(cause, kSurveyTarget);
  }
  return k;
}

std::vector<std::string> survey_causes(bool wash) {
  return {"CHI_Breastfed", "CHI_Immunised", wash ? "HOU_WASH" : "HOU_ImprovedWater", "CHI_WeightForHeight"};
}

SyntheticSpec survey_wash_spec() {
  // Parents: water, sanitation (water fastest).
  return {"HOU_WASH", {"HOU_ImprovedWater", "HOU_Sanitation"}, {"unimproved", "improved"}, {0, 0, 0, 1}};
}

Dataset independent_dataset(int vars, int cardinality, std::size_t rows, std::uint64_t seed) {
  std::vector<Variable> variables;
  std::vector<std::string> states;
  for (int s = 0; s < cardinality; ++s) states.push_back(std::to_string(s));
  Rng rng(seed);
  std::vector<std::vector<int>> columns(vars, std::vector<int>(rows));
  for (int v = 0; v < vars; ++v) {
    variables.push_back(var("V" + std::to_string(v), states));
    for (auto& cell : columns[v]) cell = static_cast<int>(rng.below(static_cast<std::size_t>(cardinality)));
  }
  return Dataset(std::move(variables), std::move(columns));
}

ParameterizedBn random_bn(int vars, std::uint64_t seed) {
  Rng rng(mix64(seed));
  const Dag dag = random_connected_dag(vars, 3, 3, mix64(seed + 1));
  std::vector<Variable> variables;
  for (int v = 0; v < vars; ++v) {
    const int card = 2 + static_cast<int>(rng.below(2));
    std::vector<std::string> states;
    for (int s = 0; s < card; ++s) states.push_back(std::to_string(s));
    variables.push_back(var("X" + std::to_string(v), states));
  }
  std::vector<std::vector<double>> rows(vars);
  for (int v = 0; v < vars; ++v) {
    std::size_t configs = 1;
    for (const int p : dag.parents(v)) configs *= static_cast<std::size_t>(variables[p].cardinality());
    const int card = variables[v].cardinality();
    for (std::size_t u = 0; u < configs; ++u) {
      std::vector<double> w(card);
      double total = 0.0;
      for (auto& x : w) {
        x = std::pow(0.05 + rng.uniform(), 3.0);
        total += x;
      }
      for (const double x : w) rows[v].push_back(x / total);
    }
  }
  return build(std::move(variables), dag.arcs(), rows);
}

}  // namespace bnsl::fixtures
