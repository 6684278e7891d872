#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bnsl/citest.hpp"
#include "bnsl/dataset.hpp"
#include "bnsl/graph.hpp"
#include "bnsl/knowledge.hpp"
#include "bnsl/learn_score.hpp"
#include "bnsl/metrics.hpp"

namespace bnsl {

/// Library version string.
std::string_view version();

enum class MissingTreatment { None, Drop, Impute, Category };

std::string_view to_string(MissingTreatment m);
/// "none", "drop", "impute", "category". Throws ConfigError otherwise.
MissingTreatment parse_missing(std::string_view name);

/// A synthetic column defined by rules over parent state labels. The first
/// rule whose `when` entries all match gives the value; parents missing
/// from `when` match anything. Unmatched configurations take `fallback`.
struct SyntheticRule {
  std::map<std::string, std::string> when;
  std::string value;
};

struct SyntheticDefinition {
  std::string name;
  std::vector<std::string> parents;
  std::vector<std::string> states;
  std::vector<SyntheticRule> rules;
  std::string fallback;

  /// Expands the rules against the parents' states in `data`. Throws
  /// DataError for unknown parents, ConfigError for unknown labels.
  SyntheticSpec resolve(const Dataset& data) const;
};

/// Declarative experiment description. See README for the JSON grammar.
struct ExperimentConfig {
  std::optional<std::filesystem::path> data;
  /// Bundled network to sample training data from instead of `data`:
  /// "survey", "chain" or "collider".
  std::optional<std::string> fixture;
  std::size_t fixture_rows = 10000;
  std::optional<std::filesystem::path> eval_data;
  Schema schema;
  std::vector<SyntheticDefinition> synthetic;
  std::optional<std::filesystem::path> knowledge;
  std::optional<std::filesystem::path> reference;
  std::vector<std::string> algorithms;
  CiConfig ci;
  SearchConfig search;
  int folds = 10;
  std::uint64_t seed = 1;
  std::vector<std::string> causes;
  std::optional<std::string> target;
  std::vector<std::size_t> sweep_sizes;
  MissingTreatment missing = MissingTreatment::None;
  /// When false every elapsed-time cell is written as 0, which makes all
  /// artifacts byte-reproducible.
  bool timing = true;
  std::filesystem::path out_dir = "out";

  /// Canonical JSON text of the effective configuration.
  std::string canonical() const;
  std::string hash() const;
};

/// Parses a JSON config; relative paths resolve against base_dir.
/// Throws ConfigError on malformed input.
ExperimentConfig parse_config(std::string_view json_text, const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);

/// Learner labels accepted by run_learner, in suite order.
const std::vector<std::string>& learner_names();
/// The eight structure learners (no baselines, no degree variants).
const std::vector<std::string>& core_learner_names();

struct LearnerOutput {
  std::string label;
  Pdag graph;
  double elapsed_seconds = 0.0;
};

/// Runs a learner or baseline by label. Labels: pc-stable, gs, iamb, hc,
/// tabu, ges (alias fges), fges3, fges4, mmhc, rsmax2, and the baselines
/// empty, random3 and reference (the latter needs `reference`).
/// Throws ConfigError for unknown labels.
LearnerOutput run_learner(std::string_view label, const Dataset& data, const CiConfig& ci,
                          const SearchConfig& search, const Knowledge& k, std::uint64_t seed,
                          const Dag* reference = nullptr);

/// DAG used for evaluation: a fully directed graph as is; otherwise
/// extend_to_dag with the given seed, falling back to a consistent
/// extension and, as a last resort, to dropping edges that cannot be
/// oriented acyclically.
Dag evaluation_dag(const Pdag& g, std::uint64_t seed);

/// Seed used for PDAG extension at evaluation time.
std::uint64_t evaluation_seed(std::uint64_t seed);

struct EvaluationContext {
  /// Scores BIC and cross-validation loss; its variables index the graph.
  const Dataset* eval_data = nullptr;
  /// Compared over the reference's variables when present.
  const NamedGraph* reference = nullptr;
  std::vector<std::string> causes;
  std::optional<std::string> target;
  int folds = 0;
  std::uint64_t seed = 0;
};

struct ReferenceComparison {
  ConfusionCounts counts;
  PrecisionRecall pr;
  int shd = 0;
  /// Absent when the reference has no arcs or no non-adjacent pair.
  std::optional<double> bsf;
};

/// Compares `learned` with `reference` over the reference's variables.
/// Throws DataError if a reference variable is missing from `learned`.
ReferenceComparison compare_to_reference(const NamedGraph& learned, const NamedGraph& reference);

ComparisonReport evaluate(const std::string& label, const Dag& g, const EvaluationContext& ctx, double elapsed);

/// Loaded inputs shared by the subcommands.
struct ExperimentInputs {
  /// Training data after missing-value treatment, without synthetic columns.
  Dataset base;
  /// base plus the synthetic columns.
  Dataset data;
  /// Evaluation data with the same variables as `data`.
  Dataset eval_data;
  KnowledgeSpec knowledge;
  /// Over the variables of `base`.
  std::optional<NamedGraph> reference;
};

/// Raw training data: the CSV (read with the schema) or a fixture sample.
Dataset load_raw_data(const ExperimentConfig& cfg);
Dataset apply_missing(const Dataset& data, MissingTreatment m);
Dataset apply_synthetic(const Dataset& data, const std::vector<SyntheticDefinition>& defs);
ExperimentInputs load_inputs(const ExperimentConfig& cfg);
Provenance provenance(const ExperimentConfig& cfg);

/// Subcommands. Each writes its artifacts below cfg.out_dir and returns
/// the paths written, in order.
std::vector<std::filesystem::path> run_learn(const ExperimentConfig& cfg);
std::vector<std::filesystem::path> run_suite(const ExperimentConfig& cfg);
std::vector<std::filesystem::path> run_sweep(const ExperimentConfig& cfg);
std::vector<std::filesystem::path> run_knowledge_ablation(const ExperimentConfig& cfg);
std::vector<std::filesystem::path> run_missing_ablation(const ExperimentConfig& cfg);
/// Pairwise matrices between arc-list graphs over the data's variables.
std::vector<std::filesystem::path> run_compare(const ExperimentConfig& cfg,
                                               const std::vector<std::filesystem::path>& graphs);
std::vector<std::filesystem::path> run_sample(const std::filesystem::path& bn, std::size_t rows, std::uint64_t seed,
                                              const std::filesystem::path& out_dir);
std::vector<std::filesystem::path> run_rank(const ExperimentConfig& cfg);

}  // namespace bnsl
