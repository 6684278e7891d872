#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bnsl/graph.hpp"

namespace bnsl {

/// Directed-arc decisions of a graph against a reference DAG. A reversed
/// arc is one fp and one fn.
struct ConfusionCounts {
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t fn = 0;
  std::int64_t tn = 0;

  friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

struct PrecisionRecall {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

/// Throws std::invalid_argument if the graphs differ in size.
ConfusionCounts confusion(const Dag& g, const Dag& ref);
PrecisionRecall precision_recall_f1(const ConfusionCounts& c);

/// Unordered pairs whose status (absent, a->b, b->a) differs.
int shd(const Dag& g, const Dag& ref);

/// 0.5 * (tp/a + tn/i - fp/i - fn/a) with a the reference arc count and
/// i = n(n-1)/2 - a. Throws std::invalid_argument if a or i is zero.
double bsf(const Dag& g, const Dag& ref);
double bsf(const ConfusionCounts& c, int n);

/// Number of causes with a directed path to target.
int causal_paths(const Dag& g, std::span<const int> causes, int target);

enum class PairMetric { Shd, Bsf, F1 };

struct NamedGraph {
  std::string label;
  std::vector<std::string> names;
  Dag dag;
};

/// values[r][c] = metric(learned = graphs[c], reference = graphs[r]),
/// computed over the variables shared by every graph.
struct PairwiseMatrix {
  PairMetric metric = PairMetric::Shd;
  std::vector<std::string> labels;
  std::vector<std::vector<double>> values;
  /// Mean of the off-diagonal entries, skipping NaN.
  double mean = 0.0;
  std::vector<std::string> shared_variables;
  /// Set when some graph had variables outside the shared set.
  bool restricted = false;
};

PairwiseMatrix pairwise_matrix(std::span<const NamedGraph> graphs, PairMetric metric);
void write_matrix_csv(std::ostream& out, const PairwiseMatrix& m);

/// Subgraph induced by `keep` (names looked up in g.names), in keep order.
Dag induced_subgraph(const NamedGraph& g, std::span<const std::string> keep);

/// Provenance header written as `# key: value` lines ahead of every CSV.
struct Provenance {
  std::string version;
  std::uint64_t seed = 0;
  std::uint64_t eval_seed = 0;
  std::string config_hash;
  std::string test;
  std::string score = "bic";
  std::string missing;
  std::map<std::string, std::string> extra;
};

void write_provenance(std::ostream& out, const Provenance& p);

/// FNV-1a 64-bit hash, hex encoded.
std::string fnv1a_hex(std::string_view text);

/// One row of a multi-algorithm comparison.
struct ComparisonReport {
  std::string label;
  int fragments = 0;
  std::int64_t edges = 0;
  std::int64_t free_params = 0;
  double bic = 0.0;
  std::optional<double> cv_loss;
  std::optional<ConfusionCounts> counts;
  std::optional<PrecisionRecall> pr;
  std::optional<int> shd;
  std::optional<double> bsf;
  std::optional<int> causal_paths;
  double elapsed_seconds = 0.0;
};

/// Header: label,fragments,edges,free_params,bic,cv_loss,tp,fp,fn,
/// precision,recall,f1,shd,bsf,causal_paths,elapsed_s. Absent values are
/// empty cells.
void write_report_csv(std::ostream& out, std::span<const ComparisonReport> rows);

/// Fixed-precision formatting shared by every CSV writer.
std::string format_real(double v, int digits = 6);

}  // namespace bnsl
