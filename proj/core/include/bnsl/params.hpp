#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "bnsl/dataset.hpp"
#include "bnsl/graph.hpp"

namespace bnsl {

/// Conditional probability table. Rows are joint parent configurations
/// (first parent varies fastest); probs[row * child_card + state].
struct Cpt {
  int child = 0;
  std::vector<int> parents;
  int child_card = 0;
  std::vector<int> parent_cards;
  std::vector<double> probs;

  std::size_t rows() const;
  std::size_t row_index(std::span<const int> parent_states) const;
  double prob(std::size_t row, int state) const {
    return probs[row * static_cast<std::size_t>(child_card) + static_cast<std::size_t>(state)];
  }
  /// Throws DataError on a dimension mismatch, a negative entry, or a row
  /// not summing to 1 within 1e-9.
  void validate() const;
};

class ParameterizedBn {
 public:
  /// CPT v must describe variable v with exactly dag.parents(v) as parents.
  ParameterizedBn(std::vector<Variable> variables, Dag dag, std::vector<Cpt> cpts);

  int size() const { return dag_.size(); }
  const std::vector<Variable>& variables() const { return variables_; }
  const Dag& dag() const { return dag_; }
  const Cpt& cpt(int v) const { return cpts_[v]; }

  /// ln P(row) for a complete row of state indices.
  double log_prob(std::span<const int> row) const;

 private:
  std::vector<Variable> variables_;
  Dag dag_;
  std::vector<Cpt> cpts_;
};

/// (count + alpha) / (stratum total + alpha * r). With alpha == 0 an
/// unobserved parent configuration gets a uniform row.
ParameterizedBn fit_mle(const Dataset& data, const Dag& g, double alpha = 0.0);

Dataset forward_sample(const ParameterizedBn& bn, std::size_t n, std::uint64_t seed);

/// Average -ln P(row) over all rows of data.
double mean_negative_log_likelihood(const Dataset& data, const ParameterizedBn& bn);

/// k-fold cross-validated average negative log-likelihood per instance.
/// Rows are shuffled by seed, split into `folds` contiguous near-equal
/// parts, and each part is scored under parameters fit on the others.
/// Throws std::invalid_argument if folds < 2 or folds > rows.
double cv_loss(const Dataset& data, const Dag& g, int folds, double alpha = 1.0, std::uint64_t seed = 0);

/// Plain-text network format:
///
///     variable <name> <state> <state> ...
///     arc <parent> <child>
///     cpt <child>
///     <parent states ...> : <p0> <p1> ...
///
/// One `variable` line per variable in index order, then arcs, then one cpt
/// block per variable with a row per parent configuration (first parent
/// fastest; a root's single row is `: p0 p1 ...`). Probabilities are
/// written in shortest round-trip form, so reading back is exact. Names and
/// labels may not contain whitespace, ':' or '#'.
void write_bn(std::ostream& out, const ParameterizedBn& bn);
ParameterizedBn read_bn(std::istream& in);
ParameterizedBn load_bn(const std::filesystem::path& path);
void save_bn(const std::filesystem::path& path, const ParameterizedBn& bn);

}  // namespace bnsl
