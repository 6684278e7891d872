#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bnsl/graph.hpp"

namespace bnsl {

/// Cell code for a missing observation.
inline constexpr int kMissing = -1;

/// State label added by missing_as_category().
inline constexpr std::string_view kMissingState = "__missing__";

/// Declared state lists, keyed by variable name.
using Schema = std::map<std::string, std::vector<std::string>>;

/// Immutable table of categorical observations, stored column-major as state
/// indices. A cell equal to kMissing is missing.
class Dataset {
 public:
  Dataset() = default;
  /// Validates that columns align with variables, have equal length and hold
  /// only kMissing or in-range state indices. Throws DataError otherwise.
  Dataset(std::vector<Variable> variables, std::vector<std::vector<int>> columns);

  std::size_t num_rows() const { return rows_; }
  int num_vars() const { return static_cast<int>(variables_.size()); }

  const std::vector<Variable>& variables() const { return variables_; }
  const Variable& variable(int v) const { return variables_[v]; }
  int cardinality(int v) const { return variables_[v].cardinality(); }
  std::vector<std::string> names() const;

  /// Index of a variable by name; throws DataError if absent.
  int index_of(std::string_view name) const;
  std::optional<int> find(std::string_view name) const;

  std::span<const int> column(int v) const { return columns_[v]; }
  int at(std::size_t row, int v) const { return columns_[v][row]; }
  bool is_missing(std::size_t row, int v) const { return columns_[v][row] == kMissing; }
  std::size_t missing_count(int v) const;
  bool has_missing() const;

  /// Rows in the given order (duplicates allowed).
  Dataset select_rows(std::span<const std::size_t> rows) const;
  /// Columns in the given order.
  Dataset select_columns(std::span<const int> vars) const;
  Dataset with_column(Variable variable, std::vector<int> column) const;

 private:
  std::vector<Variable> variables_;
  std::vector<std::vector<int>> columns_;
  std::size_t rows_ = 0;
};

/// Reads a header + rows CSV. Lines starting with `#` ahead of the header
/// are skipped. Empty cells and `?` are missing. Without a
/// schema, states are the observed labels in sorted order; with one, declared
/// states are authoritative (unused states are kept, unknown labels throw).
Dataset read_csv(std::istream& in, const Schema* schema = nullptr);
Dataset load_csv(const std::filesystem::path& path, const Schema* schema = nullptr);
void write_csv(std::ostream& out, const Dataset& data);

/// Removes every row with at least one missing cell. Throws DataError if no
/// row survives.
Dataset drop_missing(const Dataset& data);

/// Replaces missing cells with the column mode (lowest state index on ties).
/// Throws DataError for a column with no observed value.
Dataset impute_mode(const Dataset& data);

/// Adds a `__missing__` state to every variable that has a missing cell and
/// recodes those cells to it.
Dataset missing_as_category(const Dataset& data);

/// n rows drawn uniformly without replacement, in draw order.
/// Throws std::invalid_argument if n == 0 or n > num_rows().
Dataset subsample(const Dataset& data, std::size_t n, std::uint64_t seed);

/// A derived variable computed deterministically from parent variables.
/// `table` maps every joint parent configuration (first parent varies
/// fastest) to an index into `states`.
struct SyntheticSpec {
  std::string name;
  std::vector<std::string> parents;
  std::vector<std::string> states;
  std::vector<int> table;
};

/// Appends the synthetic column. Throws ConfigError if the spec is not a
/// total map onto at least two distinct output states, and DataError if a
/// parent is unknown or has a missing value.
Dataset add_synthetic(const Dataset& data, const SyntheticSpec& spec);

/// Joint counts of a child variable against a list of conditioning
/// variables.
///
/// Strata are joint conditioning configurations with the first conditioning
/// variable varying fastest. When the full configuration space is too large
/// to hold densely, only observed configurations are stored (`compressed`),
/// ordered by their configuration key; unobserved strata are all-zero and are
/// never needed by the tests or scores.
struct ContingencyTable {
  int child = 0;
  int child_card = 0;
  std::vector<int> conditioning;
  std::vector<int> conditioning_cards;
  std::size_t strata = 1;
  bool compressed = false;
  /// Configuration key of each stored stratum (only when compressed).
  std::vector<std::uint64_t> stratum_keys;
  /// counts[s * child_card + c].
  std::vector<std::int64_t> counts;
  std::vector<std::int64_t> stratum_totals;
  std::vector<std::int64_t> child_totals;
  std::int64_t total = 0;

  std::int64_t count(std::size_t stratum, int child_state) const {
    return counts[stratum * static_cast<std::size_t>(child_card) + static_cast<std::size_t>(child_state)];
  }
  std::uint64_t key(std::size_t stratum) const { return compressed ? stratum_keys[stratum] : stratum; }
};

/// Throws DataError if any involved column has a missing cell.
ContingencyTable contingency(const Dataset& data, int child, std::span<const int> conditioning);

struct FeatureRank {
  int variable = 0;
  double information_gain = 0.0;
  double correlation = 0.0;
};

/// Ranks every other variable against `target` by information gain
/// IG(X;T) = H(T) - H(T|X) in nats, with the Pearson correlation of the
/// integer state codes alongside. Rows where X is missing are skipped for X.
/// Throws DataError if the target has missing cells or a single observed state.
std::vector<FeatureRank> rank_features(const Dataset& data, int target);

}  // namespace bnsl
