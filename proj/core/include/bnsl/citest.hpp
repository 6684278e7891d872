#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bnsl/dataset.hpp"

namespace bnsl {

enum class CiTestKind { ChiSquared, GSquared };

std::string_view to_string(CiTestKind kind);
/// Accepts "chi2"/"x2" and "g2"/"mi". Throws ConfigError otherwise.
CiTestKind parse_ci_test(std::string_view name);

struct TestResult {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
};

/// Upper tail of the chi-squared distribution, Q(dof/2, x/2).
/// Returns 1 for x <= 0 or dof == 0.
double chi2_sf(double x, int dof);

/// Pearson chi-squared test of child against conditioning[0], stratified by
/// the remaining conditioning variables. Expected counts come from the
/// within-stratum margins; rows or columns with zero margin are dropped from
/// that stratum's degrees of freedom.
TestResult chi_squared(const ContingencyTable& t);

/// G-squared (likelihood-ratio) test with the same layout as chi_squared.
TestResult g_squared(const ContingencyTable& t);

struct CiConfig {
  CiTestKind test = CiTestKind::GSquared;
  double alpha = 0.05;
  /// Largest conditioning set a learner may try; unset means unlimited.
  std::optional<int> max_conditioning;
  /// A test with fewer than min_obs_per_dof * dof rows is undecidable and
  /// reported as independent. Zero disables the heuristic.
  double min_obs_per_dof = 5.0;

  void validate() const;
};

/// Test of x against y given z on complete data.
TestResult ci_test(const Dataset& data, int x, int y, std::span<const int> z, CiTestKind kind);

/// Whether the decision rule accepts independence for this result.
bool accepts_independence(const TestResult& r, const CiConfig& cfg);

/// True iff p >= alpha or the test is undecidable.
/// Throws std::invalid_argument if x == y or z contains x or y.
bool independent(const Dataset& data, int x, int y, std::span<const int> z, const CiConfig& cfg);

/// Association ordering used by IAMB and MMPC: a smaller p-value is a
/// stronger association; equal p-values (typically both underflowed to 0)
/// fall back to the larger statistic.
bool stronger_association(const TestResult& a, const TestResult& b);

/// Memoizing test runner shared by the constraint-based learners. Results
/// are keyed by the unordered pair and the sorted conditioning set.
/// Thread-safe.
class CiTester {
 public:
  CiTester(const Dataset& data, CiConfig cfg);

  const Dataset& data() const { return *data_; }
  const CiConfig& config() const { return cfg_; }

  TestResult test(int x, int y, std::span<const int> z);
  bool independent(int x, int y, std::span<const int> z);

  std::size_t tests_run() const;

 private:
  const Dataset* data_;
  CiConfig cfg_;
  mutable std::mutex mu_;
  std::map<std::vector<int>, TestResult> memo_;
  std::size_t tests_run_ = 0;
};

}  // namespace bnsl
