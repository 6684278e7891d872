#include "bnsl/citest.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/special_functions/gamma.hpp>

#include "bnsl/errors.hpp"

namespace bnsl {

std::string_view to_string(CiTestKind kind) { return kind == CiTestKind::ChiSquared ? "chi2" : "g2"; }

CiTestKind parse_ci_test(std::string_view name) {
  if (name == "chi2" || name == "x2") return CiTestKind::ChiSquared;
  if (name == "g2" || name == "mi") return CiTestKind::GSquared;
  throw ConfigError("unknown independence test '" + std::string(name) + "' (expected chi2 or g2)");
}

double chi2_sf(double x, int dof) {
  if (dof <= 0 || !(x > 0.0)) return 1.0;
  if (std::isinf(x)) return 0.0;
  return boost::math::gamma_q(0.5 * dof, 0.5 * x);
}

namespace {

enum class Statistic { Pearson, LikelihoodRatio };

TestResult stratified_test(const ContingencyTable& t, Statistic kind) {
  if (t.conditioning.empty()) throw std::invalid_argument("independence test needs a second variable");
  const int rows = t.child_card;
  const auto cols = static_cast<std::uint64_t>(t.conditioning_cards.front());
  // Group stored strata by the configuration of the remaining (Z) variables.
  // The first conditioning variable varies fastest, so key / cols is the Z
  // configuration and key % cols the column.
  std::map<std::uint64_t, std::vector<std::size_t>> by_z;
  for (std::size_t s = 0; s < t.strata; ++s) {
    if (t.stratum_totals[s] > 0) by_z[t.key(s) / cols].push_back(s);
  }
  double stat = 0.0;
  int dof = 0;
  std::vector<double> row_tot(static_cast<std::size_t>(rows));
  for (const auto& [z, strata] : by_z) {
    std::fill(row_tot.begin(), row_tot.end(), 0.0);
    double total = 0.0;
    for (std::size_t s : strata) {
      for (int r = 0; r < rows; ++r) row_tot[r] += static_cast<double>(t.count(s, r));
      total += static_cast<double>(t.stratum_totals[s]);
    }
    const int live_rows = static_cast<int>(std::count_if(row_tot.begin(), row_tot.end(), [](double v) { return v > 0; }));
    const int live_cols = static_cast<int>(strata.size());
    if (live_rows < 2 || live_cols < 2) continue;
    dof += (live_rows - 1) * (live_cols - 1);
    for (std::size_t s : strata) {
      const double col_tot = static_cast<double>(t.stratum_totals[s]);
      for (int r = 0; r < rows; ++r) {
        const double expected = row_tot[r] * col_tot / total;
        if (expected <= 0.0) continue;
        const double observed = static_cast<double>(t.count(s, r));
        if (kind == Statistic::Pearson) {
          const double d = observed - expected;
          stat += d * d / expected;
        } else if (observed > 0.0) {
          stat += 2.0 * observed * std::log(observed / expected);
        }
      }
    }
  }
  stat = std::max(stat, 0.0);
  return TestResult{stat, dof, chi2_sf(stat, dof)};
}

}  // namespace

TestResult chi_squared(const ContingencyTable& t) { return stratified_test(t, Statistic::Pearson); }

TestResult g_squared(const ContingencyTable& t) { return stratified_test(t, Statistic::LikelihoodRatio); }

void CiConfig::validate() const {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must lie in (0, 1)");
  if (max_conditioning && *max_conditioning < 0) throw ConfigError("max conditioning size must be non-negative");
  if (min_obs_per_dof < 0.0) throw ConfigError("min_obs_per_dof must be non-negative");
}

TestResult ci_test(const Dataset& data, int x, int y, std::span<const int> z, CiTestKind kind) {
  if (x == y) throw std::invalid_argument("ci_test: x and y must differ");
  std::vector<int> cond{y};
  for (int v : z) {
    if (v == x || v == y) throw std::invalid_argument("ci_test: conditioning set contains x or y");
    cond.push_back(v);
  }
  const auto table = contingency(data, x, cond);
  return kind == CiTestKind::ChiSquared ? chi_squared(table) : g_squared(table);
}

bool accepts_independence(const TestResult& r, const CiConfig& cfg) {
  if (r.dof == 0) return true;
  return r.p_value >= cfg.alpha;
}

bool independent(const Dataset& data, int x, int y, std::span<const int> z, const CiConfig& cfg) {
  const auto r = ci_test(data, x, y, z, cfg.test);
  if (static_cast<double>(data.num_rows()) < cfg.min_obs_per_dof * r.dof) return true;
  return accepts_independence(r, cfg);
}

bool stronger_association(const TestResult& a, const TestResult& b) {
  if (a.p_value != b.p_value) return a.p_value < b.p_value;
  return a.statistic > b.statistic;
}

CiTester::CiTester(const Dataset& data, CiConfig cfg) : data_(&data), cfg_(cfg) { cfg_.validate(); }

TestResult CiTester::test(int x, int y, std::span<const int> z) {
  std::vector<int> key{std::min(x, y), std::max(x, y)};
  std::vector<int> zs(z.begin(), z.end());
  std::sort(zs.begin(), zs.end());
  key.insert(key.end(), zs.begin(), zs.end());
  {
    std::lock_guard lock(mu_);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
  }
  const auto r = ci_test(*data_, key[0], key[1], zs, cfg_.test);
  std::lock_guard lock(mu_);
  ++tests_run_;
  memo_.emplace(std::move(key), r);
  return r;
}

bool CiTester::independent(int x, int y, std::span<const int> z) {
  const auto r = test(x, y, z);
  if (static_cast<double>(data_->num_rows()) < cfg_.min_obs_per_dof * r.dof) return true;
  return accepts_independence(r, cfg_);
}

std::size_t CiTester::tests_run() const {
  std::lock_guard lock(mu_);
  return tests_run_;
}

}  // namespace bnsl
