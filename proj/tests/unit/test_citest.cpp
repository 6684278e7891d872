#include <doctest.h>

#include <cmath>

#include "bnsl/citest.hpp"
#include "bnsl/errors.hpp"
#include "bnsl/fixtures.hpp"
#include "bnsl/params.hpp"
#include "oracles.hpp"

using namespace bnsl;

namespace {

// Two binary columns realizing a 2x2 table, repeated per stratum of a third
// binary column.
Dataset table_data(const std::vector<std::array<int, 4>>& strata) {
  std::vector<std::vector<int>> cols(3);
  for (std::size_t s = 0; s < strata.size(); ++s) {
    const auto& t = strata[s];
    for (int cell = 0; cell < 4; ++cell)
      for (int i = 0; i < t[cell]; ++i) {
        cols[0].push_back(cell / 2);
        cols[1].push_back(cell % 2);
        cols[2].push_back(static_cast<int>(s));
      }
  }
  const std::vector<std::string> bin{"0", "1"};
  return Dataset({{"X", bin}, {"Y", bin}, {"S", bin}}, std::move(cols));
}

}  // namespace

TEST_CASE("chi_squared on 2x2 tables") {
  const Dataset flat = table_data({{10, 10, 10, 10}});
  const TestResult r0 = chi_squared(contingency(flat, 0, std::vector<int>{1}));
  CHECK(r0.statistic == doctest::Approx(0.0));
  CHECK(r0.dof == 1);
  CHECK(r0.p_value == doctest::Approx(1.0));

  const Dataset d = table_data({{20, 10, 10, 20}});
  const TestResult r = chi_squared(contingency(d, 0, std::vector<int>{1}));
  CHECK(std::fabs(r.statistic - 20.0 / 3.0) < 1e-9);
  CHECK(r.dof == 1);
  CHECK(std::fabs(r.p_value - oracle::chi2_sf(20.0 / 3.0, 1)) < 1e-9);
  CHECK(r.p_value == doctest::Approx(0.0098).epsilon(0.01));

  const Dataset two = table_data({{20, 10, 10, 20}, {20, 10, 10, 20}});
  const TestResult r2 = chi_squared(contingency(two, 0, std::vector<int>{1, 2}));
  CHECK(std::fabs(r2.statistic - 40.0 / 3.0) < 1e-9);
  CHECK(r2.dof == 2);
}

TEST_CASE("g_squared on 2x2 tables") {
  CHECK(g_squared(contingency(table_data({{10, 10, 10, 10}}), 0, std::vector<int>{1})).statistic ==
        doctest::Approx(0.0));
  const double expected = 2.0 * (2 * 20 * std::log(4.0 / 3.0) + 2 * 10 * std::log(2.0 / 3.0));
  const TestResult r = g_squared(contingency(table_data({{20, 10, 10, 20}}), 0, std::vector<int>{1}));
  CHECK(std::fabs(r.statistic - expected) < 1e-9);
  CHECK(r.dof == 1);
  const TestResult z = g_squared(contingency(table_data({{20, 0, 10, 20}}), 0, std::vector<int>{1}));
  CHECK(std::isfinite(z.statistic));
  CHECK(z.statistic > 0.0);
}

TEST_CASE("chi2_sf against the incomplete gamma oracle") {
  CHECK(chi2_sf(0.0, 3) == 1.0);
  CHECK(std::fabs(chi2_sf(6.6349, 1) - 0.01) < 1e-4);
  CHECK(std::fabs(chi2_sf(3.8415, 1) - 0.05) < 1e-4);
  for (int dof = 1; dof <= 40; dof += 3)
    for (double x = 0.1; x < 120.0; x *= 1.7) CHECK(std::fabs(chi2_sf(x, dof) - oracle::chi2_sf(x, dof)) < 1e-10);
}

TEST_CASE("independent on sampled chain") {
  const Dataset d = forward_sample(fixtures::chain_bn(), 50000, 11);
  CiConfig cfg;
  cfg.alpha = 0.01;
  for (const auto kind : {CiTestKind::ChiSquared, CiTestKind::GSquared}) {
    cfg.test = kind;
    CHECK(independent(d, 0, 2, std::vector<int>{1}, cfg));
    CHECK_FALSE(independent(d, 0, 1, std::vector<int>{}, cfg));
    CHECK_FALSE(independent(d, 0, 2, std::vector<int>{}, cfg));
  }
  CHECK_THROWS_AS(independent(d, 0, 0, std::vector<int>{}, cfg), std::invalid_argument);
  CHECK_THROWS_AS(independent(d, 0, 1, std::vector<int>{1}, cfg), std::invalid_argument);
}

TEST_CASE("undecidable tests count as independent") {
  const Dataset d = table_data({{2, 0, 0, 2}});
  CiConfig cfg;
  CHECK(independent(d, 0, 1, std::vector<int>{}, cfg));
  cfg.min_obs_per_dof = 0.0;
  const TestResult r = ci_test(d, 0, 1, std::vector<int>{}, cfg.test);
  CHECK(accepts_independence(r, cfg) == (r.p_value >= cfg.alpha));
}

TEST_CASE("CiTester memoizes symmetric queries") {
  const Dataset d = forward_sample(fixtures::chain_bn(), 2000, 3);
  CiTester t(d, {});
  const std::vector<int> z{1};
  const TestResult a = t.test(0, 2, z);
  const TestResult b = t.test(2, 0, z);
  CHECK(a.statistic == b.statistic);
  CHECK(t.tests_run() == 1);
}

TEST_CASE("parse_ci_test and config validation") {
  CHECK(parse_ci_test("chi2") == CiTestKind::ChiSquared);
  CHECK(parse_ci_test("g2") == CiTestKind::GSquared);
  CHECK_THROWS_AS(parse_ci_test("fisher"), ConfigError);
  CiConfig bad;
  bad.alpha = 1.5;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("stronger_association ordering") {
  CHECK(stronger_association({10.0, 1, 0.001}, {5.0, 1, 0.02}));
  CHECK(stronger_association({900.0, 1, 0.0}, {800.0, 1, 0.0}));
  CHECK_FALSE(stronger_association({800.0, 1, 0.0}, {900.0, 1, 0.0}));
}
