#include <doctest.h>

#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "bnsl/dataset.hpp"
#include "bnsl/errors.hpp"
#include "bnsl/fixtures.hpp"
#include "bnsl/random.hpp"

using namespace bnsl;

namespace {

Dataset parse(const std::string& text, const Schema* schema = nullptr) {
  std::istringstream in(text);
  return read_csv(in, schema);
}

}  // namespace

TEST_CASE("read_csv") {
  SUBCASE("no missing") {
    const Dataset d = parse("a,b,c\nx,1,p\ny,2,q\nx,1,q\n");
    CHECK(d.num_rows() == 3);
    CHECK(d.num_vars() == 3);
    CHECK_FALSE(d.has_missing());
    CHECK(d.variable(0).states == std::vector<std::string>{"x", "y"});
  }
  SUBCASE("question mark and empty cells are missing") {
    const Dataset d = parse("a,b\nx,?\n,1\ny,0\n");
    CHECK(d.is_missing(0, 1));
    CHECK(d.is_missing(1, 0));
    CHECK(d.missing_count(0) == 1);
  }
  SUBCASE("schema keeps unused states and rejects unknown labels") {
    const Schema schema{{"a", {"lo", "mid", "hi"}}};
    const Dataset d = parse("a\nlo\nhi\n", &schema);
    CHECK(d.cardinality(0) == 3);
    CHECK_THROWS_AS(parse("a\nhuge\n", &schema), DataError);
  }
  SUBCASE("ragged rows are rejected") { CHECK_THROWS_AS(parse("a,b\nx\n"), DataError); }
  SUBCASE("comment lines before the header are skipped") {
    const Dataset d = parse("# seed: 1\n# version: x\na\n0\n1\n");
    CHECK(d.num_rows() == 2);
    CHECK(d.variable(0).name == "a");
  }
  SUBCASE("quoted fields") {
    const Dataset d = parse("a\n\"x, y\"\nz\n");
    CHECK(d.variable(0).states == std::vector<std::string>{"x, y", "z"});
  }
}

TEST_CASE("write_csv round trip") {
  const Dataset d = parse("a,b\nx,?\ny,1\nx,0\n");
  std::ostringstream out;
  write_csv(out, d);
  const Dataset e = parse(out.str());
  CHECK(e.num_rows() == 3);
  CHECK(e.is_missing(0, 1));
  CHECK(e.at(1, 0) == d.at(1, 0));
}

TEST_CASE("drop_missing") {
  const Dataset clean = parse("a,b\nx,1\ny,2\n");
  const Dataset same = drop_missing(clean);
  CHECK(same.num_rows() == 2);
  const Dataset d = parse("a,b\nx,1\n?,?\ny,2\nx,?\n");
  const Dataset dropped = drop_missing(d);
  CHECK(dropped.num_rows() == 2);
  CHECK_FALSE(dropped.has_missing());
  CHECK_THROWS_AS(drop_missing(parse("a,b\nx,?\n?,1\n")), DataError);
}

TEST_CASE("impute_mode") {
  const Dataset d = parse("a\nyes\nyes\nno\nyes\n?\n");
  const Dataset m = impute_mode(d);
  CHECK_FALSE(m.has_missing());
  CHECK(m.variable(0).states[static_cast<std::size_t>(m.at(4, 0))] == "yes");
  const Dataset tie = impute_mode(parse("a\nb\na\nb\na\n?\n"));
  CHECK(tie.at(4, 0) == 0);
  CHECK_THROWS_AS(impute_mode(parse("a,b\n?,1\n?,2\n")), DataError);
}

TEST_CASE("missing_as_category") {
  const Dataset d = parse("a,b\nx,1\n?,2\ny,?\n");
  const Dataset c = missing_as_category(d);
  CHECK_FALSE(c.has_missing());
  CHECK(c.cardinality(0) == 3);
  CHECK(c.variable(0).states.back() == kMissingState);
  std::size_t recoded = 0;
  for (int v = 0; v < c.num_vars(); ++v)
    for (std::size_t r = 0; r < c.num_rows(); ++r)
      if (c.variable(v).states[static_cast<std::size_t>(c.at(r, v))] == kMissingState) ++recoded;
  CHECK(recoded == d.missing_count(0) + d.missing_count(1));
  const Dataset clean = parse("a\nx\ny\n");
  CHECK(missing_as_category(clean).cardinality(0) == 2);
}

TEST_CASE("subsample") {
  const Dataset d = fixtures::independent_dataset(2, 3, 100, 1);
  const Dataset all = subsample(d, 100, 4);
  std::multiset<std::pair<int, int>> a, b;
  for (std::size_t r = 0; r < 100; ++r) {
    a.emplace(d.at(r, 0), d.at(r, 1));
    b.emplace(all.at(r, 0), all.at(r, 1));
  }
  CHECK(a == b);
  CHECK_THROWS_AS(subsample(d, 0, 1), std::invalid_argument);
  CHECK_THROWS_AS(subsample(d, 101, 1), std::invalid_argument);
  const Dataset s1 = subsample(d, 40, 9), s2 = subsample(d, 40, 9);
  for (std::size_t r = 0; r < 40; ++r) CHECK(s1.at(r, 0) == s2.at(r, 0));
}

TEST_CASE("add_synthetic") {
  const Dataset d = fixtures::independent_dataset(2, 2, 200, 3);
  const SyntheticSpec conj{"AND", {"V0", "V1"}, {"f", "t"}, {0, 0, 0, 1}};
  const Dataset s = add_synthetic(d, conj);
  REQUIRE(s.num_vars() == 3);
  for (std::size_t r = 0; r < d.num_rows(); ++r) CHECK(s.at(r, 2) == (d.at(r, 0) == 1 && d.at(r, 1) == 1 ? 1 : 0));
  const SyntheticSpec constant{"K", {"V0"}, {"a", "b"}, {0, 0}};
  CHECK_THROWS_AS(add_synthetic(d, constant), ConfigError);
  const SyntheticSpec unknown{"U", {"nope"}, {"a", "b"}, {0, 1}};
  CHECK_THROWS_AS(add_synthetic(d, unknown), DataError);
  const Dataset missing = parse("V0\n0\n?\n1\n");
  const SyntheticSpec copy{"C", {"V0"}, {"a", "b"}, {0, 1}};
  CHECK_THROWS_AS(add_synthetic(missing, copy), DataError);
}

TEST_CASE("contingency counts match a map recount") {
  const Dataset single = parse("a\n0\n0\n0\n0\n0\n0\n1\n1\n1\n1\n");
  const ContingencyTable t0 = contingency(single, 0, {});
  CHECK(t0.counts == std::vector<std::int64_t>{6, 4});
  CHECK(t0.total == 10);

  const Dataset d = fixtures::independent_dataset(4, 3, 500, 17);
  const std::vector<int> cond{1, 3, 2};
  const ContingencyTable t = contingency(d, 0, cond);
  std::map<std::pair<std::size_t, int>, std::int64_t> recount;
  for (std::size_t r = 0; r < d.num_rows(); ++r) {
    std::size_t key = 0, mult = 1;
    for (const int c : cond) {
      key += static_cast<std::size_t>(d.at(r, c)) * mult;
      mult *= 3;
    }
    ++recount[{key, d.at(r, 0)}];
  }
  std::int64_t sum = 0;
  for (std::size_t s = 0; s < t.strata; ++s)
    for (int c = 0; c < t.child_card; ++c) {
      const auto it = recount.find({static_cast<std::size_t>(t.key(s)), c});
      CHECK(t.count(s, c) == (it == recount.end() ? 0 : it->second));
      sum += t.count(s, c);
    }
  CHECK(sum == 500);
  CHECK_THROWS_AS(contingency(parse("a,b\n0,?\n1,1\n"), 0, std::vector<int>{1}), DataError);
}

TEST_CASE("rank_features") {
  const Dataset d = parse("t,x,z\n0,0,0\n1,1,0\n0,0,1\n1,1,1\n");
  const auto ranks = rank_features(d, 0);
  REQUIRE(ranks.size() == 2);
  CHECK(ranks[0].variable == 1);
  CHECK(ranks[0].information_gain == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  CHECK(ranks[0].correlation == doctest::Approx(1.0));
  CHECK(ranks[1].information_gain == doctest::Approx(0.0));

  // Entropy oracle on a 3-state X against a binary target.
  const Dataset r = fixtures::independent_dataset(2, 3, 300, 5);
  const Dataset t = r.with_column({"T", {"0", "1"}}, [&] {
    std::vector<int> col(r.num_rows());
    for (std::size_t i = 0; i < col.size(); ++i) col[i] = (r.at(i, 0) + static_cast<int>(i % 2)) % 2;
    return col;
  }());
  double joint[3][2] = {};
  for (std::size_t i = 0; i < t.num_rows(); ++i) joint[t.at(i, 0)][t.at(i, 2)] += 1.0;
  const double n = static_cast<double>(t.num_rows());
  double ht = 0.0, htx = 0.0;
  for (int y = 0; y < 2; ++y) {
    const double py = (joint[0][y] + joint[1][y] + joint[2][y]) / n;
    if (py > 0) ht -= py * std::log(py);
  }
  for (int x = 0; x < 3; ++x) {
    const double nx = joint[x][0] + joint[x][1];
    for (int y = 0; y < 2; ++y)
      if (joint[x][y] > 0) htx -= joint[x][y] / n * std::log(joint[x][y] / nx);
  }
  const auto tr = rank_features(t, 2);
  for (const auto& f : tr)
    if (f.variable == 0) CHECK(std::fabs(f.information_gain - (ht - htx)) < 1e-12);
  CHECK_THROWS_AS(rank_features(parse("t,x\n0,0\n0,1\n"), 0), DataError);
}
