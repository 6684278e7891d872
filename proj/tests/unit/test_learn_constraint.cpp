#include <doctest.h>

#include "bnsl/fixtures.hpp"
#include "bnsl/learn_constraint.hpp"
#include "bnsl/params.hpp"
#include "oracles.hpp"

using namespace bnsl;

namespace {

const Dataset& chain_data() {
  static const Dataset d = forward_sample(fixtures::chain_bn(), 10000, 21);
  return d;
}

const Dataset& collider_data() {
  static const Dataset d = forward_sample(fixtures::collider_bn(), 10000, 22);
  return d;
}

const Dataset& independent_data() {
  static const Dataset d = fixtures::independent_dataset(4, 3, 5000, 23);
  return d;
}

Pdag undirected_chain() {
  Pdag p(3);
  p.add_undirected(0, 1);
  p.add_undirected(1, 2);
  return p;
}

Pdag collider() {
  Pdag p(3);
  p.add_directed(0, 1);
  p.add_directed(2, 1);
  return p;
}

using Learner = Pdag (*)(const Dataset&, const CiConfig&, const Knowledge&, ConstraintDiagnostics*);

}  // namespace

TEST_CASE("constraint learners on the small fixtures") {
  const std::pair<const char*, Learner> learners[] = {{"pc-stable", &pc_stable}, {"gs", &grow_shrink}, {"iamb", &iamb}};
  for (const auto& [name, learn] : learners) {
    CAPTURE(name);
    CHECK(learn(chain_data(), {}, {}, nullptr) == undirected_chain());
    CHECK(learn(collider_data(), {}, {}, nullptr) == collider());
    CHECK(learn(independent_data(), {}, {}, nullptr).num_edges() == 0);
  }
}

TEST_CASE("markov blankets match the graph") {
  using Blanket = std::vector<int> (*)(const Dataset&, int, const CiConfig&);
  for (const Blanket mb : {static_cast<Blanket>(&markov_blanket_gs), static_cast<Blanket>(&markov_blanket_iamb)}) {
    CHECK(mb(chain_data(), 1, {}) == std::vector<int>{0, 2});
    CHECK(mb(collider_data(), 0, {}) == std::vector<int>{1, 2});
    CHECK(mb(independent_data(), 2, {}).empty());
  }
  const Dag chain = fixtures::chain_bn().dag();
  CHECK(oracle::markov_blanket(chain, 1) == std::vector<int>{0, 2});
}

TEST_CASE("markov blankets on the survey fixture") {
  const auto bn = fixtures::survey_bn();
  const Dataset d = forward_sample(bn, 30000, 24);
  CiConfig cfg;
  cfg.alpha = 0.01;
  int exact = 0;
  for (int v = 0; v < 10; ++v) {
    const auto truth = oracle::markov_blanket(bn.dag(), v);
    if (markov_blanket_iamb(d, v, cfg) == truth) ++exact;
  }
  CHECK(exact >= 8);
}

TEST_CASE("mb_to_graph") {
  CiTester chain_tester(chain_data(), {});
  CHECK(mb_to_graph(chain_tester, {{1}, {0, 2}, {1}}, {}) == undirected_chain());
  CiTester collider_tester(collider_data(), {});
  CHECK(mb_to_graph(collider_tester, {{1, 2}, {0, 2}, {0, 1}}, {}) == collider());
  CHECK(mb_to_graph(collider_tester, {{}, {}, {}}, {}).num_edges() == 0);
}

TEST_CASE("orient_skeleton applies knowledge first") {
  SepsetMap sepsets;
  sepsets[{0, 2}] = {};
  // Required 1 -> 0 overrides the collider orientation at 0 -> 1.
  const Knowledge k(3, {}, {{1, 0}}, {});
  ConstraintDiagnostics diag;
  const Pdag p = orient_skeleton(undirected_chain(), sepsets, k, &diag);
  CHECK(p.has_directed(1, 0));
  CHECK(p.has_directed(2, 1));
  CHECK(diag.orientation_conflicts == 1);

  // An edge with no admissible direction is dropped.
  const Knowledge none(3, {}, {}, {{0, 1}, {1, 0}});
  ConstraintDiagnostics d2;
  const Pdag q = orient_skeleton(undirected_chain(), {}, none, &d2);
  CHECK_FALSE(q.adjacent(0, 1));
  CHECK(d2.dropped_edges == 1);
}

TEST_CASE("pc_stable respects tiers and required arcs") {
  const Dataset d = forward_sample(fixtures::survey_bn(), 20000, 25);
  const Knowledge k = Knowledge::bind(fixtures::survey_knowledge(true), d.names());
  CiConfig cfg;
  cfg.alpha = 0.01;
  for (const Learner learn : {static_cast<Learner>(&pc_stable), static_cast<Learner>(&grow_shrink),
                              static_cast<Learner>(&iamb)}) {
    const Pdag g = learn(d, cfg, k, nullptr);
    CHECK(validate_output(k, g).empty());
    CHECK(g.directed_part_acyclic());
  }
}

TEST_CASE("pc_stable skeleton does not depend on variable order") {
  const Dataset d = forward_sample(fixtures::survey_bn(), 5000, 26);
  const std::vector<int> perm{9, 3, 7, 1, 5, 0, 8, 2, 6, 4};
  const Dataset shuffled = d.select_columns(perm);
  const Pdag a = pc_stable(d, {});
  const Pdag b = pc_stable(shuffled, {});
  for (int i = 0; i < 10; ++i)
    for (int j = i + 1; j < 10; ++j) CHECK(a.adjacent(perm[i], perm[j]) == b.adjacent(i, j));
}
