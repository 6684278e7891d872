#include <doctest.h>

#include <algorithm>
#include <map>
#include <sstream>

#include "bnsl/graph.hpp"
#include "bnsl/graph_io.hpp"
#include "bnsl/random.hpp"
#include "oracles.hpp"

using namespace bnsl;

namespace {

std::vector<int> others(int n, int x, int y) {
  std::vector<int> out;
  for (int v = 0; v < n; ++v)
    if (v != x && v != y) out.push_back(v);
  return out;
}

// Random PDAG: random DAG, then a random subset of its arcs made undirected.
Pdag random_pdag(int n, Rng& rng) {
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  rng.shuffle(std::span<int>(order));
  Pdag p(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      if (rng.uniform() < 0.4) {
        if (rng.uniform() < 0.5) p.add_undirected(order[i], order[j]);
        else p.add_directed(order[i], order[j]);
      }
    }
  return p;
}

}  // namespace

TEST_CASE("is_acyclic examples") {
  CHECK(is_acyclic(std::vector<Arc>{}, 3));
  CHECK_FALSE(is_acyclic(std::vector<Arc>{{0, 1}, {1, 2}, {2, 0}}, 3));
  CHECK(is_acyclic(std::vector<Arc>{{0, 1}, {0, 2}, {1, 2}}, 3));
}

TEST_CASE("Dag rejects cycles and self-loops") {
  Dag g(3);
  g.add_arc(0, 1);
  g.add_arc(1, 2);
  CHECK_THROWS(g.add_arc(2, 0));
  CHECK_THROWS(g.add_arc(1, 1));
  CHECK(g.has_path(0, 2));
  CHECK(g.num_arcs() == 2);
  g.reverse_arc(1, 2);
  CHECK(g.has_arc(2, 1));
  CHECK(g.ancestors(1) == std::vector<int>{0, 2});
}

TEST_CASE("v_structures examples") {
  CHECK(v_structures(Dag(3, std::vector<Arc>{{0, 1}, {2, 1}})) == std::vector<VStructure>{{0, 1, 2}});
  CHECK(v_structures(Dag(3, std::vector<Arc>{{0, 1}, {2, 1}, {0, 2}})).empty());
  CHECK(v_structures(Dag(3, std::vector<Arc>{{0, 1}, {1, 2}})).empty());
}

TEST_CASE("d_separated examples") {
  const Dag chain(3, std::vector<Arc>{{0, 1}, {1, 2}});
  CHECK(d_separated(chain, 0, 2, std::vector<int>{1}));
  CHECK_FALSE(d_separated(chain, 0, 2, std::vector<int>{}));
  const Dag collider(3, std::vector<Arc>{{0, 1}, {2, 1}});
  CHECK(d_separated(collider, 0, 2, std::vector<int>{}));
  CHECK_FALSE(d_separated(collider, 0, 2, std::vector<int>{1}));
  CHECK_THROWS_AS(d_separated(chain, 0, 0, std::vector<int>{}), std::invalid_argument);
  CHECK_THROWS_AS(d_separated(chain, 0, 2, std::vector<int>{0}), std::invalid_argument);
}

TEST_CASE("d_separated matches path enumeration on random 5-node DAGs") {
  int mismatches = 0;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const Dag g = random_connected_dag(5, 4, 4, seed);
    for (int x = 0; x < 5; ++x)
      for (int y = x + 1; y < 5; ++y) {
        const auto pool = others(5, x, y);
        for (unsigned mask = 0; mask < (1u << pool.size()); ++mask) {
          std::vector<int> z;
          for (std::size_t i = 0; i < pool.size(); ++i)
            if (mask & (1u << i)) z.push_back(pool[i]);
          if (z.size() > 2) continue;
          if (d_separated(g, x, y, z) != oracle::d_separated_paths(g, x, y, z)) ++mismatches;
        }
      }
  }
  CHECK(mismatches == 0);
}

TEST_CASE("extend_to_dag") {
  SUBCASE("fully directed input is returned as is") {
    Pdag p(3);
    p.add_directed(0, 1);
    p.add_directed(2, 1);
    CHECK(extend_to_dag(p, 7) == Dag(3, std::vector<Arc>{{0, 1}, {2, 1}}));
  }
  SUBCASE("single edge gets one of two orientations") {
    Pdag p(2);
    p.add_undirected(0, 1);
    std::set<bool> seen;
    for (std::uint64_t s = 0; s < 32; ++s) {
      const Dag d = extend_to_dag(p, s);
      CHECK(d.num_arcs() == 1);
      seen.insert(d.has_arc(0, 1));
    }
    CHECK(seen.size() == 2);
  }
  SUBCASE("cycle-closing direction is avoided") {
    Pdag p(3);
    p.add_directed(0, 1);
    p.add_undirected(1, 2);
    p.add_directed(2, 0);
    for (std::uint64_t s = 0; s < 16; ++s) CHECK(extend_to_dag(p, s).has_arc(2, 1));
  }
}

TEST_CASE("consistent_extension preserves the equivalence class") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const Dag g = random_connected_dag(7, 3, 3, seed);
    const auto ext = consistent_extension(cpdag(g));
    REQUIRE(ext.has_value());
    CHECK(oracle::markov_equivalent(*ext, g));
  }
}

TEST_CASE("meek_orient") {
  SUBCASE("R1") {
    Pdag p(3);
    p.add_directed(0, 1);
    p.add_undirected(1, 2);
    const Pdag q = meek_orient(p);
    CHECK(q.has_directed(1, 2));
  }
  SUBCASE("fixpoint without context") {
    Pdag p(2);
    p.add_undirected(0, 1);
    CHECK(meek_orient(p) == p);
  }
  SUBCASE("filter blocks an orientation") {
    Pdag p(3);
    p.add_directed(0, 1);
    p.add_undirected(1, 2);
    const Pdag q = meek_orient(p, [](int a, int b) { return !(a == 1 && b == 2); });
    CHECK(q.has_undirected(1, 2));
  }
  SUBCASE("idempotent on random 6-node CPDAGs") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      const Pdag c = cpdag(random_connected_dag(6, 3, 3, seed));
      const Pdag once = meek_orient(c);
      CHECK(meek_orient(once) == once);
      CHECK(once == c);
    }
  }
}

TEST_CASE("cpdag keeps skeleton and v-structures") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const Dag g = random_connected_dag(8, 3, 3, seed + 100);
    const Pdag c = cpdag(g);
    CHECK(oracle::skeleton(c) == oracle::skeleton(Pdag::from_dag(g)));
    CHECK(v_structures(c) == v_structures(g));
  }
  const Pdag chain = cpdag(Dag(3, std::vector<Arc>{{0, 1}, {1, 2}}));
  CHECK(chain.has_undirected(0, 1));
  CHECK(chain.has_undirected(1, 2));
  const Pdag collider = cpdag(Dag(3, std::vector<Arc>{{0, 1}, {2, 1}}));
  CHECK(collider.has_directed(0, 1));
  CHECK(collider.has_directed(2, 1));
}

TEST_CASE("extend_to_dag on random PDAGs is acyclic and keeps directed arcs") {
  Rng rng(5);
  int checked = 0;
  for (int i = 0; i < 500; ++i) {
    const Pdag p = random_pdag(7, rng);
    const Dag d = extend_to_dag(p, static_cast<std::uint64_t>(i));
    for (const auto& [a, b] : p.directed_arcs()) CHECK(d.has_arc(a, b));
    CHECK(oracle::skeleton(Pdag::from_dag(d)) == oracle::skeleton(p));
    ++checked;
  }
  CHECK(checked == 500);
}

TEST_CASE("random_connected_dag") {
  SUBCASE("two nodes give a single arc") {
    for (std::uint64_t s = 0; s < 20; ++s) CHECK(random_connected_dag(2, 3, 3, s).num_arcs() == 1);
  }
  SUBCASE("28 nodes respect bounds and are connected") {
    for (std::uint64_t s = 0; s < 5; ++s) {
      const Dag g = random_connected_dag(28, 3, 3, s);
      CHECK(fragments(g) == 1);
      for (int v = 0; v < 28; ++v) {
        CHECK(g.parents(v).size() <= 3);
        CHECK(g.children(v).size() <= 3);
      }
    }
  }
  SUBCASE("same seed same graph") { CHECK(random_connected_dag(10, 3, 3, 9) == random_connected_dag(10, 3, 3, 9)); }
}

TEST_CASE("empty_graph and fragments") {
  CHECK(empty_graph(28).num_arcs() == 0);
  CHECK(fragments(empty_graph(28)) == 28);
  CHECK(fragments(empty_graph(1)) == 1);
  CHECK(fragments(Dag(4, std::vector<Arc>{{0, 1}, {2, 3}})) == 2);
  CHECK(fragments(Dag(4, std::vector<Arc>{{0, 1}, {1, 2}, {3, 2}})) == 1);
}

TEST_CASE("arc csv round trip") {
  const std::vector<std::string> names{"A", "B", "C", "D"};
  Pdag p(4);
  p.add_directed(0, 1);
  p.add_undirected(2, 3);
  const std::string text = to_arc_csv(p, names);
  std::istringstream in(text);
  CHECK(read_arc_csv(in, names) == p);
  std::istringstream bad("parent,child,directed\nA,Z,1\n");
  CHECK_THROWS(read_arc_csv(bad, names));
  CHECK(to_dot(p, names).find("A -> B;") != std::string::npos);
}
