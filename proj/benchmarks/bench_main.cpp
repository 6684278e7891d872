#include <benchmark/benchmark.h>

#include <map>

#include "bnsl/fixtures.hpp"
#include "bnsl/graph.hpp"
#include "bnsl/learn_constraint.hpp"
#include "bnsl/learn_score.hpp"
#include "bnsl/params.hpp"
#include "bnsl/score.hpp"

namespace {

const bnsl::Dataset& survey(std::size_t rows) {
  static const bnsl::Dataset full = bnsl::forward_sample(bnsl::fixtures::survey_bn(), 50000, 1);
  static std::map<std::size_t, bnsl::Dataset> cache;
  auto it = cache.find(rows);
  if (it == cache.end()) it = cache.emplace(rows, bnsl::subsample(full, rows, 2)).first;
  return it->second;
}

void BM_FamilyBic(benchmark::State& state) {
  const auto& d = survey(static_cast<std::size_t>(state.range(0)));
  const std::vector<int> parents{3, 5, 6};
  for (auto _ : state) benchmark::DoNotOptimize(bnsl::family_bic(d, 9, parents).bic());
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_FamilyBic)->Arg(1000)->Arg(10000)->Arg(50000);

void BM_PcStable(benchmark::State& state) {
  const auto& d = survey(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(bnsl::pc_stable(d, {}));
}
BENCHMARK(BM_PcStable)->Arg(5000)->Arg(20000)->Unit(benchmark::kMillisecond);

void BM_HillClimb(benchmark::State& state) {
  const auto& d = survey(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(bnsl::hill_climb(d, {}));
}
BENCHMARK(BM_HillClimb)->Arg(5000)->Arg(20000)->Unit(benchmark::kMillisecond);

void BM_DSeparated(benchmark::State& state) {
  const bnsl::Dag g = bnsl::random_connected_dag(static_cast<int>(state.range(0)), 3, 3, 7);
  const std::vector<int> z{2, 3};
  for (auto _ : state) benchmark::DoNotOptimize(bnsl::d_separated(g, 0, 1, z));
}
BENCHMARK(BM_DSeparated)->Arg(10)->Arg(50)->Arg(200);

}  // namespace

BENCHMARK_MAIN();
