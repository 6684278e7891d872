#include "bnsl/learn_hybrid.hpp"

#include <algorithm>
#include <string>

#include "bnsl/errors.hpp"
#include "bnsl/learn_constraint.hpp"
#include "subsets.hpp"

namespace bnsl {
namespace {

bool contains(const std::vector<int>& v, int x) { return std::find(v.begin(), v.end(), x) != v.end(); }

std::vector<int> without(std::vector<int> v, int x) {
  v.erase(std::remove(v.begin(), v.end(), x), v.end());
  return v;
}

std::size_t cap_of(const CiTester& tester) {
  const auto& m = tester.config().max_conditioning;
  return m ? static_cast<std::size_t>(std::max(0, *m)) : static_cast<std::size_t>(tester.data().num_vars());
}

bool admissible(const Knowledge& k, int a, int b) {
  return k.pair_required(a, b) || k.arc_allowed(a, b) || k.arc_allowed(b, a);
}

// True when some subset of pool (up to the cap) separates t and x.
bool separable(CiTester& tester, int t, int x, const std::vector<int>& pool) {
  return detail::for_each_subset_upto(std::span<const int>(pool), cap_of(tester),
                                      [&](const std::vector<int>& s) { return tester.independent(t, x, s); });
}

CandidateSets symmetrize(const CandidateSets& raw) {
  const int n = static_cast<int>(raw.size());
  CandidateSets out(n);
  for (int a = 0; a < n; ++a) {
    for (const int b : raw[a]) {
      if (contains(raw[b], a)) out[a].push_back(b);
    }
    std::sort(out[a].begin(), out[a].end());
  }
  return out;
}

std::vector<int> mmpc_single(CiTester& tester, const Knowledge& k, int t) {
  const int n = tester.data().num_vars();
  const std::size_t cap = cap_of(tester);
  std::vector<int> open;
  for (int x = 0; x < n; ++x) {
    if (x != t && admissible(k, t, x)) open.push_back(x);
  }
  std::vector<int> cpc;
  while (!open.empty()) {
    int best = -1;
    TestResult best_min;
    std::vector<int> eliminated;
    for (const int x : open) {
      TestResult weakest;
      bool first = true;
      const bool indep = detail::for_each_subset_upto(std::span<const int>(cpc), cap, [&](const std::vector<int>& s) {
        if (tester.independent(t, x, s)) return true;
        const auto r = tester.test(t, x, s);
        if (first || stronger_association(weakest, r)) weakest = r;
        first = false;
        return false;
      });
      if (indep) {
        eliminated.push_back(x);
        continue;
      }
      if (best < 0 || stronger_association(weakest, best_min)) {
        best = x;
        best_min = weakest;
      }
    }
    for (const int x : eliminated) open = without(open, x);
    if (best < 0) break;
    cpc.push_back(best);
    open = without(open, best);
  }
  for (const int x : std::vector<int>(cpc)) {
    if (separable(tester, t, x, without(cpc, x))) cpc = without(cpc, x);
  }
  std::sort(cpc.begin(), cpc.end());
  return cpc;
}

std::vector<int> hiton_single(CiTester& tester, const Knowledge& k, int t) {
  const int n = tester.data().num_vars();
  const std::vector<int> none;
  std::vector<std::pair<TestResult, int>> ranked;
  for (int x = 0; x < n; ++x) {
    if (x == t || !admissible(k, t, x) || tester.independent(t, x, none)) continue;
    ranked.emplace_back(tester.test(t, x, none), x);
  }
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return stronger_association(a.first, b.first); });
  std::vector<int> cpc;
  for (const auto& entry : ranked) {
    cpc.push_back(entry.second);
    for (const int y : std::vector<int>(cpc)) {
      if (separable(tester, t, y, without(cpc, y))) cpc = without(cpc, y);
    }
  }
  std::sort(cpc.begin(), cpc.end());
  return cpc;
}

}  // namespace

RestrictMethod parse_restrict(std::string_view name) {
  if (name == "mmpc") return RestrictMethod::Mmpc;
  if (name == "gs") return RestrictMethod::GsBlankets;
  if (name == "iamb") return RestrictMethod::IambBlankets;
  if (name == "hiton") return RestrictMethod::HitonStyle;
  throw ConfigError("unknown restrict method: " + std::string(name));
}

MaximizeMethod parse_maximize(std::string_view name) {
  if (name == "hc") return MaximizeMethod::HillClimb;
  if (name == "tabu") return MaximizeMethod::Tabu;
  throw ConfigError("unknown maximize method: " + std::string(name));
}

CandidateSets mmpc(CiTester& tester, const Knowledge& k) {
  CandidateSets raw(tester.data().num_vars());
  for (int t = 0; t < tester.data().num_vars(); ++t) raw[t] = mmpc_single(tester, k, t);
  return symmetrize(raw);
}

CandidateSets mmpc(const Dataset& data, const CiConfig& cfg, const Knowledge& k) {
  CiTester tester(data, cfg);
  return mmpc(tester, k);
}

CandidateSets hiton_style(CiTester& tester, const Knowledge& k) {
  CandidateSets raw(tester.data().num_vars());
  for (int t = 0; t < tester.data().num_vars(); ++t) raw[t] = hiton_single(tester, k, t);
  return symmetrize(raw);
}

CandidateSets blanket_candidates(CiTester& tester, RestrictMethod method, const Knowledge& k) {
  const int n = tester.data().num_vars();
  CandidateSets raw(n);
  for (int t = 0; t < n; ++t) {
    auto mb = method == RestrictMethod::IambBlankets ? markov_blanket_iamb(tester, t) : markov_blanket_gs(tester, t);
    std::erase_if(mb, [&](int x) { return !admissible(k, t, x); });
    raw[t] = std::move(mb);
  }
  return symmetrize(raw);
}

Dag maximize_restricted(const Dataset& data, const CandidateSets& skeleton, MaximizeMethod maximize,
                        const SearchConfig& search, const Knowledge& k, HybridDiagnostics* diag) {
  const int n = data.num_vars();
  PairMask mask(n);
  for (int a = 0; a < n && a < static_cast<int>(skeleton.size()); ++a) {
    for (const int b : skeleton[a]) {
      if (admissible(k, a, b)) mask.set(a, b);
    }
  }
  for (const auto& [a, b] : k.required_arcs()) {
    if (mask.test(a, b)) continue;
    mask.set(a, b);
    if (diag) diag->widened_pairs.push_back({a, b});
  }
  ScoreCache cache(data);
  return score_search(data, search, k, maximize == MaximizeMethod::Tabu, &mask, cache);
}

Dag restrict_maximize(const Dataset& data, RestrictMethod restrict, MaximizeMethod maximize, const CiConfig& ci,
                      const SearchConfig& search, const Knowledge& k, HybridDiagnostics* diag) {
  CiTester tester(data, ci);
  CandidateSets skeleton;
  switch (restrict) {
    case RestrictMethod::Mmpc:
      skeleton = mmpc(tester, k);
      break;
    case RestrictMethod::HitonStyle:
      skeleton = hiton_style(tester, k);
      break;
    case RestrictMethod::GsBlankets:
    case RestrictMethod::IambBlankets:
      skeleton = blanket_candidates(tester, restrict, k);
      break;
  }
  if (diag) diag->tests_run = tester.tests_run();
  return maximize_restricted(data, skeleton, maximize, search, k, diag);
}

Dag mmhc(const Dataset& data, const CiConfig& ci, const SearchConfig& search, const Knowledge& k,
         HybridDiagnostics* diag) {
  return restrict_maximize(data, RestrictMethod::Mmpc, MaximizeMethod::HillClimb, ci, search, k, diag);
}

}  // namespace bnsl
