#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace bnsl::detail {

/// Calls fn(subset) for every size-k subset of pool, in lexicographic order
/// of positions. Stops early when fn returns true; returns whether it did.
template <typename Fn>
bool for_each_subset(std::span<const int> pool, std::size_t k, Fn&& fn) {
  if (k > pool.size()) return false;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  std::vector<int> subset(k);
  for (;;) {
    for (std::size_t i = 0; i < k; ++i) subset[i] = pool[idx[i]];
    if (fn(static_cast<const std::vector<int>&>(subset))) return true;
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == pool.size() - k + (i - 1)) --i;
    if (i == 0) return false;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

/// Every subset of pool with size <= max_size, smallest sizes first.
template <typename Fn>
bool for_each_subset_upto(std::span<const int> pool, std::size_t max_size, Fn&& fn) {
  for (std::size_t k = 0; k <= max_size && k <= pool.size(); ++k) {
    if (for_each_subset(pool, k, fn)) return true;
  }
  return false;
}

}  // namespace bnsl::detail
