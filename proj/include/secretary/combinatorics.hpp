#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "secretary/random.hpp"

namespace secretary {

/// C(n, k) if it fits in 64 bits.
inline std::optional<std::uint64_t> binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  detail::uint128 r = 1;
  for (std::uint64_t i = 0; i < k; ++i) {
    r = r * (n - i) / (i + 1);
    if (r > UINT64_MAX) return std::nullopt;
  }
  return static_cast<std::uint64_t>(r);
}

/// C(n, k) in floating point, for magnitudes past 64 bits.
inline long double binomial_ld(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0.0L;
  k = std::min(k, n - k);
  long double r = 1.0L;
  for (std::uint64_t i = 0; i < k; ++i) {
    r = r * static_cast<long double>(n - i) / static_cast<long double>(i + 1);
  }
  return r;
}

/// n! if it fits in 64 bits.
inline std::optional<std::uint64_t> factorial(std::uint64_t n) {
  std::uint64_t r = 1;
  for (std::uint64_t i = 2; i <= n; ++i) {
    if (r > UINT64_MAX / i) return std::nullopt;
    r *= i;
  }
  return r;
}

/// Writes the `rank`-th k-subset of {0..n-1} in lexicographic order.
inline void unrank_combination(std::uint64_t n, std::uint64_t k, std::uint64_t rank,
                               std::vector<std::size_t>& out) {
  out.clear();
  std::uint64_t next = 0;
  for (std::uint64_t slot = 0; slot < k; ++slot) {
    for (;; ++next) {
      // Subsets that start with `next` at this slot.
      const std::uint64_t block = *binomial(n - next - 1, k - slot - 1);
      if (rank < block) break;
      rank -= block;
    }
    out.push_back(static_cast<std::size_t>(next));
    ++next;
  }
}

/// Lexicographic rank of the sorted k-subset `subset` of {0..n-1}.
inline std::uint64_t rank_combination(std::uint64_t n, const std::vector<std::size_t>& subset) {
  const std::uint64_t k = subset.size();
  std::uint64_t rank = 0;
  std::uint64_t next = 0;
  for (std::uint64_t slot = 0; slot < k; ++slot) {
    for (; next < subset[slot]; ++next) rank += *binomial(n - next - 1, k - slot - 1);
    ++next;
  }
  return rank;
}

/// Calls f(span of indices) for every k-subset of {0..n-1}, lexicographically.
template <typename F>
void for_each_combination(std::size_t n, std::size_t k, F&& f) {
  if (k > n) return;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  for (;;) {
    f(static_cast<const std::vector<std::size_t>&>(idx));
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace secretary
