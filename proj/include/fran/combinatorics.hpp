#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

namespace fran {

// Sorted, 1-based subset of [n].
using Subset = std::vector<int>;

constexpr std::int64_t binomial(std::int64_t n, std::int64_t k) {
  if (k < 0 || n < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  std::int64_t result = 1;
  for (std::int64_t i = 1; i <= k; ++i) result = result * (n - k + i) / i;
  return result;
}

// Advances `state` to the next k-subset of [n] in lexicographic order.
// Returns false (leaving state untouched) after the last one.
inline bool next_subset(Subset& state, int n) {
  const int k = static_cast<int>(state.size());
  int i = k - 1;
  while (i >= 0 && state[i] == n - k + i + 1) --i;
  if (i < 0) return false;
  ++state[i];
  for (int j = i + 1; j < k; ++j) state[j] = state[j - 1] + 1;
  return true;
}

// All k-subsets of [n], lexicographic.
inline std::vector<Subset> k_subsets(int n, int k) {
  std::vector<Subset> out;
  if (k < 0 || k > n) return out;
  out.reserve(static_cast<std::size_t>(binomial(n, k)));
  Subset s(k);
  for (int j = 0; j < k; ++j) s[j] = j + 1;
  do {
    out.push_back(s);
  } while (next_subset(s, n));
  return out;
}

// 0-based lexicographic rank of a k-subset of [n].
inline std::int64_t subset_rank(const Subset& s, int n) {
  const int k = static_cast<int>(s.size());
  std::int64_t rank = 0;
  int prev = 0;
  for (int j = 0; j < k; ++j) {
    for (int v = prev + 1; v < s[j]; ++v) rank += binomial(n - v, k - j - 1);
    prev = s[j];
  }
  return rank;
}

inline bool contains(const Subset& s, int v) { return std::binary_search(s.begin(), s.end(), v); }

inline Subset without(const Subset& s, int v) {
  Subset out;
  out.reserve(s.size());
  for (int x : s)
    if (x != v) out.push_back(x);
  return out;
}

inline Subset complement(const Subset& s, int n) {
  Subset out;
  for (int v = 1; v <= n; ++v)
    if (!contains(s, v)) out.push_back(v);
  return out;
}

// "{1,2}" style, matching how subsets are written in tables.
inline std::string subset_string(const Subset& s, const char* sep = ",") {
  std::string out;
  for (std::size_t j = 0; j < s.size(); ++j) {
    if (j) out += sep;
    out += std::to_string(s[j]);
  }
  return out;
}

}  // namespace fran
