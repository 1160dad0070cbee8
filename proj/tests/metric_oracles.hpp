#pragma once

// Quadratic reference implementations of the ranking metrics, for tests only.

#include <algorithm>
#include <cstdint>
#include <utility>
#include <vector>

namespace midas::testing {

/// Fraction of (positive, negative) pairs ordered correctly, ties worth one half.
inline double pairwise_auc(const std::vector<double>& s, const std::vector<std::uint8_t>& l) {
  std::uint64_t twice_wins = 0, pos = 0, neg = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    (l[i] ? pos : neg) += 1;
    if (!l[i]) continue;
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (l[j]) continue;
      if (s[i] > s[j]) twice_wins += 2;
      if (s[i] == s[j]) twice_wins += 1;
    }
  }
  return static_cast<double>(twice_wins) / (2.0 * static_cast<double>(pos) * static_cast<double>(neg));
}

/// Each item's rank is 1 + the number of items ahead of it (higher score, or
/// equal score earlier in the input). Precision at a positive's rank counts the
/// positives at or above that rank. Precisions are averaged walking ranks upward.
inline double rank_walk_average_precision(const std::vector<double>& s,
                                          const std::vector<std::uint8_t>& l) {
  const std::size_t n = s.size();
  std::vector<std::size_t> rank(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t ahead = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (s[j] > s[i] || (s[j] == s[i] && j < i)) ++ahead;
    }
    rank[i] = ahead + 1;
  }
  std::vector<std::pair<std::size_t, double>> at_positive;
  for (std::size_t i = 0; i < n; ++i) {
    if (!l[i]) continue;
    std::size_t hits = 0;
    for (std::size_t j = 0; j < n; ++j) hits += l[j] && rank[j] <= rank[i];
    at_positive.emplace_back(rank[i], static_cast<double>(hits) / static_cast<double>(rank[i]));
  }
  std::sort(at_positive.begin(), at_positive.end());
  double sum = 0.0;
  for (const auto& [r, p] : at_positive) sum += p;
  return sum / static_cast<double>(at_positive.size());
}

}  // namespace midas::testing
