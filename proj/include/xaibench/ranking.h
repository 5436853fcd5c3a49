/*
 * Copyright 2026 The xai-bench Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Rank statistics over score vectors: descending rankings with index
// tie-breaking, Kendall's tau-b and step-interpolated average precision.

#ifndef XAIBENCH_RANKING_H_
#define XAIBENCH_RANKING_H_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <vector>

#include <Eigen/Core>

namespace xaibench {

// Positions sorted by descending score; equal scores keep ascending index.
template <typename Derived>
std::vector<int> rank_descending(const Eigen::DenseBase<Derived>& scores) {
  std::vector<int> order(static_cast<std::size_t>(scores.size()));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return scores(a) > scores(b);
  });
  return order;
}

// Pair statistics behind tau-b. All counts are over unordered pairs.
struct KendallCounts {
  std::int64_t pairs = 0;     // n (n - 1) / 2
  std::int64_t ties_x = 0;    // pairs tied in x (including joint ties)
  std::int64_t ties_y = 0;    // pairs tied in y (including joint ties)
  std::int64_t ties_xy = 0;   // pairs tied in both
  std::int64_t balance = 0;   // concordant minus discordant

  friend bool operator==(const KendallCounts&, const KendallCounts&) = default;
};

namespace ranking_detail {

inline std::int64_t tied_pairs(std::int64_t run) { return run * (run - 1) / 2; }

// Sorts `v` ascending and returns the number of strict inversions.
template <typename Scalar>
std::int64_t sort_counting_inversions(std::vector<Scalar>& v,
                                      std::vector<Scalar>& buffer,
                                      std::size_t begin, std::size_t end) {
  if (end - begin < 2) return 0;
  const std::size_t mid = begin + (end - begin) / 2;
  std::int64_t swaps = sort_counting_inversions(v, buffer, begin, mid) +
                       sort_counting_inversions(v, buffer, mid, end);
  std::size_t i = begin, j = mid, k = begin;
  while (i < mid && j < end) {
    if (v[j] < v[i]) {
      swaps += static_cast<std::int64_t>(mid - i);
      buffer[k++] = v[j++];
    } else {
      buffer[k++] = v[i++];
    }
  }
  while (i < mid) buffer[k++] = v[i++];
  while (j < end) buffer[k++] = v[j++];
  std::copy(buffer.begin() + begin, buffer.begin() + end, v.begin() + begin);
  return swaps;
}

}  // namespace ranking_detail

// Knight's O(n log n) algorithm.
template <typename DerivedX, typename DerivedY>
KendallCounts kendall_counts(const Eigen::DenseBase<DerivedX>& x,
                             const Eigen::DenseBase<DerivedY>& y) {
  using Scalar = typename DerivedY::Scalar;
  const auto n = static_cast<std::size_t>(x.size());
  KendallCounts counts;
  counts.pairs = ranking_detail::tied_pairs(static_cast<std::int64_t>(n));
  if (n < 2) return counts;

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (x(a) != x(b)) return x(a) < x(b);
    return y(a) < y(b);
  });

  std::int64_t run_x = 1, run_xy = 1;
  for (std::size_t i = 1; i < n; ++i) {
    const bool same_x = x(order[i]) == x(order[i - 1]);
    const bool same_xy = same_x && y(order[i]) == y(order[i - 1]);
    run_x = same_x ? run_x + 1 : 1;
    run_xy = same_xy ? run_xy + 1 : 1;
    if (same_x) counts.ties_x += run_x - 1;
    if (same_xy) counts.ties_xy += run_xy - 1;
  }

  std::vector<Scalar> ys(n), buffer(n);
  for (std::size_t i = 0; i < n; ++i) ys[i] = y(order[i]);
  const std::int64_t discordant =
      ranking_detail::sort_counting_inversions(ys, buffer, 0, n);

  std::int64_t run_y = 1;
  for (std::size_t i = 1; i < n; ++i) {
    run_y = ys[i] == ys[i - 1] ? run_y + 1 : 1;
    if (run_y > 1) counts.ties_y += run_y - 1;
  }

  counts.balance = counts.pairs - counts.ties_x - counts.ties_y +
                   counts.ties_xy - 2 * discordant;
  return counts;
}

// Nullopt when either vector has no untied pair.
inline std::optional<double> tau_b_from_counts(const KendallCounts& c) {
  const std::int64_t untied_x = c.pairs - c.ties_x;
  const std::int64_t untied_y = c.pairs - c.ties_y;
  if (untied_x == 0 || untied_y == 0) return std::nullopt;
  return static_cast<double>(c.balance) /
         std::sqrt(static_cast<double>(untied_x) *
                   static_cast<double>(untied_y));
}

template <typename DerivedX, typename DerivedY>
std::optional<double> kendall_tau_b(const Eigen::DenseBase<DerivedX>& x,
                                    const Eigen::DenseBase<DerivedY>& y) {
  return tau_b_from_counts(kendall_counts(x, y));
}

// Average precision of the descending ranking of `scores` against a binary
// relevance mask: sum over relevant ranks of precision@rank / |relevant|.
// Nullopt when nothing is relevant.
template <typename Derived>
std::optional<double> average_precision(const Eigen::DenseBase<Derived>& scores,
                                        const std::vector<bool>& relevant) {
  const auto total = std::count(relevant.begin(), relevant.end(), true);
  if (total == 0) return std::nullopt;
  const std::vector<int> order = rank_descending(scores);
  double area = 0.0;
  std::int64_t hits = 0;
  for (std::size_t rank = 0; rank < order.size(); ++rank) {
    if (!relevant[static_cast<std::size_t>(order[rank])]) continue;
    ++hits;
    area += static_cast<double>(hits) / static_cast<double>(rank + 1);
  }
  return area / static_cast<double>(total);
}

}  // namespace xaibench

#endif  // XAIBENCH_RANKING_H_
