// Copyright 2026 The linematch Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Minimal k-tuple partition of points on a line by sort-and-chunk, and the
// column balancing that spreads sorted members across treatment slots.

#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <string>
#include <vector>

#include "linematch/core.hpp"

namespace linematch {

struct MatchOptions {
  /// Allow k beyond max_certified_k(). The result is still the sorted
  /// chunking but its optimality is no longer backed by a certificate.
  bool uncertified = false;
};

/// Checks the preconditions of match_line without doing any work.
inline void check_match_request(std::size_t item_count, std::size_t k,
                                WeightKind weight, const MatchOptions& options) {
  if (k < 2) fail(ErrorCode::kInvalidInput, "tuple size k must be at least 2");
  if (item_count % k != 0) {
    fail(ErrorCode::kSize, "item count " + std::to_string(item_count) +
                               " is not divisible by k=" + std::to_string(k));
  }
  if (!options.uncertified && k > max_certified_k(weight)) {
    fail(ErrorCode::kRange,
         "k=" + std::to_string(k) + " is outside the certified range for " +
             std::string(to_string(weight)) + " (abs: k <= 16, sq: k <= 8); " +
             "use the uncertified override to run anyway");
  }
}

/// Sorts the items and cuts them into consecutive blocks of k. Runs in
/// O(N log N); the result is minimal whenever k is in the certified range.
template <Score S>
BasicKPartition<S> match_line(std::vector<BasicScoredItem<S>> items, std::size_t k,
                              WeightKind weight, const MatchOptions& options = {}) {
  check_match_request(items.size(), k, weight, options);
  return BasicKPartition<S>(k, weight, sort_items(std::move(items)));
}

template <Score S>
struct BasicBalancedPartition {
  BasicKPartition<S> partition;
  /// slot_of_member[t][i]: slot (0-based) taken by member i of tuple t,
  /// members in the tuple's sorted order. Each row is a permutation.
  std::vector<std::vector<std::size_t>> slot_of_member;
  /// Tuples in the order they were placed.
  std::vector<std::size_t> placement_order;
  std::vector<S> column_sums;
  std::vector<double> column_means;

  /// max column sum - min column sum.
  S spread() const {
    if (column_sums.empty()) return S{};
    auto [lo, hi] = std::minmax_element(column_sums.begin(), column_sums.end());
    return *hi - *lo;
  }
};

using BalancedPartition = BasicBalancedPartition<double>;

namespace detail {

template <Score S>
S spread_after(const std::vector<S>& sums, std::span<const BasicScoredItem<S>> tuple,
               const std::vector<std::size_t>& slot_of_member) {
  S lo{};
  S hi{};
  for (std::size_t slot = 0; slot < sums.size(); ++slot) {
    S value = sums[slot];
    for (std::size_t i = 0; i < tuple.size(); ++i) {
      if (slot_of_member[i] == slot) value += tuple[i].score;
    }
    if (slot == 0 || value < lo) lo = value;
    if (slot == 0 || value > hi) hi = value;
  }
  return hi - lo;
}

// Largest k for which every slot permutation is tried.
inline constexpr std::size_t kMaxEnumeratedSlots = 8;

}  // namespace detail

/// Places tuples in nonincreasing within-distance order (ties by the first
/// member's input rank). The first keeps its sorted order; each later tuple
/// takes the slot permutation minimising the spread of the running column
/// sums, ties going to the lexicographically smallest permutation.
///
/// For k above 8 the permutation is the anti-sorted one (largest member to
/// the smallest running sum). That assignment attains the same minimal
/// spread as full enumeration, but ties may resolve differently.
template <Score S>
BasicBalancedPartition<S> balance_columns(BasicKPartition<S> partition) {
  BasicBalancedPartition<S> out;
  const std::size_t k = partition.k();
  const std::size_t n = partition.size();
  out.slot_of_member.assign(n, {});
  out.column_sums.assign(k, S{});

  out.placement_order.resize(n);
  std::iota(out.placement_order.begin(), out.placement_order.end(), std::size_t{0});
  std::sort(out.placement_order.begin(), out.placement_order.end(),
            [&](std::size_t a, std::size_t b) {
              if (partition.within(a) != partition.within(b)) {
                return partition.within(a) > partition.within(b);
              }
              return partition.tuple(a)[0].input_rank < partition.tuple(b)[0].input_rank;
            });

  std::vector<std::size_t> identity(k);
  std::iota(identity.begin(), identity.end(), std::size_t{0});

  bool first = true;
  for (std::size_t t : out.placement_order) {
    auto tuple = partition.tuple(t);
    std::vector<std::size_t> chosen = identity;
    if (!first && k <= detail::kMaxEnumeratedSlots) {
      std::vector<std::size_t> perm = identity;
      S best = detail::spread_after(out.column_sums, tuple, perm);
      while (std::next_permutation(perm.begin(), perm.end())) {
        S value = detail::spread_after(out.column_sums, tuple, perm);
        if (value < best) {
          best = value;
          chosen = perm;
        }
      }
    } else if (!first) {
      std::vector<std::size_t> slots = identity;
      std::stable_sort(slots.begin(), slots.end(), [&](std::size_t a, std::size_t b) {
        return out.column_sums[a] < out.column_sums[b];
      });
      for (std::size_t r = 0; r < k; ++r) chosen[k - 1 - r] = slots[r];
    }
    for (std::size_t i = 0; i < k; ++i) out.column_sums[chosen[i]] += tuple[i].score;
    out.slot_of_member[t] = std::move(chosen);
    first = false;
  }

  out.column_means.assign(k, 0.0);
  if (n > 0) {
    for (std::size_t j = 0; j < k; ++j) {
      out.column_means[j] = static_cast<double>(out.column_sums[j]) / static_cast<double>(n);
    }
  }
  out.partition = std::move(partition);
  return out;
}

}  // namespace linematch
