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

// Brute-force ground truth: exhaustive k-tuple partitions, the greedy
// baseline and exhaustive perfect matchings.

#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "linematch/core.hpp"
#include "linematch/matching.hpp"

namespace linematch {

inline constexpr std::uint64_t kDefaultEnumerationBudget = 10'000'000;

namespace detail {

inline std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) {
    return std::numeric_limits<std::uint64_t>::max();
  }
  return a * b;
}

/// Advances `combo` (strictly increasing indices in [0, m)) to the next
/// combination in lexicographic order. Returns false after the last one.
inline bool next_combination(std::vector<std::size_t>& combo, std::size_t m) {
  const std::size_t r = combo.size();
  for (std::size_t i = r; i-- > 0;) {
    if (combo[i] < m - r + i) {
      ++combo[i];
      for (std::size_t j = i + 1; j < r; ++j) combo[j] = combo[j - 1] + 1;
      return true;
    }
  }
  return false;
}

}  // namespace detail

/// C(n, r), saturating at UINT64_MAX.
inline std::uint64_t binomial(std::uint64_t n, std::uint64_t r) {
  if (r > n) return 0;
  r = std::min(r, n - r);
  // Track the exact value in 128 bits; C(n, i) * (n - i) / (i + 1) stays
  // integral at every step.
  unsigned __int128 value = 1;
  for (std::uint64_t i = 0; i < r; ++i) {
    value = value * (n - i) / (i + 1);
    if (value > std::numeric_limits<std::uint64_t>::max()) {
      return std::numeric_limits<std::uint64_t>::max();
    }
  }
  return static_cast<std::uint64_t>(value);
}

/// Enumerates every partition of {0, .., N-1} into groups of k exactly once.
/// Each group is anchored at the smallest index not yet used; its k-1
/// companions run through the combinations of the remaining indices in
/// lexicographic order, so partitions come out in increasing lexicographic
/// order of their flattened group lists.
class PartitionEnumerator {
 public:
  PartitionEnumerator(std::size_t item_count, std::size_t k)
      : item_count_(item_count), k_(k) {
    if (k_ < 1) fail(ErrorCode::kInvalidInput, "group size must be positive");
    if (item_count_ % k_ != 0) {
      fail(ErrorCode::kSize, "item count is not divisible by the group size");
    }
    levels_ = item_count_ / k_;
    combos_.assign(levels_, std::vector<std::size_t>(k_ - 1));
    remaining_.assign(levels_ + 1, {});
    remaining_[0].resize(item_count_);
    std::iota(remaining_[0].begin(), remaining_[0].end(), std::size_t{0});
    groups_.assign(levels_, std::vector<std::size_t>(k_));
    rebuild_from(0);
  }

  /// Number of partitions: prod_t C(N - t*k - 1, k - 1), which equals
  /// (kn)! / ((k!)^n n!). Saturates at UINT64_MAX.
  static std::uint64_t count(std::size_t item_count, std::size_t k) {
    std::uint64_t total = 1;
    for (std::size_t left = item_count; left >= k && left > 0; left -= k) {
      total = detail::saturating_mul(total, binomial(left - 1, k - 1));
    }
    return total;
  }

  const std::vector<std::vector<std::size_t>>& current() const { return groups_; }

  bool advance() {
    for (std::size_t level = levels_; level-- > 0;) {
      const std::size_t pool = remaining_[level].size() - 1;
      if (detail::next_combination(combos_[level], pool)) {
        materialize(level);
        rebuild_from(level + 1);
        return true;
      }
    }
    return false;
  }

 private:
  void materialize(std::size_t level) {
    const auto& pool = remaining_[level];
    auto& group = groups_[level];
    group[0] = pool[0];
    std::vector<bool> taken(pool.size(), false);
    taken[0] = true;
    for (std::size_t c = 0; c < combos_[level].size(); ++c) {
      group[c + 1] = pool[combos_[level][c] + 1];
      taken[combos_[level][c] + 1] = true;
    }
    auto& next = remaining_[level + 1];
    next.clear();
    for (std::size_t i = 0; i < pool.size(); ++i) {
      if (!taken[i]) next.push_back(pool[i]);
    }
  }

  void rebuild_from(std::size_t level) {
    for (std::size_t l = level; l < levels_; ++l) {
      std::iota(combos_[l].begin(), combos_[l].end(), std::size_t{0});
      materialize(l);
    }
  }

  std::size_t item_count_;
  std::size_t k_;
  std::size_t levels_ = 0;
  std::vector<std::vector<std::size_t>> combos_;
  std::vector<std::vector<std::size_t>> remaining_;
  std::vector<std::vector<std::size_t>> groups_;
};

namespace detail {

template <Score S>
BasicKPartition<S> partition_from_groups(const std::vector<BasicScoredItem<S>>& items,
                                         const std::vector<std::vector<std::size_t>>& groups,
                                         std::size_t k, WeightKind weight) {
  std::vector<BasicScoredItem<S>> grouped;
  grouped.reserve(items.size());
  for (const auto& group : groups) {
    for (std::size_t index : group) grouped.push_back(items[index]);
  }
  return BasicKPartition<S>(k, weight, std::move(grouped));
}

template <Score S>
S group_cost(const std::vector<BasicScoredItem<S>>& sorted_items,
             const std::vector<std::size_t>& ascending_group, WeightKind weight,
             std::vector<S>& scratch) {
  scratch.clear();
  for (std::size_t index : ascending_group) scratch.push_back(sorted_items[index].score);
  return within_distance(weight, std::span<const S>(scratch));
}

}  // namespace detail

/// Exhaustive minimum over all k-tuple partitions. Among minima the
/// lexicographically smallest (by sorted tuple contents) wins.
template <Score S>
BasicKPartition<S> brute_force_partition(std::vector<BasicScoredItem<S>> items, std::size_t k,
                                         WeightKind weight,
                                         std::uint64_t budget = kDefaultEnumerationBudget) {
  if (k < 2) fail(ErrorCode::kInvalidInput, "tuple size k must be at least 2");
  if (items.size() % k != 0) {
    fail(ErrorCode::kSize, "item count " + std::to_string(items.size()) +
                               " is not divisible by k=" + std::to_string(k));
  }
  const std::uint64_t count = PartitionEnumerator::count(items.size(), k);
  if (count > budget) {
    fail(ErrorCode::kBudget, "instance too large for oracle: " + std::to_string(count) +
                                 " partitions exceed the budget of " +
                                 std::to_string(budget));
  }
  // Indices into the sorted list make every ascending group a sorted tuple.
  items = sort_items(std::move(items));
  PartitionEnumerator it(items.size(), k);
  std::vector<S> scratch;
  std::vector<std::vector<std::size_t>> best = it.current();
  bool have_best = false;
  S best_cost{};
  do {
    S cost{};
    for (const auto& group : it.current()) cost += detail::group_cost(items, group, weight, scratch);
    if (!have_best || cost < best_cost) {
      best_cost = cost;
      best = it.current();
      have_best = true;
    }
  } while (it.advance());
  return detail::partition_from_groups(items, best, k, weight);
}

/// Repeatedly removes the cheapest k-subset of the remaining items (ties:
/// lexicographically smallest sorted input ranks). A baseline, not a solver.
template <Score S>
BasicKPartition<S> greedy_match(std::vector<BasicScoredItem<S>> items, std::size_t k,
                                WeightKind weight,
                                std::uint64_t budget = kDefaultEnumerationBudget) {
  if (k < 2) fail(ErrorCode::kInvalidInput, "tuple size k must be at least 2");
  if (items.size() % k != 0) {
    fail(ErrorCode::kSize, "item count " + std::to_string(items.size()) +
                               " is not divisible by k=" + std::to_string(k));
  }
  items = sort_items(std::move(items));
  std::vector<std::size_t> remaining(items.size());
  std::iota(remaining.begin(), remaining.end(), std::size_t{0});
  std::vector<std::vector<std::size_t>> groups;
  std::vector<S> scratch;

  auto ranks_of = [&](const std::vector<std::size_t>& group) {
    std::vector<std::size_t> ranks;
    for (std::size_t index : group) ranks.push_back(items[index].input_rank);
    std::sort(ranks.begin(), ranks.end());
    return ranks;
  };

  while (!remaining.empty()) {
    const std::uint64_t subsets = binomial(remaining.size(), k);
    if (subsets > budget) {
      fail(ErrorCode::kBudget, "greedy step needs " + std::to_string(subsets) +
                                   " subsets, over the budget of " + std::to_string(budget));
    }
    std::vector<std::size_t> combo(k);
    std::iota(combo.begin(), combo.end(), std::size_t{0});
    std::vector<std::size_t> best_group;
    std::vector<std::size_t> best_ranks;
    S best_cost{};
    do {
      std::vector<std::size_t> group(k);
      for (std::size_t i = 0; i < k; ++i) group[i] = remaining[combo[i]];
      const S cost = detail::group_cost(items, group, weight, scratch);
      if (best_group.empty() || cost < best_cost) {
        best_cost = cost;
        best_group = group;
        best_ranks = ranks_of(group);
      } else if (cost == best_cost) {
        auto ranks = ranks_of(group);
        if (ranks < best_ranks) {
          best_group = group;
          best_ranks = std::move(ranks);
        }
      }
    } while (detail::next_combination(combo, remaining.size()));
    std::vector<std::size_t> rest;
    for (std::size_t index : remaining) {
      if (!std::binary_search(best_group.begin(), best_group.end(), index)) rest.push_back(index);
    }
    groups.push_back(std::move(best_group));
    remaining = std::move(rest);
  }
  return detail::partition_from_groups(items, groups, k, weight);
}

inline constexpr std::size_t kMaxOracleBipartite = 8;
inline constexpr std::size_t kMaxOracleTripartite = 6;

/// Exhaustive minimum perfect matching over all permutations (pairs of
/// permutations for tripartite). `instance(p, i, q, j)` gives edge weights.
/// Ties go to the lexicographically smallest permutation (pair).
template <class Instance>
auto brute_force_assignment(const Instance& instance, std::size_t n) {
  using W = decltype(instance(0, 0, 1, 0));
  const std::size_t arity = instance.arity();
  const std::size_t limit = arity == 2 ? kMaxOracleBipartite : kMaxOracleTripartite;
  if (n > limit) {
    fail(ErrorCode::kBudget, "oracle supports n <= " + std::to_string(limit) +
                                 " for arity " + std::to_string(arity) + ", got n=" +
                                 std::to_string(n));
  }
  BasicMatching<W> best;
  best.arity = arity;
  bool have_best = false;
  std::vector<std::size_t> b_of(n), c_of(n);
  std::iota(b_of.begin(), b_of.end(), std::size_t{0});
  std::vector<std::array<std::size_t, 3>> tuples(n);
  do {
    std::iota(c_of.begin(), c_of.end(), std::size_t{0});
    do {
      for (std::size_t i = 0; i < n; ++i) tuples[i] = {i, b_of[i], arity == 3 ? c_of[i] : 0};
      const W weight = matching_weight(instance, arity, tuples);
      if (!have_best || weight < best.weight) {
        best.weight = weight;
        best.tuples = tuples;
        have_best = true;
      }
    } while (arity == 3 && std::next_permutation(c_of.begin(), c_of.end()));
  } while (std::next_permutation(b_of.begin(), b_of.end()));
  return best;
}

template <Score S>
BasicMatching<S> brute_force_assignment(const BasicMultipartiteInstance<S>& instance) {
  return brute_force_assignment(instance, instance.n());
}

inline Matching brute_force_assignment(const TripartiteWeights& weights) {
  return brute_force_assignment(weights, weights.n);
}

}  // namespace linematch
