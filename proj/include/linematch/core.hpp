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

// Domain types shared by every module: scored items, the two within-tuple
// distances, the deterministic sort order and k-tuple partitions.

#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

#include "linematch/error.hpp"

namespace linematch {

/// Scores are plain arithmetic values. Integral scores give exact
/// arithmetic throughout, floating scores are what the CLI reads.
template <class T>
concept Score = (std::signed_integral<T> || std::floating_point<T>) &&
                !std::same_as<T, bool>;

enum class WeightKind { kAbsoluteDifference, kSquaredDifference };

constexpr std::string_view to_string(WeightKind kind) {
  return kind == WeightKind::kAbsoluteDifference ? "abs" : "sq";
}

inline std::optional<WeightKind> parse_weight_kind(std::string_view text) {
  if (text == "abs") return WeightKind::kAbsoluteDifference;
  if (text == "sq") return WeightKind::kSquaredDifference;
  return std::nullopt;
}

/// Largest tuple size for which the sorted-split premise has been machine
/// checked: 16 for absolute differences, 8 for squared differences.
constexpr std::size_t max_certified_k(WeightKind kind) {
  return kind == WeightKind::kAbsoluteDifference ? 16 : 8;
}

template <Score S>
struct BasicScoredItem {
  std::string id;
  S score{};
  std::size_t input_rank = 0;

  friend bool operator==(const BasicScoredItem&,
                         const BasicScoredItem&) = default;
};

using ScoredItem = BasicScoredItem<double>;

/// Total order used everywhere: score, then input rank.
template <Score S>
constexpr bool sorted_before(const BasicScoredItem<S>& a,
                             const BasicScoredItem<S>& b) {
  if (a.score < b.score) return true;
  if (b.score < a.score) return false;
  return a.input_rank < b.input_rank;
}

/// Builds items with ids `<prefix><index>` and input ranks 0..N-1.
template <Score S>
std::vector<BasicScoredItem<S>> make_items(std::span<const S> scores,
                                           std::string_view prefix = "") {
  std::vector<BasicScoredItem<S>> items;
  items.reserve(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) {
    items.push_back({std::string(prefix) + std::to_string(i), scores[i], i});
  }
  return items;
}

template <Score S>
std::vector<BasicScoredItem<S>> make_items(const std::vector<S>& scores,
                                           std::string_view prefix = "") {
  return make_items(std::span<const S>(scores), prefix);
}

/// Stable nondecreasing order by (score, input_rank). Rejects NaN and
/// infinite scores with ErrorCode::kParse.
template <Score S>
std::vector<BasicScoredItem<S>> sort_items(std::vector<BasicScoredItem<S>> items) {
  if constexpr (std::floating_point<S>) {
    for (const auto& item : items) {
      if (!std::isfinite(item.score)) {
        fail(ErrorCode::kParse, "non-finite score for item '" + item.id + "'");
      }
    }
  }
  // Sort compact keys, then gather; moving whole items through the sort
  // costs more than the permutation.
  struct Key {
    S score;
    std::size_t rank;
    std::size_t index;
  };
  std::vector<Key> keys(items.size());
  for (std::size_t i = 0; i < items.size(); ++i) {
    keys[i] = {items[i].score, items[i].input_rank, i};
  }
  std::sort(keys.begin(), keys.end(), [](const Key& a, const Key& b) {
    if (a.score != b.score) return a.score < b.score;
    if (a.rank != b.rank) return a.rank < b.rank;
    return a.index < b.index;
  });
  std::vector<BasicScoredItem<S>> out;
  out.reserve(items.size());
  for (const Key& key : keys) out.push_back(std::move(items[key.index]));
  return out;
}

// ---------------------------------------------------------------------------
// Within-tuple distances. Inputs must be sorted nondecreasing.

/// Sum of |x_j - x_i| over all pairs, evaluated as the linear form
/// sum_i (2i - k - 1) x_i (1-based i) which is valid on sorted input.
template <Score S>
S within_distance_abs(std::span<const S> sorted) {
  const auto k = static_cast<std::int64_t>(sorted.size());
  S total{};
  for (std::int64_t t = 0; t < k; ++t) {
    total += static_cast<S>(2 * t + 1 - k) * sorted[static_cast<std::size_t>(t)];
  }
  return total;
}

/// Sum of (x_j - x_i)^2 over all pairs. Integral scores use the exact
/// k*sum(x^2) - (sum x)^2 expansion; floating scores use k*sum((x - mean)^2).
template <Score S>
S within_distance_sq(std::span<const S> values) {
  const auto k = static_cast<S>(values.size());
  if (values.empty()) return S{};
  if constexpr (std::integral<S>) {
    S sum{};
    S sum_sq{};
    for (S x : values) {
      sum += x;
      sum_sq += x * x;
    }
    return k * sum_sq - sum * sum;
  } else {
    S mean = std::accumulate(values.begin(), values.end(), S{}) / k;
    S dev{};
    for (S x : values) dev += (x - mean) * (x - mean);
    return k * dev;
  }
}

template <Score S>
S within_distance(WeightKind kind, std::span<const S> sorted) {
  return kind == WeightKind::kAbsoluteDifference ? within_distance_abs(sorted)
                                                 : within_distance_sq(sorted);
}

/// Within-distance of a tuple of items sorted by sorted_before().
template <Score S>
S within_distance(WeightKind kind, std::span<const BasicScoredItem<S>> tuple) {
  // Small tuples dominate; avoid the heap for them.
  constexpr std::size_t kInline = 16;
  if (tuple.size() <= kInline) {
    S buffer[kInline];
    for (std::size_t i = 0; i < tuple.size(); ++i) buffer[i] = tuple[i].score;
    return within_distance(kind, std::span<const S>(buffer, tuple.size()));
  }
  std::vector<S> scores(tuple.size());
  for (std::size_t i = 0; i < tuple.size(); ++i) scores[i] = tuple[i].score;
  return within_distance(kind, std::span<const S>(scores));
}

/// Edge weight between two scores: |x - y| or (x - y)^2.
template <Score S>
constexpr S edge_weight(WeightKind kind, S x, S y) {
  const S d = x < y ? y - x : x - y;
  return kind == WeightKind::kAbsoluteDifference ? d : d * d;
}

// ---------------------------------------------------------------------------

/// A partition of kn items into n tuples of size k. Members are stored
/// contiguously, tuple by tuple; each tuple is kept sorted.
template <Score S>
class BasicKPartition {
 public:
  using Item = BasicScoredItem<S>;
  using Tuple = std::span<const Item>;

  BasicKPartition() = default;

  /// `grouped` holds the members tuple by tuple (k consecutive entries
  /// per tuple, any order inside a tuple).
  BasicKPartition(std::size_t k, WeightKind weight, std::vector<Item> grouped)
      : k_(k), weight_(weight), members_(std::move(grouped)) {
    if (k_ < 2) fail(ErrorCode::kInvalidInput, "tuple size k must be at least 2");
    if (members_.size() % k_ != 0) {
      fail(ErrorCode::kSize, "partition member count " +
                                 std::to_string(members_.size()) +
                                 " is not divisible by k=" + std::to_string(k_));
    }
    for (std::size_t begin = 0; begin < members_.size(); begin += k_) {
      auto first = members_.begin() + static_cast<std::ptrdiff_t>(begin);
      if (!std::is_sorted(first, first + static_cast<std::ptrdiff_t>(k_),
                          sorted_before<S>)) {
        std::sort(first, first + static_cast<std::ptrdiff_t>(k_), sorted_before<S>);
      }
    }
    within_.resize(size());
    total_ = S{};
    for (std::size_t i = 0; i < size(); ++i) {
      within_[i] = within_distance(weight_, tuple(i));
      total_ += within_[i];
    }
  }

  std::size_t k() const { return k_; }
  WeightKind weight() const { return weight_; }
  /// Number of tuples.
  std::size_t size() const { return k_ == 0 ? 0 : members_.size() / k_; }
  Tuple tuple(std::size_t i) const {
    return Tuple(members_).subspan(i * k_, k_);
  }
  S within(std::size_t i) const { return within_[i]; }
  S total_within() const { return total_; }
  std::span<const Item> members() const { return members_; }

  /// Input ranks per tuple, for comparisons that ignore ids.
  std::vector<std::vector<std::size_t>> rank_groups() const {
    std::vector<std::vector<std::size_t>> groups(size());
    for (std::size_t i = 0; i < size(); ++i) {
      for (const Item& item : tuple(i)) groups[i].push_back(item.input_rank);
    }
    return groups;
  }

 private:
  std::size_t k_ = 0;
  WeightKind weight_ = WeightKind::kAbsoluteDifference;
  std::vector<Item> members_;
  std::vector<S> within_;
  S total_{};
};

using KPartition = BasicKPartition<double>;

/// Canonical form of a grouping: each group sorted, groups ordered by
/// their first member. Two partitions of the same items are equal iff
/// their canonical rank groups are equal.
inline std::vector<std::vector<std::size_t>> canonical_groups(
    std::vector<std::vector<std::size_t>> groups) {
  for (auto& group : groups) std::sort(group.begin(), group.end());
  std::sort(groups.begin(), groups.end());
  return groups;
}

// ---------------------------------------------------------------------------

template <Score S>
struct VarianceIdentity {
  S lhs{};  // sum_i sum_j (x_j - x_i)^2
  S rhs{};  // 2N sum_i (x_i - mean)^2
};

/// Evaluates both sides of sum_i sum_j (x_j - x_i)^2 = 2N sum_i (x_i - mean)^2.
/// For integral scores both sides are exact: the right side is computed from
/// the scaled deviations (N x_i - sum) as 2 sum (N x_i - sum)^2 / N.
template <Score S>
VarianceIdentity<S> variance_identity_check(std::span<const S> values) {
  const std::size_t n = values.size();
  if (n <= 1) {
    fail(ErrorCode::kInvalidInput, "variance identity needs at least two values");
  }
  VarianceIdentity<S> out;
  for (S xi : values) {
    for (S xj : values) out.lhs += (xj - xi) * (xj - xi);
  }
  const S sum = std::accumulate(values.begin(), values.end(), S{});
  const S count = static_cast<S>(n);
  if constexpr (std::integral<S>) {
    S scaled{};
    for (S x : values) scaled += (count * x - sum) * (count * x - sum);
    out.rhs = 2 * scaled / count;
  } else {
    const S mean = sum / count;
    S dev{};
    for (S x : values) dev += (x - mean) * (x - mean);
    out.rhs = 2 * count * dev;
  }
  return out;
}

}  // namespace linematch
