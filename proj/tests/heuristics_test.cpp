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

#include "linematch/heuristics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "gtest/gtest.h"
#include "linematch/line_match.hpp"
#include "linematch/multipartite.hpp"
#include "test_oracles.hpp"

namespace linematch {
namespace {

using I64 = std::int64_t;
constexpr WeightKind kAbs = WeightKind::kAbsoluteDifference;
constexpr WeightKind kSq = WeightKind::kSquaredDifference;

std::vector<EuclideanPoint> planar(std::mt19937_64& rng, std::size_t count) {
  std::uniform_real_distribution<double> dist(0, 100);
  std::vector<EuclideanPoint> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back({"p" + std::to_string(i), {dist(rng), dist(rng)}});
  return out;
}

// Brute-force minimum of summed within-triple distances.
double optimal_triples(const std::vector<EuclideanPoint>& pts) {
  std::vector<std::vector<double>> coords;
  for (const auto& p : pts) coords.push_back(p.coords);
  PartitionEnumerator it(pts.size(), 3);
  double best = 1e300;
  do {
    best = std::min(best, grouping_cost(coords, it.current()));
  } while (it.advance());
  return best;
}

// Sort by x and cut into consecutive triples.
double projection_baseline(const std::vector<EuclideanPoint>& pts) {
  std::vector<std::size_t> order(pts.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return pts[a].coords[0] < pts[b].coords[0]; });
  std::vector<std::vector<double>> coords;
  for (const auto& p : pts) coords.push_back(p.coords);
  std::vector<std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < order.size(); i += 3) groups.push_back({order[i], order[i + 1], order[i + 2]});
  return grouping_cost(coords, groups);
}

void expect_partition(const TripleMatchResult& r, std::size_t count) {
  std::vector<bool> used(count, false);
  for (const auto& t : r.triples) {
    for (std::size_t v : t) {
      ASSERT_LT(v, count);
      ASSERT_FALSE(used[v]);
      used[v] = true;
    }
  }
  EXPECT_EQ(r.triples.size() * 3, count);
}

TEST(LocalSearchTest, FixesGreedyOnReferenceInstance) {
  const std::vector<I64> scores{1, 3, 4, 5, 8, 9};
  auto greedy = greedy_match(make_items(scores), 3, kAbs);
  ASSERT_EQ(greedy.total_within(), 20);
  auto improved = local_search_2tuple(greedy);
  EXPECT_EQ(improved.total_within(), 14);
}

TEST(LocalSearchTest, LeavesLineOptimumUnchanged) {
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t k = 2 + trial % 4;
    auto scores = testing::random_ints(rng, 4 * k, -30, 30);
    for (WeightKind w : {kAbs, kSq}) {
      auto p = match_line(make_items(scores), k, w);
      auto q = local_search_2tuple(p);
      EXPECT_EQ(q.rank_groups(), p.rank_groups());
    }
  }
}

TEST(LocalSearchTest, MonotoneAndPairwiseOptimal) {
  std::mt19937_64 rng(62);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t k = 2 + trial % 3;
    auto scores = testing::random_ints(rng, 3 * k, 0, 50);
    auto items = make_items(scores);
    std::shuffle(items.begin(), items.end(), rng);
    for (WeightKind w : {kAbs, kSq}) {
      BasicKPartition<I64> start(k, w, items);
      auto result = local_search_2tuple(start);
      EXPECT_LE(result.total_within(), start.total_within());
      // Pairwise optimal: every pair of tuples is already the sorted split.
      for (std::size_t i = 0; i < result.size(); ++i) {
        for (std::size_t j = i + 1; j < result.size(); ++j) {
          std::vector<I64> both;
          for (const auto& it : result.tuple(i)) both.push_back(it.score);
          for (const auto& it : result.tuple(j)) both.push_back(it.score);
          const I64 now = result.within(i) + result.within(j);
          std::sort(both.begin(), both.end());
          std::vector<I64> lo(both.begin(), both.begin() + static_cast<std::ptrdiff_t>(k));
          std::vector<I64> hi(both.begin() + static_cast<std::ptrdiff_t>(k), both.end());
          const I64 sorted_cost = w == kAbs ? testing::pairwise_abs(lo) + testing::pairwise_abs(hi)
                                            : testing::pairwise_sq(lo) + testing::pairwise_sq(hi);
          EXPECT_EQ(now, sorted_cost);
        }
      }
    }
  }
}

TEST(LocalSearchTest, SingleTupleAndBudget) {
  const std::vector<I64> three{3, 1, 2};
  auto p = match_line(make_items(three), 3, kAbs);
  EXPECT_EQ(local_search_2tuple(p).rank_groups(), p.rank_groups());
  const std::vector<I64> eight{1, 2, 3, 4, 5, 6, 7, 8};
  auto q = match_line(make_items(eight), 4, kAbs);
  try {
    local_search_2tuple(q, 10);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kBudget);
  }
}

TEST(HierarchicalTest, ReferenceLineInstance) {
  std::vector<EuclideanPoint> pts;
  for (double v : {1, 3, 4, 5, 8, 9}) pts.push_back({"x", {v}});
  auto r = hierarchical_triple_match(pts);
  expect_partition(r, 6);
  EXPECT_DOUBLE_EQ(r.cost, 14.0);
  std::sort(r.triples.begin(), r.triples.end());
  EXPECT_EQ(r.triples[0], (std::array<std::size_t, 3>{0, 1, 2}));
  EXPECT_EQ(r.triples[1], (std::array<std::size_t, 3>{3, 4, 5}));
}

TEST(HierarchicalTest, ThreePointsFormOneTriple) {
  std::vector<EuclideanPoint> pts{{"a", {0, 0}}, {"b", {3, 4}}, {"c", {0, 4}}};
  auto r = hierarchical_triple_match(pts);
  ASSERT_EQ(r.triples.size(), 1u);
  EXPECT_DOUBLE_EQ(r.cost, 12.0);
  EXPECT_EQ(r.levels.size(), 1u);
}

TEST(HierarchicalTest, LevelShapes) {
  std::mt19937_64 rng(63);
  auto pts = planar(rng, 24);
  auto r = hierarchical_triple_match(pts);
  expect_partition(r, 24);
  ASSERT_EQ(r.levels.size(), 4u);
  for (std::size_t j = 0; j < r.levels.size(); ++j) {
    EXPECT_EQ(r.levels[j].points.size(), 24u >> j);
    if (j == 0) continue;
    std::vector<bool> used(r.levels[j - 1].points.size(), false);
    for (const auto& [a, b] : r.levels[j].provenance) {
      EXPECT_FALSE(used[a]);
      EXPECT_FALSE(used[b]);
      used[a] = used[b] = true;
    }
  }
  EXPECT_FALSE(r.levels[1].exact_pairing);
  EXPECT_TRUE(r.levels[2].exact_pairing);
}

TEST(HierarchicalTest, CollinearMatchesLineOptimum) {
  std::mt19937_64 rng(64);
  for (std::size_t m = 0; m <= 3; ++m) {
    const std::size_t count = 3u << m;
    for (int trial = 0; trial < 20; ++trial) {
      auto t = testing::random_ints(rng, count, -100, 100);
      std::vector<EuclideanPoint> pts;
      // On the line through (3, 4): distances are 5|dt| exactly.
      for (I64 v : t) pts.push_back({"p", {3.0 * static_cast<double>(v), 4.0 * static_cast<double>(v)}});
      auto r = hierarchical_triple_match(pts);
      expect_partition(r, count);
      const I64 line = match_line(make_items(t), 3, kAbs).total_within();
      EXPECT_DOUBLE_EQ(r.cost, 5.0 * static_cast<double>(line)) << "m=" << m;
    }
  }
}

TEST(HierarchicalTest, TwelvePlanarPointsBetweenOptimumAndProjection) {
  std::mt19937_64 rng(65);
  for (int trial = 0; trial < 20; ++trial) {
    auto pts = planar(rng, 12);
    auto r = hierarchical_triple_match(pts);
    expect_partition(r, 12);
    EXPECT_GE(r.cost, optimal_triples(pts) - 1e-9);
    EXPECT_LE(r.cost, projection_baseline(pts) + 1e-9) << "trial " << trial;
  }
}

TEST(HierarchicalTest, RejectsBadSizes) {
  std::vector<EuclideanPoint> five(5, EuclideanPoint{"p", {0.0}});
  EXPECT_THROW(hierarchical_triple_match(five), Error);
  std::vector<EuclideanPoint> nine(9, EuclideanPoint{"p", {0.0}});
  EXPECT_THROW(hierarchical_triple_match(nine), Error);
}

TEST(TriangleMatchingTest, LineInstanceIsSorted) {
  std::mt19937_64 rng(66);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + trial % 6;
    auto x = testing::random_ints(rng, n, -20, 20);
    auto y = testing::random_ints(rng, n, -20, 20);
    auto z = testing::random_ints(rng, n, -20, 20);
    auto inst = make_tripartite(x, y, z, kAbs);
    auto tri = triangle_matching(inst);
    check_perfect(n, 3, tri.matching.tuples);
    EXPECT_EQ(tri.matching.weight, match_sorted(inst).weight);
    EXPECT_LE(tri.matching.weight, tri.guarantee());
  }
}

TEST(TriangleMatchingTest, AllEqualScores) {
  auto inst = make_tripartite<I64>({4, 4}, {4, 4}, {4, 4}, kSq);
  EXPECT_EQ(triangle_matching(inst).matching.weight, 0);
}

TEST(TriangleMatchingTest, MetricRatioAtMostTwo) {
  std::mt19937_64 rng(67);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + trial % 6;
    auto w = euclidean_tripartite(planar(rng, n), planar(rng, n), planar(rng, n));
    auto tri = triangle_matching(w);
    check_perfect(n, 3, tri.matching.tuples);
    const double bound = tripartite_lower_bound(w);
    const double optimum = brute_force_assignment(w).weight;
    EXPECT_LE(bound, optimum + 1e-9);
    EXPECT_LE(tri.matching.weight, tri.guarantee() + 1e-9);
    EXPECT_LE(ratio_to_bound(tri.matching.weight, bound), 2.0 + 1e-12);
    EXPECT_LE(tri.matching.weight / optimum, 2.0 + 1e-12);
    EXPECT_GE(tri.matching.weight, optimum - 1e-9);
  }
}

TEST(TriangleMatchingTest, RequiresThreeParts) {
  EXPECT_THROW(triangle_matching(make_bipartite<I64>({1}, {2}, kAbs)), Error);
}

}  // namespace
}  // namespace linematch
