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

// Heuristics built on top of the line results: pairwise exchange local
// search, hierarchical midpoint triple matching for Euclidean points and
// the triangle matching for tripartite instances.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "linematch/core.hpp"
#include "linematch/matching.hpp"
#include "linematch/multipartite.hpp"
#include "linematch/oracle.hpp"

namespace linematch {

namespace detail {

/// First-improvement exchange search over pairs of equally sized groups.
/// For each pair (i < j) in index order, every split of the 2k members with
/// the smallest member fixed is costed; the cheapest replaces the pair when
/// strictly better. Passes repeat until one makes no change.
template <class Cost, class Better>
void improve_pairs(std::vector<std::vector<std::size_t>>& groups, Cost&& cost, Better&& better,
                   std::uint64_t budget) {
  if (groups.size() < 2) return;
  const std::size_t k = groups.front().size();
  const std::uint64_t splits = binomial(2 * k - 1, k - 1);
  if (splits > budget) {
    fail(ErrorCode::kBudget, "pair exchange needs " + std::to_string(splits) +
                                 " splits per pair, over the budget of " + std::to_string(budget));
  }
  std::vector<std::size_t> members(2 * k), first(k), second(k), best_first, best_second;
  std::vector<std::size_t> combo(k - 1);
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < groups.size(); ++i) {
      for (std::size_t j = i + 1; j < groups.size(); ++j) {
        std::copy(groups[i].begin(), groups[i].end(), members.begin());
        std::copy(groups[j].begin(), groups[j].end(), members.begin() + static_cast<std::ptrdiff_t>(k));
        std::sort(members.begin(), members.end());
        const auto current = cost(groups[i]) + cost(groups[j]);
        auto best = current;
        bool found = false;
        std::iota(combo.begin(), combo.end(), std::size_t{0});
        do {
          std::vector<bool> in_first(2 * k, false);
          in_first[0] = true;
          for (std::size_t c : combo) in_first[c + 1] = true;
          std::size_t f = 0, s = 0;
          for (std::size_t m = 0; m < 2 * k; ++m) {
            if (in_first[m]) first[f++] = members[m];
            else second[s++] = members[m];
          }
          const auto value = cost(first) + cost(second);
          if (better(value, best)) {
            best = value;
            best_first = first;
            best_second = second;
            found = true;
          }
        } while (next_combination(combo, 2 * k - 1));
        if (found) {
          groups[i] = best_first;
          groups[j] = best_second;
          changed = true;
        }
      }
    }
  }
}

template <class T>
bool strictly_less(T candidate, T incumbent) {
  if constexpr (std::floating_point<T>) {
    return candidate < incumbent - 1e-12 * std::max(T{1}, std::abs(incumbent));
  } else {
    return candidate < incumbent;
  }
}

}  // namespace detail

/// Exchange local search on a k-tuple partition. Never increases the total;
/// stops at a partition where no pair of tuples can be re-split cheaper.
template <Score S>
BasicKPartition<S> local_search_2tuple(const BasicKPartition<S>& partition,
                                       std::uint64_t budget = kDefaultEnumerationBudget) {
  const std::size_t k = partition.k();
  const WeightKind weight = partition.weight();
  std::vector<BasicScoredItem<S>> items(partition.members().begin(), partition.members().end());
  std::vector<std::vector<std::size_t>> groups(partition.size());
  for (std::size_t t = 0; t < partition.size(); ++t) {
    groups[t].resize(k);
    std::iota(groups[t].begin(), groups[t].end(), t * k);
  }
  std::vector<BasicScoredItem<S>> scratch;
  auto cost = [&](const std::vector<std::size_t>& group) {
    scratch.clear();
    for (std::size_t index : group) scratch.push_back(items[index]);
    std::sort(scratch.begin(), scratch.end(), sorted_before<S>);
    return within_distance(weight, std::span<const BasicScoredItem<S>>(scratch));
  };
  detail::improve_pairs(groups, cost, detail::strictly_less<S>, budget);
  return detail::partition_from_groups(items, groups, k, weight);
}

// ---------------------------------------------------------------------------
// Euclidean triples.

struct EuclideanPoint {
  std::string id;
  std::vector<double> coords;
};

inline double euclidean_distance(const std::vector<double>& a, const std::vector<double>& b) {
  double sum = 0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(sum);
}

/// One level of the midpoint hierarchy. Level 0 holds the input points;
/// point p of level j > 0 is the midpoint of provenance[p] at level j - 1.
struct HierarchyLevel {
  std::vector<std::vector<double>> points;
  std::vector<std::array<std::size_t, 2>> provenance;
  /// Whether the pairing that produced this level was exact (enumerated)
  /// or greedy with 2-opt repair.
  bool exact_pairing = true;
};

struct TripleMatchResult {
  std::vector<std::array<std::size_t, 3>> triples;  // indices into the input
  double cost = 0;
  std::vector<HierarchyLevel> levels;
};

/// Sum of pairwise distances inside each group.
inline double grouping_cost(const std::vector<std::vector<double>>& points,
                            const std::vector<std::vector<std::size_t>>& groups) {
  double total = 0;
  for (const auto& g : groups) {
    for (std::size_t a = 0; a < g.size(); ++a) {
      for (std::size_t b = a + 1; b < g.size(); ++b) total += euclidean_distance(points[g[a]], points[g[b]]);
    }
  }
  return total;
}

inline constexpr std::size_t kMaxExactPairing = 12;

/// Minimum-length perfect pairing: exhaustive up to 12 points, otherwise
/// nearest-neighbour greedy followed by 2-opt edge swaps.
inline std::vector<std::array<std::size_t, 2>> min_pairing(
    const std::vector<std::vector<double>>& points, bool& exact) {
  const std::size_t size = points.size();
  auto dist = [&](std::size_t a, std::size_t b) { return euclidean_distance(points[a], points[b]); };
  std::vector<std::array<std::size_t, 2>> pairs;
  if (size <= kMaxExactPairing) {
    exact = true;
    PartitionEnumerator it(size, 2);
    double best = 0;
    bool have = false;
    do {
      double total = 0;
      for (const auto& g : it.current()) total += dist(g[0], g[1]);
      if (!have || total < best) {
        best = total;
        have = true;
        pairs.clear();
        for (const auto& g : it.current()) pairs.push_back({g[0], g[1]});
      }
    } while (it.advance());
    return pairs;
  }
  exact = false;
  std::vector<bool> used(size, false);
  for (std::size_t a = 0; a < size; ++a) {
    if (used[a]) continue;
    std::size_t nearest = size;
    for (std::size_t b = 0; b < size; ++b) {
      if (b == a || used[b]) continue;
      if (nearest == size || dist(a, b) < dist(a, nearest)) nearest = b;
    }
    used[a] = used[nearest] = true;
    pairs.push_back({a, nearest});
  }
  bool improved = true;
  while (improved) {
    improved = false;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      for (std::size_t j = i + 1; j < pairs.size(); ++j) {
        auto [a, b] = pairs[i];
        auto [c, d] = pairs[j];
        const double now = dist(a, b) + dist(c, d);
        const double cross = dist(a, c) + dist(b, d);
        const double swap = dist(a, d) + dist(b, c);
        if (detail::strictly_less(cross, now) && cross <= swap) {
          pairs[i] = {a, c};
          pairs[j] = {b, d};
          improved = true;
        } else if (detail::strictly_less(swap, now)) {
          pairs[i] = {a, d};
          pairs[j] = {b, c};
          improved = true;
        }
      }
    }
  }
  return pairs;
}

/// Triples for 3 * 2^m points. Descends by pairing points and replacing
/// each pair by its midpoint until three points remain, then ascends: each
/// triple is expanded into the six points it came from, split into the
/// best two triples, and the level is refined by pairwise exchange search.
inline TripleMatchResult hierarchical_triple_match(const std::vector<EuclideanPoint>& input) {
  std::size_t size = input.size();
  std::size_t m = 0;
  while (size > 3 && size % 2 == 0) {
    size /= 2;
    ++m;
  }
  if (size != 3) {
    fail(ErrorCode::kSize, "hierarchical triple matching needs 3 * 2^m points, got " +
                               std::to_string(input.size()));
  }
  const std::size_t dim = input.front().coords.size();
  for (const auto& p : input) {
    if (p.coords.size() != dim || dim == 0) {
      fail(ErrorCode::kInvalidInput, "points must share a positive dimension");
    }
    for (double c : p.coords) {
      if (!std::isfinite(c)) fail(ErrorCode::kParse, "non-finite coordinate on point '" + p.id + "'");
    }
  }

  TripleMatchResult out;
  out.levels.push_back({});
  for (const auto& p : input) out.levels[0].points.push_back(p.coords);

  for (std::size_t j = 1; j <= m; ++j) {
    const auto& below = out.levels[j - 1].points;
    HierarchyLevel level;
    auto pairs = min_pairing(below, level.exact_pairing);
    for (const auto& [a, b] : pairs) {
      std::vector<double> mid(dim);
      for (std::size_t d = 0; d < dim; ++d) mid[d] = 0.5 * (below[a][d] + below[b][d]);
      level.points.push_back(std::move(mid));
      level.provenance.push_back({a, b});
    }
    out.levels.push_back(std::move(level));
  }

  std::vector<std::vector<std::size_t>> groups{{0, 1, 2}};
  for (std::size_t j = m; j >= 1; --j) {
    const auto& points = out.levels[j - 1].points;
    auto cost = [&](const std::vector<std::size_t>& g) { return grouping_cost(points, {g}); };
    std::vector<std::vector<std::size_t>> expanded;
    for (const auto& g : groups) {
      std::vector<std::vector<std::size_t>> halves(2);
      for (std::size_t p : g) {
        const auto& [a, b] = out.levels[j].provenance[p];
        halves[0].push_back(a);
        halves[1].push_back(b);
      }
      // The best split of the six children is the fixpoint of a single pair.
      for (auto& h : halves) std::sort(h.begin(), h.end());
      detail::improve_pairs(halves, cost, detail::strictly_less<double>, kDefaultEnumerationBudget);
      expanded.push_back(std::move(halves[0]));
      expanded.push_back(std::move(halves[1]));
    }
    detail::improve_pairs(expanded, cost, detail::strictly_less<double>, kDefaultEnumerationBudget);
    groups = std::move(expanded);
  }

  out.cost = grouping_cost(out.levels[0].points, groups);
  for (auto& g : groups) {
    std::sort(g.begin(), g.end());
    out.triples.push_back({g[0], g[1], g[2]});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Triangle matching.

/// Tripartite matching composed from the bipartite minima M(A,B) and
/// M(B,C) through their shared B vertices. Under the triangle inequality
/// its weight is at most 2 (w(M_AB) + w(M_BC)), hence at most twice the
/// pairwise lower bound and twice the optimum.
template <class W>
struct BasicTriangleMatch {
  BasicMatching<W> matching;
  W ab_min{};
  W bc_min{};

  W guarantee() const { return 2 * (ab_min + bc_min); }
};

template <Score S>
BasicTriangleMatch<S> triangle_matching(const BasicMultipartiteInstance<S>& instance) {
  if (instance.arity() != 3) fail(ErrorCode::kArity, "triangle matching needs three parts");
  const auto ab = match_sorted(BasicMultipartiteInstance<S>({instance.part(0), instance.part(1)},
                                                            instance.weight()));
  const auto bc = match_sorted(BasicMultipartiteInstance<S>({instance.part(1), instance.part(2)},
                                                            instance.weight()));
  std::vector<std::size_t> c_of_b(instance.n());
  for (const auto& t : bc.tuples) c_of_b[t[0]] = t[1];
  BasicTriangleMatch<S> out;
  out.ab_min = ab.weight;
  out.bc_min = bc.weight;
  out.matching.arity = 3;
  for (const auto& t : ab.tuples) out.matching.tuples.push_back({t[0], t[1], c_of_b[t[1]]});
  out.matching.weight = matching_weight(instance, 3, out.matching.tuples);
  return out;
}

using TriangleMatch = BasicTriangleMatch<double>;

inline TriangleMatch triangle_matching(const TripartiteWeights& w) {
  const PairwiseMinima minima = pairwise_minima(w);
  TriangleMatch out;
  out.ab_min = minima.ab;
  out.bc_min = minima.bc;
  out.matching.arity = 3;
  for (std::size_t a = 0; a < w.n; ++a) {
    const std::size_t b = minima.b_of_a[a];
    out.matching.tuples.push_back({a, b, minima.c_of_b[b]});
  }
  out.matching.weight = matching_weight(w, 3, out.matching.tuples);
  return out;
}

/// Dense weights from three point sets under Euclidean distance (a metric,
/// so the triangle inequality holds).
inline TripartiteWeights euclidean_tripartite(const std::vector<EuclideanPoint>& a,
                                              const std::vector<EuclideanPoint>& b,
                                              const std::vector<EuclideanPoint>& c) {
  if (a.size() != b.size() || b.size() != c.size() || a.empty()) {
    fail(ErrorCode::kSize, "tripartite parts must be non-empty and of equal size");
  }
  const std::size_t n = a.size();
  TripartiteWeights w(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      w.ab[i * n + j] = euclidean_distance(a[i].coords, b[j].coords);
      w.bc[i * n + j] = euclidean_distance(b[i].coords, c[j].coords);
      w.ca[i * n + j] = euclidean_distance(c[i].coords, a[j].coords);
    }
  }
  return w;
}

}  // namespace linematch
