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

// Bipartite and tripartite matching of line-valued vertices: rank-for-rank
// matching, the pairwise lower bound for tripartite weights, a sampling
// refuter for the line-matching (LM) property and certified ratio bounds.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <vector>

#include "linematch/core.hpp"
#include "linematch/matching.hpp"
#include "linematch/oracle.hpp"

namespace linematch {

namespace detail {

template <Score S>
std::vector<std::size_t> sorted_order(const std::vector<BasicScoredItem<S>>& part) {
  std::vector<std::size_t> order(part.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (sorted_before(part[a], part[b])) return true;
    if (sorted_before(part[b], part[a])) return false;
    return a < b;
  });
  return order;
}

template <Score S>
void check_finite(const BasicMultipartiteInstance<S>& instance) {
  if constexpr (std::floating_point<S>) {
    for (std::size_t p = 0; p < instance.arity(); ++p) {
      for (const auto& item : instance.part(p)) {
        if (!std::isfinite(item.score)) {
          fail(ErrorCode::kParse, "non-finite score for vertex '" + item.id + "'");
        }
      }
    }
  }
}

}  // namespace detail

/// Sorts every part by (score, input rank) and matches rank for rank. For
/// absolute and squared differences this is a minimum perfect matching.
template <Score S>
BasicMatching<S> match_sorted(const BasicMultipartiteInstance<S>& instance) {
  detail::check_finite(instance);
  std::vector<std::vector<std::size_t>> orders;
  for (std::size_t p = 0; p < instance.arity(); ++p) {
    orders.push_back(detail::sorted_order(instance.part(p)));
  }
  BasicMatching<S> out;
  out.arity = instance.arity();
  out.tuples.resize(instance.n());
  for (std::size_t r = 0; r < instance.n(); ++r) {
    out.tuples[r] = {orders[0][r], orders[1][r], out.arity == 3 ? orders[2][r] : 0};
  }
  out.weight = matching_weight(instance, out.arity, out.tuples);
  return out;
}

/// Lower bound on any tripartite perfect matching: the sum of the three
/// bipartite minima w(AB) + w(BC) + w(CA), each by rank-for-rank matching.
template <Score S>
S tripartite_lower_bound(const BasicMultipartiteInstance<S>& instance) {
  if (instance.arity() != 3) {
    fail(ErrorCode::kArity, "tripartite lower bound needs three parts");
  }
  detail::check_finite(instance);
  std::array<std::vector<std::size_t>, 3> orders;
  for (std::size_t p = 0; p < 3; ++p) orders[p] = detail::sorted_order(instance.part(p));
  S bound{};
  for (std::size_t p = 0; p < 3; ++p) {
    const std::size_t q = (p + 1) % 3;
    for (std::size_t r = 0; r < instance.n(); ++r) {
      bound += instance(p, orders[p][r], q, orders[q][r]);
    }
  }
  return bound;
}

/// The bipartite minima of a dense tripartite instance, by exact assignment.
struct PairwiseMinima {
  std::vector<std::size_t> b_of_a, c_of_b, a_of_c;
  double ab = 0, bc = 0, ca = 0;

  double bound() const { return ab + bc + ca; }
};

inline PairwiseMinima pairwise_minima(const TripartiteWeights& w) {
  PairwiseMinima out;
  out.b_of_a = min_cost_assignment(w.n, [&](std::size_t i, std::size_t j) { return w(0, i, 1, j); });
  out.c_of_b = min_cost_assignment(w.n, [&](std::size_t i, std::size_t j) { return w(1, i, 2, j); });
  out.a_of_c = min_cost_assignment(w.n, [&](std::size_t i, std::size_t j) { return w(2, i, 0, j); });
  for (std::size_t i = 0; i < w.n; ++i) {
    out.ab += w(0, i, 1, out.b_of_a[i]);
    out.bc += w(1, i, 2, out.c_of_b[i]);
    out.ca += w(2, i, 0, out.a_of_c[i]);
  }
  return out;
}

inline double tripartite_lower_bound(const TripartiteWeights& w) {
  return pairwise_minima(w).bound();
}

/// w(heuristic) / lower bound, an upper bound on the true approximation
/// ratio. 0/0 is reported as 1 and x/0 (x > 0) as +infinity.
inline double ratio_to_bound(double heuristic_weight, double bound) {
  if (bound == 0) {
    return heuristic_weight == 0 ? 1.0 : std::numeric_limits<double>::infinity();
  }
  return heuristic_weight / bound;
}

template <Score S>
double heuristic_ratio_bound(const BasicMultipartiteInstance<S>& instance,
                             const BasicMatching<S>& heuristic) {
  if (instance.arity() != 3 || heuristic.arity != 3) {
    fail(ErrorCode::kArity, "ratio bound needs a tripartite instance and matching");
  }
  check_perfect(instance.n(), 3, heuristic.tuples);
  const S weight = matching_weight(instance, 3, heuristic.tuples);
  return ratio_to_bound(static_cast<double>(weight),
                        static_cast<double>(tripartite_lower_bound(instance)));
}

inline double heuristic_ratio_bound(const TripartiteWeights& w, const Matching& heuristic) {
  if (heuristic.arity != 3) fail(ErrorCode::kArity, "ratio bound needs a tripartite matching");
  check_perfect(w.n, 3, heuristic.tuples);
  return ratio_to_bound(matching_weight(w, 3, heuristic.tuples), tripartite_lower_bound(w));
}

// ---------------------------------------------------------------------------
// LM refutation.

using EdgeWeightFn = std::function<double(double, double)>;

/// An instance on which rank-for-rank matching is beaten.
struct LmWitness {
  std::vector<double> x, y;  // both sorted
  double sorted_weight = 0;
  double best_weight = 0;
  std::vector<std::size_t> best_permutation;  // y index matched to x_i
};

struct LmReport {
  bool lm = true;  // true means "not refuted", never a proof
  std::size_t trials_run = 0;
  std::optional<LmWitness> witness;
};

/// Compares the sorted matching of (x, y) against all permutations. Returns
/// a witness if some permutation is strictly lighter.
inline std::optional<LmWitness> check_lm_instance(const EdgeWeightFn& weight,
                                                  std::vector<double> x,
                                                  std::vector<double> y) {
  if (x.size() != y.size()) fail(ErrorCode::kSize, "x and y must have equal length");
  if (x.size() > kMaxOracleBipartite) {
    fail(ErrorCode::kBudget, "LM check supports n <= " + std::to_string(kMaxOracleBipartite));
  }
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const std::size_t n = x.size();
  double sorted_weight = 0;
  for (std::size_t i = 0; i < n; ++i) sorted_weight += weight(x[i], y[i]);

  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::vector<std::size_t> best_perm = perm;
  double best = sorted_weight;
  do {
    double total = 0;
    for (std::size_t i = 0; i < n; ++i) total += weight(x[i], y[perm[i]]);
    if (total < best) {
      best = total;
      best_perm = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));

  // Guard against rounding noise on non-integral weights.
  const double slack = 1e-12 * std::max(1.0, std::abs(sorted_weight));
  if (best < sorted_weight - slack) {
    return LmWitness{std::move(x), std::move(y), sorted_weight, best, std::move(best_perm)};
  }
  return std::nullopt;
}

/// Randomised refutation of the LM property: samples sorted integer-valued
/// n-tuples (1 <= n <= n_max, values in [-20, 20]) and stops at the first
/// instance where rank-for-rank matching is beaten. Trial t draws from its
/// own generator seeded with (seed, t). Passing is evidence, not proof.
inline LmReport is_lm_on_samples(const EdgeWeightFn& weight, std::size_t trials,
                                 std::size_t n_max, std::uint64_t seed = 0) {
  if (n_max < 1 || n_max > kMaxOracleBipartite) {
    fail(ErrorCode::kBudget, "n_max must be in [1, " + std::to_string(kMaxOracleBipartite) + "]");
  }
  LmReport report;
  for (std::size_t t = 0; t < trials; ++t) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(t), static_cast<std::uint32_t>(t >> 32)};
    std::mt19937_64 rng(seq);
    std::uniform_int_distribution<std::size_t> size_dist(1, n_max);
    std::uniform_int_distribution<int> value_dist(-20, 20);
    const std::size_t n = size_dist(rng);
    std::vector<double> x(n), y(n);
    for (auto& v : x) v = value_dist(rng);
    for (auto& v : y) v = value_dist(rng);
    ++report.trials_run;
    if (auto witness = check_lm_instance(weight, std::move(x), std::move(y))) {
      report.lm = false;
      report.witness = std::move(witness);
      return report;
    }
  }
  return report;
}

}  // namespace linematch
