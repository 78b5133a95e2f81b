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

// Regular complete bipartite / tripartite instances and their perfect
// matchings.

#pragma once

#include <array>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "linematch/core.hpp"

namespace linematch {

/// Two or three equally sized parts of scored vertices. Edge (a, b) between
/// different parts weighs edge_weight(weight, a.score, b.score).
template <Score S>
class BasicMultipartiteInstance {
 public:
  using Item = BasicScoredItem<S>;

  BasicMultipartiteInstance(std::vector<std::vector<Item>> parts, WeightKind weight)
      : parts_(std::move(parts)), weight_(weight) {
    if (parts_.size() != 2 && parts_.size() != 3) {
      fail(ErrorCode::kArity, "instance needs 2 or 3 parts, got " +
                                  std::to_string(parts_.size()));
    }
    if (parts_[0].empty()) fail(ErrorCode::kSize, "parts must be non-empty");
    for (const auto& part : parts_) {
      if (part.size() != parts_[0].size()) {
        fail(ErrorCode::kSize, "parts have unequal lengths");
      }
    }
  }

  std::size_t arity() const { return parts_.size(); }
  std::size_t n() const { return parts_[0].size(); }
  WeightKind weight() const { return weight_; }
  const std::vector<Item>& part(std::size_t p) const { return parts_[p]; }

  /// Weight of the edge between vertex i of part p and vertex j of part q.
  S operator()(std::size_t p, std::size_t i, std::size_t q, std::size_t j) const {
    return edge_weight(weight_, parts_[p][i].score, parts_[q][j].score);
  }

 private:
  std::vector<std::vector<Item>> parts_;
  WeightKind weight_;
};

using MultipartiteInstance = BasicMultipartiteInstance<double>;

template <Score S>
BasicMultipartiteInstance<S> make_bipartite(const std::vector<S>& x, const std::vector<S>& y,
                                            WeightKind weight) {
  return BasicMultipartiteInstance<S>({make_items(x, "a"), make_items(y, "b")}, weight);
}

template <Score S>
BasicMultipartiteInstance<S> make_tripartite(const std::vector<S>& x, const std::vector<S>& y,
                                             const std::vector<S>& z, WeightKind weight) {
  return BasicMultipartiteInstance<S>(
      {make_items(x, "a"), make_items(y, "b"), make_items(z, "c")}, weight);
}

/// Dense tripartite weights for instances that are not line valued, e.g.
/// Euclidean points. ab(i, j) is w(a_i, b_j), bc(i, j) is w(b_i, c_j) and
/// ca(i, j) is w(c_i, a_j).
struct TripartiteWeights {
  std::size_t n = 0;
  std::vector<double> ab, bc, ca;

  explicit TripartiteWeights(std::size_t size)
      : n(size), ab(size * size), bc(size * size), ca(size * size) {}

  std::size_t arity() const { return 3; }

  double operator()(std::size_t p, std::size_t i, std::size_t q, std::size_t j) const {
    if (p == 0 && q == 1) return ab[i * n + j];
    if (p == 1 && q == 0) return ab[j * n + i];
    if (p == 1 && q == 2) return bc[i * n + j];
    if (p == 2 && q == 1) return bc[j * n + i];
    if (p == 2 && q == 0) return ca[i * n + j];
    return ca[j * n + i];
  }
};

/// A perfect matching: tuples[t][p] is the vertex index taken from part p.
/// Bipartite matchings leave the third slot unused.
template <class W>
struct BasicMatching {
  std::size_t arity = 2;
  std::vector<std::array<std::size_t, 3>> tuples;
  W weight{};
};

using Matching = BasicMatching<double>;

/// Sum of edge weights; a triple contributes w(a,b) + w(b,c) + w(c,a).
template <class Instance>
auto matching_weight(const Instance& instance, std::size_t arity,
                     const std::vector<std::array<std::size_t, 3>>& tuples) {
  using W = decltype(instance(0, 0, 1, 0));
  W total{};
  for (const auto& t : tuples) {
    total += instance(0, t[0], 1, t[1]);
    if (arity == 3) {
      total += instance(1, t[1], 2, t[2]);
      total += instance(2, t[2], 0, t[0]);
    }
  }
  return total;
}

/// Throws kStructure unless every part index is used exactly once.
inline void check_perfect(std::size_t n, std::size_t arity,
                          const std::vector<std::array<std::size_t, 3>>& tuples) {
  if (tuples.size() != n) fail(ErrorCode::kStructure, "matching must have n tuples");
  for (std::size_t p = 0; p < arity; ++p) {
    std::vector<bool> used(n, false);
    for (const auto& t : tuples) {
      if (t[p] >= n || used[t[p]]) {
        fail(ErrorCode::kStructure, "matching uses a vertex of part " +
                                        std::to_string(p) + " twice or out of range");
      }
      used[t[p]] = true;
    }
  }
}

/// Exact minimum-cost bipartite assignment (shortest augmenting paths with
/// potentials, O(n^3)). cost(i, j) is the cost of pairing row i with
/// column j. Returns column_of_row.
template <class Cost>
std::vector<std::size_t> min_cost_assignment(std::size_t n, Cost cost) {
  const double inf = std::numeric_limits<double>::infinity();
  // 1-based internals; row 0 / column 0 are sentinels.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<std::size_t> row_of_col(n + 1, 0), way(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    row_of_col[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<bool> used(n + 1, false);
    do {
      used[j0] = true;
      const std::size_t i0 = row_of_col[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double reduced = static_cast<double>(cost(i0 - 1, j - 1)) - u[i0] - v[j];
        if (reduced < minv[j]) {
          minv[j] = reduced;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[row_of_col[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (row_of_col[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      row_of_col[j0] = row_of_col[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<std::size_t> column_of_row(n);
  for (std::size_t j = 1; j <= n; ++j) column_of_row[row_of_col[j] - 1] = j - 1;
  return column_of_row;
}

}  // namespace linematch
