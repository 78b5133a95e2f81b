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

// Machine-checked exchange certificates. For a tuple size k and a weight
// kind, every split of a sorted 2k-tuple x_1 <= .. <= x_2k into two k-sets
// (x_1 in the first) is compared symbolically against the sorted split
// {1..k | k+1..2k}. The cost difference is a linear form (absolute
// differences) or a quadratic form (squared differences); each is proven
// nonnegative on the sorted cone.

#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <tuple>
#include <variant>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "linematch/core.hpp"
#include "linematch/oracle.hpp"

namespace linematch {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Split of {1, .., 2k} into two ascending k-sets, 1 in `first`.
struct Bipartition {
  std::vector<std::size_t> first;
  std::vector<std::size_t> second;

  friend bool operator==(const Bipartition&, const Bipartition&) = default;
};

inline std::string to_string(const Bipartition& split) {
  std::string out = "{";
  for (std::size_t i = 0; i < split.first.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(split.first[i]);
  }
  out += '|';
  for (std::size_t i = 0; i < split.second.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(split.second[i]);
  }
  return out + "}";
}

inline Bipartition sorted_split(std::size_t k) {
  Bipartition split;
  for (std::size_t i = 1; i <= k; ++i) split.first.push_back(i);
  for (std::size_t i = k + 1; i <= 2 * k; ++i) split.second.push_back(i);
  return split;
}

/// Throws kStructure unless `split` is two ascending k-sets covering
/// 1..2k with 1 in the first.
inline void validate_bipartition(std::size_t k, const Bipartition& split) {
  if (k < 1 || split.first.size() != k || split.second.size() != k) {
    fail(ErrorCode::kStructure, "bipartition must have two sets of size k=" + std::to_string(k));
  }
  std::vector<bool> seen(2 * k + 1, false);
  for (const auto* side : {&split.first, &split.second}) {
    for (std::size_t i = 0; i < side->size(); ++i) {
      const std::size_t v = (*side)[i];
      if (v < 1 || v > 2 * k || seen[v]) {
        fail(ErrorCode::kStructure, "bipartition " + to_string(split) +
                                        " does not cover 1.." + std::to_string(2 * k) +
                                        " exactly once");
      }
      if (i > 0 && (*side)[i - 1] > v) {
        fail(ErrorCode::kStructure, "bipartition sets must be ascending");
      }
      seen[v] = true;
    }
  }
  if (split.first.front() != 1) {
    fail(ErrorCode::kStructure, "index 1 must be in the first set");
  }
}

// ---------------------------------------------------------------------------

/// sum_i c_i x_i over sorted variables x_1..x_m (stored 0-based).
class LinearForm {
 public:
  LinearForm() = default;
  explicit LinearForm(std::vector<std::int64_t> coeffs) : coeffs_(std::move(coeffs)) {}

  std::size_t size() const { return coeffs_.size(); }
  const std::vector<std::int64_t>& coeffs() const { return coeffs_; }
  /// 1-based, like the variable names.
  std::int64_t coeff(std::size_t i) const { return coeffs_[i - 1]; }

  bool is_zero() const {
    return std::all_of(coeffs_.begin(), coeffs_.end(), [](auto c) { return c == 0; });
  }
  std::int64_t total() const { return std::accumulate(coeffs_.begin(), coeffs_.end(), std::int64_t{0}); }

  /// suffix[j-1] = sum_{i >= j} c_i for j = 1..m.
  std::vector<std::int64_t> suffix_sums() const {
    std::vector<std::int64_t> out(coeffs_.size());
    std::int64_t acc = 0;
    for (std::size_t i = coeffs_.size(); i-- > 0;) {
      acc += coeffs_[i];
      out[i] = acc;
    }
    return out;
  }

  /// Nonnegative on every sorted real vector iff the coefficients sum to
  /// zero and every suffix sum is nonnegative (Abel summation over the
  /// gaps x_j - x_{j-1} >= 0).
  bool cone_nonnegative() const {
    const auto suffix = suffix_sums();
    if (!suffix.empty() && suffix.front() != 0) return false;
    return std::all_of(suffix.begin(), suffix.end(), [](auto s) { return s >= 0; });
  }

  template <class T>
  T evaluate(std::span<const T> x) const {
    T acc{};
    for (std::size_t i = 0; i < coeffs_.size(); ++i) acc += static_cast<T>(coeffs_[i]) * x[i];
    return acc;
  }

  /// gcd of the coefficients (0 for the zero form).
  std::int64_t content() const {
    std::int64_t g = 0;
    for (auto c : coeffs_) g = std::gcd(g, c < 0 ? -c : c);
    return g;
  }

  std::size_t nonzero_count() const {
    return static_cast<std::size_t>(
        std::count_if(coeffs_.begin(), coeffs_.end(), [](auto c) { return c != 0; }));
  }

  friend bool operator==(const LinearForm&, const LinearForm&) = default;

 private:
  std::vector<std::int64_t> coeffs_;
};

namespace detail {

// Terms by descending index, e.g. "2x_4-x_3-x_2".
inline std::string render_terms(const std::vector<std::int64_t>& coeffs, std::int64_t divisor) {
  std::string out;
  for (std::size_t i = coeffs.size(); i-- > 0;) {
    std::int64_t c = coeffs[i] / divisor;
    if (c == 0) continue;
    if (c < 0) {
      out += '-';
      c = -c;
    } else if (!out.empty()) {
      out += '+';
    }
    if (c != 1) out += std::to_string(c);
    out += "x_" + std::to_string(i + 1);
  }
  return out;
}

}  // namespace detail

/// "4(x_4-x_3)", "2(x_5+x_4-2x_3)", "x_3-x_2" or "0".
inline std::string to_string(const LinearForm& form) {
  const std::int64_t g = form.content();
  if (g == 0) return "0";
  const std::string body = detail::render_terms(form.coeffs(), g);
  return g == 1 ? body : std::to_string(g) + "(" + body + ")";
}

/// sum_{i,j} M_ij x_i x_j with M symmetric; the polynomial coefficient of
/// x_i x_j (i != j) is 2 M_ij.
class QuadraticForm {
 public:
  QuadraticForm() = default;
  explicit QuadraticForm(std::size_t m) : m_(m), matrix_(m * m) {}

  std::size_t size() const { return m_; }
  /// 0-based.
  const BigInt& at(std::size_t i, std::size_t j) const { return matrix_[i * m_ + j]; }
  void add_entry(std::size_t i, std::size_t j, const BigInt& c) { matrix_[i * m_ + j] += c; }

  bool is_zero() const {
    return std::all_of(matrix_.begin(), matrix_.end(), [](const BigInt& c) { return c == 0; });
  }

  template <class T>
  BigInt evaluate(std::span<const T> x) const {
    BigInt acc = 0;
    for (std::size_t i = 0; i < m_; ++i) {
      for (std::size_t j = 0; j < m_; ++j) acc += at(i, j) * BigInt(x[i]) * BigInt(x[j]);
    }
    return acc;
  }

  friend bool operator==(const QuadraticForm&, const QuadraticForm&) = default;

 private:
  std::size_t m_ = 0;
  std::vector<BigInt> matrix_;
};

/// Expanded polynomial, highest-index monomials first.
inline std::string to_string(const QuadraticForm& form) {
  std::string out;
  const std::size_t m = form.size();
  for (std::size_t j = m; j-- > 0;) {
    for (std::size_t i = j + 1; i-- > 0;) {
      BigInt c = i == j ? form.at(i, i) : BigInt(2 * form.at(i, j));
      if (c == 0) continue;
      if (c < 0) {
        out += '-';
        c = -c;
      } else if (!out.empty()) {
        out += '+';
      }
      if (c != 1) out += c.str();
      out += i == j ? "x_" + std::to_string(i + 1) + "^2"
                    : "x_" + std::to_string(i + 1) + "x_" + std::to_string(j + 1);
    }
  }
  return out.empty() ? "0" : out;
}

// ---------------------------------------------------------------------------
// Difference forms.

namespace detail {

inline void add_abs_coeffs(const std::vector<std::size_t>& ascending, std::int64_t sign,
                           std::vector<std::int64_t>& coeffs) {
  const auto k = static_cast<std::int64_t>(ascending.size());
  for (std::int64_t t = 0; t < k; ++t) {
    coeffs[ascending[static_cast<std::size_t>(t)] - 1] += sign * (2 * t + 1 - k);
  }
}

inline void add_sq_form(const std::vector<std::size_t>& members, std::int64_t sign,
                        QuadraticForm& form) {
  const auto k = static_cast<std::int64_t>(members.size());
  for (std::size_t a = 0; a < members.size(); ++a) {
    form.add_entry(members[a] - 1, members[a] - 1, BigInt(sign * (k - 1)));
    for (std::size_t b = 0; b < members.size(); ++b) {
      if (a != b) form.add_entry(members[a] - 1, members[b] - 1, BigInt(-sign));
    }
  }
}

}  // namespace detail

/// cost(split) - cost(sorted split) for absolute differences.
inline LinearForm difference_form_abs(std::size_t k, const Bipartition& split) {
  validate_bipartition(k, split);
  const Bipartition sorted = sorted_split(k);
  std::vector<std::int64_t> coeffs(2 * k, 0);
  detail::add_abs_coeffs(split.first, 1, coeffs);
  detail::add_abs_coeffs(split.second, 1, coeffs);
  detail::add_abs_coeffs(sorted.first, -1, coeffs);
  detail::add_abs_coeffs(sorted.second, -1, coeffs);
  return LinearForm(std::move(coeffs));
}

/// cost(split) - cost(sorted split) for squared differences.
inline QuadraticForm difference_form_sq(std::size_t k, const Bipartition& split) {
  validate_bipartition(k, split);
  const Bipartition sorted = sorted_split(k);
  QuadraticForm form(2 * k);
  detail::add_sq_form(split.first, 1, form);
  detail::add_sq_form(split.second, 1, form);
  detail::add_sq_form(sorted.first, -1, form);
  detail::add_sq_form(sorted.second, -1, form);
  return form;
}

using DifferenceForm = std::variant<LinearForm, QuadraticForm>;

inline DifferenceForm difference_form(std::size_t k, const Bipartition& split, WeightKind weight) {
  if (weight == WeightKind::kAbsoluteDifference) return difference_form_abs(k, split);
  return difference_form_sq(k, split);
}

// ---------------------------------------------------------------------------
// Factoring quadratic forms.

/// form == scalar * first(x) * second(x).
struct FactorPair {
  Rational scalar;
  LinearForm first;
  LinearForm second;
};

inline std::string to_string(const FactorPair& pair) {
  std::string scalar = pair.scalar == 1 ? "" : pair.scalar.str();
  return scalar + "(" + detail::render_terms(pair.first.coeffs(), 1) + ")(" +
         detail::render_terms(pair.second.coeffs(), 1) + ")";
}

namespace detail {

inline std::optional<Rational> rational_sqrt(const Rational& value) {
  if (value < 0) return std::nullopt;
  const BigInt num = boost::multiprecision::numerator(value);
  const BigInt den = boost::multiprecision::denominator(value);
  const BigInt rn = boost::multiprecision::sqrt(num);
  const BigInt rd = boost::multiprecision::sqrt(den);
  if (rn * rn != num || rd * rd != den) return std::nullopt;
  return Rational(rn, rd);
}

// Scales a rational vector to a primitive integer vector; returns the
// factor c with v = c * primitive.
inline std::optional<Rational> make_primitive(const std::vector<Rational>& v,
                                              std::vector<std::int64_t>& out) {
  BigInt lcm = 1;
  for (const auto& x : v) lcm = boost::multiprecision::lcm(lcm, boost::multiprecision::denominator(x));
  std::vector<BigInt> ints;
  BigInt g = 0;
  for (const auto& x : v) {
    BigInt value = boost::multiprecision::numerator(x) * (lcm / boost::multiprecision::denominator(x));
    g = boost::multiprecision::gcd(g, boost::multiprecision::abs(value));
    ints.push_back(value);
  }
  if (g == 0) return std::nullopt;
  out.clear();
  const BigInt limit = std::numeric_limits<std::int64_t>::max();
  for (auto& value : ints) {
    value /= g;
    if (boost::multiprecision::abs(value) > limit) return std::nullopt;
    out.push_back(static_cast<std::int64_t>(value));
  }
  return Rational(g, lcm);
}

inline std::size_t lowest_nonzero(const LinearForm& form) {
  for (std::size_t i = 0; i < form.size(); ++i) {
    if (form.coeffs()[i] != 0) return i;
  }
  return form.size();
}

}  // namespace detail

/// Expands scalar * first * second back into a QuadraticForm.
inline std::optional<QuadraticForm> expand(const FactorPair& pair) {
  const std::size_t m = pair.first.size();
  QuadraticForm out(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      Rational entry = pair.scalar *
                       Rational(BigInt(pair.first.coeffs()[i]) * pair.second.coeffs()[j] +
                                BigInt(pair.first.coeffs()[j]) * pair.second.coeffs()[i]) /
                       2;
      if (boost::multiprecision::denominator(entry) != 1) return std::nullopt;
      out.add_entry(i, j, boost::multiprecision::numerator(entry));
    }
  }
  return out;
}

/// Writes a nonzero quadratic form of rank 2 as scalar * L1 * L2 with
/// primitive integer L1, L2 whose highest-index coefficient is positive.
///
/// With a nonsingular 2x2 principal block G on rows {a, b} and C the
/// columns a, b of M, a rank-2 symmetric M equals C G^-1 C^T. Splitting
/// the binary form G^-1 = p q^T + q p^T over the rationals gives
/// M = u v^T + v u^T with u = C p, v = C q, i.e. x^T M x = 2 (u.x)(v.x).
/// Returns nullopt when no rational splitting exists; the result must
/// still be checked by expand().
inline std::optional<FactorPair> factor_rank2(const QuadraticForm& form) {
  const std::size_t m = form.size();
  auto entry = [&](std::size_t i, std::size_t j) { return Rational(form.at(i, j)); };

  std::size_t a = m, b = m;
  Rational det = 0;
  for (std::size_t i = 0; i < m && a == m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      Rational d = entry(i, i) * entry(j, j) - entry(i, j) * entry(i, j);
      if (d != 0) {
        a = i;
        b = j;
        det = d;
        break;
      }
    }
  }
  if (a == m) {
    // Rank at most 1: M = c c^T / M_ii for any nonzero diagonal entry.
    for (std::size_t i = 0; i < m; ++i) {
      if (form.at(i, i) == 0) continue;
      std::vector<Rational> c(m);
      for (std::size_t j = 0; j < m; ++j) c[j] = entry(j, i);
      std::vector<std::int64_t> l;
      const auto scale = detail::make_primitive(c, l);
      if (!scale) return std::nullopt;
      FactorPair pair{*scale * *scale / entry(i, i), LinearForm(l), LinearForm(l)};
      auto last = std::find_if(l.rbegin(), l.rend(), [](auto v) { return v != 0; });
      if (*last < 0) {
        for (auto& v : l) v = -v;
        pair.first = pair.second = LinearForm(std::move(l));
      }
      return pair;
    }
    return std::nullopt;
  }

  // G^-1 = [[alpha, beta], [beta, gamma]].
  const Rational alpha = entry(b, b) / det;
  const Rational beta = -entry(a, b) / det;
  const Rational gamma = entry(a, a) / det;
  const auto root = detail::rational_sqrt(beta * beta - alpha * gamma);
  if (!root) return std::nullopt;

  std::array<Rational, 2> p, q;
  if (alpha != 0) {
    const Rational r1 = (-beta + *root) / alpha;
    const Rational r2 = (-beta - *root) / alpha;
    p = {Rational(1), -r1};
    q = {alpha / 2, -alpha * r2 / 2};
  } else if (gamma != 0) {
    const Rational r1 = (-beta + *root) / gamma;
    const Rational r2 = (-beta - *root) / gamma;
    p = {-r1, Rational(1)};
    q = {-gamma * r2 / 2, gamma / 2};
  } else {
    p = {Rational(1), Rational(0)};
    q = {Rational(0), beta};
  }

  std::vector<Rational> u(m), v(m);
  for (std::size_t i = 0; i < m; ++i) {
    u[i] = entry(i, a) * p[0] + entry(i, b) * p[1];
    v[i] = entry(i, a) * q[0] + entry(i, b) * q[1];
  }
  std::vector<std::int64_t> u_int, v_int;
  const auto cu = detail::make_primitive(u, u_int);
  const auto cv = detail::make_primitive(v, v_int);
  if (!cu || !cv) return std::nullopt;

  FactorPair pair{2 * *cu * *cv, LinearForm(std::move(u_int)), LinearForm(std::move(v_int))};
  for (LinearForm* factor : {&pair.first, &pair.second}) {
    auto coeffs = factor->coeffs();
    auto last = std::find_if(coeffs.rbegin(), coeffs.rend(), [](auto c) { return c != 0; });
    if (*last < 0) {
      for (auto& c : coeffs) c = -c;
      *factor = LinearForm(std::move(coeffs));
      pair.scalar = -pair.scalar;
    }
  }
  // Shorter factor first, then the one reaching the lower index.
  auto key = [](const LinearForm& f) {
    return std::make_tuple(f.nonzero_count(), detail::lowest_nonzero(f));
  };
  if (key(pair.second) < key(pair.first) ||
      (key(pair.second) == key(pair.first) && pair.second.coeffs() < pair.first.coeffs())) {
    std::swap(pair.first, pair.second);
  }
  return pair;
}

// ---------------------------------------------------------------------------
// Certificates.

struct SuffixProof {
  std::vector<std::int64_t> suffix_sums;
};

struct FactorProof {
  std::optional<FactorPair> factors;  // empty for the zero form
};

using Proof = std::variant<SuffixProof, FactorProof>;

struct CertificateEntry {
  Bipartition split;
  DifferenceForm form;
  Proof proof;
  bool ok = false;
  std::string failure;  // set when !ok
};

struct ExchangeCertificate {
  std::size_t k = 0;
  WeightKind weight = WeightKind::kAbsoluteDifference;
  std::uint64_t entry_count = 0;
  bool verified = false;
  /// Empty when the certificate was built without retaining entries.
  std::vector<CertificateEntry> entries;
  std::optional<Bipartition> counterexample;
};

struct CertifyOptions {
  /// Permit k beyond the machine-verified range (16 for abs, 8 for sq).
  bool exploratory = false;
  bool keep_entries = true;
};

/// Number of splits with 1 in the first set: C(2k-1, k-1).
inline std::uint64_t certificate_size(std::size_t k) { return binomial(2 * k - 1, k - 1); }

namespace detail {

inline void check_certify_range(std::size_t k, WeightKind weight, const CertifyOptions& options) {
  if (k < 2) fail(ErrorCode::kRange, "certification needs k >= 2");
  if (!options.exploratory && k > max_certified_k(weight)) {
    fail(ErrorCode::kRange, "k=" + std::to_string(k) + " is beyond the verified range for " +
                                std::string(to_string(weight)) +
                                " (abs: k <= 16, sq: k <= 8) without the exploratory flag");
  }
}

/// Calls fn(first, second) for every split of 1..2k with 1 in `first`, in
/// colexicographic order of the first set. The sorted split comes first.
template <class Fn>
void for_each_split(std::size_t k, Fn&& fn) {
  // combo: the k-1 companions of 1, drawn from {2..2k}, colex order.
  std::vector<std::size_t> combo(k - 1);
  std::iota(combo.begin(), combo.end(), std::size_t{2});
  std::vector<std::size_t> first(k), second(k), spill(k + 1);
  std::vector<std::uint8_t> in_first(2 * k + 1);
  while (true) {
    std::fill(in_first.begin(), in_first.end(), std::uint8_t{0});
    first[0] = 1;
    in_first[1] = 1;
    for (std::size_t i = 0; i + 1 < k; ++i) {
      first[i + 1] = combo[i];
      in_first[combo[i]] = 1;
    }
    // Branch-free fill: a member of `first` is written and then overwritten,
    // the last such write lands in the spare slot spill[k].
    std::size_t s = 0;
    for (std::size_t v = 2; v <= 2 * k; ++v) {
      spill[s] = v;
      s += 1u - in_first[v];
    }
    std::copy_n(spill.begin(), k, second.begin());
    fn(first, second);
    // Next combination in colex order.
    std::size_t i = 0;
    while (i < combo.size()) {
      const std::size_t cap = i + 1 < combo.size() ? combo[i + 1] : 2 * k + 1;
      if (combo[i] + 1 < cap) break;
      ++i;
    }
    if (i == combo.size()) return;
    ++combo[i];
    for (std::size_t j = 0; j < i; ++j) combo[j] = 2 + j;
  }
}

/// Reusable buffers for the allocation-free abs check.
struct AbsChecker {
  explicit AbsChecker(std::size_t k) : k(k), sorted(2 * k), coeffs(2 * k) {
    const auto kk = static_cast<std::int64_t>(k);
    for (std::int64_t t = 0; t < kk; ++t) {
      sorted[static_cast<std::size_t>(t)] = 2 * t + 1 - kk;
      sorted[static_cast<std::size_t>(t + kk)] = 2 * t + 1 - kk;
    }
  }

  bool check(const std::vector<std::size_t>& first, const std::vector<std::size_t>& second) {
    for (std::size_t i = 0; i < 2 * k; ++i) coeffs[i] = -sorted[i];
    const auto kk = static_cast<std::int64_t>(k);
    for (std::int64_t t = 0; t < kk; ++t) {
      coeffs[first[static_cast<std::size_t>(t)] - 1] += 2 * t + 1 - kk;
      coeffs[second[static_cast<std::size_t>(t)] - 1] += 2 * t + 1 - kk;
    }
    std::int64_t acc = 0;
    bool ok = true;
    for (std::size_t i = 2 * k; i-- > 0;) {
      acc += coeffs[i];
      ok &= acc >= 0;
    }
    return ok && acc == 0;
  }

  std::size_t k;
  std::vector<std::int64_t> sorted;
  std::vector<std::int64_t> coeffs;
};

inline CertificateEntry make_abs_entry(std::size_t k, Bipartition split) {
  LinearForm form = difference_form_abs(k, split);
  CertificateEntry entry{std::move(split), form, SuffixProof{form.suffix_sums()}, false, {}};
  entry.ok = form.cone_nonnegative();
  if (!entry.ok) entry.failure = "suffix sums not all nonnegative or total nonzero";
  return entry;
}

inline CertificateEntry make_sq_entry(std::size_t k, Bipartition split) {
  QuadraticForm form = difference_form_sq(k, split);
  CertificateEntry entry{std::move(split), form, FactorProof{}, false, {}};
  if (form.is_zero()) {
    entry.ok = true;
    return entry;
  }
  auto pair = factor_rank2(form);
  if (!pair) {
    entry.failure = "no rational rank-2 factorization";
    return entry;
  }
  auto expanded = expand(*pair);
  if (!expanded || !(*expanded == form)) {
    entry.failure = "factorization does not expand to the difference form";
  } else if (pair->scalar <= 0) {
    entry.failure = "factorization scalar is not positive";
  } else if (!pair->first.cone_nonnegative() || !pair->second.cone_nonnegative()) {
    entry.failure = "a factor is not nonnegative on the sorted cone";
  } else {
    entry.ok = true;
  }
  entry.proof = FactorProof{std::move(pair)};
  return entry;
}

}  // namespace detail

/// Visits every certificate entry in colexicographic order without storing
/// them. fn(CertificateEntry&&).
template <class Fn>
void for_each_certificate_entry(std::size_t k, WeightKind weight, Fn&& fn,
                                const CertifyOptions& options = {}) {
  detail::check_certify_range(k, weight, options);
  detail::for_each_split(k, [&](const auto& first, const auto& second) {
    Bipartition split{first, second};
    fn(weight == WeightKind::kAbsoluteDifference ? detail::make_abs_entry(k, std::move(split))
                                                 : detail::make_sq_entry(k, std::move(split)));
  });
}

/// Proves, split by split, that the sorted split of a sorted 2k-tuple is a
/// minimal 2-partition under absolute differences.
inline ExchangeCertificate certify_abs(std::size_t k, const CertifyOptions& options = {}) {
  detail::check_certify_range(k, WeightKind::kAbsoluteDifference, options);
  ExchangeCertificate cert;
  cert.k = k;
  cert.weight = WeightKind::kAbsoluteDifference;
  cert.verified = true;
  if (options.keep_entries) cert.entries.reserve(certificate_size(k));
  detail::AbsChecker checker(k);
  detail::for_each_split(k, [&](const auto& first, const auto& second) {
    ++cert.entry_count;
    if (options.keep_entries) {
      cert.entries.push_back(detail::make_abs_entry(k, Bipartition{first, second}));
      if (!cert.entries.back().ok && cert.verified) {
        cert.verified = false;
        cert.counterexample = cert.entries.back().split;
      }
    } else if (!checker.check(first, second) && cert.verified) {
      cert.verified = false;
      cert.counterexample = Bipartition{first, second};
    }
  });
  return cert;
}

/// Same for squared differences: every nonzero difference form is factored
/// as scalar * L1 * L2 with scalar > 0 and both factors nonnegative on the
/// sorted cone, and the factorization is re-expanded exactly.
inline ExchangeCertificate certify_sq(std::size_t k, const CertifyOptions& options = {}) {
  detail::check_certify_range(k, WeightKind::kSquaredDifference, options);
  ExchangeCertificate cert;
  cert.k = k;
  cert.weight = WeightKind::kSquaredDifference;
  cert.verified = true;
  for_each_certificate_entry(
      k, WeightKind::kSquaredDifference,
      [&](CertificateEntry&& entry) {
        ++cert.entry_count;
        if (!entry.ok && cert.verified) {
          cert.verified = false;
          cert.counterexample = entry.split;
        }
        if (options.keep_entries) cert.entries.push_back(std::move(entry));
      },
      options);
  return cert;
}

inline ExchangeCertificate certify(std::size_t k, WeightKind weight,
                                   const CertifyOptions& options = {}) {
  return weight == WeightKind::kAbsoluteDifference ? certify_abs(k, options)
                                                   : certify_sq(k, options);
}

// ---------------------------------------------------------------------------
// Text format:
//   k=<k> weight=<abs|sq> entries=<count> verified=<bool>
//   {i1,..,ik|j1,..,jk} :: <form> :: <proof>

inline std::string render_entry(const CertificateEntry& entry) {
  std::string form = std::visit([](const auto& f) { return to_string(f); }, entry.form);
  std::string proof;
  if (const auto* suffix = std::get_if<SuffixProof>(&entry.proof)) {
    proof = "suffix_sums=[";
    for (std::size_t i = 0; i < suffix->suffix_sums.size(); ++i) {
      if (i) proof += ',';
      proof += std::to_string(suffix->suffix_sums[i]);
    }
    proof += "]";
  } else {
    const auto& factors = std::get<FactorProof>(entry.proof).factors;
    proof = factors ? to_string(*factors) : std::string("zero");
  }
  if (!entry.ok) proof = "FAILED " + proof + " (" + entry.failure + ")";
  return to_string(entry.split) + " :: " + form + " :: " + proof;
}

inline std::string render_header(std::size_t k, WeightKind weight, std::uint64_t entries,
                                 bool verified) {
  return "k=" + std::to_string(k) + " weight=" + std::string(to_string(weight)) +
         " entries=" + std::to_string(entries) + " verified=" + (verified ? "true" : "false");
}

inline std::string certificate_render(const ExchangeCertificate& cert) {
  std::string out = render_header(cert.k, cert.weight, cert.entry_count, cert.verified) + "\n";
  if (cert.entries.empty()) {
    out += "FAILED: certificate carries no entries\n";
    return out;
  }
  for (const auto& entry : cert.entries) out += render_entry(entry) + "\n";
  return out;
}

/// Streams a certificate without holding its entries: one pass to verify,
/// a second to print. Returns the summary (no entries).
inline ExchangeCertificate write_certificate(std::ostream& os, std::size_t k, WeightKind weight,
                                             const CertifyOptions& options = {},
                                             bool summary_only = false) {
  CertifyOptions lean = options;
  lean.keep_entries = false;
  ExchangeCertificate summary = certify(k, weight, lean);
  os << render_header(k, weight, summary.entry_count, summary.verified) << '\n';
  if (!summary_only) {
    for_each_certificate_entry(
        k, weight, [&](CertificateEntry&& entry) { os << render_entry(entry) << '\n'; }, options);
  }
  return summary;
}

}  // namespace linematch
