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

#include "linematch/certify.hpp"

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "test_oracles.hpp"

namespace linematch {
namespace {

using I64 = std::int64_t;
constexpr WeightKind kAbs = WeightKind::kAbsoluteDifference;
constexpr WeightKind kSq = WeightKind::kSquaredDifference;

std::vector<I64> pick(const std::vector<I64>& x, const std::vector<std::size_t>& one_based) {
  std::vector<I64> out;
  for (std::size_t i : one_based) out.push_back(x[i - 1]);
  return out;
}

// Difference of the two within-distance sums, straight from the definitions.
I64 direct_difference(const std::vector<I64>& sorted, const Bipartition& split, WeightKind w) {
  auto cost = [&](const std::vector<I64>& g) {
    return w == kAbs ? testing::pairwise_abs(g) : testing::pairwise_sq(g);
  };
  const auto base = sorted_split(sorted.size() / 2);
  return cost(pick(sorted, split.first)) + cost(pick(sorted, split.second)) -
         cost(pick(sorted, base.first)) - cost(pick(sorted, base.second));
}

TEST(BipartitionTest, RenderAndValidate) {
  Bipartition split{{1, 3}, {2, 4}};
  EXPECT_EQ(to_string(split), "{1,3|2,4}");
  EXPECT_NO_THROW(validate_bipartition(2, split));
  EXPECT_THROW(validate_bipartition(2, Bipartition{{2, 3}, {1, 4}}), Error);
  EXPECT_THROW(validate_bipartition(2, Bipartition{{1, 1}, {2, 4}}), Error);
  EXPECT_THROW(validate_bipartition(2, Bipartition{{1, 5}, {2, 4}}), Error);
  EXPECT_THROW(validate_bipartition(2, Bipartition{{1, 2, 3}, {4}}), Error);
}

TEST(LinearFormTest, SuffixCriterionAgreesWithConeGenerators) {
  // The sorted cone is spanned by the all-ones line and the step vectors
  // (0,..,0,1,..,1); a form is nonnegative on it iff it vanishes on the
  // line and is nonnegative on every step.
  std::mt19937_64 rng(41);
  std::uniform_int_distribution<I64> coeff(-3, 3);
  int accepted = 0;
  for (int trial = 0; trial < 20000; ++trial) {
    const std::size_t m = 2 + trial % 6;
    std::vector<I64> c(m);
    for (auto& v : c) v = coeff(rng);
    if (trial % 3 == 0) c.back() -= std::accumulate(c.begin(), c.end(), I64{0});
    LinearForm form(c);
    bool generators_ok = form.evaluate(std::span<const I64>(std::vector<I64>(m, 1))) == 0;
    for (std::size_t j = 1; j < m && generators_ok; ++j) {
      std::vector<I64> step(m, 0);
      std::fill(step.begin() + static_cast<std::ptrdiff_t>(j), step.end(), 1);
      if (form.evaluate(std::span<const I64>(step)) < 0) generators_ok = false;
    }
    ASSERT_EQ(form.cone_nonnegative(), generators_ok) << to_string(form);
    if (generators_ok) {
      ++accepted;
      for (int s = 0; s < 20; ++s) {
        auto x = testing::random_sorted_ints(rng, m, -50, 50);
        ASSERT_GE(form.evaluate(std::span<const I64>(x)), 0);
      }
    }
  }
  EXPECT_GT(accepted, 100);
}

TEST(LinearFormTest, Rendering) {
  EXPECT_EQ(to_string(LinearForm({0, 0, -4, 4})), "4(x_4-x_3)");
  EXPECT_EQ(to_string(LinearForm({0, -2, -2, 4})), "2(2x_4-x_3-x_2)");
  EXPECT_EQ(to_string(LinearForm({0, -1, 1})), "x_3-x_2");
  EXPECT_EQ(to_string(LinearForm({0, 0})), "0");
}

TEST(CertificateTest, EntryCounts) {
  const std::vector<std::uint64_t> expected{3, 10, 35, 126, 462, 1716, 6435};
  for (std::size_t k = 2; k <= 8; ++k) {
    EXPECT_EQ(certificate_size(k), expected[k - 2]);
    EXPECT_EQ(certify_abs(k).entry_count, expected[k - 2]);
  }
  for (std::size_t k = 2; k <= 5; ++k) EXPECT_EQ(certify_sq(k).entry_count, expected[k - 2]);
}

TEST(CertificateTest, SplitsAreDistinctValidAndColex) {
  for (std::size_t k = 2; k <= 6; ++k) {
    auto cert = certify_abs(k);
    std::set<std::vector<std::size_t>> seen;
    EXPECT_EQ(cert.entries.front().split, sorted_split(k));
    std::vector<std::size_t> prev_rev;
    for (const auto& e : cert.entries) {
      validate_bipartition(k, e.split);
      EXPECT_TRUE(seen.insert(e.split.first).second);
      std::vector<std::size_t> rev(e.split.first.rbegin(), e.split.first.rend());
      if (!prev_rev.empty()) {
        EXPECT_LT(prev_rev, rev);
      }
      prev_rev = rev;
    }
  }
}

TEST(CertificateTest, AbsVerifiesThroughEight) {
  for (std::size_t k = 2; k <= 8; ++k) {
    auto cert = certify_abs(k);
    EXPECT_TRUE(cert.verified) << "k=" << k;
    EXPECT_FALSE(cert.counterexample.has_value());
    for (const auto& e : cert.entries) EXPECT_TRUE(e.ok);
    EXPECT_TRUE(certify_abs(k, {.exploratory = false, .keep_entries = false}).verified);
  }
}

TEST(CertificateTest, SqVerifiesThroughFive) {
  for (std::size_t k = 2; k <= 5; ++k) {
    auto cert = certify_sq(k);
    EXPECT_TRUE(cert.verified) << "k=" << k;
    for (const auto& e : cert.entries) {
      ASSERT_TRUE(e.ok) << render_entry(e);
      const auto& form = std::get<QuadraticForm>(e.form);
      const auto& factors = std::get<FactorProof>(e.proof).factors;
      if (form.is_zero()) {
        EXPECT_FALSE(factors.has_value());
        continue;
      }
      ASSERT_TRUE(factors.has_value());
      EXPECT_EQ(factors->scalar, 2);
      auto back = expand(*factors);
      ASSERT_TRUE(back.has_value());
      EXPECT_EQ(*back, form);
    }
  }
}

TEST(CertificateTest, SqFactorsMatchClosedForm) {
  // For the sorted split S = (S1, S2) and another split B = (B1, B2) with
  // T the total, the difference is 2 (s_B1 - s_S1)(T - s_S1 - s_B1) where
  // s_X is the sum over X.
  for (std::size_t k = 2; k <= 5; ++k) {
    for (const auto& e : certify_sq(k).entries) {
      std::vector<I64> l1(2 * k, 0), l2(2 * k, 1);
      for (std::size_t i : e.split.first) {
        l1[i - 1] += 1;
        l2[i - 1] -= 1;
      }
      for (std::size_t i = 1; i <= k; ++i) {
        l1[i - 1] -= 1;
        l2[i - 1] -= 1;
      }
      FactorPair closed{2, LinearForm(l1), LinearForm(l2)};
      auto expected = expand(closed);
      ASSERT_TRUE(expected.has_value());
      EXPECT_EQ(*expected, std::get<QuadraticForm>(e.form)) << to_string(e.split);
    }
  }
}

TEST(CertificateTest, FormsAgreeWithDefinitionsAndAreNonnegative) {
  std::mt19937_64 rng(42);
  for (WeightKind w : {kAbs, kSq}) {
    const std::size_t k_max = w == kAbs ? 8 : 5;
    for (std::size_t k = 2; k <= k_max; ++k) {
      for_each_certificate_entry(k, w, [&](CertificateEntry&& e) {
        for (int s = 0; s < 1000; ++s) {
          auto x = testing::random_sorted_ints(rng, 2 * k, -100, 100);
          const I64 direct = direct_difference(x, e.split, w);
          ASSERT_GE(direct, 0);
          if (w == kAbs) {
            ASSERT_EQ(std::get<LinearForm>(e.form).evaluate(std::span<const I64>(x)), direct);
          } else {
            ASSERT_EQ(std::get<QuadraticForm>(e.form).evaluate(std::span<const I64>(x)),
                      BigInt(direct));
          }
        }
      });
    }
  }
}

TEST(CertificateTest, AbsTriplesMatchReferenceList) {
  const std::vector<std::pair<std::string, std::string>> expected{
      {"{1,2,4|3,5,6}", "4(x_4-x_3)"},
      {"{1,2,5|3,4,6}", "2(x_5+x_4-2x_3)"},
      {"{1,2,6|3,4,5}", "2(x_5+x_4-2x_3)"},
      {"{1,3,4|2,5,6}", "2(2x_4-x_3-x_2)"},
      {"{1,3,5|2,4,6}", "2(x_5+x_4-x_3-x_2)"},
      {"{1,3,6|2,4,5}", "2(x_5+x_4-x_3-x_2)"},
      {"{1,4,5|2,3,6}", "2(x_5+x_4-x_3-x_2)"},
      {"{1,4,6|2,3,5}", "2(x_5+x_4-x_3-x_2)"},
      {"{1,5,6|2,3,4}", "2(2x_4-x_3-x_2)"}};
  auto cert = certify_abs(3);
  for (const auto& [split, form] : expected) {
    auto it = std::find_if(cert.entries.begin(), cert.entries.end(),
                           [&](const auto& e) { return to_string(e.split) == split; });
    ASSERT_NE(it, cert.entries.end()) << split;
    EXPECT_EQ(to_string(std::get<LinearForm>(it->form)), form) << split;
  }
}

TEST(CertificateTest, AbsPairsMatchReferenceList) {
  auto cert = certify_abs(2);
  ASSERT_EQ(cert.entries.size(), 3u);
  EXPECT_EQ(to_string(std::get<LinearForm>(cert.entries[1].form)), "2(x_3-x_2)");
  EXPECT_EQ(to_string(std::get<LinearForm>(cert.entries[2].form)), "2(x_3-x_2)");
}

TEST(CertificateTest, SqPairsMatchReferenceList) {
  auto cert = certify_sq(2);
  ASSERT_EQ(cert.entries.size(), 3u);
  EXPECT_EQ(to_string(*std::get<FactorProof>(cert.entries[1].proof).factors), "2(x_4-x_1)(x_3-x_2)");
  EXPECT_EQ(to_string(*std::get<FactorProof>(cert.entries[2].proof).factors), "2(x_3-x_1)(x_4-x_2)");
}

TEST(CertificateTest, SqTriplesMatchReferenceList) {
  const std::vector<std::pair<std::string, std::string>> expected{
      {"{1,2,4|3,5,6}", "2(x_4-x_3)(x_6+x_5-x_2-x_1)"},
      {"{1,2,6|3,4,5}", "2(x_6-x_3)(x_5+x_4-x_2-x_1)"},
      {"{1,3,4|2,5,6}", "2(x_4-x_2)(x_6+x_5-x_3-x_1)"},
      {"{1,3,5|2,4,6}", "2(x_5-x_2)(x_6+x_4-x_3-x_1)"},
      {"{1,3,6|2,4,5}", "2(x_6-x_2)(x_5+x_4-x_3-x_1)"},
      {"{1,4,5|2,3,6}", "2(x_6-x_1)(x_5+x_4-x_3-x_2)"},
      {"{1,4,6|2,3,5}", "2(x_5-x_1)(x_6+x_4-x_3-x_2)"},
      {"{1,5,6|2,3,4}", "2(x_4-x_1)(x_6+x_5-x_3-x_2)"},
      // Also written with both factors negated; see the expansion check below.
      {"{1,2,5|3,4,6}", "2(x_5-x_3)(x_6+x_4-x_2-x_1)"}};
  auto cert = certify_sq(3);
  for (const auto& [split, factors] : expected) {
    auto it = std::find_if(cert.entries.begin(), cert.entries.end(),
                           [&](const auto& e) { return to_string(e.split) == split; });
    ASSERT_NE(it, cert.entries.end()) << split;
    EXPECT_EQ(to_string(*std::get<FactorProof>(it->proof).factors), factors) << split;
  }
  // The negated spelling expands to the same form.
  FactorPair negated{2, LinearForm({1, 1, 0, -1, 0, -1}), LinearForm({0, 0, 1, 0, -1, 0})};
  auto it = std::find_if(cert.entries.begin(), cert.entries.end(),
                         [](const auto& e) { return to_string(e.split) == "{1,2,5|3,4,6}"; });
  EXPECT_EQ(*expand(negated), std::get<QuadraticForm>(it->form));
}

TEST(CertificateTest, FactoringRejectsNonFactorableForms) {
  // x_1^2 + x_2^2 has no real linear factors.
  QuadraticForm form(2);
  form.add_entry(0, 0, 1);
  form.add_entry(1, 1, 1);
  EXPECT_FALSE(factor_rank2(form).has_value());
  // Rank 3.
  QuadraticForm rank3(3);
  for (std::size_t i = 0; i < 3; ++i) rank3.add_entry(i, i, 1);
  auto pair = factor_rank2(rank3);
  if (pair) {
    EXPECT_NE(*expand(*pair), rank3);
  }
}

TEST(CertificateTest, FactoringRecoversRandomProducts) {
  std::mt19937_64 rng(43);
  std::uniform_int_distribution<I64> coeff(-4, 4);
  int factored = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t m = 2 + trial % 6;
    std::vector<I64> a(m), b(m);
    for (auto& v : a) v = coeff(rng);
    for (auto& v : b) v = coeff(rng);
    FactorPair product{Rational(2), LinearForm(a), LinearForm(b)};
    auto form = expand(product);
    ASSERT_TRUE(form.has_value());
    if (form->is_zero()) continue;
    auto pair = factor_rank2(*form);
    ASSERT_TRUE(pair.has_value()) << "m=" << m;
    EXPECT_EQ(*expand(*pair), *form);
    ++factored;
  }
  EXPECT_GT(factored, 200);
}

TEST(CertificateTest, RangeChecks) {
  EXPECT_THROW(certify_sq(9), Error);
  EXPECT_THROW(certify_abs(17), Error);
  EXPECT_THROW(certify_abs(1), Error);
  try {
    certify_sq(9);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kRange);
  }
  auto cert = certify_sq(6, {.exploratory = true, .keep_entries = false});
  EXPECT_TRUE(cert.verified);
  EXPECT_EQ(cert.entry_count, 462u);
}

TEST(CertificateTest, RenderingFormat) {
  auto cert = certify_abs(2);
  EXPECT_EQ(certificate_render(cert),
            "k=2 weight=abs entries=3 verified=true\n"
            "{1,2|3,4} :: 0 :: suffix_sums=[0,0,0,0]\n"
            "{1,3|2,4} :: 2(x_3-x_2) :: suffix_sums=[0,0,2,0]\n"
            "{1,4|2,3} :: 2(x_3-x_2) :: suffix_sums=[0,0,2,0]\n");
  std::ostringstream streamed;
  auto summary = write_certificate(streamed, 2, kAbs);
  EXPECT_EQ(streamed.str(), certificate_render(cert));
  EXPECT_TRUE(summary.verified);
  EXPECT_TRUE(summary.entries.empty());
  EXPECT_NE(certificate_render(summary).find("FAILED"), std::string::npos);
}

TEST(CertificateTest, SqRendering) {
  std::ostringstream os;
  write_certificate(os, 2, kSq);
  EXPECT_EQ(os.str(),
            "k=2 weight=sq entries=3 verified=true\n"
            "{1,2|3,4} :: 0 :: zero\n"
            "{1,3|2,4} :: 2x_3x_4-2x_2x_4-2x_1x_3+2x_1x_2 :: 2(x_4-x_1)(x_3-x_2)\n"
            "{1,4|2,3} :: 2x_3x_4-2x_1x_4-2x_2x_3+2x_1x_2 :: 2(x_3-x_1)(x_4-x_2)\n");
}

TEST(CertificateTest, GrowthLawOfAbsCertification) {
  // Entries grow by (2k+1)(2k+2)/((k+1)^2) ~ 4 and each costs O(k), so
  // consecutive timings should stay within a loose [3, 6] band.
  // Round-robin over k with the minimum per k, so machine drift hits every
  // size alike.
  const CertifyOptions lean{.exploratory = false, .keep_entries = false};
  std::vector<double> t(4, 1e300);
  for (int round = 0; round < 7; ++round) {
    for (std::size_t k = 6; k <= 9; ++k) {
      int reps = 0;
      double elapsed = 0;
      const auto start = std::chrono::steady_clock::now();
      do {
        ASSERT_TRUE(certify_abs(k, lean).verified);
        ++reps;
        elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      } while (elapsed < 0.03);
      t[k - 6] = std::min(t[k - 6], elapsed / reps);
    }
  }
  for (std::size_t i = 0; i + 1 < t.size(); ++i) {
    const double ratio = t[i + 1] / t[i];
    EXPECT_GE(ratio, 3.0) << "k=" << 6 + i;
    EXPECT_LE(ratio, 6.0) << "k=" << 6 + i;
  }
}

}  // namespace
}  // namespace linematch
