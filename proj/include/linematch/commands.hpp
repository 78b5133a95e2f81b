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

// The batch subcommands behind the `linematch` executable. Each takes a
// RunConfig and output streams and returns the process exit code, so they
// can be driven directly from tests.

#pragma once

#include <cstdint>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"
#include "linematch/certify.hpp"
#include "linematch/core.hpp"
#include "linematch/heuristics.hpp"
#include "linematch/io.hpp"
#include "linematch/line_match.hpp"
#include "linematch/multipartite.hpp"
#include "linematch/oracle.hpp"

namespace linematch::cli {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,        // usage errors, unverified certificates
  kMalformedInput = 2,
  kNotDivisible = 3,
  kOutOfRange = 4,
  kOverBudget = 5,
};

inline int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParse: return kMalformedInput;
    case ErrorCode::kSize: return kNotDivisible;
    case ErrorCode::kRange: return kOutOfRange;
    case ErrorCode::kBudget: return kOverBudget;
    default: return kFailure;
  }
}

enum class Format { kJson, kCsv };
enum class Distribution { kUniformInteger, kUniformReal };

struct RunConfig {
  std::string subcommand;
  std::string input;
  std::size_t k = 2;
  WeightKind weight = WeightKind::kAbsoluteDifference;
  bool balance = false;
  Format format = Format::kJson;
  std::uint64_t seed = 1;
  std::uint64_t budget = kDefaultEnumerationBudget;
  bool uncertified = false;
  bool full_range = false;
  // certify
  bool summary_only = false;
  // bench
  std::vector<std::size_t> sizes{2, 3, 4};
  std::size_t instances = 5;
  Distribution distribution = Distribution::kUniformInteger;
  bool oracle = true;
};

/// Throws kInvalidInput when the config breaks its own invariants.
inline void validate(const RunConfig& config) {
  if (config.k < 2) fail(ErrorCode::kInvalidInput, "--k must be at least 2");
  if (config.budget == 0) fail(ErrorCode::kInvalidInput, "--budget must be positive");
}

/// Without --full-range certification stops at abs k <= 8 and sq k <= 5.
inline std::size_t default_certify_limit(WeightKind weight) {
  return weight == WeightKind::kAbsoluteDifference ? 8 : 5;
}

// ---------------------------------------------------------------------------
// match

inline nlohmann::ordered_json config_json(const RunConfig& config) {
  nlohmann::ordered_json out;
  out["k"] = config.k;
  out["weight"] = std::string(to_string(config.weight));
  out["balance"] = config.balance;
  out["uncertified"] = config.uncertified;
  out["input"] = config.input;
  return out;
}

inline void write_match_report(std::ostream& out, const RunConfig& config,
                               const BalancedPartition& result) {
  const KPartition& partition = result.partition;
  if (config.format == Format::kCsv) {
    out << "group,id,score,slot,within\n";
    for (std::size_t t = 0; t < partition.size(); ++t) {
      const auto tuple = partition.tuple(t);
      for (std::size_t i = 0; i < tuple.size(); ++i) {
        out << t << ',' << tuple[i].id << ',' << io::format_number(tuple[i].score) << ',';
        if (config.balance) out << result.slot_of_member[t][i] + 1;
        out << ',' << io::format_number(partition.within(t)) << '\n';
      }
    }
    return;
  }
  nlohmann::ordered_json doc;
  doc["schema_version"] = 1;
  doc["config"] = config_json(config);
  doc["groups"] = nlohmann::ordered_json::array();
  for (std::size_t t = 0; t < partition.size(); ++t) {
    nlohmann::ordered_json group;
    group["index"] = t;
    group["members"] = nlohmann::ordered_json::array();
    const auto tuple = partition.tuple(t);
    for (std::size_t i = 0; i < tuple.size(); ++i) {
      nlohmann::ordered_json member;
      member["id"] = tuple[i].id;
      member["score"] = tuple[i].score;
      if (config.balance) member["slot"] = result.slot_of_member[t][i] + 1;
      group["members"].push_back(std::move(member));
    }
    group["within"] = partition.within(t);
    doc["groups"].push_back(std::move(group));
  }
  doc["total_within"] = partition.total_within();
  doc["column_means"] = result.column_means;
  out << doc.dump(2) << '\n';
}

/// Column means of the unbalanced (sorted) slot assignment.
inline BalancedPartition identity_columns(KPartition partition) {
  BalancedPartition out;
  const std::size_t k = partition.k();
  out.column_sums.assign(k, 0.0);
  for (std::size_t t = 0; t < partition.size(); ++t) {
    std::vector<std::size_t> slots(k);
    for (std::size_t i = 0; i < k; ++i) {
      slots[i] = i;
      out.column_sums[i] += partition.tuple(t)[i].score;
    }
    out.slot_of_member.push_back(std::move(slots));
    out.placement_order.push_back(t);
  }
  out.column_means.assign(k, 0.0);
  for (std::size_t i = 0; i < k && partition.size() > 0; ++i) {
    out.column_means[i] = out.column_sums[i] / static_cast<double>(partition.size());
  }
  out.partition = std::move(partition);
  return out;
}

inline int cmd_match(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    validate(config);
    auto items = io::read_items(config.input);
    auto partition = match_line(std::move(items), config.k, config.weight,
                                MatchOptions{config.uncertified});
    const BalancedPartition result = config.balance ? balance_columns(std::move(partition))
                                                    : identity_columns(std::move(partition));
    write_match_report(out, config, result);
    return kOk;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  }
}

// ---------------------------------------------------------------------------
// certify

inline int cmd_certify(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    validate(config);
    const std::size_t limit =
        config.full_range ? max_certified_k(config.weight) : default_certify_limit(config.weight);
    if (config.k > limit && !config.uncertified) {
      fail(ErrorCode::kRange,
           "k=" + std::to_string(config.k) + " is outside the certifiable range for " +
               std::string(to_string(config.weight)) + " (default: abs k <= 8, sq k <= 5; " +
               "--full-range: abs k <= 16, sq k <= 8)");
    }
    CertifyOptions options;
    options.exploratory = config.uncertified;
    const auto summary = write_certificate(out, config.k, config.weight, options, config.summary_only);
    return summary.verified ? kOk : kFailure;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  }
}

// ---------------------------------------------------------------------------
// bench

struct BenchRow {
  std::string instance;
  std::size_t n = 0;  // groups
  std::size_t items = 0;
  std::optional<double> optimal;
  double match_line = 0;
  double greedy = 0;
  double local_search = 0;
  std::optional<double> hierarchical;
  double tri_bound = 0;
  double tri_sorted = 0;
  double triangle = 0;
  double metric_bound = 0;
  std::optional<double> metric_optimal;
  double metric_triangle = 0;
};

namespace detail {

inline std::vector<double> draw(std::mt19937_64& rng, Distribution dist, std::size_t count) {
  std::vector<double> out(count);
  if (dist == Distribution::kUniformInteger) {
    std::uniform_int_distribution<int> d(0, 100);
    for (auto& v : out) v = d(rng);
  } else {
    std::uniform_real_distribution<double> d(0.0, 100.0);
    for (auto& v : out) v = d(rng);
  }
  return out;
}

inline bool is_three_times_power_of_two(std::size_t count) {
  if (count < 3 || count % 3 != 0) return false;
  const std::size_t q = count / 3;
  return (q & (q - 1)) == 0;
}

inline std::optional<double> ratio(std::optional<double> value, double reference) {
  if (!value) return std::nullopt;
  return ratio_to_bound(*value, reference);
}

inline BenchRow bench_instance(const RunConfig& config, std::mt19937_64& rng, std::string name,
                               std::vector<double> scores, bool run_oracle) {
  BenchRow row;
  row.instance = std::move(name);
  row.items = scores.size();
  row.n = scores.size() / config.k;
  const auto items = make_items(scores, "s");
  const MatchOptions options{config.uncertified};

  if (run_oracle) row.optimal = brute_force_partition(items, config.k, config.weight, config.budget).total_within();
  row.match_line = match_line(items, config.k, config.weight, options).total_within();
  const auto greedy = greedy_match(items, config.k, config.weight, config.budget);
  row.greedy = greedy.total_within();
  row.local_search = local_search_2tuple(greedy, config.budget).total_within();
  if (config.k == 3 && is_three_times_power_of_two(scores.size())) {
    std::vector<EuclideanPoint> points;
    for (const auto& item : items) points.push_back({item.id, {item.score}});
    const auto triples = hierarchical_triple_match(points);
    // Euclidean cost on a line is the absolute-difference cost; re-score
    // for squared differences.
    std::vector<double> grouped;
    for (const auto& t : triples.triples) {
      for (std::size_t index : t) grouped.push_back(scores[index]);
    }
    std::vector<ScoredItem> regrouped;
    for (std::size_t i = 0; i < grouped.size(); ++i) regrouped.push_back({"", grouped[i], i});
    row.hierarchical = KPartition(3, config.weight, std::move(regrouped)).total_within();
  }

  const std::size_t n = row.n;
  const auto tri = make_tripartite(draw(rng, config.distribution, n), draw(rng, config.distribution, n),
                                   draw(rng, config.distribution, n), config.weight);
  row.tri_bound = tripartite_lower_bound(tri);
  row.tri_sorted = match_sorted(tri).weight;
  row.triangle = triangle_matching(tri).matching.weight;

  std::vector<EuclideanPoint> parts[3];
  for (auto& part : parts) {
    const auto xs = draw(rng, config.distribution, n);
    const auto ys = draw(rng, config.distribution, n);
    for (std::size_t i = 0; i < n; ++i) part.push_back({std::to_string(i), {xs[i], ys[i]}});
  }
  const auto metric = euclidean_tripartite(parts[0], parts[1], parts[2]);
  row.metric_bound = tripartite_lower_bound(metric);
  row.metric_triangle = triangle_matching(metric).matching.weight;
  if (n <= kMaxOracleTripartite) row.metric_optimal = brute_force_assignment(metric).weight;
  return row;
}

}  // namespace detail

/// Generates instances for every requested group count and returns the rows.
/// The first row is the six-point reference instance (1,3,4,5,8,9) when k=3.
inline std::vector<BenchRow> run_bench(const RunConfig& config) {
  validate(config);
  for (std::size_t n : config.sizes) {
    check_match_request(n * config.k, config.k, config.weight, MatchOptions{config.uncertified});
    if (n == 0) fail(ErrorCode::kInvalidInput, "--sizes entries must be positive");
    if (config.oracle && PartitionEnumerator::count(n * config.k, config.k) > config.budget) {
      fail(ErrorCode::kBudget, "oracle for n=" + std::to_string(n) + ", k=" +
                                   std::to_string(config.k) + " exceeds --budget " +
                                   std::to_string(config.budget));
    }
  }
  std::mt19937_64 rng(config.seed);
  std::vector<BenchRow> rows;
  if (config.k == 3) {
    rows.push_back(detail::bench_instance(config, rng, "reference", {1, 3, 4, 5, 8, 9}, config.oracle));
  }
  for (std::size_t n : config.sizes) {
    for (std::size_t i = 0; i < config.instances; ++i) {
      auto scores = detail::draw(rng, config.distribution, n * config.k);
      rows.push_back(detail::bench_instance(config, rng, "n" + std::to_string(n) + "-" + std::to_string(i),
                                            std::move(scores), config.oracle));
    }
  }
  return rows;
}

inline void write_bench_report(std::ostream& out, const RunConfig& config,
                               const std::vector<BenchRow>& rows) {
  using detail::ratio;
  auto reference = [](const BenchRow& r) { return r.optimal.value_or(r.match_line); };
  if (config.format == Format::kCsv) {
    auto opt = [](std::optional<double> v) { return v ? io::format_number(*v) : std::string(); };
    out << "instance,n,items,optimal,match_line,greedy,local_search,hierarchical,line_ratio,"
           "greedy_ratio,local_ratio,hier_ratio,tri_bound,tri_sorted,triangle,tri_ratio,"
           "metric_bound,metric_optimal,metric_triangle,metric_ratio_to_bound,"
           "metric_ratio_to_optimal\n";
    for (const auto& r : rows) {
      out << r.instance << ',' << r.n << ',' << r.items << ',' << opt(r.optimal) << ','
          << io::format_number(r.match_line) << ',' << io::format_number(r.greedy) << ','
          << io::format_number(r.local_search) << ',' << opt(r.hierarchical) << ','
          << opt(ratio(r.match_line, reference(r))) << ',' << opt(ratio(r.greedy, reference(r))) << ','
          << opt(ratio(r.local_search, reference(r))) << ',' << opt(ratio(r.hierarchical, reference(r)))
          << ',' << io::format_number(r.tri_bound) << ',' << io::format_number(r.tri_sorted) << ','
          << io::format_number(r.triangle) << ','
          << io::format_number(ratio_to_bound(r.triangle, r.tri_bound)) << ','
          << io::format_number(r.metric_bound) << ',' << opt(r.metric_optimal) << ','
          << io::format_number(r.metric_triangle) << ','
          << io::format_number(ratio_to_bound(r.metric_triangle, r.metric_bound)) << ','
          << opt(r.metric_optimal ? ratio(r.metric_triangle, *r.metric_optimal) : std::nullopt) << '\n';
    }
    return;
  }
  auto opt = [](std::optional<double> v) { return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(); };
  nlohmann::ordered_json doc;
  doc["schema_version"] = 1;
  nlohmann::ordered_json cfg;
  cfg["k"] = config.k;
  cfg["weight"] = std::string(to_string(config.weight));
  cfg["sizes"] = config.sizes;
  cfg["instances"] = config.instances;
  cfg["distribution"] =
      config.distribution == Distribution::kUniformInteger ? "uniform-integer" : "uniform-real";
  cfg["seed"] = config.seed;
  cfg["budget"] = config.budget;
  cfg["oracle"] = config.oracle;
  doc["config"] = std::move(cfg);
  doc["instances"] = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    nlohmann::ordered_json row;
    row["instance"] = r.instance;
    row["n"] = r.n;
    row["items"] = r.items;
    row["optimal"] = opt(r.optimal);
    row["match_line"] = r.match_line;
    row["greedy"] = r.greedy;
    row["local_search"] = r.local_search;
    row["hierarchical"] = opt(r.hierarchical);
    row["line_ratio"] = opt(ratio(r.match_line, reference(r)));
    row["greedy_ratio"] = opt(ratio(r.greedy, reference(r)));
    row["local_ratio"] = opt(ratio(r.local_search, reference(r)));
    row["hier_ratio"] = opt(ratio(r.hierarchical, reference(r)));
    row["tri_bound"] = r.tri_bound;
    row["tri_sorted"] = r.tri_sorted;
    row["triangle"] = r.triangle;
    row["tri_ratio"] = ratio_to_bound(r.triangle, r.tri_bound);
    row["metric_bound"] = r.metric_bound;
    row["metric_optimal"] = opt(r.metric_optimal);
    row["metric_triangle"] = r.metric_triangle;
    row["metric_ratio_to_bound"] = ratio_to_bound(r.metric_triangle, r.metric_bound);
    row["metric_ratio_to_optimal"] =
        opt(r.metric_optimal ? ratio(r.metric_triangle, *r.metric_optimal) : std::nullopt);
    doc["instances"].push_back(std::move(row));
  }
  out << doc.dump(2) << '\n';
}

inline int cmd_bench(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    write_bench_report(out, config, run_bench(config));
    return kOk;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  }
}

}  // namespace linematch::cli
