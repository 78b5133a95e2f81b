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

#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "linematch/commands.hpp"

namespace {

using linematch::cli::RunConfig;

void add_common(CLI::App* cmd, RunConfig& config, std::string& weight) {
  cmd->add_option("--k", config.k, "Tuple size")->check(CLI::Range(std::size_t{2}, std::size_t{1} << 20));
  cmd->add_option("--weight", weight, "Within-distance: abs or sq")
      ->check(CLI::IsMember({"abs", "sq"}));
  cmd->add_flag("--uncertified", config.uncertified,
                "Allow k outside the certified range");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Minimal k-tuple matching of scored items on a line"};
  app.require_subcommand(1);
  RunConfig config;
  std::string weight = "abs";
  std::string format = "json";
  std::string distribution = "uniform-integer";

  auto* match = app.add_subcommand("match", "Group a cohort CSV (id,score) into k-tuples");
  add_common(match, config, weight);
  match->add_option("--input", config.input, "Cohort CSV, or a JSON match report")->required();
  match->add_flag("--balance", config.balance, "Assign members to treatment slots with balanced column means");
  match->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

  auto* certify = app.add_subcommand("certify", "Print the exchange certificate for k");
  add_common(certify, config, weight);
  certify->add_flag("--full-range", config.full_range,
                    "Allow abs k <= 16 and sq k <= 8 (long running)");
  certify->add_flag("--summary-only", config.summary_only, "Print only the header line");

  auto* bench = app.add_subcommand("bench", "Compare heuristics against optima and lower bounds");
  add_common(bench, config, weight);
  bench->add_option("--sizes", config.sizes, "Group counts n to generate")->delimiter(',');
  bench->add_option("--instances", config.instances, "Instances per size");
  bench->add_option("--distribution", distribution, "uniform-integer or uniform-real")
      ->check(CLI::IsMember({"uniform-integer", "uniform-real"}));
  bench->add_option("--seed", config.seed, "Generator seed");
  bench->add_option("--budget", config.budget, "Enumeration budget for the oracle")
      ->check(CLI::PositiveNumber);
  bench->add_flag("--no-oracle{false}", config.oracle, "Skip the brute-force optimum");
  bench->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : linematch::cli::kFailure;
  }

  config.weight = *linematch::parse_weight_kind(weight);
  config.format = format == "csv" ? linematch::cli::Format::kCsv : linematch::cli::Format::kJson;
  config.distribution = distribution == "uniform-real" ? linematch::cli::Distribution::kUniformReal
                                                       : linematch::cli::Distribution::kUniformInteger;

  if (match->parsed()) {
    config.subcommand = "match";
    return linematch::cli::cmd_match(config, std::cout, std::cerr);
  }
  if (certify->parsed()) {
    config.subcommand = "certify";
    return linematch::cli::cmd_certify(config, std::cout, std::cerr);
  }
  config.subcommand = "bench";
  return linematch::cli::cmd_bench(config, std::cout, std::cerr);
}
