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

// Cohort file input (CSV `id,score`, or a previous JSON match report) and
// number formatting shared by the reports.

#pragma once

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "json.hpp"
#include "linematch/core.hpp"

namespace linematch::io {

/// Shortest decimal that round-trips.
inline std::string format_number(double value) {
  char buffer[64];
  auto [end, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
  return std::string(buffer, end);
}

namespace detail {

inline std::string_view trim(std::string_view text) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) {
    text.remove_suffix(1);
  }
  return text;
}

[[noreturn]] inline void parse_fail(std::string_view source, std::size_t line,
                                    const std::string& what) {
  fail(ErrorCode::kParse, std::string(source) + ":" + std::to_string(line) + ": " + what);
}

inline double parse_score(std::string_view text, std::string_view source, std::size_t line) {
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value,
                                   std::chars_format::general);
  if (ec != std::errc() || end != text.data() + text.size() || text.empty()) {
    parse_fail(source, line, "score '" + std::string(text) + "' is not a decimal number");
  }
  if (!std::isfinite(value)) parse_fail(source, line, "score must be finite");
  return value;
}

}  // namespace detail

/// Parses `id,score` rows. The header is mandatory, ids must be unique and
/// non-empty, scores finite decimals. Blank lines are skipped. Errors carry
/// ErrorCode::kParse and name the offending line.
inline std::vector<ScoredItem> parse_csv(std::string_view text, std::string_view source = "input") {
  if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);
  std::vector<ScoredItem> items;
  std::unordered_set<std::string> seen;
  bool header_seen = false;
  std::size_t line_no = 0;
  while (!text.empty() || line_no == 0) {
    ++line_no;
    const std::size_t eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    line = detail::trim(line);
    if (line.empty()) {
      if (text.empty() && !header_seen) detail::parse_fail(source, line_no, "missing header 'id,score'");
      continue;
    }
    const std::size_t comma = line.find(',');
    if (comma == std::string_view::npos || line.find(',', comma + 1) != std::string_view::npos) {
      detail::parse_fail(source, line_no, "expected exactly two comma-separated fields");
    }
    const std::string_view id = detail::trim(line.substr(0, comma));
    const std::string_view score = detail::trim(line.substr(comma + 1));
    if (!header_seen) {
      if (id != "id" || score != "score") {
        detail::parse_fail(source, line_no, "header must be 'id,score'");
      }
      header_seen = true;
      continue;
    }
    if (id.empty()) detail::parse_fail(source, line_no, "empty id");
    if (!seen.emplace(id).second) {
      detail::parse_fail(source, line_no, "duplicate id '" + std::string(id) + "'");
    }
    items.push_back({std::string(id), detail::parse_score(score, source, line_no), items.size()});
  }
  if (!header_seen) detail::parse_fail(source, 1, "missing header 'id,score'");
  return items;
}

/// Re-ingests the members of a JSON match report, in report order.
inline std::vector<ScoredItem> parse_match_json(std::string_view text,
                                                std::string_view source = "input") {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    fail(ErrorCode::kParse, std::string(source) + ": " + e.what());
  }
  if (!doc.is_object() || doc.value("schema_version", 0) != 1 || !doc.contains("groups")) {
    fail(ErrorCode::kParse, std::string(source) + ": not a schema_version 1 match report");
  }
  std::vector<ScoredItem> items;
  std::unordered_set<std::string> seen;
  for (const auto& group : doc["groups"]) {
    for (const auto& member : group.at("members")) {
      if (!member.contains("id") || !member["id"].is_string() || !member.contains("score") ||
          !member["score"].is_number()) {
        fail(ErrorCode::kParse, std::string(source) + ": member needs string id and numeric score");
      }
      std::string id = member["id"].get<std::string>();
      if (!seen.insert(id).second) {
        fail(ErrorCode::kParse, std::string(source) + ": duplicate id '" + id + "'");
      }
      items.push_back({std::move(id), member["score"].get<double>(), items.size()});
    }
  }
  return items;
}

/// Reads a cohort file; `.json` files are treated as match reports.
inline std::vector<ScoredItem> read_items(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kParse, path + ": cannot open file");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  if (path.ends_with(".json")) return parse_match_json(text, path);
  return parse_csv(text, path);
}

}  // namespace linematch::io
