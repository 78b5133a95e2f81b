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

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace linematch {

/// Failure categories. The CLI maps each onto a process exit code.
enum class ErrorCode {
  kInvalidInput,   // precondition on argument values (k < 2, N <= 1, ...)
  kParse,          // malformed input file or non-finite score
  kSize,           // item count not divisible by k, part lengths differ, ...
  kRange,          // k outside the certified range without an override
  kBudget,         // enumeration would exceed the configured budget
  kStructure,      // malformed bipartition or partition
  kArity,          // bipartite instance where a tripartite one is required
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidInput: return "invalid-input";
    case ErrorCode::kParse: return "parse";
    case ErrorCode::kSize: return "size";
    case ErrorCode::kRange: return "range";
    case ErrorCode::kBudget: return "budget";
    case ErrorCode::kStructure: return "structure";
    case ErrorCode::kArity: return "arity";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace linematch
