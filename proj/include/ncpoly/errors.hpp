// Copyright 2026 The ncpoly Authors
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
#include <utility>
#include <vector>

namespace ncpoly {

enum class ErrorCode {
  kParse,
  kInconsistentSystem,
  kNonConvexWeights,
  kIndexOutOfRange,
  kDegenerateEquivalence,
  kDimensionMismatch,
  kPadExceedsD,
  kEmptyPolytope,
  kInvalidDistribution,
  kMalformedTable,
  kPrimalFeasible,
  kGeneratorBreaksOE,
  kRowNotInOrbitClosure,
  kGroupTooLarge,
  kInternal,
};

inline std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParse: return "ParseError";
    case ErrorCode::kInconsistentSystem: return "InconsistentSystem";
    case ErrorCode::kNonConvexWeights: return "NonConvexWeights";
    case ErrorCode::kIndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::kDegenerateEquivalence: return "DegenerateEquivalence";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kPadExceedsD: return "PadExceedsD";
    case ErrorCode::kEmptyPolytope: return "EmptyPolytope";
    case ErrorCode::kInvalidDistribution: return "InvalidDistribution";
    case ErrorCode::kMalformedTable: return "MalformedTable";
    case ErrorCode::kPrimalFeasible: return "PrimalFeasible";
    case ErrorCode::kGeneratorBreaksOE: return "GeneratorBreaksOE";
    case ErrorCode::kRowNotInOrbitClosure: return "RowNotInOrbitClosure";
    case ErrorCode::kGroupTooLarge: return "GroupTooLarge";
    case ErrorCode::kInternal: return "InternalError";
  }
  return "UnknownError";
}

/// Base exception for every failure raised by the library. The code is
/// stable and is what callers (and the CLI exit-code mapping) dispatch on.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

struct Issue {
  ErrorCode code;
  std::string message;
};

/// Raised by the validators; carries every violated invariant, not just the
/// first one found.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<Issue> issues)
      : Error(issues.empty() ? ErrorCode::kInternal : issues.front().code,
              summarize(issues)),
        issues_(std::move(issues)) {}

  const std::vector<Issue>& issues() const noexcept { return issues_; }

  bool has(ErrorCode code) const {
    for (const auto& issue : issues_) {
      if (issue.code == code) return true;
    }
    return false;
  }

 private:
  static std::string summarize(const std::vector<Issue>& issues) {
    std::string out;
    for (const auto& issue : issues) {
      if (!out.empty()) out += "; ";
      out += std::string(error_code_name(issue.code)) + " (" + issue.message + ")";
    }
    return out;
  }

  std::vector<Issue> issues_;
};

}  // namespace ncpoly
