// Copyright 2026 The sparselab Authors.
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

#ifndef SPARSELAB_ERROR_HPP
#define SPARSELAB_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace sparselab {

enum class ErrorCode {
  ZeroColumn,
  DimensionMismatch,
  NonFinite,
  TooFewColumns,
  NotUnderdetermined,
  NotNormalized,
  InvalidArgument,
  CombinatorialBlowup,
  PathStall,
  Infeasible,
  NoSolution,
  EmptySupport,
  ZeroGroundTruth,
  NonIntegerScaling,
  Io,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above so
/// callers (the experiment harness in particular) can record it per trial.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::ZeroColumn: return "ZeroColumn";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::TooFewColumns: return "TooFewColumns";
    case ErrorCode::NotUnderdetermined: return "NotUnderdetermined";
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::CombinatorialBlowup: return "CombinatorialBlowup";
    case ErrorCode::PathStall: return "PathStall";
    case ErrorCode::Infeasible: return "Infeasible";
    case ErrorCode::NoSolution: return "NoSolution";
    case ErrorCode::EmptySupport: return "EmptySupport";
    case ErrorCode::ZeroGroundTruth: return "ZeroGroundTruth";
    case ErrorCode::NonIntegerScaling: return "NonIntegerScaling";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace sparselab

#endif  // SPARSELAB_ERROR_HPP
