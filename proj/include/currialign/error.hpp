// Copyright 2026 The CurriAlign Authors
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

#ifndef CURRIALIGN_ERROR_HPP_
#define CURRIALIGN_ERROR_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace currialign {

enum class ErrorCode {
  kAllZero,
  kNonPositiveEpsilon,
  kInvalidArgument,
  kIo,
  kMalformed,
  kDuplicateId,
  kRowSumOutOfRange,
  kNegativeCount,
  kTransport,
  kTimeout,
  kEmptyResponse,
  kUnparseable,
  kEmptyCorpus,
  kEmptyInput,
  kUnknownElectiveId,
  kUnlabeledKd,
  kEmptyDemand,
  kMissingRoleDistribution,
  kWrongCardinality,
  kTooLarge,
  kLengthMismatch,
  kNoComparablePairs,
  kUndefined,
  kUnknownAnnotator,
  kTooFewExamples,
  kNotFound,
};

inline std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kAllZero: return "AllZero";
    case ErrorCode::kNonPositiveEpsilon: return "NonPositiveEpsilon";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kIo: return "Io";
    case ErrorCode::kMalformed: return "Malformed";
    case ErrorCode::kDuplicateId: return "DuplicateId";
    case ErrorCode::kRowSumOutOfRange: return "RowSumOutOfRange";
    case ErrorCode::kNegativeCount: return "NegativeCount";
    case ErrorCode::kTransport: return "Transport";
    case ErrorCode::kTimeout: return "Timeout";
    case ErrorCode::kEmptyResponse: return "EmptyResponse";
    case ErrorCode::kUnparseable: return "Unparseable";
    case ErrorCode::kEmptyCorpus: return "EmptyCorpus";
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kUnknownElectiveId: return "UnknownElectiveId";
    case ErrorCode::kUnlabeledKd: return "UnlabeledKd";
    case ErrorCode::kEmptyDemand: return "EmptyDemand";
    case ErrorCode::kMissingRoleDistribution: return "MissingRoleDistribution";
    case ErrorCode::kWrongCardinality: return "WrongCardinality";
    case ErrorCode::kTooLarge: return "TooLarge";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kNoComparablePairs: return "NoComparablePairs";
    case ErrorCode::kUndefined: return "Undefined";
    case ErrorCode::kUnknownAnnotator: return "UnknownAnnotator";
    case ErrorCode::kTooFewExamples: return "TooFewExamples";
    case ErrorCode::kNotFound: return "NotFound";
  }
  return "Unknown";
}

// Every failure in the library surfaces as an Error carrying a code. Parse
// failures additionally carry the 1-based line number of the offending record.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, std::size_t line = 0)
      : std::runtime_error(Format(code, message, line)),
        code_(code),
        line_(line),
        detail_(message) {}

  ErrorCode code() const noexcept { return code_; }
  std::size_t line() const noexcept { return line_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  static std::string Format(ErrorCode code, const std::string& message,
                            std::size_t line) {
    std::string out(ErrorCodeName(code));
    if (line > 0) out += " (line " + std::to_string(line) + ")";
    if (!message.empty()) out += ": " + message;
    return out;
  }

  ErrorCode code_;
  std::size_t line_;
  std::string detail_;
};

}  // namespace currialign

#endif  // CURRIALIGN_ERROR_HPP_
