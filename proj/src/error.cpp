// Copyright 2026 The disctok Authors.
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

#include "disctok/error.hpp"

namespace disctok {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kBadMagic: return "BadMagic";
    case ErrorCode::kHeaderMismatch: return "HeaderMismatch";
    case ErrorCode::kNonFiniteValue: return "NonFiniteValue";
    case ErrorCode::kIoFailure: return "IoFailure";
    case ErrorCode::kInvalidConfig: return "InvalidConfig";
    case ErrorCode::kEmptyCorpus: return "EmptyCorpus";
    case ErrorCode::kTooFewDistinctPoints: return "TooFewDistinctPoints";
    case ErrorCode::kDimMismatch: return "DimMismatch";
    case ErrorCode::kAlreadyDeduped: return "AlreadyDeduped";
    case ErrorCode::kMissingRunLengths: return "MissingRunLengths";
    case ErrorCode::kTargetBelowBaseVocab: return "TargetBelowBaseVocab";
    case ErrorCode::kVocabMismatch: return "VocabMismatch";
    case ErrorCode::kFingerprintMismatch: return "FingerprintMismatch";
    case ErrorCode::kCorruptPayload: return "CorruptPayload";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kEmptyTable: return "EmptyTable";
    case ErrorCode::kDegeneratePhoneDistribution: return "DegeneratePhoneDistribution";
    case ErrorCode::kIdSetMismatch: return "IdSetMismatch";
  }
  return "Unknown";
}

ErrorCategory CategoryOf(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidConfig:
    case ErrorCode::kTargetBelowBaseVocab:
      return ErrorCategory::kConfig;
    case ErrorCode::kIoFailure:
      return ErrorCategory::kIo;
    default:
      return ErrorCategory::kData;
  }
}

}  // namespace disctok
