// Copyright 2026 The DePra Authors.
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

#include "depra/error.h"

namespace depra {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kNotFound: return "NotFound";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kOutOfRangeScore: return "OutOfRangeScore";
    case ErrorCode::kUnknownBehavior: return "UnknownBehavior";
    case ErrorCode::kUnknownRater: return "UnknownRater";
    case ErrorCode::kDuplicateBehavior: return "DuplicateBehavior";
    case ErrorCode::kMalformedRecord: return "MalformedRecord";
    case ErrorCode::kEmptyCorpus: return "EmptyCorpus";
    case ErrorCode::kPermissionNotDeclared: return "PermissionNotDeclared";
    case ErrorCode::kTooFewApps: return "TooFewApps";
    case ErrorCode::kCrossCategoryMerge: return "CrossCategoryMerge";
    case ErrorCode::kNoPermissionsAnywhere: return "NoPermissionsAnywhere";
    case ErrorCode::kClientTimeout: return "ClientTimeout";
    case ErrorCode::kClientRejected: return "ClientRejected";
    case ErrorCode::kUnknownExplanation: return "UnknownExplanation";
    case ErrorCode::kEmptyRatings: return "EmptyRatings";
    case ErrorCode::kMixedBehaviors: return "MixedBehaviors";
    case ErrorCode::kIncompleteSurvey: return "IncompleteSurvey";
    case ErrorCode::kMissingProfile: return "MissingProfile";
    case ErrorCode::kEmptySample: return "EmptySample";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kDegenerateInput: return "DegenerateInput";
    case ErrorCode::kInsufficientData: return "InsufficientData";
    case ErrorCode::kConstantData: return "ConstantData";
    case ErrorCode::kNoOverlap: return "NoOverlap";
    case ErrorCode::kBadMix: return "BadMix";
    case ErrorCode::kCorruptLog: return "CorruptLog";
    case ErrorCode::kMissingPrerequisite: return "MissingPrerequisite";
  }
  return "Unknown";
}

}  // namespace depra
