/**
 * Copyright 2026 The ftrack Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "ftrack/error.hpp"

namespace ftrack {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kParse: return "ParseError";
    case ErrorCode::kValidation: return "ValidationError";
    case ErrorCode::kCycleDetected: return "CycleDetected";
    case ErrorCode::kMissingCost: return "MissingCost";
    case ErrorCode::kProfileOutOfRange: return "ProfileOutOfRange";
    case ErrorCode::kUnreachable: return "Unreachable";
    case ErrorCode::kInvalidConfig: return "InvalidConfig";
    case ErrorCode::kPreconditionViolated: return "PreconditionViolated";
    case ErrorCode::kSpaceExplosion: return "SpaceExplosion";
    case ErrorCode::kNotLinearizable: return "NotLinearizable";
    case ErrorCode::kNotLinear: return "NotLinear";
    case ErrorCode::kTooLarge: return "TooLarge";
    case ErrorCode::kOverlappingStrategies: return "OverlappingStrategies";
    case ErrorCode::kBrokenProvenance: return "BrokenProvenance";
    case ErrorCode::kNoFeasibleCount: return "NoFeasibleCount";
    case ErrorCode::kIo: return "IoError";
    case ErrorCode::kInternal: return "Internal";
  }
  return "Unknown";
}

}  // namespace ftrack
