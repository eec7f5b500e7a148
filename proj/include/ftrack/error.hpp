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

#ifndef FTRACK_ERROR_HPP_
#define FTRACK_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace ftrack {

// Values are shared with the C API status codes in ftrack.h.
enum class ErrorCode : int {
  kInvalidArgument = 1,
  kParse = 2,
  kValidation = 3,
  kCycleDetected = 4,
  kMissingCost = 5,
  kProfileOutOfRange = 6,
  kUnreachable = 7,
  kInvalidConfig = 8,
  kPreconditionViolated = 9,
  kSpaceExplosion = 10,
  kNotLinearizable = 11,
  kNotLinear = 12,
  kTooLarge = 13,
  kOverlappingStrategies = 14,
  kBrokenProvenance = 15,
  kNoFeasibleCount = 16,
  kIo = 17,
  kInternal = 99,
};

const char* error_code_name(ErrorCode code);

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

}  // namespace ftrack

#endif  // FTRACK_ERROR_HPP_
