// Copyright 2026 The HazardBench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef HAZARDBENCH_CORE_ERROR_HPP_
#define HAZARDBENCH_CORE_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace hb {

// Numeric values are mirrored by hb_status in the public C header.
enum class ErrorCode : int {
  kOk = 0,
  kInvalidArgument = 1,
  kDegenerateDimensions = 2,
  kConfiguration = 3,
  kFrameMismatch = 4,
  kScenarioInapplicable = 5,
  kCategoryInapplicable = 6,
  kTransport = 7,
  kHttpStatus = 8,
  kDecode = 9,
  kDimMismatch = 10,
  kTimeout = 11,
  kIo = 12,
  kParse = 13,
  kInsufficientItems = 14,
  kDuplicate = 15,
  kNotFound = 16,
  kConflict = 17,
  kInternal = 18,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

  // Backend failures that the generate-and-check loop may retry.
  bool retryable() const noexcept {
    return code_ == ErrorCode::kTransport || code_ == ErrorCode::kHttpStatus ||
           code_ == ErrorCode::kDecode || code_ == ErrorCode::kDimMismatch ||
           code_ == ErrorCode::kTimeout;
  }

 private:
  ErrorCode code_;
};

}  // namespace hb

#endif  // HAZARDBENCH_CORE_ERROR_HPP_
