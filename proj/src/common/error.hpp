// Copyright 2026 The dprandp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#ifndef DPRANDP_COMMON_ERROR_H_
#define DPRANDP_COMMON_ERROR_H_

#include <stdexcept>
#include <string>

namespace dprandp {

// Error categories; the C API and the CLI map these onto exit codes
// (config -> 2, budget -> 3, numeric -> 4).
enum class ErrorCode {
  kInvalidArgument,
  kIoError,
  kBudgetExceeded,
  kNumericalFailure,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void ThrowInvalidArgument(const std::string& message);
[[noreturn]] void ThrowIoError(const std::string& message);
[[noreturn]] void ThrowBudgetExceeded(const std::string& message);
[[noreturn]] void ThrowNumericalFailure(const std::string& message);

}  // namespace dprandp

#endif  // DPRANDP_COMMON_ERROR_H_
