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
#include "common/error.hpp"

namespace dprandp {

void ThrowInvalidArgument(const std::string& message) {
  throw Error(ErrorCode::kInvalidArgument, message);
}
void ThrowIoError(const std::string& message) {
  throw Error(ErrorCode::kIoError, message);
}
void ThrowBudgetExceeded(const std::string& message) {
  throw Error(ErrorCode::kBudgetExceeded, message);
}
void ThrowNumericalFailure(const std::string& message) {
  throw Error(ErrorCode::kNumericalFailure, message);
}

}  // namespace dprandp
