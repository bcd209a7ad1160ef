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
#ifndef DPRANDP_COMMON_SHA256_H_
#define DPRANDP_COMMON_SHA256_H_

#include <string>
#include <string_view>

namespace dprandp {

// Hex digest; used to fingerprint configs and run inputs for replayable runs.
std::string Sha256Hex(std::string_view bytes);

}  // namespace dprandp

#endif  // DPRANDP_COMMON_SHA256_H_
