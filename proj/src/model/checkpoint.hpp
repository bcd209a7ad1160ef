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
#ifndef DPRANDP_MODEL_CHECKPOINT_H_
#define DPRANDP_MODEL_CHECKPOINT_H_

#include <string>

#include "json.hpp"
#include "model/model.hpp"

namespace dprandp {

nlohmann::json ModelSpecToJson(const ModelSpec& spec);
ModelSpec ModelSpecFromJson(const nlohmann::json& j);

// Binary checkpoint: magic "DPRP", format version u16, segment table
// (name length, name bytes, rank, dims as u32), payload of little-endian
// 64-bit reals. A JSON sidecar at <path>.json carries the model spec and
// caller-provided metadata.
void SaveCheckpoint(const std::string& path, const ModelSpec& spec,
                    const ParameterVector& params,
                    const nlohmann::json& metadata);

struct Checkpoint {
  ModelSpec spec;
  ParameterVector params;
  nlohmann::json metadata;
};

Checkpoint LoadCheckpoint(const std::string& path);

}  // namespace dprandp

#endif  // DPRANDP_MODEL_CHECKPOINT_H_
