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
#include "model/checkpoint.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>

#include "common/error.hpp"

namespace dprandp {

namespace {

constexpr char kMagic[4] = {'D', 'P', 'R', 'P'};
constexpr uint16_t kVersion = 1;

template <typename T>
void WriteScalar(std::ofstream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T ReadScalar(std::ifstream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  return v;
}

}  // namespace

nlohmann::json ModelSpecToJson(const ModelSpec& spec) {
  nlohmann::json j;
  switch (spec.kind) {
    case ModelKind::kLinearHead: j["kind"] = "linear_head"; break;
    case ModelKind::kMlp: j["kind"] = "mlp"; break;
    case ModelKind::kEncoder: j["kind"] = "encoder"; break;
  }
  j["input_dim"] = spec.input_dim;
  j["output_dim"] = spec.output_dim;
  j["hidden_dims"] = spec.hidden_dims;
  j["activation"] = spec.activation == Activation::kRelu ? "relu" : "tanh";
  if (spec.frontend.has_value()) {
    j["frontend"] = {{"patch_size", spec.frontend->patch_size},
                     {"num_filters", spec.frontend->num_filters},
                     {"seed", spec.frontend->seed},
                     {"pool_grid", spec.frontend->pool_grid}};
    j["image_hw"] = spec.image_hw;
    j["image_channels"] = spec.image_channels;
  }
  return j;
}

ModelSpec ModelSpecFromJson(const nlohmann::json& j) {
  ModelSpec spec;
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "linear_head") {
    spec.kind = ModelKind::kLinearHead;
  } else if (kind == "mlp") {
    spec.kind = ModelKind::kMlp;
  } else if (kind == "encoder") {
    spec.kind = ModelKind::kEncoder;
  } else {
    ThrowInvalidArgument("ModelSpecFromJson: unknown kind " + kind);
  }
  spec.input_dim = j.at("input_dim").get<int>();
  spec.output_dim = j.at("output_dim").get<int>();
  spec.hidden_dims = j.value("hidden_dims", std::vector<int>{});
  const std::string act = j.value("activation", std::string("relu"));
  if (act == "relu") {
    spec.activation = Activation::kRelu;
  } else if (act == "tanh") {
    spec.activation = Activation::kTanh;
  } else {
    ThrowInvalidArgument("ModelSpecFromJson: unknown activation " + act);
  }
  if (j.contains("frontend")) {
    FrontendSpec fe;
    const auto& f = j.at("frontend");
    fe.patch_size = f.at("patch_size").get<int>();
    fe.num_filters = f.at("num_filters").get<int>();
    fe.seed = f.at("seed").get<uint64_t>();
    fe.pool_grid = f.value("pool_grid", 2);
    spec.frontend = fe;
    spec.image_hw = j.at("image_hw").get<int>();
    spec.image_channels = j.at("image_channels").get<int>();
  }
  spec.Validate();
  return spec;
}

void SaveCheckpoint(const std::string& path, const ModelSpec& spec,
                    const ParameterVector& params,
                    const nlohmann::json& metadata) {
  std::ofstream out(path, std::ios::binary);
  if (!out) ThrowIoError("SaveCheckpoint: cannot open " + path);
  out.write(kMagic, 4);
  WriteScalar<uint16_t>(out, kVersion);
  WriteScalar<uint32_t>(out, static_cast<uint32_t>(params.layout().size()));
  for (const auto& seg : params.layout()) {
    WriteScalar<uint32_t>(out, static_cast<uint32_t>(seg.name.size()));
    out.write(seg.name.data(), static_cast<long>(seg.name.size()));
    WriteScalar<uint32_t>(out, static_cast<uint32_t>(seg.shape.size()));
    for (size_t d : seg.shape) {
      WriteScalar<uint32_t>(out, static_cast<uint32_t>(d));
    }
  }
  out.write(reinterpret_cast<const char*>(params.data()),
            static_cast<long>(params.size() * sizeof(double)));
  if (!out) ThrowIoError("SaveCheckpoint: write failed for " + path);

  nlohmann::json side;
  side["model"] = ModelSpecToJson(spec);
  side["metadata"] = metadata;
  std::ofstream js(path + ".json");
  if (!js) ThrowIoError("SaveCheckpoint: cannot open sidecar for " + path);
  js << side.dump(2) << "\n";
}

Checkpoint LoadCheckpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) ThrowIoError("LoadCheckpoint: cannot open " + path);
  char magic[4];
  in.read(magic, 4);
  if (std::memcmp(magic, kMagic, 4) != 0) {
    ThrowIoError("LoadCheckpoint: bad magic in " + path);
  }
  const uint16_t version = ReadScalar<uint16_t>(in);
  if (version != kVersion) {
    ThrowIoError("LoadCheckpoint: unsupported version");
  }
  const uint32_t n_seg = ReadScalar<uint32_t>(in);
  std::vector<SegmentSpec> layout;
  layout.reserve(n_seg);
  for (uint32_t i = 0; i < n_seg; ++i) {
    SegmentSpec seg;
    const uint32_t name_len = ReadScalar<uint32_t>(in);
    seg.name.resize(name_len);
    in.read(seg.name.data(), name_len);
    const uint32_t rank = ReadScalar<uint32_t>(in);
    seg.shape.resize(rank);
    for (uint32_t d = 0; d < rank; ++d) {
      seg.shape[d] = ReadScalar<uint32_t>(in);
    }
    layout.push_back(std::move(seg));
  }
  ParameterVector params(std::move(layout));
  in.read(reinterpret_cast<char*>(params.data()),
          static_cast<long>(params.size() * sizeof(double)));
  if (!in) ThrowIoError("LoadCheckpoint: truncated payload in " + path);

  std::ifstream js(path + ".json");
  if (!js) ThrowIoError("LoadCheckpoint: missing sidecar for " + path);
  nlohmann::json side = nlohmann::json::parse(js);

  Checkpoint ckpt{ModelSpecFromJson(side.at("model")), std::move(params),
                  side.value("metadata", nlohmann::json::object())};
  return ckpt;
}

}  // namespace dprandp
