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
//
// Small differentiable models (linear softmax head, MLP, MLP-based encoder
// with an optional fixed random-convolution frontend) with exact per-sample
// gradients via hand-derived backpropagation. All arithmetic in doubles.
#ifndef DPRANDP_MODEL_MODEL_H_
#define DPRANDP_MODEL_MODEL_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace dprandp {

struct SegmentSpec {
  std::string name;
  std::vector<size_t> shape;
  size_t Size() const;
};

// Flat 64-bit parameter storage with a named (name, shape) segment layout.
class ParameterVector {
 public:
  ParameterVector() = default;
  explicit ParameterVector(std::vector<SegmentSpec> layout);

  size_t size() const { return values_.size(); }
  double* data() { return values_.data(); }
  const double* data() const { return values_.data(); }
  std::vector<double>& values() { return values_; }
  const std::vector<double>& values() const { return values_; }
  const std::vector<SegmentSpec>& layout() const { return layout_; }

  std::span<double> Segment(size_t index);
  std::span<const double> Segment(size_t index) const;
  std::span<double> Segment(std::string_view name);
  size_t SegmentOffset(size_t index) const;

  double L2Norm() const;
  void Fill(double value);
  // this += alpha * other
  void Axpy(double alpha, const ParameterVector& other);
  void Scale(double alpha);
  void CheckFinite(const std::string& context) const;

 private:
  std::vector<SegmentSpec> layout_;
  std::vector<size_t> offsets_;
  std::vector<double> values_;
};

enum class ModelKind { kLinearHead, kMlp, kEncoder };
enum class Activation { kRelu, kTanh };

// Fixed (untrained, seeded) random patch-convolution frontend with ReLU and
// grid average pooling. Constant during training, so backprop never has to
// differentiate through it.
struct FrontendSpec {
  int patch_size = 5;
  int num_filters = 8;
  uint64_t seed = 0;
  int pool_grid = 2;  // output pooled to pool_grid x pool_grid cells
};

struct ModelSpec {
  ModelKind kind = ModelKind::kLinearHead;
  int input_dim = 0;
  int output_dim = 0;
  std::vector<int> hidden_dims;
  Activation activation = Activation::kRelu;
  std::optional<FrontendSpec> frontend;  // encoder only
  int image_hw = 0;  // square image side; required when frontend is set
  int image_channels = 0;

  void Validate() const;
  std::vector<SegmentSpec> Layout() const;
  // Input dimension of the trainable MLP part (frontend output when set).
  int MlpInputDim() const;
  int FrontendOutputDim() const;
};

struct Example {
  std::vector<double> input;
  int label = 0;
};

// Activations captured during a forward pass; layer_post[i] is the output of
// hidden layer i after the nonlinearity, output is the model head output
// (logits, or the unit-normalized embedding for encoders).
struct ForwardTrace {
  std::vector<double> mlp_input;
  std::vector<std::vector<double>> layer_pre;
  std::vector<std::vector<double>> layer_post;
  std::vector<double> prenorm;  // encoder only: output before normalization
  double prenorm_norm = 0.0;
  std::vector<double> output;
};

std::vector<double> Forward(const ModelSpec& spec, const ParameterVector& params,
                            std::span<const double> input);
ForwardTrace ForwardWithTrace(const ModelSpec& spec,
                              const ParameterVector& params,
                              std::span<const double> input);

// Cross-entropy of softmax(logits) against the label.
double Loss(std::span<const double> logits, int label);
// d loss / d logits = softmax(logits) - onehot(label)
std::vector<double> LossGradWrtLogits(std::span<const double> logits,
                                      int label);

// Backward pass from a gradient at the model output. For encoders the
// normalization Jacobian (I - y y^T)/||z|| is applied first.
ParameterVector GradFromOutput(const ModelSpec& spec,
                               const ParameterVector& params,
                               const ForwardTrace& trace,
                               std::span<const double> output_grad);

// Backward from a gradient injected at hidden layer `layer` (post
// activation); layers above receive no gradient. Used when a classifier head
// reads an intermediate representation.
ParameterVector GradFromHiddenLayer(const ModelSpec& spec,
                                    const ParameterVector& params,
                                    const ForwardTrace& trace, int layer,
                                    std::span<const double> layer_grad);

ParameterVector PerSampleGradOne(const ModelSpec& spec,
                                 const ParameterVector& params,
                                 const Example& example);
std::vector<ParameterVector> PerSampleGrad(const ModelSpec& spec,
                                           const ParameterVector& params,
                                           std::span<const Example> batch);

// Central-difference gradient of the same loss; test oracle.
ParameterVector FiniteDiffGrad(const ModelSpec& spec,
                               const ParameterVector& params,
                               const Example& example, double h);

// Per-segment uniform init in [-s, s], s = sqrt(6 / (fan_in + fan_out)).
ParameterVector InitParams(const ModelSpec& spec, uint64_t seed);

// The constant frontend features for an image input (identity when the spec
// has no frontend).
std::vector<double> FrontendFeatures(const ModelSpec& spec,
                                     std::span<const double> input);

}  // namespace dprandp

#endif  // DPRANDP_MODEL_MODEL_H_
