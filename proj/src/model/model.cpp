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
#include "model/model.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

#include "common/error.hpp"
#include "common/rng.hpp"

namespace dprandp {

size_t SegmentSpec::Size() const {
  size_t n = 1;
  for (size_t d : shape) n *= d;
  return n;
}

ParameterVector::ParameterVector(std::vector<SegmentSpec> layout)
    : layout_(std::move(layout)) {
  size_t total = 0;
  offsets_.reserve(layout_.size());
  for (const auto& seg : layout_) {
    offsets_.push_back(total);
    total += seg.Size();
  }
  values_.assign(total, 0.0);
}

std::span<double> ParameterVector::Segment(size_t index) {
  return {values_.data() + offsets_[index], layout_[index].Size()};
}

std::span<const double> ParameterVector::Segment(size_t index) const {
  return {values_.data() + offsets_[index], layout_[index].Size()};
}

std::span<double> ParameterVector::Segment(std::string_view name) {
  for (size_t i = 0; i < layout_.size(); ++i) {
    if (layout_[i].name == name) return Segment(i);
  }
  ThrowInvalidArgument("ParameterVector: no segment named " +
                       std::string(name));
}

size_t ParameterVector::SegmentOffset(size_t index) const {
  return offsets_[index];
}

double ParameterVector::L2Norm() const {
  double s = 0.0;
  for (double v : values_) s += v * v;
  return std::sqrt(s);
}

void ParameterVector::Fill(double value) {
  std::fill(values_.begin(), values_.end(), value);
}

void ParameterVector::Axpy(double alpha, const ParameterVector& other) {
  if (other.size() != size()) {
    ThrowInvalidArgument("ParameterVector::Axpy: size mismatch");
  }
  for (size_t i = 0; i < values_.size(); ++i) {
    values_[i] += alpha * other.values_[i];
  }
}

void ParameterVector::Scale(double alpha) {
  for (double& v : values_) v *= alpha;
}

void ParameterVector::CheckFinite(const std::string& context) const {
  for (double v : values_) {
    if (!std::isfinite(v)) {
      ThrowNumericalFailure(context + ": non-finite parameter value");
    }
  }
}

void ModelSpec::Validate() const {
  if (input_dim <= 0 || output_dim <= 0) {
    ThrowInvalidArgument("ModelSpec: dimensions must be positive");
  }
  for (int h : hidden_dims) {
    if (h <= 0) ThrowInvalidArgument("ModelSpec: hidden dims must be positive");
  }
  if (kind == ModelKind::kLinearHead && !hidden_dims.empty()) {
    ThrowInvalidArgument("ModelSpec: linear_head takes no hidden layers");
  }
  if (frontend.has_value()) {
    if (kind != ModelKind::kEncoder) {
      ThrowInvalidArgument("ModelSpec: frontend is encoder-only");
    }
    if (image_hw <= 0 || image_channels <= 0) {
      ThrowInvalidArgument("ModelSpec: frontend requires image shape");
    }
    if (image_hw * image_hw * image_channels != input_dim) {
      ThrowInvalidArgument("ModelSpec: image shape does not match input_dim");
    }
    if (frontend->patch_size <= 0 || frontend->patch_size > image_hw ||
        frontend->num_filters <= 0 || frontend->pool_grid <= 0) {
      ThrowInvalidArgument("ModelSpec: invalid frontend");
    }
  }
}

int ModelSpec::FrontendOutputDim() const {
  if (!frontend.has_value()) return input_dim;
  return frontend->num_filters * frontend->pool_grid * frontend->pool_grid;
}

int ModelSpec::MlpInputDim() const { return FrontendOutputDim(); }

std::vector<SegmentSpec> ModelSpec::Layout() const {
  std::vector<SegmentSpec> layout;
  int prev = MlpInputDim();
  for (size_t i = 0; i < hidden_dims.size(); ++i) {
    const int h = hidden_dims[i];
    layout.push_back({"layer" + std::to_string(i) + ".weight",
                      {static_cast<size_t>(h), static_cast<size_t>(prev)}});
    layout.push_back(
        {"layer" + std::to_string(i) + ".bias", {static_cast<size_t>(h)}});
    prev = h;
  }
  layout.push_back({"out.weight",
                    {static_cast<size_t>(output_dim),
                     static_cast<size_t>(prev)}});
  layout.push_back({"out.bias", {static_cast<size_t>(output_dim)}});
  return layout;
}

namespace {

double Act(Activation a, double x) {
  return a == Activation::kRelu ? (x > 0.0 ? x : 0.0) : std::tanh(x);
}

double ActDeriv(Activation a, double pre, double post) {
  if (a == Activation::kRelu) return pre > 0.0 ? 1.0 : 0.0;
  return 1.0 - post * post;
}

// y = W x + b with W row-major [rows, cols]
void Affine(std::span<const double> w, std::span<const double> b,
            std::span<const double> x, std::vector<double>& y) {
  const size_t rows = b.size();
  const size_t cols = x.size();
  y.assign(rows, 0.0);
  for (size_t r = 0; r < rows; ++r) {
    const double* wr = w.data() + r * cols;
    double acc = b[r];
    for (size_t c = 0; c < cols; ++c) acc += wr[c] * x[c];
    y[r] = acc;
  }
}

// Frontend filter cache. Filters are a pure function of the spec, constant
// during training.
const std::vector<double>& FrontendFilters(const FrontendSpec& fe,
                                           int channels) {
  static std::mutex mu;
  static std::map<std::tuple<uint64_t, int, int, int>, std::vector<double>>
      cache;
  std::lock_guard<std::mutex> lock(mu);
  const auto key =
      std::make_tuple(fe.seed, fe.patch_size, fe.num_filters, channels);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  RngStream rng(SplitMix64(fe.seed ^ 0x8f1bbcdc5a1afeedULL));
  const size_t n = static_cast<size_t>(fe.num_filters) * fe.patch_size *
                   fe.patch_size * channels;
  std::vector<double> filters(n);
  const double scale =
      1.0 / std::sqrt(static_cast<double>(fe.patch_size * fe.patch_size *
                                          channels));
  for (double& v : filters) v = rng.Normal() * scale;
  return cache.emplace(key, std::move(filters)).first->second;
}

}  // namespace

std::vector<double> FrontendFeatures(const ModelSpec& spec,
                                     std::span<const double> input) {
  if (!spec.frontend.has_value()) {
    return std::vector<double>(input.begin(), input.end());
  }
  const FrontendSpec& fe = *spec.frontend;
  const int hw = spec.image_hw;
  const int ch = spec.image_channels;
  const int p = fe.patch_size;
  const int out_hw = hw - p + 1;
  const int g = fe.pool_grid;
  const auto& filters = FrontendFilters(fe, ch);

  std::vector<double> pooled(
      static_cast<size_t>(fe.num_filters) * g * g, 0.0);
  std::vector<double> counts(static_cast<size_t>(g) * g, 0.0);
  // image layout: [y][x][c] interleaved
  for (int f = 0; f < fe.num_filters; ++f) {
    const double* filt =
        filters.data() + static_cast<size_t>(f) * p * p * ch;
    for (int oy = 0; oy < out_hw; ++oy) {
      const int cell_y = oy * g / out_hw;
      for (int ox = 0; ox < out_hw; ++ox) {
        double acc = 0.0;
        for (int ky = 0; ky < p; ++ky) {
          const double* row =
              input.data() + (static_cast<size_t>(oy + ky) * hw + ox) * ch;
          const double* frow = filt + static_cast<size_t>(ky) * p * ch;
          for (int kx = 0; kx < p * ch; ++kx) acc += row[kx] * frow[kx];
        }
        if (acc < 0.0) acc = 0.0;  // fixed ReLU
        const int cell_x = ox * g / out_hw;
        pooled[(static_cast<size_t>(f) * g + cell_y) * g + cell_x] += acc;
        if (f == 0) counts[static_cast<size_t>(cell_y) * g + cell_x] += 1.0;
      }
    }
  }
  for (int f = 0; f < fe.num_filters; ++f) {
    for (int c = 0; c < g * g; ++c) {
      pooled[static_cast<size_t>(f) * g * g + c] /= counts[c];
    }
  }
  return pooled;
}

ForwardTrace ForwardWithTrace(const ModelSpec& spec,
                              const ParameterVector& params,
                              std::span<const double> input) {
  spec.Validate();
  if (input.size() != static_cast<size_t>(spec.input_dim)) {
    ThrowInvalidArgument("Forward: input dimension mismatch");
  }
  ForwardTrace trace;
  trace.mlp_input = FrontendFeatures(spec, input);

  const auto layout = spec.Layout();
  ParameterVector& p = const_cast<ParameterVector&>(params);
  if (params.size() == 0 || params.layout().size() != layout.size()) {
    ThrowInvalidArgument("Forward: parameter layout mismatch");
  }

  std::span<const double> x(trace.mlp_input);
  const size_t n_hidden = spec.hidden_dims.size();
  trace.layer_pre.resize(n_hidden);
  trace.layer_post.resize(n_hidden);
  for (size_t i = 0; i < n_hidden; ++i) {
    Affine(p.Segment(2 * i), p.Segment(2 * i + 1), x, trace.layer_pre[i]);
    trace.layer_post[i].resize(trace.layer_pre[i].size());
    for (size_t k = 0; k < trace.layer_pre[i].size(); ++k) {
      trace.layer_post[i][k] = Act(spec.activation, trace.layer_pre[i][k]);
    }
    x = trace.layer_post[i];
  }
  std::vector<double> out;
  Affine(p.Segment(2 * n_hidden), p.Segment(2 * n_hidden + 1), x, out);

  if (spec.kind == ModelKind::kEncoder) {
    trace.prenorm = out;
    double norm = 0.0;
    for (double v : out) norm += v * v;
    norm = std::sqrt(norm);
    if (!(norm > 0.0)) {
      ThrowNumericalFailure("Forward: encoder output has zero norm");
    }
    trace.prenorm_norm = norm;
    for (double& v : out) v /= norm;
  }
  trace.output = std::move(out);
  return trace;
}

std::vector<double> Forward(const ModelSpec& spec,
                            const ParameterVector& params,
                            std::span<const double> input) {
  return ForwardWithTrace(spec, params, input).output;
}

double Loss(std::span<const double> logits, int label) {
  if (label < 0 || static_cast<size_t>(label) >= logits.size()) {
    ThrowInvalidArgument("Loss: label out of range");
  }
  double mx = logits[0];
  for (double v : logits) mx = std::max(mx, v);
  double lse = 0.0;
  for (double v : logits) lse += std::exp(v - mx);
  return std::log(lse) + mx - logits[label];
}

std::vector<double> LossGradWrtLogits(std::span<const double> logits,
                                      int label) {
  if (label < 0 || static_cast<size_t>(label) >= logits.size()) {
    ThrowInvalidArgument("LossGradWrtLogits: label out of range");
  }
  double mx = logits[0];
  for (double v : logits) mx = std::max(mx, v);
  double z = 0.0;
  std::vector<double> g(logits.size());
  for (size_t i = 0; i < logits.size(); ++i) {
    g[i] = std::exp(logits[i] - mx);
    z += g[i];
  }
  for (double& v : g) v /= z;
  g[label] -= 1.0;
  return g;
}

namespace {

// Backward walk from the gradient at the output affine's result.
ParameterVector BackwardImpl(const ModelSpec& spec,
                             const ParameterVector& params,
                             const ForwardTrace& trace,
                             std::vector<double> upstream) {
  const auto layout = spec.Layout();
  ParameterVector grad(layout);
  ParameterVector& p = const_cast<ParameterVector&>(params);
  const size_t n_hidden = spec.hidden_dims.size();

  std::vector<double> d = std::move(upstream);
  {
    std::span<const double> below =
        n_hidden > 0 ? std::span<const double>(trace.layer_post[n_hidden - 1])
                     : std::span<const double>(trace.mlp_input);
    auto wout = grad.Segment(2 * n_hidden);
    auto bout = grad.Segment(2 * n_hidden + 1);
    const size_t cols = below.size();
    for (size_t r = 0; r < d.size(); ++r) {
      bout[r] = d[r];
      for (size_t c = 0; c < cols; ++c) {
        wout[r * cols + c] = d[r] * below[c];
      }
    }
    auto w = p.Segment(2 * n_hidden);
    std::vector<double> dn(cols, 0.0);
    for (size_t r = 0; r < d.size(); ++r) {
      for (size_t c = 0; c < cols; ++c) dn[c] += w[r * cols + c] * d[r];
    }
    d = std::move(dn);
  }

  for (size_t li = n_hidden; li-- > 0;) {
    // d currently holds dLoss/d(post of layer li)
    const auto& pre = trace.layer_pre[li];
    std::vector<double> dpre(pre.size());
    for (size_t k = 0; k < pre.size(); ++k) {
      dpre[k] = d[k] * ActDeriv(spec.activation, pre[k],
                                trace.layer_post[li][k]);
    }
    std::span<const double> below =
        li > 0 ? std::span<const double>(trace.layer_post[li - 1])
               : std::span<const double>(trace.mlp_input);
    auto wg = grad.Segment(2 * li);
    auto bg = grad.Segment(2 * li + 1);
    const size_t cols = below.size();
    for (size_t r = 0; r < dpre.size(); ++r) {
      bg[r] = dpre[r];
      for (size_t c = 0; c < cols; ++c) {
        wg[r * cols + c] = dpre[r] * below[c];
      }
    }
    if (li > 0) {
      auto w = p.Segment(2 * li);
      std::vector<double> dn(cols, 0.0);
      for (size_t r = 0; r < dpre.size(); ++r) {
        for (size_t c = 0; c < cols; ++c) dn[c] += w[r * cols + c] * dpre[r];
      }
      d = std::move(dn);
    }
  }
  return grad;
}

}  // namespace

ParameterVector GradFromOutput(const ModelSpec& spec,
                               const ParameterVector& params,
                               const ForwardTrace& trace,
                               std::span<const double> output_grad) {
  std::vector<double> d(output_grad.begin(), output_grad.end());
  if (spec.kind == ModelKind::kEncoder) {
    // y = z/||z||; dz = (g - y (y.g)) / ||z||
    const auto& y = trace.output;
    double dot = 0.0;
    for (size_t i = 0; i < y.size(); ++i) dot += y[i] * d[i];
    for (size_t i = 0; i < y.size(); ++i) {
      d[i] = (d[i] - y[i] * dot) / trace.prenorm_norm;
    }
  }
  return BackwardImpl(spec, params, trace, std::move(d));
}

ParameterVector GradFromHiddenLayer(const ModelSpec& spec,
                                    const ParameterVector& params,
                                    const ForwardTrace& trace, int layer,
                                    std::span<const double> layer_grad) {
  if (layer < 0 || static_cast<size_t>(layer) >= spec.hidden_dims.size()) {
    ThrowInvalidArgument("GradFromHiddenLayer: layer out of range");
  }
  if (layer_grad.size() != static_cast<size_t>(spec.hidden_dims[layer])) {
    ThrowInvalidArgument("GradFromHiddenLayer: gradient dimension mismatch");
  }
  const auto layout = spec.Layout();
  ParameterVector grad(layout);
  ParameterVector& p = const_cast<ParameterVector&>(params);

  std::vector<double> d(layer_grad.begin(), layer_grad.end());
  for (size_t li = static_cast<size_t>(layer) + 1; li-- > 0;) {
    const auto& pre = trace.layer_pre[li];
    std::vector<double> dpre(pre.size());
    for (size_t k = 0; k < pre.size(); ++k) {
      dpre[k] = d[k] * ActDeriv(spec.activation, pre[k],
                                trace.layer_post[li][k]);
    }
    std::span<const double> below =
        li > 0 ? std::span<const double>(trace.layer_post[li - 1])
               : std::span<const double>(trace.mlp_input);
    auto wg = grad.Segment(2 * li);
    auto bg = grad.Segment(2 * li + 1);
    const size_t cols = below.size();
    for (size_t r = 0; r < dpre.size(); ++r) {
      bg[r] = dpre[r];
      for (size_t c = 0; c < cols; ++c) {
        wg[r * cols + c] = dpre[r] * below[c];
      }
    }
    if (li > 0) {
      auto w = p.Segment(2 * li);
      std::vector<double> dn(cols, 0.0);
      for (size_t r = 0; r < dpre.size(); ++r) {
        for (size_t c = 0; c < cols; ++c) dn[c] += w[r * cols + c] * dpre[r];
      }
      d = std::move(dn);
    }
  }
  return grad;
}

ParameterVector PerSampleGradOne(const ModelSpec& spec,
                                 const ParameterVector& params,
                                 const Example& example) {
  const ForwardTrace trace = ForwardWithTrace(spec, params, example.input);
  const std::vector<double> dlogits =
      LossGradWrtLogits(trace.output, example.label);
  return GradFromOutput(spec, params, trace, dlogits);
}

std::vector<ParameterVector> PerSampleGrad(const ModelSpec& spec,
                                           const ParameterVector& params,
                                           std::span<const Example> batch) {
  if (batch.empty()) {
    ThrowInvalidArgument("PerSampleGrad: batch is empty");
  }
  std::vector<ParameterVector> grads;
  grads.reserve(batch.size());
  for (const Example& ex : batch) {
    grads.push_back(PerSampleGradOne(spec, params, ex));
  }
  return grads;
}

ParameterVector FiniteDiffGrad(const ModelSpec& spec,
                               const ParameterVector& params,
                               const Example& example, double h) {
  if (!(h > 0.0)) ThrowInvalidArgument("FiniteDiffGrad: h must be > 0");
  ParameterVector work = params;
  ParameterVector grad(spec.Layout());
  for (size_t i = 0; i < work.size(); ++i) {
    const double saved = work.values()[i];
    work.values()[i] = saved + h;
    const double up = Loss(Forward(spec, work, example.input), example.label);
    work.values()[i] = saved - h;
    const double dn = Loss(Forward(spec, work, example.input), example.label);
    work.values()[i] = saved;
    grad.values()[i] = (up - dn) / (2.0 * h);
  }
  return grad;
}

ParameterVector InitParams(const ModelSpec& spec, uint64_t seed) {
  spec.Validate();
  ParameterVector params(spec.Layout());
  RngStream rng(SplitMix64(seed ^ 0x1f3d5b79a2c4e6f8ULL));
  const auto& layout = params.layout();
  for (size_t i = 0; i < layout.size(); ++i) {
    auto seg = params.Segment(i);
    if (layout[i].shape.size() == 2) {
      const double fan_out = static_cast<double>(layout[i].shape[0]);
      const double fan_in = static_cast<double>(layout[i].shape[1]);
      const double s = std::sqrt(6.0 / (fan_in + fan_out));
      for (double& v : seg) v = rng.Uniform(-s, s);
    } else {
      for (double& v : seg) v = 0.0;
    }
  }
  return params;
}

}  // namespace dprandp
