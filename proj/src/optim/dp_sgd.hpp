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
// DP-SGD: per-sample clipping with 1/c normalization, Gaussian noise on the
// aggregated gradient, Poisson sampling, augmentation multiplicity, heavy
// ball momentum, and EMA of weights. The clip-only (epsilon = infinity) mode
// keeps clipping active with zero noise.
#ifndef DPRANDP_OPTIM_DP_SGD_H_
#define DPRANDP_OPTIM_DP_SGD_H_

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "common/rng.hpp"
#include "model/model.hpp"
#include "privacy/pld.hpp"

namespace dprandp {

enum class DpMode { kPrivate, kClipOnly, kPlain };

struct DpSgdConfig {
  double clip_norm = 1.0;  // c; +infinity disables clipping entirely
  double noise_multiplier = 0.0;
  double learning_rate = 0.1;
  double sampling_rate = 1.0;  // q; 1 means full batch
  long steps = 1;
  double momentum = 0.0;
  int augmult = 0;  // K; 0 disables augmentation multiplicity
  double ema_decay = 0.999;
  bool ema_enabled = true;
  DpMode mode = DpMode::kPrivate;
  long eval_every = 0;  // 0: only at the end

  void Validate() const;
};

struct TrainState {
  ParameterVector params;
  ParameterVector momentum_buffer;
  ParameterVector ema_params;
  long step_index = 0;
  RngStream rng_sampling;
  RngStream rng_noise;
  RngStream rng_aug;

  TrainState(ParameterVector initial, uint64_t seed);
};

// clip_c(g) = c g / max(c, ||g||_2)
void ClipInPlace(std::span<double> g, double c);

// sum_i clip(g_i, c)/c + sigma * xi, with xi standard normal on the
// coordinates selected by `mask` (all coordinates when mask is null).
// The pre-noise statistic has add/remove L2 sensitivity exactly 1.
std::vector<double> NoisyAggregate(
    const std::vector<std::vector<double>>& per_sample_grads, size_t dim,
    double c, double sigma, RngStream& noise_rng,
    const std::vector<uint8_t>* mask = nullptr);

// Each index joins independently with probability q; q = 1 short-circuits to
// the full index list. The batch may be empty.
std::vector<size_t> PoissonSample(size_t dataset_size, double q,
                                  RngStream& rng);

// Model abstraction the optimizer drives: per-sample loss/gradient plus
// prediction for evaluation. Implementations are pure given (params, input).
class DifferentiableModel {
 public:
  virtual ~DifferentiableModel() = default;
  virtual const std::vector<SegmentSpec>& Layout() const = 0;
  virtual size_t ParamSize() const = 0;
  // Returns the loss; writes dLoss/dparams into grad (sized ParamSize()).
  virtual double LossAndGrad(const ParameterVector& params,
                             const Example& example,
                             std::span<double> grad) const = 0;
  virtual std::vector<double> Predict(const ParameterVector& params,
                                      std::span<const double> input) const = 0;
  // Coordinates actually trained; null means all. Frozen coordinates get
  // neither gradient nor noise.
  virtual const std::vector<uint8_t>* TrainableMask() const { return nullptr; }
};

// Plain ModelSpec classifier (cross-entropy on Forward output).
class SpecModel : public DifferentiableModel {
 public:
  explicit SpecModel(const ModelSpec& spec);
  const std::vector<SegmentSpec>& Layout() const override { return layout_; }
  size_t ParamSize() const override { return size_; }
  double LossAndGrad(const ParameterVector& params, const Example& example,
                     std::span<double> grad) const override;
  std::vector<double> Predict(const ParameterVector& params,
                              std::span<const double> input) const override;
  const ModelSpec& spec() const { return spec_; }

 private:
  ModelSpec spec_;
  std::vector<SegmentSpec> layout_;
  size_t size_;
};

using Augmenter = std::function<Example(const Example&, RngStream&)>;

// (1/K) sum_k grad(loss(aug_k(x))), computed before clipping. K = 1 with an
// identity augmenter reduces to the plain per-sample gradient.
std::vector<double> AugmultGrad(const DifferentiableModel& model,
                                const ParameterVector& params,
                                const Example& example, int k,
                                const Augmenter& augment, RngStream& aug_rng);

struct StepMetrics {
  long step = 0;
  double train_loss = 0.0;
  double eval_acc = -1.0;  // -1 when not evaluated this step
  double grad_norm_median = 0.0;
  double clipped_fraction = 0.0;
};

using MetricsSink = std::function<void(const StepMetrics&)>;

// One DP-SGD transition. The denominator is the expected batch size
// q * dataset_size, not the realized Poisson draw.
void DpSgdStep(TrainState& state, const DifferentiableModel& model,
               std::span<const Example> dataset,
               std::span<const size_t> batch_indices, const DpSgdConfig& cfg,
               size_t expected_batch, const Augmenter& augment,
               StepMetrics* metrics);

struct TrainResult {
  ParameterVector final_params;
  ParameterVector ema_params;
  std::vector<StepMetrics> log;
  // Mechanism consumed, for ledger registration (sigma, q, T); noise 0 in
  // clip_only/plain modes.
  std::optional<SubsampledGaussianSpec> mechanism;
};

TrainResult Train(const DifferentiableModel& model,
                  const ParameterVector& initial,
                  std::span<const Example> train_set,
                  std::span<const Example> eval_set, const DpSgdConfig& cfg,
                  uint64_t seed, const Augmenter& augment = nullptr,
                  const MetricsSink& sink = nullptr);

double Accuracy(const DifferentiableModel& model,
                const ParameterVector& params,
                std::span<const Example> eval_set);

}  // namespace dprandp

#endif  // DPRANDP_OPTIM_DP_SGD_H_
