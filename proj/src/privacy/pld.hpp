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
// Privacy loss distribution accounting for Poisson-subsampled Gaussian
// mechanisms under T-fold composition. Every discretization choice rounds
// the privacy loss toward +infinity, so delta estimates never underestimate
// the true privacy loss.
#ifndef DPRANDP_PRIVACY_PLD_H_
#define DPRANDP_PRIVACY_PLD_H_

#include <vector>

namespace dprandp {

struct SubsampledGaussianSpec {
  double sigma = 0.0;  // noise multiplier, > 0
  double q = 1.0;      // Poisson sampling rate, in (0, 1]
  long steps = 1;      // T, >= 1
  void Validate() const;
};

struct AccountingConfig {
  // Base discretization width of the privacy-loss axis. Composition refines
  // the grid below this so that accumulated rounding stays within eps_error.
  double grid_spacing = 1e-4;
  // Accuracy of reported epsilon. The reported value sits at most about
  // eps_error above the exact composed epsilon and never below it.
  double eps_error = 0.01;
  // Probability mass below which the loss axis is truncated per operation.
  double tail_bound = 1e-12;
};

// One direction of a dominating pair, discretized on the grid
// value(i) = (origin_index + i) * grid_spacing + origin_shift.
// origin_shift >= grid_spacing/2 guarantees every rounded loss value sits
// weakly above the true loss it represents.
struct LossPmf {
  double grid_spacing = 0.0;
  long origin_index = 0;
  double origin_shift = 0.0;
  std::vector<double> masses;
  double truncation_mass = 0.0;  // pessimistically assigned to +infinity

  double ValueAt(size_t i) const {
    return (static_cast<double>(origin_index) + static_cast<double>(i)) *
               grid_spacing +
           origin_shift;
  }
  double TotalMass() const;
  // trunc + sum_{value > eps} mass * (1 - e^(eps - value)).
  double DeltaAt(double epsilon) const;
};

enum class PldDirection { kAddRemoveWorstCase };

// Discretized privacy loss of the worst-case add/remove pair
//   P = (1-q) N(0, sigma^2) + q N(1, sigma^2)  vs  Q = N(0, sigma^2)
// and its reverse. Queries take the pointwise-worse of the two curves.
class PrivacyLossDistribution {
 public:
  // Requires spec.steps == 1; composition is a separate step.
  static PrivacyLossDistribution OfSubsampledGaussian(
      const SubsampledGaussianSpec& spec, const AccountingConfig& cfg);

  // T-fold self-composition. Truncation masses add pessimistically.
  PrivacyLossDistribution Composed(long steps, const AccountingConfig& cfg,
                                   double delta_hint = 0.0) const;

  double Delta(double epsilon) const;
  // Smallest epsilon with Delta(epsilon) <= delta. Fails if delta is
  // unreachable within the represented loss range.
  double Epsilon(double delta) const;

  double grid_spacing() const { return forward_.grid_spacing; }
  double origin() const { return forward_.ValueAt(0); }
  const std::vector<double>& masses() const { return forward_.masses; }
  double truncation_mass() const { return forward_.truncation_mass; }
  PldDirection direction() const { return PldDirection::kAddRemoveWorstCase; }
  bool has_reverse() const { return has_reverse_; }
  const LossPmf& forward_pmf() const { return forward_; }
  const LossPmf& reverse_pmf() const { return reverse_; }

  // Internal constructor; used by composition and by the ledger when it
  // convolves heterogeneous mechanisms.
  PrivacyLossDistribution(LossPmf forward, LossPmf reverse, bool has_reverse)
      : forward_(std::move(forward)),
        reverse_(std::move(reverse)),
        has_reverse_(has_reverse) {}

 private:
  LossPmf forward_;
  LossPmf reverse_;
  bool has_reverse_ = false;
};

// Constructs a single-step PLD at the given spacing and per-step uplift.
// Exposed for epsilon_of, which refines the grid with composition depth.
LossPmf SubsampledGaussianLossPmf(double sigma, double q, bool reverse,
                                  double spacing, double uplift,
                                  double single_tail_mass);

// T-fold self-composition of one direction via an FFT characteristic-function
// power. Mass outside the retained window is bounded by a Chernoff bound on
// the composed loss and folded into truncation_mass.
LossPmf ComposeLossPmf(const LossPmf& pmf, long steps, double outside_target,
                       size_t max_fft_size = (1ull << 26));

// Convolution of two (possibly different) loss distributions; used by the
// privacy ledger for heterogeneous mechanism lists.
LossPmf ConvolveLossPmf(const LossPmf& a, const LossPmf& b,
                        double outside_target);

// Smallest grid epsilon with composed-PLD delta(eps) <= delta. Pessimistic:
// never underestimates the exact epsilon; accurate to about cfg.eps_error.
double EpsilonOf(const SubsampledGaussianSpec& spec, double delta,
                 const AccountingConfig& cfg);

// Total deterministic pessimism target of EpsilonOf (the reported epsilon
// exceeds the exact one by about this much). Kept just under eps_error so
// the q = 1 curve stays within eps_error of the analytic Gaussian curve.
double PessimismTarget(const AccountingConfig& cfg);

}  // namespace dprandp

#endif  // DPRANDP_PRIVACY_PLD_H_
