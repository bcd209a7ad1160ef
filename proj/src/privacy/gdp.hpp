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
// Exact privacy arithmetic for the Gaussian mechanism: the analytic
// (epsilon, delta) curve of a mu-Gaussian-DP mechanism and composition of
// heterogeneous Gaussian mechanisms into a single effective mechanism.
#ifndef DPRANDP_PRIVACY_GDP_H_
#define DPRANDP_PRIVACY_GDP_H_

#include <span>

namespace dprandp {

struct PrivacyBudget {
  double epsilon = 0.0;  // >= 0
  double delta = 0.0;    // in (0, 1)
  void Validate() const;
};

// One Gaussian mechanism invoked `count` times: noise std per unit L2
// sensitivity is `noise_multiplier`.
struct GaussianMechanismSpec {
  double noise_multiplier = 0.0;  // > 0
  long count = 1;                 // >= 1
  void Validate() const;
};

// Gaussian-DP parameter of a (possibly composed) mechanism. For a list of
// mechanisms, mu = sqrt(sum_i count_i / sigma_i^2); the effective one-step
// noise multiplier is 1/mu.
struct GdpParameter {
  double mu = 0.0;  // > 0
  void Validate() const;
};

// delta(epsilon) = Phi(mu/2 - eps/mu) - e^eps * Phi(-mu/2 - eps/mu).
// Monotone nonincreasing in epsilon, nondecreasing in mu. The e^eps factor
// moves to log space whenever the direct product would overflow or its
// Phi factor would underflow.
double GdpDelta(GdpParameter mu, double epsilon);

// Smallest epsilon with GdpDelta(mu, epsilon) <= delta, by bisection to
// absolute tolerance 1e-9. Returns 0 when delta >= GdpDelta(mu, 0).
double GdpEpsilon(GdpParameter mu, double delta);

// mu = sqrt(sum_i count_i / sigma_i^2). Order-invariant.
GdpParameter ComposeGaussians(std::span<const GaussianMechanismSpec> specs);

}  // namespace dprandp

#endif  // DPRANDP_PRIVACY_GDP_H_
