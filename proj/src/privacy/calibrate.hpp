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
#ifndef DPRANDP_PRIVACY_CALIBRATE_H_
#define DPRANDP_PRIVACY_CALIBRATE_H_

#include "privacy/pld.hpp"

namespace dprandp {

// Smallest sigma on the 0.1 grid with EpsilonOf(sigma, q, steps, delta)
// <= epsilon. Bisects with a coarse accountant, then verifies the boundary
// pair on the full-precision grid.
double CalibrateSigma(double epsilon, double delta, double q, long steps,
                      const AccountingConfig& cfg);

// Plain-Gaussian calibration through the analytic curve: smallest sigma on
// the 0.1 grid whose one-shot Gaussian mechanism satisfies (epsilon, delta).
double CalibrateSigmaGdp(double epsilon, double delta);

}  // namespace dprandp

#endif  // DPRANDP_PRIVACY_CALIBRATE_H_
