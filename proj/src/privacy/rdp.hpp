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
// Renyi-DP accountant for the Poisson-subsampled Gaussian mechanism. Used as
// an independent, deliberately conservative cross-check of the PLD path.
#ifndef DPRANDP_PRIVACY_RDP_H_
#define DPRANDP_PRIVACY_RDP_H_

#include <span>
#include <vector>

#include "privacy/pld.hpp"

namespace dprandp {

// RDP of a single subsampled-Gaussian invocation at the given order.
double SubsampledGaussianRdp(double q, double sigma, double order);

// min over orders of (steps * rdp(order)) converted to (epsilon, delta).
double RdpEpsilon(const SubsampledGaussianSpec& spec, double delta,
                  std::span<const double> orders);

// Default order grid covering [1.25, 512].
const std::vector<double>& DefaultRdpOrders();

}  // namespace dprandp

#endif  // DPRANDP_PRIVACY_RDP_H_
