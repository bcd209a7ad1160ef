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
#include "privacy/gdp.hpp"

#include <cmath>
#include <sstream>

#include "common/error.hpp"
#include "common/normal.hpp"

namespace dprandp {

void PrivacyBudget::Validate() const {
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
    ThrowInvalidArgument("PrivacyBudget: epsilon must be finite and >= 0");
  }
  if (!(delta > 0.0) || !(delta < 1.0)) {
    ThrowInvalidArgument("PrivacyBudget: delta must be in (0, 1)");
  }
}

void GaussianMechanismSpec::Validate() const {
  if (!(noise_multiplier > 0.0) || !std::isfinite(noise_multiplier)) {
    ThrowInvalidArgument("GaussianMechanismSpec: noise_multiplier must be > 0");
  }
  if (count < 1) {
    ThrowInvalidArgument("GaussianMechanismSpec: count must be >= 1");
  }
}

void GdpParameter::Validate() const {
  if (!(mu > 0.0) || !std::isfinite(mu)) {
    ThrowInvalidArgument("GdpParameter: mu must be finite and > 0");
  }
}

double GdpDelta(GdpParameter mu_param, double epsilon) {
  mu_param.Validate();
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
    ThrowInvalidArgument("GdpDelta: epsilon must be finite and >= 0");
  }
  const double mu = mu_param.mu;
  const double a = 0.5 * mu - epsilon / mu;
  const double b = -0.5 * mu - epsilon / mu;

  const double term1 = StdNormalCdf(a);
  double term2;
  if (b >= -36.0 && epsilon <= 700.0) {
    // Both factors are representable; the direct product keeps full relative
    // accuracy, which matters because term1 - term2 can cancel two digits.
    term2 = std::exp(epsilon) * StdNormalCdf(b);
  } else {
    term2 = std::exp(epsilon + StdNormalLogCdf(b));
  }
  double delta = term1 - term2;
  if (delta < 0.0) delta = 0.0;
  if (delta >= 1.0) delta = std::nextafter(1.0, 0.0);
  return delta;
}

double GdpEpsilon(GdpParameter mu_param, double delta) {
  mu_param.Validate();
  if (!(delta > 0.0) || !(delta < 1.0)) {
    ThrowInvalidArgument("GdpEpsilon: delta must be in (0, 1)");
  }
  if (GdpDelta(mu_param, 0.0) <= delta) return 0.0;

  const double mu = mu_param.mu;
  double lo = 0.0;
  // Covers all delta >= 1e-300 in practice; widened by doubling otherwise.
  double hi = 0.5 * mu * mu + 40.0 * mu;
  int guard = 0;
  while (GdpDelta(mu_param, hi) > delta) {
    hi *= 2.0;
    if (++guard > 60) {
      ThrowNumericalFailure("GdpEpsilon: bracket failed to enclose target");
    }
  }
  while (hi - lo > 1e-9) {
    const double mid = 0.5 * (lo + hi);
    if (GdpDelta(mu_param, mid) <= delta) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

GdpParameter ComposeGaussians(std::span<const GaussianMechanismSpec> specs) {
  if (specs.empty()) {
    ThrowInvalidArgument("ComposeGaussians: mechanism list is empty");
  }
  double sum = 0.0;
  for (const auto& spec : specs) {
    spec.Validate();
    sum += static_cast<double>(spec.count) /
           (spec.noise_multiplier * spec.noise_multiplier);
  }
  return GdpParameter{std::sqrt(sum)};
}

}  // namespace dprandp
