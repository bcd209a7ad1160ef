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
#include "privacy/calibrate.hpp"

#include <cmath>

#include "common/error.hpp"
#include "privacy/gdp.hpp"

namespace dprandp {

namespace {

constexpr double kSigmaGrid = 0.1;
constexpr double kSigmaMax = 1e6;

long GridIndex(double sigma) { return std::lround(sigma / kSigmaGrid); }
double GridSigma(long deci) { return static_cast<double>(deci) * kSigmaGrid; }

}  // namespace

double CalibrateSigma(double epsilon, double delta, double q, long steps,
                      const AccountingConfig& cfg) {
  if (!(epsilon > 0.0)) {
    ThrowInvalidArgument("CalibrateSigma: epsilon must be > 0");
  }
  if (!(delta > 0.0) || !(delta < 1.0)) {
    ThrowInvalidArgument("CalibrateSigma: delta must be in (0, 1)");
  }
  SubsampledGaussianSpec probe{1.0, q, steps};
  probe.Validate();

  // Coarse accountant for bracketing; full precision only at the boundary.
  AccountingConfig coarse = cfg;
  coarse.eps_error = 4.0 * cfg.eps_error;

  auto eps_coarse = [&](double sigma) {
    SubsampledGaussianSpec s{sigma, q, steps};
    return EpsilonOf(s, delta, coarse);
  };
  auto eps_fine = [&](double sigma) {
    SubsampledGaussianSpec s{sigma, q, steps};
    return EpsilonOf(s, delta, cfg);
  };

  // Exponential search for a passing upper bracket.
  double hi = std::max(0.2, q * std::sqrt(static_cast<double>(steps)) * 0.5);
  int guard = 0;
  while (eps_coarse(hi) > epsilon) {
    hi *= 2.0;
    if (hi > kSigmaMax || ++guard > 64) {
      ThrowNumericalFailure("CalibrateSigma: no sigma <= 1e6 meets target");
    }
  }
  double lo = hi / 2.0;

  // Bisect to half a grid step.
  while (hi - lo > 0.5 * kSigmaGrid) {
    const double mid = 0.5 * (lo + hi);
    if (eps_coarse(mid) <= epsilon) {
      hi = mid;
    } else {
      lo = mid;
    }
  }

  // Snap up to the grid and verify the boundary pair at full precision.
  long deci = GridIndex(std::ceil(hi / kSigmaGrid - 1e-9) * kSigmaGrid);
  if (deci < 1) deci = 1;
  while (eps_fine(GridSigma(deci)) > epsilon) {
    ++deci;
    if (GridSigma(deci) > kSigmaMax) {
      ThrowNumericalFailure("CalibrateSigma: no sigma <= 1e6 meets target");
    }
  }
  while (deci > 1 && eps_fine(GridSigma(deci - 1)) <= epsilon) {
    --deci;
  }
  return GridSigma(deci);
}

double CalibrateSigmaGdp(double epsilon, double delta) {
  if (!(epsilon > 0.0)) {
    ThrowInvalidArgument("CalibrateSigmaGdp: epsilon must be > 0");
  }
  PrivacyBudget budget{epsilon, delta};
  budget.Validate();
  // Delta of a one-shot Gaussian with noise sigma is GdpDelta(1/sigma, eps),
  // monotone decreasing in sigma.
  auto ok = [&](double sigma) {
    return GdpDelta(GdpParameter{1.0 / sigma}, epsilon) <= delta;
  };
  double hi = 1.0;
  int guard = 0;
  while (!ok(hi)) {
    hi *= 2.0;
    if (hi > kSigmaMax || ++guard > 64) {
      ThrowNumericalFailure("CalibrateSigmaGdp: no sigma <= 1e6 meets target");
    }
  }
  double lo = 0.0;
  while (hi - lo > 1e-4 * kSigmaGrid) {
    const double mid = 0.5 * (lo + hi);
    if (ok(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  long deci = static_cast<long>(std::ceil(hi / kSigmaGrid - 1e-12));
  if (deci < 1) deci = 1;
  while (!ok(GridSigma(deci))) ++deci;
  while (deci > 1 && ok(GridSigma(deci - 1))) --deci;
  return GridSigma(deci);
}

}  // namespace dprandp
