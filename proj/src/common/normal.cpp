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
#include "common/normal.hpp"

#include <cmath>
#include <limits>

namespace dprandp {

namespace {
constexpr double kSqrt2 = 1.4142135623730951;
constexpr double kLogSqrt2Pi = 0.9189385332046727;  // log(sqrt(2*pi))
}  // namespace

double StdNormalCdf(double x) { return 0.5 * std::erfc(-x / kSqrt2); }

double StdNormalLogCdf(double x) {
  if (x > -25.0) {
    // erfc(17.7) ~ 1e-138: no underflow in this branch.
    return std::log(0.5 * std::erfc(-x / kSqrt2));
  }
  // Asymptotic series for Phi(-t), t = -x large:
  //   Phi(-t) = phi(t)/t * (1 - 1/t^2 + 3/t^4 - 15/t^6 + ...)
  const double t = -x;
  const double r2 = 1.0 / (t * t);
  double series = 0.0;
  double term = 1.0;
  // (2k-1)!! / t^(2k), alternating; eight terms suffice for t >= 25.
  static const double kDoubleFactorial[] = {1,    3,     15,     105,
                                            945,  10395, 135135, 2027025};
  double sign = -1.0;
  double power = r2;
  for (double df : kDoubleFactorial) {
    term = sign * df * power;
    series += term;
    sign = -sign;
    power *= r2;
  }
  return -0.5 * t * t - std::log(t) - kLogSqrt2Pi + std::log1p(series);
}

double StdNormalUpperQuantile(double tail_mass) {
  if (tail_mass >= 0.5) return 0.0;
  double lo = 0.0, hi = 45.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (StdNormalCdf(-mid) <= tail_mass) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

double LogAddExp(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  const double m = a > b ? a : b;
  return m + std::log1p(std::exp(-std::fabs(a - b)));
}

}  // namespace dprandp
