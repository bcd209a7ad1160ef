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
#include "privacy/rdp.hpp"

#include <cmath>
#include <limits>

#include "common/error.hpp"
#include "common/normal.hpp"

namespace dprandp {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double LogErfc(double x) {
  // erfc(x) = 2 Phi(-x sqrt(2))
  return std::log(2.0) + StdNormalLogCdf(-x * 1.4142135623730951);
}

// Signed log-space accumulator: value = sign * exp(log_abs).
struct SignedLog {
  double log_abs = kNegInf;
  int sign = 1;

  void Add(double log_term, int term_sign) {
    if (log_term == kNegInf) return;
    if (log_abs == kNegInf) {
      log_abs = log_term;
      sign = term_sign;
      return;
    }
    if (sign == term_sign) {
      log_abs = LogAddExp(log_abs, log_term);
      return;
    }
    if (log_term == log_abs) {
      log_abs = kNegInf;
      sign = 1;
      return;
    }
    if (log_term > log_abs) {
      log_abs = log_term + std::log1p(-std::exp(log_abs - log_term));
      sign = term_sign;
    } else {
      log_abs = log_abs + std::log1p(-std::exp(log_term - log_abs));
    }
  }
};

// log E_{k~Bin(alpha,q)} exp(k(k-1)/(2 sigma^2)) for integer alpha.
double ComputeLogAInt(double q, double sigma, long alpha) {
  double log_a = kNegInf;
  const double log_q = std::log(q);
  const double log_1mq = std::log1p(-q);
  for (long i = 0; i <= alpha; ++i) {
    const double log_coef = std::lgamma(alpha + 1.0) - std::lgamma(i + 1.0) -
                            std::lgamma(alpha - i + 1.0) +
                            static_cast<double>(i) * log_q +
                            static_cast<double>(alpha - i) * log_1mq;
    const double s = log_coef + (static_cast<double>(i) * i - i) /
                                    (2.0 * sigma * sigma);
    log_a = LogAddExp(log_a, s);
  }
  return log_a;
}

// Fractional-order case: the two-sided series split at z0, the point where
// the mixture and base densities cross.
double ComputeLogAFrac(double q, double sigma, double alpha) {
  SignedLog a0, a1;
  const double z0 = sigma * sigma * std::log(1.0 / q - 1.0) + 0.5;
  const double log_q = std::log(q);
  const double log_1mq = std::log1p(-q);
  const double s2 = 2.0 * sigma * sigma;
  // binom(alpha, i) accumulated by the recurrence
  // binom(alpha, i+1) = binom(alpha, i) * (alpha - i) / (i + 1).
  double log_binom = 0.0;
  int binom_sign = 1;
  long i = 0;
  while (true) {
    const double di = static_cast<double>(i);
    const double dj = alpha - di;
    const double log_t0 = log_binom + di * log_q + dj * log_1mq;
    const double log_t1 = log_binom + dj * log_q + di * log_1mq;
    const double log_e0 =
        std::log(0.5) + LogErfc((di - z0) / (1.4142135623730951 * sigma));
    const double log_e1 =
        std::log(0.5) + LogErfc((z0 - dj) / (1.4142135623730951 * sigma));
    const double log_s0 = log_t0 + (di * di - di) / s2 + log_e0;
    const double log_s1 = log_t1 + (dj * dj - dj) / s2 + log_e1;
    a0.Add(log_s0, binom_sign);
    a1.Add(log_s1, binom_sign);
    if (di > alpha && std::max(log_s0, log_s1) < -40.0 &&
        std::max(log_s0, log_s1) < a0.log_abs - 40.0) {
      break;
    }
    const double factor = alpha - di;
    if (factor == 0.0) break;  // alpha integer-valued; series terminates
    log_binom += std::log(std::fabs(factor)) - std::log(di + 1.0);
    if (factor < 0.0) binom_sign = -binom_sign;
    ++i;
    if (i > 10000) {
      ThrowNumericalFailure("SubsampledGaussianRdp: series did not converge");
    }
  }
  if (a0.sign < 0 || a1.sign < 0) {
    ThrowNumericalFailure("SubsampledGaussianRdp: negative moment estimate");
  }
  return LogAddExp(a0.log_abs, a1.log_abs);
}

}  // namespace

double SubsampledGaussianRdp(double q, double sigma, double order) {
  if (!(order > 1.0)) {
    ThrowInvalidArgument("SubsampledGaussianRdp: order must be > 1");
  }
  if (q >= 1.0) {
    return order / (2.0 * sigma * sigma);
  }
  double log_a;
  if (order == std::floor(order) && order < 10000) {
    log_a = ComputeLogAInt(q, sigma, static_cast<long>(order));
  } else {
    log_a = ComputeLogAFrac(q, sigma, order);
  }
  return log_a / (order - 1.0);
}

double RdpEpsilon(const SubsampledGaussianSpec& spec, double delta,
                  std::span<const double> orders) {
  spec.Validate();
  if (orders.empty()) {
    ThrowInvalidArgument("RdpEpsilon: orders list is empty");
  }
  if (!(delta > 0.0) || !(delta < 1.0)) {
    ThrowInvalidArgument("RdpEpsilon: delta must be in (0, 1)");
  }
  double best = std::numeric_limits<double>::infinity();
  for (double order : orders) {
    const double rdp =
        static_cast<double>(spec.steps) * SubsampledGaussianRdp(spec.q,
                                                                spec.sigma,
                                                                order);
    // Conversion with the improved log terms.
    const double eps = rdp + std::log1p(-1.0 / order) -
                       (std::log(delta) + std::log(order)) / (order - 1.0);
    if (eps < best) best = eps;
  }
  return best < 0.0 ? 0.0 : best;
}

const std::vector<double>& DefaultRdpOrders() {
  static const std::vector<double> orders = [] {
    std::vector<double> o;
    for (double a = 1.25; a < 10.0; a += 0.25) o.push_back(a);
    for (double a = 10.0; a < 64.0; a += 1.0) o.push_back(a);
    for (double a = 64.0; a <= 512.0; a += 8.0) o.push_back(a);
    return o;
  }();
  return orders;
}

}  // namespace dprandp
