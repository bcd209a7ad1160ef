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
#ifndef DPRANDP_COMMON_NORMAL_H_
#define DPRANDP_COMMON_NORMAL_H_

namespace dprandp {

// Standard normal CDF, evaluated through erfc so both tails keep full
// relative accuracy.
double StdNormalCdf(double x);

// log(Phi(x)), finite for arbitrarily negative x. Switches to an asymptotic
// expansion below the point where erfc underflows.
double StdNormalLogCdf(double x);

// Smallest z >= 0 with Phi(-z) <= tail_mass; bisection on StdNormalCdf.
double StdNormalUpperQuantile(double tail_mass);

// log(exp(a) + exp(b)) without overflow.
double LogAddExp(double a, double b);

}  // namespace dprandp

#endif  // DPRANDP_COMMON_NORMAL_H_
