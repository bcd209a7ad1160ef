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
#ifndef DPRANDP_COMMON_FFT_H_
#define DPRANDP_COMMON_FFT_H_

#include <cstddef>
#include <vector>

namespace dprandp {

// Rounds up to the next power of two.
size_t NextPowerOfTwo(size_t n);

// Circular T-fold self-convolution of a real sequence over length nfft,
// computed as irfft(rfft(p)^T). The integer power is exact in the spectral
// domain, so this equals repeated squaring of the circular convolution at a
// fraction of the FFT count. Caller chooses nfft large enough that wraparound
// only affects mass it has separately accounted for.
std::vector<double> ConvolvePower(const std::vector<double>& p, long t,
                                  size_t nfft);

// Circular convolution of two real sequences over length nfft.
std::vector<double> Convolve(const std::vector<double>& a,
                             const std::vector<double>& b, size_t nfft);

}  // namespace dprandp

#endif  // DPRANDP_COMMON_FFT_H_
