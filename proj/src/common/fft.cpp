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
#include "common/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <mutex>

#include "common/error.hpp"

namespace dprandp {

size_t NextPowerOfTwo(size_t n) {
  size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

namespace {

// FFTW planning is not thread safe; execution of independent plans is.
std::mutex& PlanMutex() {
  static std::mutex m;
  return m;
}

struct FftBuffers {
  double* real = nullptr;
  fftw_complex* spec = nullptr;
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
  size_t n = 0;

  explicit FftBuffers(size_t nfft) : n(nfft) {
    std::lock_guard<std::mutex> lock(PlanMutex());
    real = fftw_alloc_real(nfft);
    spec = fftw_alloc_complex(nfft / 2 + 1);
    if (real == nullptr || spec == nullptr) {
      ThrowNumericalFailure("fft: allocation failed");
    }
    forward = fftw_plan_dft_r2c_1d(static_cast<int>(nfft), real, spec,
                                   FFTW_ESTIMATE);
    backward = fftw_plan_dft_c2r_1d(static_cast<int>(nfft), spec, real,
                                    FFTW_ESTIMATE);
  }
  ~FftBuffers() {
    std::lock_guard<std::mutex> lock(PlanMutex());
    if (forward != nullptr) fftw_destroy_plan(forward);
    if (backward != nullptr) fftw_destroy_plan(backward);
    fftw_free(real);
    fftw_free(spec);
  }
  FftBuffers(const FftBuffers&) = delete;
  FftBuffers& operator=(const FftBuffers&) = delete;
};

}  // namespace

std::vector<double> ConvolvePower(const std::vector<double>& p, long t,
                                  size_t nfft) {
  if (nfft < p.size()) ThrowInvalidArgument("ConvolvePower: nfft < input");
  if ((nfft & (nfft - 1)) != 0) nfft = NextPowerOfTwo(nfft);
  FftBuffers buf(nfft);
  std::memset(buf.real, 0, sizeof(double) * nfft);
  std::memcpy(buf.real, p.data(), sizeof(double) * p.size());
  fftw_execute(buf.forward);

  const size_t nspec = nfft / 2 + 1;
  const double td = static_cast<double>(t);
  for (size_t k = 0; k < nspec; ++k) {
    const double re = buf.spec[k][0];
    const double im = buf.spec[k][1];
    const double r = std::hypot(re, im);
    if (r <= 0.0) {
      buf.spec[k][0] = 0.0;
      buf.spec[k][1] = 0.0;
      continue;
    }
    // z^t = r^t * exp(i * t * theta); exact for integer t regardless of the
    // branch atan2 picks.
    const double mag = std::exp(td * std::log(r));
    const double theta = td * std::atan2(im, re);
    buf.spec[k][0] = mag * std::cos(theta);
    buf.spec[k][1] = mag * std::sin(theta);
  }
  fftw_execute(buf.backward);

  std::vector<double> out(nfft);
  const double scale = 1.0 / static_cast<double>(nfft);
  for (size_t i = 0; i < nfft; ++i) out[i] = buf.real[i] * scale;
  return out;
}

std::vector<double> Convolve(const std::vector<double>& a,
                             const std::vector<double>& b, size_t nfft) {
  if (nfft < a.size() || nfft < b.size()) {
    ThrowInvalidArgument("Convolve: nfft too small");
  }
  if ((nfft & (nfft - 1)) != 0) nfft = NextPowerOfTwo(nfft);
  FftBuffers buf(nfft);
  const size_t nspec = nfft / 2 + 1;
  std::vector<double> spec_a(2 * nspec);

  std::memset(buf.real, 0, sizeof(double) * nfft);
  std::memcpy(buf.real, a.data(), sizeof(double) * a.size());
  fftw_execute(buf.forward);
  std::memcpy(spec_a.data(), buf.spec, sizeof(double) * 2 * nspec);

  std::memset(buf.real, 0, sizeof(double) * nfft);
  std::memcpy(buf.real, b.data(), sizeof(double) * b.size());
  fftw_execute(buf.forward);

  for (size_t k = 0; k < nspec; ++k) {
    const double ar = spec_a[2 * k], ai = spec_a[2 * k + 1];
    const double br = buf.spec[k][0], bi = buf.spec[k][1];
    buf.spec[k][0] = ar * br - ai * bi;
    buf.spec[k][1] = ar * bi + ai * br;
  }
  fftw_execute(buf.backward);

  std::vector<double> out(nfft);
  const double scale = 1.0 / static_cast<double>(nfft);
  for (size_t i = 0; i < nfft; ++i) out[i] = buf.real[i] * scale;
  return out;
}

}  // namespace dprandp
