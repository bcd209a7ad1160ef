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
#ifndef DPRANDP_COMMON_RNG_H_
#define DPRANDP_COMMON_RNG_H_

#include <cstdint>
#include <random>
#include <string_view>

namespace dprandp {

// Deterministic named random stream. Streams are split per purpose at
// initialization (Child), so reordering or parallelizing consumers never
// changes the values another stream draws. All mappings from engine output
// to doubles are written out explicitly; nothing here depends on
// implementation-defined distributions.
//
// Not a cryptographic source: runs are seeded for bit-exact replay, which is
// the point of this toolkit at desk scale.
class RngStream {
 public:
  explicit RngStream(uint64_t seed);

  // Derives an independent stream keyed by (this stream's seed, purpose).
  RngStream Child(std::string_view purpose) const;
  RngStream Child(uint64_t index) const;

  uint64_t NextU64();
  // Uniform in [0, 1) with 53 random bits.
  double Uniform01();
  double Uniform(double lo, double hi);
  // Uniform integer in [0, n).
  uint64_t UniformInt(uint64_t n);
  bool Bernoulli(double p);
  // Standard normal via Box-Muller; the second value of each pair is cached.
  double Normal();

  uint64_t seed() const { return seed_; }

 private:
  uint64_t seed_;
  std::mt19937_64 engine_;
  bool has_cached_normal_ = false;
  double cached_normal_ = 0.0;
};

// FNV-1a over bytes; used for purpose-keyed stream derivation and content
// fingerprints of small strings.
uint64_t Fnv1a64(std::string_view bytes);

// SplitMix64 finalizer; decorrelates derived seeds.
uint64_t SplitMix64(uint64_t x);

}  // namespace dprandp

#endif  // DPRANDP_COMMON_RNG_H_
