// Copyright 2026 The Subpiece Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SUBPIECE_RANDOM_H_
#define SUBPIECE_RANDOM_H_

#include <cstdint>
#include <random>

namespace subpiece {

// Seedable random source with a fixed algorithm: std::mt19937_64, whose
// output sequence is pinned by the C++ standard, and uniform doubles built
// from its top 53 bits. Sampling results are therefore reproducible across
// platforms for a given seed. Not thread-safe; use one instance per thread.
class Random {
 public:
  explicit Random(uint64_t seed = 5489u) : engine_(seed) {}

  void Seed(uint64_t seed) { engine_.seed(seed); }

  uint64_t Next() { return engine_(); }

  // Uniform in [0, 1).
  double Uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform in [0, n). n must be positive.
  uint64_t UniformInt(uint64_t n) {
    // Rejection sampling keeps the result unbiased and portable.
    const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % n;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace subpiece

#endif  // SUBPIECE_RANDOM_H_
