//
// Copyright 2026 The curvmix Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

// Counter-based random numbers. Every Gaussian draw used by the library is
// a pure function of (seed, step, coordinate), so streams can be replayed
// and split across threads without changing a single bit.

#ifndef CURVMIX_RNG_H_
#define CURVMIX_RNG_H_

#include <array>
#include <cstdint>
#include <span>

namespace curvmix {

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

// The Philox4x32 block function with 10 rounds.
PhiloxCounter Philox4x32(PhiloxCounter counter, PhiloxKey key);

// SplitMix64 finalizer; a bijective 64-bit mixer.
std::uint64_t SplitMix64(std::uint64_t x);

// Seed for an independent sub-stream `stream` of `seed`.
std::uint64_t DeriveSeed(std::uint64_t seed, std::uint64_t stream);

// Maps 64 random bits to a double uniformly distributed in (0, 1).
double BitsToOpenUnit(std::uint64_t bits);

// Fills `out` with i.i.d. N(0, 1) draws for block `step` of `seed`.
// Coordinates 2j and 2j+1 come from one Philox call on counter (j, step),
// followed by Box-Muller.
void FillStandardNormal(std::uint64_t seed, std::uint64_t step,
                        std::span<double> out);

// Sequential generator over the Philox counter space, for the places that
// only need a plain stream (shuffles, synthetic data, start vectors).
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t NextU64();
  double Uniform();  // (0, 1)
  double Normal();
  // Uniform integer in [0, n), by rejection so it is exactly unbiased.
  std::uint64_t UniformIndex(std::uint64_t n);

 private:
  PhiloxKey key_;
  std::uint64_t counter_ = 0;
  std::array<std::uint64_t, 2> buffer_{};
  int buffered_ = 0;
  bool has_spare_normal_ = false;
  double spare_normal_ = 0.0;
};

}  // namespace curvmix

#endif  // CURVMIX_RNG_H_
