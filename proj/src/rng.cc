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

#include "curvmix/rng.h"

#include <cmath>
#include <numbers>

namespace curvmix {
namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void MulHiLo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi,
                    std::uint32_t& lo) {
  const std::uint64_t product = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(product >> 32);
  lo = static_cast<std::uint32_t>(product);
}

PhiloxKey SplitKey(std::uint64_t seed) {
  return {static_cast<std::uint32_t>(seed),
          static_cast<std::uint32_t>(seed >> 32)};
}

std::array<std::uint64_t, 2> Block(PhiloxKey key, std::uint64_t lo,
                                   std::uint64_t hi) {
  const PhiloxCounter out = Philox4x32(
      {static_cast<std::uint32_t>(lo), static_cast<std::uint32_t>(lo >> 32),
       static_cast<std::uint32_t>(hi), static_cast<std::uint32_t>(hi >> 32)},
      key);
  return {(static_cast<std::uint64_t>(out[1]) << 32) | out[0],
          (static_cast<std::uint64_t>(out[3]) << 32) | out[2]};
}

}  // namespace

PhiloxCounter Philox4x32(PhiloxCounter counter, PhiloxKey key) {
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    MulHiLo(kPhiloxM0, counter[0], hi0, lo0);
    MulHiLo(kPhiloxM1, counter[2], hi1, lo1);
    counter = {hi1 ^ counter[1] ^ key[0], lo1, hi0 ^ counter[3] ^ key[1], lo0};
    key[0] += kPhiloxW0;
    key[1] += kPhiloxW1;
  }
  return counter;
}

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::uint64_t DeriveSeed(std::uint64_t seed, std::uint64_t stream) {
  return SplitMix64(SplitMix64(seed) ^ SplitMix64(~stream));
}

double BitsToOpenUnit(std::uint64_t bits) {
  return (static_cast<double>(bits >> 12) + 0.5) * 0x1.0p-52;
}

void FillStandardNormal(std::uint64_t seed, std::uint64_t step,
                        std::span<double> out) {
  const PhiloxKey key = SplitKey(seed);
  const std::size_t n = out.size();
  for (std::size_t pair = 0; 2 * pair < n; ++pair) {
    const auto bits = Block(key, pair, step);
    const double radius = std::sqrt(-2.0 * std::log(BitsToOpenUnit(bits[0])));
    const double angle = 2.0 * std::numbers::pi * BitsToOpenUnit(bits[1]);
    out[2 * pair] = radius * std::cos(angle);
    if (2 * pair + 1 < n) out[2 * pair + 1] = radius * std::sin(angle);
  }
}

Rng::Rng(std::uint64_t seed) : key_(SplitKey(seed)) {}

std::uint64_t Rng::NextU64() {
  if (buffered_ == 0) {
    // High counter word is a fixed tag so sequential streams never collide
    // with FillStandardNormal blocks of the same seed.
    buffer_ = Block(key_, counter_++, ~0ull);
    buffered_ = 2;
  }
  return buffer_[2 - buffered_--];
}

double Rng::Uniform() { return BitsToOpenUnit(NextU64()); }

double Rng::Normal() {
  if (has_spare_normal_) {
    has_spare_normal_ = false;
    return spare_normal_;
  }
  const double radius = std::sqrt(-2.0 * std::log(Uniform()));
  const double angle = 2.0 * std::numbers::pi * Uniform();
  spare_normal_ = radius * std::sin(angle);
  has_spare_normal_ = true;
  return radius * std::cos(angle);
}

std::uint64_t Rng::UniformIndex(std::uint64_t n) {
  if (n <= 1) return 0;
  const std::uint64_t limit = ~0ull - (~0ull % n);
  std::uint64_t draw;
  do {
    draw = NextU64();
  } while (draw >= limit);
  return draw % n;
}

}  // namespace curvmix
