// Copyright 2026 The LDP A/B Testing Authors
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

#ifndef LDP_AB_RANDOM_H_
#define LDP_AB_RANDOM_H_

#include <cstdint>

namespace ldp_ab {

// Stream of uniform variates. Every randomized operation in this library
// draws through this interface so that experiments can be replayed exactly.
// A source is not thread-safe; use one per concurrent stream.
class RandomSource {
 public:
  virtual ~RandomSource() = default;

  // Uniform on [0, 1).
  virtual double NextUniform() = 0;
};

// Counter-based generator: the i-th output is a bijective 64-bit mix of
// (key + i * golden_gamma), i.e. SplitMix64 addressed by position. Same seed,
// same sequence, on every platform.
class CounterRandomSource final : public RandomSource {
 public:
  explicit CounterRandomSource(std::uint64_t seed);

  double NextUniform() override;
  std::uint64_t NextBits();

  // Number of variates consumed so far.
  std::uint64_t position() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

// 64-bit finalizer with full avalanche.
std::uint64_t Mix64(std::uint64_t z);

// Seed of an independent substream addressed by (seed, i, j). Used for
// per-trial streams so a trial's outcome depends only on its own index.
std::uint64_t DeriveSeed(std::uint64_t seed, std::uint64_t i, std::uint64_t j);

}  // namespace ldp_ab

#endif  // LDP_AB_RANDOM_H_
