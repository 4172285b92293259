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

#include "ldp_ab/random.h"

namespace ldp_ab {

namespace {
constexpr std::uint64_t kGoldenGamma = 0x9e3779b97f4a7c15ULL;
}  // namespace

std::uint64_t Mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

CounterRandomSource::CounterRandomSource(std::uint64_t seed)
    : key_(Mix64(seed)) {}

std::uint64_t CounterRandomSource::NextBits() {
  ++counter_;
  return Mix64(key_ + counter_ * kGoldenGamma);
}

double CounterRandomSource::NextUniform() {
  return static_cast<double>(NextBits() >> 11) * 0x1.0p-53;
}

std::uint64_t DeriveSeed(std::uint64_t seed, std::uint64_t i,
                         std::uint64_t j) {
  std::uint64_t h = Mix64(seed ^ 0x6a09e667f3bcc908ULL);
  h = Mix64(h ^ (i + kGoldenGamma));
  return Mix64(h ^ (j * kGoldenGamma + 0x3c6ef372fe94f82bULL));
}

}  // namespace ldp_ab
