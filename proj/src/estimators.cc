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

#include "ldp_ab/estimators.h"

#include <algorithm>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"

namespace ldp_ab {

namespace {

std::int64_t CountOnes(std::span<const LdpBit> bits) {
  std::int64_t ones = 0;
  for (LdpBit b : bits) ones += b != 0;
  return ones;
}

absl::Status CheckBits(std::span<const LdpBit> bits) {
  for (LdpBit b : bits) {
    if (b > 1) {
      return absl::InvalidArgumentError(
          absl::StrFormat("LDP report must be 0 or 1, got %d", b));
    }
  }
  return absl::OkStatus();
}

}  // namespace

absl::StatusOr<BudgetSplit> BudgetSplit::Even(double total_epsilon) {
  absl::StatusOr<PrivacyBudget> half = PrivacyBudget::Create(total_epsilon / 2);
  if (!half.ok()) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "total epsilon must be finite and positive, got %g", total_epsilon));
  }
  return BudgetSplit{*half, *half};
}

absl::StatusOr<BudgetSplit> BudgetSplit::Create(double first_epsilon,
                                                double second_epsilon) {
  absl::StatusOr<PrivacyBudget> first = PrivacyBudget::Create(first_epsilon);
  if (!first.ok()) return first.status();
  absl::StatusOr<PrivacyBudget> second = PrivacyBudget::Create(second_epsilon);
  if (!second.ok()) return second.status();
  return BudgetSplit{*first, *second};
}

absl::StatusOr<double> EstimateMeanFromCount(std::int64_t ones, std::int64_t n,
                                             PrivacyBudget budget,
                                             DomainBound bound) {
  if (n < 1) {
    return absl::InvalidArgumentError("mean estimate needs at least one report");
  }
  if (ones < 0 || ones > n) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "count of ones %d is outside [0, %d]", ones, n));
  }
  const double e = budget.exp_epsilon();
  // sum_i (b_i (e + 1) - 1) = ones (e + 1) - n.
  const double sum = static_cast<double>(ones) * (e + 1) -
                     static_cast<double>(n);
  return bound.m() / static_cast<double>(n) * sum / (e - 1);
}

absl::StatusOr<double> EstimateMean(std::span<const LdpBit> bits,
                                    PrivacyBudget budget, DomainBound bound) {
  if (absl::Status s = CheckBits(bits); !s.ok()) return s;
  return EstimateMeanFromCount(CountOnes(bits),
                               static_cast<std::int64_t>(bits.size()), budget,
                               bound);
}

absl::StatusOr<TwoBitReport> CollectTwoBit(double x, const BudgetSplit& split,
                                           DomainBound bound,
                                           RandomSource& rng) {
  if (absl::Status s = CheckCounter(x, bound); !s.ok()) return s;
  const OneBitMechanism first(split.first, bound);
  const OneBitMechanism second(split.second, bound.Squared());
  absl::StatusOr<LdpBit> a = first.Randomize(x, rng);
  if (!a.ok()) return a.status();
  // Rounding is monotone, so x <= m implies x * x <= m * m.
  absl::StatusOr<LdpBit> b = second.Randomize(x * x, rng);
  if (!b.ok()) return b.status();
  return TwoBitReport{*a, *b};
}

absl::StatusOr<double> EstimateVariance(std::span<const LdpBit> first_bits,
                                        std::span<const LdpBit> second_bits,
                                        const BudgetSplit& split,
                                        DomainBound bound) {
  if (first_bits.size() != second_bits.size()) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "first and second bit sequences differ in length (%d vs %d)",
        first_bits.size(), second_bits.size()));
  }
  if (first_bits.size() < 2) {
    return absl::InvalidArgumentError(
        "variance estimate needs at least two users");
  }
  absl::StatusOr<double> mean = EstimateMean(first_bits, split.first, bound);
  if (!mean.ok()) return mean.status();
  absl::StatusOr<double> mean_of_squares =
      EstimateMean(second_bits, split.second, bound.Squared());
  if (!mean_of_squares.ok()) return mean_of_squares.status();
  const double n = static_cast<double>(first_bits.size());
  return n * (*mean_of_squares - *mean * *mean) / (n - 1);
}

double ClampEstimatedMean(double mean, DomainBound bound) {
  return std::clamp(mean, 0.0, bound.m());
}

double ClampEstimatedVariance(double variance, DomainBound bound) {
  return std::clamp(variance, 0.0, bound.m() * bound.m());
}

}  // namespace ldp_ab
