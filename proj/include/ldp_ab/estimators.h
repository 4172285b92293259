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

#ifndef LDP_AB_ESTIMATORS_H_
#define LDP_AB_ESTIMATORS_H_

#include <cstdint>
#include <span>

#include "absl/status/statusor.h"
#include "ldp_ab/mechanism.h"
#include "ldp_ab/random.h"

// Server-side decoding of 1-bit reports into mean and variance estimates.
namespace ldp_ab {

// Division of a total budget across the two bits of a variance report.
// Sequential composition makes each user (first + second)-LDP.
struct BudgetSplit {
  PrivacyBudget first;
  PrivacyBudget second;

  // first = second = total / 2.
  static absl::StatusOr<BudgetSplit> Even(double total_epsilon);
  static absl::StatusOr<BudgetSplit> Create(double first_epsilon,
                                            double second_epsilon);

  double total() const { return first.epsilon() + second.epsilon(); }
};

// The pair sent by one user for variance estimation: `first` privatizes x
// over [0, m] with the first budget, `second` privatizes x^2 over [0, m^2]
// with the second budget, each from its own uniform variate.
struct TwoBitReport {
  LdpBit first;
  LdpBit second;
};

// Unbiased mean estimate from n privatized bits:
//   (m / n) * sum_i (bit_i (e^eps + 1) - 1) / (e^eps - 1).
// The result is not clamped and may fall outside [0, m].
absl::StatusOr<double> EstimateMean(std::span<const LdpBit> bits,
                                    PrivacyBudget budget, DomainBound bound);

// Same estimate from the number of ones among n reports.
absl::StatusOr<double> EstimateMeanFromCount(std::int64_t ones, std::int64_t n,
                                             PrivacyBudget budget,
                                             DomainBound bound);

// Consumes exactly two uniforms: first bit, then second bit.
absl::StatusOr<TwoBitReport> CollectTwoBit(double x, const BudgetSplit& split,
                                           DomainBound bound,
                                           RandomSource& rng);

// Sample-variance estimate
//   n / (n - 1) * (mean_hat[second; m^2] - mean_hat[first; m]^2)
// from per-user aligned bit sequences (index i is the same user in both).
// Biased low by at most O(m^2 / (n eps1^2)); may be negative and is returned
// unmodified.
absl::StatusOr<double> EstimateVariance(std::span<const LdpBit> first_bits,
                                        std::span<const LdpBit> second_bits,
                                        const BudgetSplit& split,
                                        DomainBound bound);

// Post-hoc clamps for reporting. The estimators above never apply these.
double ClampEstimatedMean(double mean, DomainBound bound);
double ClampEstimatedVariance(double variance, DomainBound bound);

}  // namespace ldp_ab

#endif  // LDP_AB_ESTIMATORS_H_
