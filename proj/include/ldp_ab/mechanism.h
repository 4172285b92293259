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

#ifndef LDP_AB_MECHANISM_H_
#define LDP_AB_MECHANISM_H_

#include <cstdint>
#include <span>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "ldp_ab/random.h"

namespace ldp_ab {

// A single privatized report: 0 or 1.
using LdpBit = std::uint8_t;

// The epsilon of an epsilon-LDP guarantee. Always finite and positive.
class PrivacyBudget {
 public:
  static absl::StatusOr<PrivacyBudget> Create(double epsilon);

  double epsilon() const { return epsilon_; }
  // e^epsilon, cached.
  double exp_epsilon() const { return exp_epsilon_; }

 private:
  PrivacyBudget(double epsilon, double exp_epsilon)
      : epsilon_(epsilon), exp_epsilon_(exp_epsilon) {}

  double epsilon_;
  double exp_epsilon_;
};

// Upper end m of the counter domain [0, m]. Always finite and positive.
class DomainBound {
 public:
  // The unit domain [0, 1].
  DomainBound() : m_(1) {}
  static absl::StatusOr<DomainBound> Create(double m);

  double m() const { return m_; }
  // Bound of the squared domain [0, m^2], used for the second bit of a
  // two-bit report.
  DomainBound Squared() const { return DomainBound(m_ * m_); }

  bool Contains(double x) const { return x >= 0 && x <= m_; }

 private:
  explicit DomainBound(double m) : m_(m) {}

  double m_;
};

// Returns kInvalidArgument naming the offending value if x is outside
// [0, m] or not finite.
absl::Status CheckCounter(double x, DomainBound bound);

// Explicit clamp for data-ingestion code. The mechanism itself never clamps.
double ClampToDomain(double x, DomainBound bound);

// The 1-bit randomizer over [0, m]: reports 1 with probability
//   1 / (e^eps + 1) + (x / m) * (e^eps - 1) / (e^eps + 1).
// Any two inputs produce each output with probabilities within a factor of
// e^eps, which is the epsilon-LDP guarantee.
class OneBitMechanism {
 public:
  OneBitMechanism(PrivacyBudget budget, DomainBound bound);

  PrivacyBudget budget() const { return budget_; }
  DomainBound bound() const { return bound_; }

  // P[output = 1 | x]. Affine and strictly increasing in x; ranges over
  // [1 / (e^eps + 1), e^eps / (e^eps + 1)].
  absl::StatusOr<double> ResponseProbability(double x) const;

  // Draws exactly one uniform u and reports 1 iff u < ResponseProbability(x).
  absl::StatusOr<LdpBit> Randomize(double x, RandomSource& rng) const;

  // Privatizes every counter in order; fails on the first out-of-range value
  // without producing partial output.
  absl::StatusOr<std::vector<LdpBit>> RandomizeAll(
      std::span<const double> counters, RandomSource& rng) const;

  // Max over outputs b and inputs x, y of P[M(x) = b] / P[M(y) = b],
  // evaluated at the domain endpoints where it is attained.
  double PrivacyRatioBound() const;

 private:
  // Unchecked; x must be in [0, m].
  double ProbabilityUnchecked(double x) const {
    return floor_ + x * slope_;
  }

  PrivacyBudget budget_;
  DomainBound bound_;
  double floor_;  // 1 / (e^eps + 1)
  double slope_;  // (e^eps - 1) / ((e^eps + 1) m)
};

absl::StatusOr<double> ResponseProbability(double x, PrivacyBudget budget,
                                           DomainBound bound);
absl::StatusOr<LdpBit> Randomize(double x, PrivacyBudget budget,
                                 DomainBound bound, RandomSource& rng);
double PrivacyRatioBound(PrivacyBudget budget, DomainBound bound);

}  // namespace ldp_ab

#endif  // LDP_AB_MECHANISM_H_
