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

#include "ldp_ab/mechanism.h"

#include <algorithm>
#include <cmath>

#include "absl/strings/str_format.h"

namespace ldp_ab {

absl::StatusOr<PrivacyBudget> PrivacyBudget::Create(double epsilon) {
  if (!std::isfinite(epsilon) || epsilon <= 0) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "epsilon must be finite and positive, got %g", epsilon));
  }
  const double exp_epsilon = std::exp(epsilon);
  if (!std::isfinite(exp_epsilon)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("epsilon %g overflows e^epsilon", epsilon));
  }
  return PrivacyBudget(epsilon, exp_epsilon);
}

absl::StatusOr<DomainBound> DomainBound::Create(double m) {
  if (!std::isfinite(m) || m <= 0) {
    return absl::InvalidArgumentError(
        absl::StrFormat("domain bound m must be finite and positive, got %g",
                        m));
  }
  return DomainBound(m);
}

absl::Status CheckCounter(double x, DomainBound bound) {
  if (!bound.Contains(x)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "counter %g is outside the domain [0, %g]", x, bound.m()));
  }
  return absl::OkStatus();
}

double ClampToDomain(double x, DomainBound bound) {
  if (std::isnan(x)) return 0;
  return std::clamp(x, 0.0, bound.m());
}

OneBitMechanism::OneBitMechanism(PrivacyBudget budget, DomainBound bound)
    : budget_(budget),
      bound_(bound),
      floor_(1 / (budget.exp_epsilon() + 1)),
      slope_((budget.exp_epsilon() - 1) /
             ((budget.exp_epsilon() + 1) * bound.m())) {}

absl::StatusOr<double> OneBitMechanism::ResponseProbability(double x) const {
  if (absl::Status s = CheckCounter(x, bound_); !s.ok()) return s;
  return ProbabilityUnchecked(x);
}

absl::StatusOr<LdpBit> OneBitMechanism::Randomize(double x,
                                                  RandomSource& rng) const {
  if (absl::Status s = CheckCounter(x, bound_); !s.ok()) return s;
  return static_cast<LdpBit>(rng.NextUniform() < ProbabilityUnchecked(x));
}

absl::StatusOr<std::vector<LdpBit>> OneBitMechanism::RandomizeAll(
    std::span<const double> counters, RandomSource& rng) const {
  std::vector<LdpBit> bits(counters.size());
  for (size_t i = 0; i < counters.size(); ++i) {
    const double x = counters[i];
    if (!bound_.Contains(x)) return CheckCounter(x, bound_);
    bits[i] = static_cast<LdpBit>(rng.NextUniform() < ProbabilityUnchecked(x));
  }
  return bits;
}

double OneBitMechanism::PrivacyRatioBound() const {
  const double p_low = ProbabilityUnchecked(0);
  const double p_high = ProbabilityUnchecked(bound_.m());
  // For output 1 the ratio peaks at (m, 0); for output 0 at (0, m).
  return std::max(p_high / p_low, (1 - p_low) / (1 - p_high));
}

absl::StatusOr<double> ResponseProbability(double x, PrivacyBudget budget,
                                           DomainBound bound) {
  return OneBitMechanism(budget, bound).ResponseProbability(x);
}

absl::StatusOr<LdpBit> Randomize(double x, PrivacyBudget budget,
                                 DomainBound bound, RandomSource& rng) {
  return OneBitMechanism(budget, bound).Randomize(x, rng);
}

double PrivacyRatioBound(PrivacyBudget budget, DomainBound bound) {
  return OneBitMechanism(budget, bound).PrivacyRatioBound();
}

}  // namespace ldp_ab
