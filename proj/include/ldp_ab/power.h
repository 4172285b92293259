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

#ifndef LDP_AB_POWER_H_
#define LDP_AB_POWER_H_

#include <cstdint>
#include <optional>

#include "absl/status/statusor.h"
#include "ldp_ab/mechanism.h"

// Power lower bounds and sample-size planning for the binary test.
//
// All bounds are for the one-sided alternative mu_A - mu_B > d0 with true
// gap theta = (mu_A - mu_B) - d0. Running a two-sided test at the same alpha
// has less power than these bounds state.
namespace ldp_ab {

struct EffectSpec {
  double theta = 0;
  PrivacyBudget budget;
  DomainBound bound;

  // Requires 0 <= theta <= m. theta = 0 is accepted so the bounds can be
  // evaluated at the null, where they degenerate to alpha.
  static absl::StatusOr<EffectSpec> Create(double theta, PrivacyBudget budget,
                                           DomainBound bound);

  // Gap between report means: (theta / m) (e^eps - 1) / (e^eps + 1).
  double p_theta() const;
};

// Mean of a population's 1-bit reports:
//   (mu / m) (e^eps - 1) / (e^eps + 1) + 1 / (e^eps + 1).
absl::StatusOr<double> TransformedMean(double mu, PrivacyBudget budget,
                                       DomainBound bound);

// 1 - exp(-(p_theta sqrt(2 n_a n_b / (n_a + n_b)) - sqrt(ln(1/alpha)))^2).
// nullopt when the parenthesized term is negative: the bound does not apply
// there (which is different from a bound of 0).
absl::StatusOr<std::optional<double>> PowerBoundMcDiarmid(
    const EffectSpec& effect, std::int64_t n_a, std::int64_t n_b,
    double alpha);

struct NormalPowerBounds {
  // 1 - F(F^-1(1 - alpha) - p_theta / sigma_hat); only with sigma_hat.
  std::optional<double> with_sigma_hat;
  // 1 - F(F^-1(1 - alpha) - p_theta sqrt(4 (n_a-1)(n_b-1) / (n_a+n_b-2))).
  double from_sizes = 0;
};

// Normal-approximation bounds. `sigma_hat` is the standard error of the
// report-rate difference measured on collected data (see BinarySigmaHat),
// so the first bound is post-hoc only.
absl::StatusOr<NormalPowerBounds> PowerBoundNormal(
    const EffectSpec& effect, std::int64_t n_a, std::int64_t n_b, double alpha,
    std::optional<double> sigma_hat = std::nullopt);

struct PowerReport {
  std::optional<double> bound_mcdiarmid;
  std::optional<double> bound_normal_samplevar;
  double bound_normal_sizes = 0;
  // Largest of the present bounds.
  double best = 0;
};

absl::StatusOr<PowerReport> PowerBounds(
    const EffectSpec& effect, std::int64_t n_a, std::int64_t n_b, double alpha,
    std::optional<double> sigma_hat = std::nullopt);

// Balanced per-group size reaching power 1 - beta at level alpha, before
// rounding: (F^-1(1 - alpha) - F^-1(beta))^2 / (2 p_theta^2) + 1.
absl::StatusOr<double> SampleSizeUnrounded(const EffectSpec& effect,
                                           double alpha, double beta);

// SampleSizeUnrounded rounded up.
absl::StatusOr<std::int64_t> SampleSize(const EffectSpec& effect, double alpha,
                                        double beta);

struct HybridVarianceSpec {
  double sigma2 = 0;  // variance of the exact counters
  double r = 0;       // fraction of users requiring LDP
  double mu = 0;      // population mean, fixes the report variance
  PrivacyBudget budget;
  DomainBound bound;
};

// Variance of the mixed distribution, with the hidden constant made exact:
//   sigma2 (1 - r) + r m^2 (e^eps + 1)^2 / (e^eps - 1)^2 p (1 - p)
// where p = TransformedMean(mu).
absl::StatusOr<double> HybridVariance(const HybridVarianceSpec& spec);

}  // namespace ldp_ab

#endif  // LDP_AB_POWER_H_
