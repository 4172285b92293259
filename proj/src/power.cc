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

#include "ldp_ab/power.h"

#include <algorithm>
#include <cmath>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"
#include "ldp_ab/numerics.h"

namespace ldp_ab {

namespace {

absl::Status CheckProbability(double p, absl::string_view name) {
  if (!(p > 0 && p < 1)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("%s must satisfy 0 < %s < 1, got %g", name, name, p));
  }
  return absl::OkStatus();
}

absl::Status CheckSizes(std::int64_t n_a, std::int64_t n_b,
                        std::int64_t minimum) {
  if (n_a < minimum || n_b < minimum) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "sample sizes must be at least %d, got nA=%d nB=%d", minimum, n_a,
        n_b));
  }
  return absl::OkStatus();
}

}  // namespace

absl::StatusOr<EffectSpec> EffectSpec::Create(double theta,
                                              PrivacyBudget budget,
                                              DomainBound bound) {
  if (!(theta >= 0) || theta > bound.m()) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "theta must satisfy 0 <= theta <= m = %g, got %g", bound.m(), theta));
  }
  return EffectSpec{theta, budget, bound};
}

double EffectSpec::p_theta() const {
  const double e = budget.exp_epsilon();
  return theta / bound.m() * (e - 1) / (e + 1);
}

absl::StatusOr<double> TransformedMean(double mu, PrivacyBudget budget,
                                       DomainBound bound) {
  if (!bound.Contains(mu)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "population mean %g is outside [0, %g]", mu, bound.m()));
  }
  const double e = budget.exp_epsilon();
  return mu / bound.m() * (e - 1) / (e + 1) + 1 / (e + 1);
}

absl::StatusOr<std::optional<double>> PowerBoundMcDiarmid(
    const EffectSpec& effect, std::int64_t n_a, std::int64_t n_b,
    double alpha) {
  if (absl::Status s = CheckProbability(alpha, "alpha"); !s.ok()) return s;
  if (absl::Status s = CheckSizes(n_a, n_b, 1); !s.ok()) return s;
  const double na = static_cast<double>(n_a);
  const double nb = static_cast<double>(n_b);
  const double inner = effect.p_theta() * std::sqrt(2 * na * nb / (na + nb)) -
                       std::sqrt(std::log(1 / alpha));
  if (inner < 0) return std::optional<double>();
  return std::optional<double>(1 - std::exp(-inner * inner));
}

absl::StatusOr<NormalPowerBounds> PowerBoundNormal(
    const EffectSpec& effect, std::int64_t n_a, std::int64_t n_b, double alpha,
    std::optional<double> sigma_hat) {
  if (absl::Status s = CheckProbability(alpha, "alpha"); !s.ok()) return s;
  if (absl::Status s = CheckSizes(n_a, n_b, 2); !s.ok()) return s;
  if (sigma_hat.has_value() &&
      !(*sigma_hat > 0 && std::isfinite(*sigma_hat))) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "sigma_hat must be finite and positive, got %g", *sigma_hat));
  }
  absl::StatusOr<double> critical = NormalQuantile(1 - alpha);
  if (!critical.ok()) return critical.status();
  const double p_theta = effect.p_theta();
  const double na = static_cast<double>(n_a);
  const double nb = static_cast<double>(n_b);

  NormalPowerBounds bounds;
  bounds.from_sizes =
      1 - NormalCdf(*critical -
                    p_theta * std::sqrt(4 * (na - 1) * (nb - 1) /
                                        (na + nb - 2)));
  if (sigma_hat.has_value()) {
    bounds.with_sigma_hat = 1 - NormalCdf(*critical - p_theta / *sigma_hat);
  }
  return bounds;
}

absl::StatusOr<PowerReport> PowerBounds(const EffectSpec& effect,
                                        std::int64_t n_a, std::int64_t n_b,
                                        double alpha,
                                        std::optional<double> sigma_hat) {
  absl::StatusOr<std::optional<double>> mcdiarmid =
      PowerBoundMcDiarmid(effect, n_a, n_b, alpha);
  if (!mcdiarmid.ok()) return mcdiarmid.status();
  absl::StatusOr<NormalPowerBounds> normal =
      PowerBoundNormal(effect, n_a, n_b, alpha, sigma_hat);
  if (!normal.ok()) return normal.status();

  PowerReport report;
  report.bound_mcdiarmid = *mcdiarmid;
  report.bound_normal_samplevar = normal->with_sigma_hat;
  report.bound_normal_sizes = normal->from_sizes;
  report.best = report.bound_normal_sizes;
  if (report.bound_mcdiarmid) {
    report.best = std::max(report.best, *report.bound_mcdiarmid);
  }
  if (report.bound_normal_samplevar) {
    report.best = std::max(report.best, *report.bound_normal_samplevar);
  }
  return report;
}

absl::StatusOr<double> SampleSizeUnrounded(const EffectSpec& effect,
                                           double alpha, double beta) {
  if (absl::Status s = CheckProbability(alpha, "alpha"); !s.ok()) return s;
  if (absl::Status s = CheckProbability(beta, "beta"); !s.ok()) return s;
  const double p_theta = effect.p_theta();
  if (!(p_theta > 0)) {
    return absl::InvalidArgumentError(
        "p_theta is zero, no finite sample size reaches the target power");
  }
  absl::StatusOr<double> upper = NormalQuantile(1 - alpha);
  if (!upper.ok()) return upper.status();
  absl::StatusOr<double> lower = NormalQuantile(beta);
  if (!lower.ok()) return lower.status();
  const double gap = *upper - *lower;
  return gap * gap / (2 * p_theta * p_theta) + 1;
}

absl::StatusOr<std::int64_t> SampleSize(const EffectSpec& effect, double alpha,
                                        double beta) {
  absl::StatusOr<double> n = SampleSizeUnrounded(effect, alpha, beta);
  if (!n.ok()) return n.status();
  if (!(*n < 9.0e18)) {
    return absl::OutOfRangeError(
        absl::StrFormat("required sample size %g does not fit in 64 bits", *n));
  }
  return static_cast<std::int64_t>(std::ceil(*n));
}

absl::StatusOr<double> HybridVariance(const HybridVarianceSpec& spec) {
  if (!(spec.sigma2 >= 0) || !std::isfinite(spec.sigma2)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "sigma2 must be finite and nonnegative, got %g", spec.sigma2));
  }
  if (!(spec.r >= 0 && spec.r <= 1)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("LDP fraction r must lie in [0, 1], got %g", spec.r));
  }
  absl::StatusOr<double> p = TransformedMean(spec.mu, spec.budget, spec.bound);
  if (!p.ok()) return p.status();
  const double e = spec.budget.exp_epsilon();
  const double scale = spec.bound.m() * (e + 1) / (e - 1);
  return spec.sigma2 * (1 - spec.r) + spec.r * scale * scale * *p * (1 - *p);
}

}  // namespace ldp_ab
