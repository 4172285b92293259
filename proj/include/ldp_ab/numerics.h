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

#ifndef LDP_AB_NUMERICS_H_
#define LDP_AB_NUMERICS_H_

#include "absl/status/statusor.h"

// Distribution kernels used by the hypothesis tests and power planning. All
// functions are pure and safe to call concurrently.
namespace ldp_ab {

// CDF of the standard normal distribution N(0, 1).
double NormalCdf(double x);

// Inverse of NormalCdf. Returns kInvalidArgument unless 0 < p < 1.
//
// Starts from Acklam's rational approximation (relative error ~1e-9) and
// applies one Halley refinement step against NormalCdf, which brings the
// round trip |NormalCdf(NormalQuantile(p)) - p| to machine precision.
absl::StatusOr<double> NormalQuantile(double p);

// Regularized incomplete beta function I_x(a, b) for a, b > 0 and
// x in [0, 1]. `one_minus_x` must equal 1 - x; passing it separately keeps
// precision when x is within rounding distance of 1. Evaluated with the
// modified Lentz continued fraction (tolerance 1e-12, at most 300 terms),
// switching to the symmetric form when x is past the mean.
double RegularizedIncompleteBeta(double x, double one_minus_x, double a,
                                 double b);

// CDF of Student's t distribution. `df` may be fractional (Welch degrees of
// freedom are real-valued) and must be positive; returns NaN otherwise.
double StudentTCdf(double t, double df);

}  // namespace ldp_ab

#endif  // LDP_AB_NUMERICS_H_
