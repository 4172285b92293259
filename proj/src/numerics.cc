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

#include "ldp_ab/numerics.h"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"

namespace ldp_ab {

namespace {

constexpr double kBetaTolerance = 1e-12;
constexpr int kBetaMaxIterations = 300;
constexpr double kTiny = 1e-300;

// Acklam's coefficients for the central and tail regions.
constexpr std::array<double, 6> kCentralNum = {
    -3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
    1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
constexpr std::array<double, 5> kCentralDen = {
    -5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
    6.680131188771972e+01, -1.328068155288572e+01};
constexpr std::array<double, 6> kTailNum = {
    -7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
    -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
constexpr std::array<double, 4> kTailDen = {
    7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
    3.754408661907416e+00};
constexpr double kTailBreak = 0.02425;

double AcklamQuantile(double p) {
  if (p < kTailBreak) {
    const double q = std::sqrt(-2 * std::log(p));
    return (((((kTailNum[0] * q + kTailNum[1]) * q + kTailNum[2]) * q +
              kTailNum[3]) * q + kTailNum[4]) * q + kTailNum[5]) /
           ((((kTailDen[0] * q + kTailDen[1]) * q + kTailDen[2]) * q +
             kTailDen[3]) * q + 1);
  }
  if (p > 1 - kTailBreak) {
    const double q = std::sqrt(-2 * std::log1p(-p));
    return -(((((kTailNum[0] * q + kTailNum[1]) * q + kTailNum[2]) * q +
               kTailNum[3]) * q + kTailNum[4]) * q + kTailNum[5]) /
           ((((kTailDen[0] * q + kTailDen[1]) * q + kTailDen[2]) * q +
             kTailDen[3]) * q + 1);
  }
  const double q = p - 0.5;
  const double r = q * q;
  return (((((kCentralNum[0] * r + kCentralNum[1]) * r + kCentralNum[2]) * r +
            kCentralNum[3]) * r + kCentralNum[4]) * r + kCentralNum[5]) * q /
         (((((kCentralDen[0] * r + kCentralDen[1]) * r + kCentralDen[2]) * r +
            kCentralDen[3]) * r + kCentralDen[4]) * r + 1);
}

// Continued fraction for I_x(a, b) (without the prefactor), valid when
// x < (a + 1) / (a + b + 2).
double BetaContinuedFraction(double x, double a, double b) {
  const double qab = a + b;
  const double qap = a + 1;
  const double qam = a - 1;
  double c = 1;
  double d = 1 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1 / d;
  double h = d;
  for (int m = 1; m <= kBetaMaxIterations; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1) < kBetaTolerance) break;
  }
  return h;
}

}  // namespace

double NormalCdf(double x) {
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

absl::StatusOr<double> NormalQuantile(double p) {
  if (!(p > 0 && p < 1)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "normal quantile requires 0 < p < 1, got %g", p));
  }
  if (p == 0.5) return 0.0;
  double x = AcklamQuantile(p);
  // Halley step on F(x) - p.
  const double e = NormalCdf(x) - p;
  const double u = e * std::sqrt(2 * std::numbers::pi) * std::exp(x * x / 2);
  x -= u / (1 + x * u / 2);
  return x;
}

double RegularizedIncompleteBeta(double x, double one_minus_x, double a,
                                 double b) {
  if (x <= 0) return 0;
  if (one_minus_x <= 0) return 1;
  const double log_front = std::lgamma(a + b) - std::lgamma(a) -
                           std::lgamma(b) + a * std::log(x) +
                           b * std::log(one_minus_x);
  const double front = std::exp(log_front);
  if (x < (a + 1) / (a + b + 2)) {
    return front * BetaContinuedFraction(x, a, b) / a;
  }
  return 1 - front * BetaContinuedFraction(one_minus_x, b, a) / b;
}

double StudentTCdf(double t, double df) {
  if (!(df > 0) || std::isnan(t)) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  if (std::isinf(t)) return t > 0 ? 1.0 : 0.0;
  const double t2 = t * t;
  const double x = df / (df + t2);
  const double y = t2 / (df + t2);
  // P(T > |t|).
  const double tail = 0.5 * RegularizedIncompleteBeta(x, y, df / 2, 0.5);
  return t < 0 ? tail : 1 - tail;
}

}  // namespace ldp_ab
