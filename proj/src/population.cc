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

#include "ldp_ab/population.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "absl/strings/str_format.h"
#include "ldp_ab/csv_io.h"
#include "ldp_ab/numerics.h"

namespace ldp_ab {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

double NormalDensity(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2 * std::numbers::pi);
}

absl::Status CheckSupport(double low, double high, const PopulationSpec& spec) {
  const double m = spec.bound.m();
  if (!(std::isfinite(low) && std::isfinite(high) && low <= high)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("invalid support [%g, %g]", low, high));
  }
  if (low < 0 || high > m) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "support [%g, %g] is outside [0, %g]", low, high, m));
  }
  if (low + spec.shift < 0 || high + spec.shift > m) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "shift %g moves support [%g, %g] outside [0, %g]", spec.shift, low,
        high, m));
  }
  return absl::OkStatus();
}

// Truncation limits of TruncatedNormal in CDF space.
struct CdfWindow {
  double lo;
  double hi;
};

CdfWindow TruncationWindow(const TruncatedNormal& kind, DomainBound bound) {
  return {NormalCdf((0 - kind.mean) / kind.sigma),
          NormalCdf((bound.m() - kind.mean) / kind.sigma)};
}

}  // namespace

absl::Status PopulationSpec::Validate() const {
  if (!std::isfinite(shift)) {
    return absl::InvalidArgumentError("shift must be finite");
  }
  return std::visit(
      Overloaded{
          [&](const PointMass& k) { return CheckSupport(k.value, k.value, *this); },
          [&](const TwoPoint& k) -> absl::Status {
            if (!(k.p_high >= 0 && k.p_high <= 1)) {
              return absl::InvalidArgumentError(absl::StrFormat(
                  "two_point p must lie in [0, 1], got %g", k.p_high));
            }
            return CheckSupport(std::min(k.low, k.high),
                                std::max(k.low, k.high), *this);
          },
          [&](const UniformRange& k) { return CheckSupport(k.low, k.high, *this); },
          [&](const TruncatedNormal& k) -> absl::Status {
            if (!std::isfinite(k.mean) || !(k.sigma >= 0) ||
                !std::isfinite(k.sigma)) {
              return absl::InvalidArgumentError(absl::StrFormat(
                  "truncated_normal needs finite mean and sigma >= 0, got "
                  "mean=%g sigma=%g",
                  k.mean, k.sigma));
            }
            if (k.sigma == 0) return CheckSupport(k.mean, k.mean, *this);
            const CdfWindow w = TruncationWindow(k, bound);
            if (!(w.hi - w.lo > 1e-12)) {
              return absl::InvalidArgumentError(absl::StrFormat(
                  "truncated_normal(%g, %g) has no mass in [0, %g]", k.mean,
                  k.sigma, bound.m()));
            }
            return absl::OkStatus();
          },
          [&](const Empirical& k) -> absl::Status {
            if (k.values == nullptr || k.values->empty()) {
              return absl::InvalidArgumentError(
                  absl::StrFormat("empirical population '%s' is empty", k.path));
            }
            return absl::OkStatus();
          },
      },
      kind);
}

double PopulationSpec::NominalMean() const {
  const double base = std::visit(
      Overloaded{
          [](const PointMass& k) { return k.value; },
          [](const TwoPoint& k) { return k.low + k.p_high * (k.high - k.low); },
          [](const UniformRange& k) { return 0.5 * (k.low + k.high); },
          [&](const TruncatedNormal& k) {
            if (k.sigma == 0) return k.mean;
            const double a = (0 - k.mean) / k.sigma;
            const double b = (bound.m() - k.mean) / k.sigma;
            const CdfWindow w = TruncationWindow(k, bound);
            return k.mean +
                   k.sigma * (NormalDensity(a) - NormalDensity(b)) / (w.hi - w.lo);
          },
          [](const Empirical& k) {
            if (k.values == nullptr || k.values->empty()) return 0.0;
            double sum = 0;
            for (double v : *k.values) sum += v;
            return sum / static_cast<double>(k.values->size());
          },
      },
      kind);
  return base + shift;
}

absl::StatusOr<Empirical> LoadEmpirical(const std::string& path,
                                        DomainBound bound) {
  absl::StatusOr<std::vector<double>> values = ReadCountersFile(path);
  if (!values.ok()) return values.status();
  if (values->empty()) {
    return absl::DataLossError(absl::StrFormat("'%s' has no values", path));
  }
  for (double v : *values) {
    if (absl::Status s = CheckCounter(v, bound); !s.ok()) {
      return absl::DataLossError(absl::StrFormat("%s: %s", path, s.message()));
    }
  }
  return Empirical{
      path, std::make_shared<const std::vector<double>>(*std::move(values))};
}

absl::StatusOr<DrawnSample> DrawSample(const PopulationSpec& spec,
                                       std::int64_t n, RandomSource& rng) {
  if (n < 2) {
    return absl::InvalidArgumentError(
        absl::StrFormat("sample size must be at least 2, got %d", n));
  }
  if (absl::Status s = spec.Validate(); !s.ok()) return s;

  DrawnSample out;
  out.values.resize(static_cast<std::size_t>(n));
  const double m = spec.bound.m();
  const double shift = spec.shift;
  auto store = [&](std::size_t i, double base) {
    double v = base + shift;
    if (v < 0 || v > m) {
      ++out.clamp_events;
      v = std::clamp(v, 0.0, m);
    }
    out.values[i] = v;
  };

  std::visit(
      Overloaded{
          [&](const PointMass& k) {
            for (std::size_t i = 0; i < out.values.size(); ++i) store(i, k.value);
          },
          [&](const TwoPoint& k) {
            for (std::size_t i = 0; i < out.values.size(); ++i) {
              store(i, rng.NextUniform() < k.p_high ? k.high : k.low);
            }
          },
          [&](const UniformRange& k) {
            const double width = k.high - k.low;
            for (std::size_t i = 0; i < out.values.size(); ++i) {
              store(i, k.low + width * rng.NextUniform());
            }
          },
          [&](const TruncatedNormal& k) {
            if (k.sigma == 0) {
              for (std::size_t i = 0; i < out.values.size(); ++i) {
                rng.NextUniform();
                store(i, k.mean);
              }
              return;
            }
            const CdfWindow w = TruncationWindow(k, spec.bound);
            for (std::size_t i = 0; i < out.values.size(); ++i) {
              const double p = w.lo + (w.hi - w.lo) * rng.NextUniform();
              double x = p <= 0 ? 0 : m;
              if (p > 0 && p < 1) x = k.mean + k.sigma * *NormalQuantile(p);
              // Quantile rounding can step a hair past the window.
              store(i, std::clamp(x, 0.0, m));
            }
          },
          [&](const Empirical& k) {
            const std::vector<double>& pool = *k.values;
            const double size = static_cast<double>(pool.size());
            for (std::size_t i = 0; i < out.values.size(); ++i) {
              auto index = static_cast<std::size_t>(rng.NextUniform() * size);
              store(i, pool[std::min(index, pool.size() - 1)]);
            }
          },
      },
      spec.kind);
  return out;
}

}  // namespace ldp_ab
