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

#ifndef LDP_AB_POPULATION_H_
#define LDP_AB_POPULATION_H_

#include <cstdint>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "ldp_ab/mechanism.h"
#include "ldp_ab/random.h"

// Synthetic counter populations for Monte Carlo experiments.
namespace ldp_ab {

struct PointMass {
  double value = 0;
};

// `high` with probability p_high, `low` otherwise.
struct TwoPoint {
  double p_high = 0.5;
  double low = 0;
  double high = 1;
};

struct UniformRange {
  double low = 0;
  double high = 1;
};

// N(mean, sigma^2) conditioned on [0, m]. sigma = 0 is a point mass at
// mean.
struct TruncatedNormal {
  double mean = 0;
  double sigma = 1;
};

// Resampling with replacement from counters loaded from a file.
struct Empirical {
  std::string path;
  std::shared_ptr<const std::vector<double>> values;
};

using PopulationKind =
    std::variant<PointMass, TwoPoint, UniformRange, TruncatedNormal,
                 Empirical>;

struct PopulationSpec {
  PopulationKind kind;
  DomainBound bound;
  // Added to every draw; the result is clamped into [0, m]. Treatment arms
  // use it to inject a known mean gap.
  double shift = 0;

  absl::Status Validate() const;
  // Mean before clamping: base mean + shift.
  double NominalMean() const;
};

// Reads one counter per line (optional header "value") and returns an
// Empirical kind. Values outside [0, m] are an error.
absl::StatusOr<Empirical> LoadEmpirical(const std::string& path,
                                        DomainBound bound);

struct DrawnSample {
  std::vector<double> values;
  // Draws that landed outside [0, m] after shifting and were clamped.
  std::int64_t clamp_events = 0;
};

// n i.i.d. draws. Every kind except PointMass consumes one uniform per draw.
absl::StatusOr<DrawnSample> DrawSample(const PopulationSpec& spec,
                                       std::int64_t n, RandomSource& rng);

}  // namespace ldp_ab

#endif  // LDP_AB_POPULATION_H_
