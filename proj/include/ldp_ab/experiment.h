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

#ifndef LDP_AB_EXPERIMENT_H_
#define LDP_AB_EXPERIMENT_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "ldp_ab/mean_tests.h"
#include "ldp_ab/population.h"

// Monte Carlo engine: repeated draw-and-test trials aggregated into
// empirical rejection rates.
namespace ldp_ab {

struct ExperimentPlan {
  std::string label;
  // Group B of every test.
  PopulationSpec control;
  // Group A of every test, so a positive treatment shift is a positive
  // mu_A - mu_B.
  PopulationSpec treatment;

  TestMethod method = TestMethod::kBinary;
  // Budget of the 1-bit reports. For kEstimation it is the first bit's
  // budget; the second bit uses `epsilon2`, or both use epsilon / 2 when
  // `epsilon2` is absent. Ignored by kWelch.
  double epsilon = 1;
  std::optional<double> epsilon2;
  // kHybrid only: probability that a user requires LDP.
  double ldp_fraction = 0.5;
  Hypothesis hypothesis;
  bool normal_approximation = false;

  std::vector<std::int64_t> n_grid;  // per-group sizes, strictly increasing
  std::int64_t trials = 1000;
  std::uint64_t seed = 0;
  // Worker threads. 0 reads LDP_AB_THREADS, and falls back to the hardware
  // concurrency when that is unset or 0.
  int threads = 0;
  // Wall-clock timing makes summaries differ between runs, so it is opt-in.
  bool record_timing = false;

  absl::Status Validate() const;

  // Nominal treatment mean minus nominal control mean.
  double Theta() const;
  // Total privacy budget a user spends, or nullopt for kWelch.
  std::optional<double> TotalEpsilon() const;
  // Share of users sending privatized reports: 0 for kWelch, ldp_fraction
  // for kHybrid, 1 otherwise.
  double LdpShare() const;
};

struct TrialSummary {
  std::int64_t n = 0;
  double rejection_rate = 0;
  // Wilson score interval at 95%.
  double ci_lo = 0;
  double ci_hi = 1;
  double mean_runtime_ms = 0;
  std::int64_t rejections = 0;
  std::int64_t completed = 0;
  // Trials whose test reported degenerate data. They are excluded from the
  // rate's denominator.
  std::int64_t failures = 0;
  std::int64_t clamp_events = 0;
  std::string first_failure;

  friend bool operator==(const TrialSummary&, const TrialSummary&) = default;
};

struct Interval {
  double lo = 0;
  double hi = 1;
};

// Wilson score interval for `successes` out of `total` at two-sided level
// `confidence`. total = 0 gives [0, 1].
Interval WilsonInterval(std::int64_t successes, std::int64_t total,
                        double confidence = 0.95);

struct TrialOutcome {
  bool reject = false;
  std::int64_t clamp_events = 0;
  double runtime_ms = 0;
};

// One trial at grid position `n_index`. Its random stream is derived from
// (seed, n_index, trial_index) alone. Returns kFailedPrecondition for
// degenerate samples.
absl::StatusOr<TrialOutcome> RunSingleTrial(const ExperimentPlan& plan,
                                            std::size_t n_index,
                                            std::int64_t trial_index);

// One summary per grid entry. Bit-identical for a given plan regardless of
// thread count (unless record_timing is set).
absl::StatusOr<std::vector<TrialSummary>> RunExperiment(
    const ExperimentPlan& plan);

// Smallest n whose rejection rate reaches `target`; nullopt if none does.
std::optional<std::int64_t> PowerCurve(
    const std::vector<TrialSummary>& summaries, double target);
absl::StatusOr<std::optional<std::int64_t>> PowerCurve(
    const ExperimentPlan& plan, double target);

// Plans as JSON (see schema/plan.schema.json). `text` holds one plan object
// or an array of them; empirical population files are resolved against
// `base_dir` when relative.
absl::StatusOr<std::vector<ExperimentPlan>> ParsePlans(
    std::string_view text, const std::string& base_dir = "");
std::string PlansToJson(const std::vector<ExperimentPlan>& plans);

// Preset experiment suites, m = 15000:
//   1: type-I error of every method on identical populations;
//   2: power of the binary test for theta in {60, 120, 300, 600};
//   3: power of the hybrid test for LDP fractions {0, 0.01, 0.5, 1}.
absl::StatusOr<std::vector<ExperimentPlan>> FigurePlans(int figure);

// Columns: n,method,epsilon,theta,r,rejection_rate,ci_lo,ci_hi,failures.
std::string ResultsCsvHeader();
std::string ResultsCsvRows(const ExperimentPlan& plan,
                           const std::vector<TrialSummary>& summaries);

}  // namespace ldp_ab

#endif  // LDP_AB_EXPERIMENT_H_
