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

#include "ldp_ab/experiment.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <initializer_list>
#include <thread>

#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "json.hpp"
#include "ldp_ab/numerics.h"
#include "ldp_ab/random.h"

namespace ldp_ab {

namespace {

using Json = nlohmann::json;

int ResolveThreads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("LDP_AB_THREADS"); env != nullptr) {
    int value = 0;
    if (absl::SimpleAtoi(env, &value) && value > 0) return value;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

absl::StatusOr<TestResult> RunTest(const ExperimentPlan& plan,
                                   std::span<const double> a,
                                   std::span<const double> b,
                                   RandomSource& rng) {
  const DomainBound bound = plan.control.bound;
  const Hypothesis& h = plan.hypothesis;
  if (plan.method == TestMethod::kWelch) return WelchT(a, b, h);

  if (plan.method == TestMethod::kEstimation) {
    absl::StatusOr<BudgetSplit> split =
        plan.epsilon2.has_value()
            ? BudgetSplit::Create(plan.epsilon, *plan.epsilon2)
            : BudgetSplit::Even(plan.epsilon);
    if (!split.ok()) return split.status();
    return EstTest(a, b, *split, bound, h, rng);
  }

  absl::StatusOr<PrivacyBudget> budget = PrivacyBudget::Create(plan.epsilon);
  if (!budget.ok()) return budget.status();
  switch (plan.method) {
    case TestMethod::kBinary:
      return BinTest(a, b, *budget, bound, h, rng,
                     {.normal_approximation = plan.normal_approximation});
    case TestMethod::kMcDiarmid:
      return McDiarmidTest(a, b, *budget, bound, h, rng);
    case TestMethod::kHybrid: {
      std::vector<bool> a_flags(a.size());
      std::vector<bool> b_flags(b.size());
      for (std::size_t i = 0; i < a_flags.size(); ++i) {
        a_flags[i] = rng.NextUniform() < plan.ldp_fraction;
      }
      for (std::size_t i = 0; i < b_flags.size(); ++i) {
        b_flags[i] = rng.NextUniform() < plan.ldp_fraction;
      }
      return MixTest(a, a_flags, b, b_flags, *budget, bound, h, rng);
    }
    default:
      return absl::InternalError("unhandled method");
  }
}

}  // namespace

absl::Status ExperimentPlan::Validate() const {
  if (absl::Status s = control.Validate(); !s.ok()) {
    return absl::InvalidArgumentError(absl::StrCat("control: ", s.message()));
  }
  if (absl::Status s = treatment.Validate(); !s.ok()) {
    return absl::InvalidArgumentError(absl::StrCat("treatment: ", s.message()));
  }
  if (control.bound.m() != treatment.bound.m()) {
    return absl::InvalidArgumentError(
        "control and treatment must share the domain bound m");
  }
  if (absl::Status s = hypothesis.Validate(); !s.ok()) return s;
  if (method != TestMethod::kWelch) {
    if (absl::Status s = PrivacyBudget::Create(epsilon).status(); !s.ok()) {
      return s;
    }
  }
  if (method == TestMethod::kEstimation && epsilon2.has_value()) {
    if (absl::Status s = PrivacyBudget::Create(*epsilon2).status(); !s.ok()) {
      return s;
    }
  }
  if (method == TestMethod::kHybrid &&
      !(ldp_fraction >= 0 && ldp_fraction <= 1)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "ldp_fraction must lie in [0, 1], got %g", ldp_fraction));
  }
  if (method == TestMethod::kMcDiarmid &&
      hypothesis.tail == Tail::kTwoSided) {
    return absl::UnimplementedError(
        "the mcdiarmid test is one-sided; use tail greater or less");
  }
  if (n_grid.empty()) {
    return absl::InvalidArgumentError("n_grid must not be empty");
  }
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    if (n_grid[i] < 2) {
      return absl::InvalidArgumentError(
          absl::StrFormat("n_grid entries must be >= 2, got %d", n_grid[i]));
    }
    if (i > 0 && n_grid[i] <= n_grid[i - 1]) {
      return absl::InvalidArgumentError("n_grid must be strictly increasing");
    }
  }
  if (trials < 1) {
    return absl::InvalidArgumentError(
        absl::StrFormat("trials must be >= 1, got %d", trials));
  }
  if (threads < 0) {
    return absl::InvalidArgumentError("threads must be >= 0");
  }
  return absl::OkStatus();
}

double ExperimentPlan::Theta() const {
  return treatment.NominalMean() - control.NominalMean();
}

std::optional<double> ExperimentPlan::TotalEpsilon() const {
  switch (method) {
    case TestMethod::kWelch:
      return std::nullopt;
    case TestMethod::kEstimation:
      return epsilon2.has_value() ? epsilon + *epsilon2 : epsilon;
    default:
      return epsilon;
  }
}

double ExperimentPlan::LdpShare() const {
  switch (method) {
    case TestMethod::kWelch:
      return 0;
    case TestMethod::kHybrid:
      return ldp_fraction;
    default:
      return 1;
  }
}

Interval WilsonInterval(std::int64_t successes, std::int64_t total,
                        double confidence) {
  if (total <= 0) return {0, 1};
  const double z = *NormalQuantile(0.5 + confidence / 2);
  const double n = static_cast<double>(total);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1 + z2 / n;
  const double center = (p + z2 / (2 * n)) / denom;
  const double half =
      z / denom * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n));
  // The exact interval always contains p; rounding must not break that.
  return {std::clamp(std::min(center - half, p), 0.0, 1.0),
          std::clamp(std::max(center + half, p), 0.0, 1.0)};
}

absl::StatusOr<TrialOutcome> RunSingleTrial(const ExperimentPlan& plan,
                                            std::size_t n_index,
                                            std::int64_t trial_index) {
  if (n_index >= plan.n_grid.size()) {
    return absl::InvalidArgumentError("n_index is outside the grid");
  }
  const auto start = std::chrono::steady_clock::now();
  CounterRandomSource rng(DeriveSeed(plan.seed, n_index,
                                     static_cast<std::uint64_t>(trial_index)));
  const std::int64_t n = plan.n_grid[n_index];

  absl::StatusOr<DrawnSample> a = DrawSample(plan.treatment, n, rng);
  if (!a.ok()) return a.status();
  absl::StatusOr<DrawnSample> b = DrawSample(plan.control, n, rng);
  if (!b.ok()) return b.status();
  absl::StatusOr<TestResult> result = RunTest(plan, a->values, b->values, rng);
  if (!result.ok()) return result.status();

  TrialOutcome outcome;
  outcome.reject = result->reject;
  outcome.clamp_events = a->clamp_events + b->clamp_events;
  if (plan.record_timing) {
    outcome.runtime_ms = std::chrono::duration<double, std::milli>(
                             std::chrono::steady_clock::now() - start)
                             .count();
  }
  return outcome;
}

absl::StatusOr<std::vector<TrialSummary>> RunExperiment(
    const ExperimentPlan& plan) {
  if (absl::Status s = plan.Validate(); !s.ok()) return s;
  const std::size_t grid = plan.n_grid.size();
  const auto trials = static_cast<std::size_t>(plan.trials);
  const std::size_t total = grid * trials;

  std::vector<absl::StatusOr<TrialOutcome>> outcomes(
      total, absl::UnknownError("not run"));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t task = next.fetch_add(1); task < total;
         task = next.fetch_add(1)) {
      outcomes[task] = RunSingleTrial(plan, task / trials,
                                      static_cast<std::int64_t>(task % trials));
    }
  };
  const int threads =
      static_cast<int>(std::min<std::size_t>(ResolveThreads(plan.threads), total));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }

  std::vector<TrialSummary> summaries;
  summaries.reserve(grid);
  for (std::size_t g = 0; g < grid; ++g) {
    TrialSummary summary;
    summary.n = plan.n_grid[g];
    double runtime = 0;
    for (std::size_t t = 0; t < trials; ++t) {
      const absl::StatusOr<TrialOutcome>& outcome = outcomes[g * trials + t];
      if (!outcome.ok()) {
        if (outcome.status().code() != absl::StatusCode::kFailedPrecondition) {
          return outcome.status();
        }
        if (summary.failures++ == 0) {
          summary.first_failure = std::string(outcome.status().message());
        }
        continue;
      }
      ++summary.completed;
      if (outcome->reject) ++summary.rejections;
      summary.clamp_events += outcome->clamp_events;
      runtime += outcome->runtime_ms;
    }
    if (summary.completed > 0) {
      summary.rejection_rate = static_cast<double>(summary.rejections) /
                               static_cast<double>(summary.completed);
      summary.mean_runtime_ms =
          runtime / static_cast<double>(summary.completed);
    }
    const Interval ci = WilsonInterval(summary.rejections, summary.completed);
    summary.ci_lo = ci.lo;
    summary.ci_hi = ci.hi;
    summaries.push_back(std::move(summary));
  }
  return summaries;
}

std::optional<std::int64_t> PowerCurve(
    const std::vector<TrialSummary>& summaries, double target) {
  for (const TrialSummary& s : summaries) {
    if (s.rejection_rate >= target) return s.n;
  }
  return std::nullopt;
}

absl::StatusOr<std::optional<std::int64_t>> PowerCurve(
    const ExperimentPlan& plan, double target) {
  absl::StatusOr<std::vector<TrialSummary>> summaries = RunExperiment(plan);
  if (!summaries.ok()) return summaries.status();
  return PowerCurve(*summaries, target);
}

// JSON plans ---------------------------------------------------------------

namespace {

absl::Status CheckKeys(const Json& j, std::initializer_list<const char*> known,
                       absl::string_view what) {
  for (const auto& item : j.items()) {
    if (std::none_of(known.begin(), known.end(),
                     [&](const char* k) { return item.key() == k; })) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "unknown %s key '%s'", std::string(what), item.key()));
    }
  }
  return absl::OkStatus();
}

absl::StatusOr<PopulationSpec> ParsePopulation(const Json& j, DomainBound bound,
                                               const std::string& base_dir) {
  if (!j.is_object()) {
    return absl::InvalidArgumentError("a population must be a JSON object");
  }
  if (absl::Status s = CheckKeys(j, {"kind", "shift", "value", "p", "low",
                                     "high", "mean", "sigma", "file"},
                                 "population");
      !s.ok()) {
    return s;
  }
  PopulationSpec spec{PointMass{}, bound, j.value("shift", 0.0)};
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "point_mass") {
    spec.kind = PointMass{j.at("value").get<double>()};
  } else if (kind == "two_point") {
    spec.kind = TwoPoint{j.at("p").get<double>(), j.at("low").get<double>(),
                         j.at("high").get<double>()};
  } else if (kind == "uniform") {
    spec.kind = UniformRange{j.at("low").get<double>(),
                             j.at("high").get<double>()};
  } else if (kind == "truncated_normal") {
    spec.kind = TruncatedNormal{j.at("mean").get<double>(),
                                j.at("sigma").get<double>()};
  } else if (kind == "empirical") {
    std::filesystem::path path = j.at("file").get<std::string>();
    if (path.is_relative() && !base_dir.empty()) path = base_dir / path;
    absl::StatusOr<Empirical> empirical = LoadEmpirical(path.string(), bound);
    if (!empirical.ok()) return empirical.status();
    spec.kind = *std::move(empirical);
  } else {
    return absl::InvalidArgumentError(
        absl::StrFormat("unknown population kind '%s'", kind));
  }
  return spec;
}

Json PopulationToJson(const PopulationSpec& spec) {
  Json j = std::visit(
      [](const auto& k) -> Json {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, PointMass>) {
          return {{"kind", "point_mass"}, {"value", k.value}};
        } else if constexpr (std::is_same_v<K, TwoPoint>) {
          return {{"kind", "two_point"},
                  {"p", k.p_high},
                  {"low", k.low},
                  {"high", k.high}};
        } else if constexpr (std::is_same_v<K, UniformRange>) {
          return {{"kind", "uniform"}, {"low", k.low}, {"high", k.high}};
        } else if constexpr (std::is_same_v<K, TruncatedNormal>) {
          return {{"kind", "truncated_normal"},
                  {"mean", k.mean},
                  {"sigma", k.sigma}};
        } else {
          return {{"kind", "empirical"}, {"file", k.path}};
        }
      },
      spec.kind);
  if (spec.shift != 0) j["shift"] = spec.shift;
  return j;
}

absl::StatusOr<ExperimentPlan> ParsePlan(const Json& j,
                                         const std::string& base_dir) {
  if (!j.is_object()) {
    return absl::InvalidArgumentError("a plan must be a JSON object");
  }
  if (absl::Status s = CheckKeys(
          j, {"label", "m", "control", "treatment", "method", "epsilon",
              "epsilon2", "ldp_fraction", "d0", "tail", "alpha",
              "normal_approximation", "n_grid", "trials", "seed", "threads",
              "record_timing"},
          "plan");
      !s.ok()) {
    return s;
  }
  absl::StatusOr<DomainBound> bound = DomainBound::Create(j.at("m").get<double>());
  if (!bound.ok()) return bound.status();

  ExperimentPlan plan;
  plan.label = j.value("label", std::string());
  absl::StatusOr<PopulationSpec> control =
      ParsePopulation(j.at("control"), *bound, base_dir);
  if (!control.ok()) return control.status();
  plan.control = *std::move(control);
  absl::StatusOr<PopulationSpec> treatment =
      j.contains("treatment")
          ? ParsePopulation(j.at("treatment"), *bound, base_dir)
          : plan.control;
  if (!treatment.ok()) return treatment.status();
  plan.treatment = *std::move(treatment);

  absl::StatusOr<TestMethod> method =
      ParseMethod(j.value("method", std::string("bin")));
  if (!method.ok()) return method.status();
  plan.method = *method;
  plan.epsilon = j.value("epsilon", 1.0);
  if (j.contains("epsilon2")) plan.epsilon2 = j.at("epsilon2").get<double>();
  plan.ldp_fraction = j.value("ldp_fraction", 0.5);

  absl::StatusOr<Tail> tail = ParseTail(j.value("tail", std::string("two_sided")));
  if (!tail.ok()) return tail.status();
  plan.hypothesis = {j.value("d0", 0.0), *tail, j.value("alpha", 0.05)};
  plan.normal_approximation = j.value("normal_approximation", false);

  plan.n_grid = j.at("n_grid").get<std::vector<std::int64_t>>();
  plan.trials = j.value("trials", std::int64_t{1000});
  plan.seed = j.value("seed", std::uint64_t{0});
  plan.threads = j.value("threads", 0);
  plan.record_timing = j.value("record_timing", false);
  if (absl::Status s = plan.Validate(); !s.ok()) return s;
  return plan;
}

Json PlanToJson(const ExperimentPlan& plan) {
  Json j;
  if (!plan.label.empty()) j["label"] = plan.label;
  j["m"] = plan.control.bound.m();
  j["control"] = PopulationToJson(plan.control);
  j["treatment"] = PopulationToJson(plan.treatment);
  j["method"] = std::string(MethodName(plan.method));
  if (plan.method != TestMethod::kWelch) j["epsilon"] = plan.epsilon;
  if (plan.epsilon2.has_value()) j["epsilon2"] = *plan.epsilon2;
  if (plan.method == TestMethod::kHybrid) j["ldp_fraction"] = plan.ldp_fraction;
  j["d0"] = plan.hypothesis.d0;
  j["tail"] = std::string(TailName(plan.hypothesis.tail));
  j["alpha"] = plan.hypothesis.alpha;
  if (plan.normal_approximation) j["normal_approximation"] = true;
  j["n_grid"] = plan.n_grid;
  j["trials"] = plan.trials;
  j["seed"] = plan.seed;
  if (plan.threads != 0) j["threads"] = plan.threads;
  if (plan.record_timing) j["record_timing"] = true;
  return j;
}

}  // namespace

absl::StatusOr<std::vector<ExperimentPlan>> ParsePlans(
    std::string_view text, const std::string& base_dir) {
  std::vector<ExperimentPlan> plans;
  try {
    const Json root = Json::parse(text);
    const Json list = root.is_array() ? root : Json::array({root});
    if (list.empty()) return absl::InvalidArgumentError("no plans given");
    for (std::size_t i = 0; i < list.size(); ++i) {
      absl::StatusOr<ExperimentPlan> plan = ParsePlan(list[i], base_dir);
      if (!plan.ok()) {
        return absl::Status(plan.status().code(),
                            absl::StrFormat("plan %d: %s", i,
                                            plan.status().message()));
      }
      plans.push_back(*std::move(plan));
    }
  } catch (const Json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrCat("malformed plan JSON: ", e.what()));
  }
  return plans;
}

std::string PlansToJson(const std::vector<ExperimentPlan>& plans) {
  Json list = Json::array();
  for (const ExperimentPlan& plan : plans) list.push_back(PlanToJson(plan));
  return list.dump(2) + "\n";
}

absl::StatusOr<std::vector<ExperimentPlan>> FigurePlans(int figure) {
  constexpr double kM = 15000;
  const DomainBound bound = *DomainBound::Create(kM);
  const PopulationSpec base{TruncatedNormal{0.2 * kM, 0.1 * kM}, bound, 0};

  auto make = [&](std::string label, TestMethod method, double epsilon) {
    ExperimentPlan plan;
    plan.label = std::move(label);
    plan.control = base;
    plan.treatment = base;
    plan.method = method;
    plan.epsilon = epsilon;
    plan.trials = 1000;
    plan.seed = 20240101;
    return plan;
  };

  std::vector<ExperimentPlan> plans;
  switch (figure) {
    case 1: {
      const std::vector<std::int64_t> grid = {500, 1000, 2000, 5000, 10000};
      plans.push_back(make("welch", TestMethod::kWelch, 1));
      ExperimentPlan est = make("est eps=2.5+2.5", TestMethod::kEstimation, 2.5);
      est.epsilon2 = 2.5;
      plans.push_back(est);
      for (double eps : {0.5, 1.0, 3.0}) {
        plans.push_back(
            make(absl::StrFormat("bin eps=%g", eps), TestMethod::kBinary, eps));
      }
      ExperimentPlan mix = make("mix r=0.5", TestMethod::kHybrid, 1);
      mix.ldp_fraction = 0.5;
      plans.push_back(mix);
      for (ExperimentPlan& p : plans) p.n_grid = grid;
      break;
    }
    case 2:
    case 3: {
      const std::vector<std::int64_t> grid = {1000,   5000,   20000, 50000,
                                              100000, 300000, 1000000};
      if (figure == 2) {
        for (double theta : {60.0, 120.0, 300.0, 600.0}) {
          ExperimentPlan p = make(absl::StrFormat("bin theta=%g", theta),
                                  TestMethod::kBinary, 1);
          p.treatment.shift = theta;
          plans.push_back(p);
        }
      } else {
        for (double r : {0.0, 0.01, 0.5, 1.0}) {
          ExperimentPlan p = make(absl::StrFormat("mix r=%g", r),
                                  TestMethod::kHybrid, 1);
          p.treatment.shift = 60;
          p.ldp_fraction = r;
          plans.push_back(p);
        }
      }
      for (ExperimentPlan& p : plans) {
        p.n_grid = grid;
        p.hypothesis.tail = Tail::kGreater;
      }
      break;
    }
    default:
      return absl::InvalidArgumentError(
          absl::StrFormat("figure must be 1, 2 or 3, got %d", figure));
  }
  return plans;
}

std::string ResultsCsvHeader() {
  return "n,method,epsilon,theta,r,rejection_rate,ci_lo,ci_hi,failures\n";
}

std::string ResultsCsvRows(const ExperimentPlan& plan,
                           const std::vector<TrialSummary>& summaries) {
  const std::optional<double> epsilon = plan.TotalEpsilon();
  const std::string eps_field =
      epsilon.has_value() ? absl::StrFormat("%.10g", *epsilon) : "";
  std::string out;
  for (const TrialSummary& s : summaries) {
    absl::StrAppendFormat(&out, "%d,%s,%s,%.10g,%.10g,%.10g,%.10g,%.10g,%d\n",
                          s.n, std::string(MethodName(plan.method)), eps_field, plan.Theta(),
                          plan.LdpShare(), s.rejection_rate, s.ci_lo, s.ci_hi,
                          s.failures);
  }
  return out;
}

}  // namespace ldp_ab
