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

#include "cli.h"

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <utility>

#include "CLI11.hpp"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "json.hpp"
#include "ldp_ab/csv_io.h"
#include "ldp_ab/estimators.h"
#include "ldp_ab/experiment.h"
#include "ldp_ab/mean_tests.h"
#include "ldp_ab/mechanism.h"
#include "ldp_ab/power.h"
#include "ldp_ab/random.h"

namespace ldp_ab::cli {

namespace {

using Json = nlohmann::ordered_json;

enum class Format { kJson, kCsv };

struct GlobalOptions {
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::optional<std::string> format;
  bool verbose = false;
  std::ostream* err = nullptr;

  Format FormatOr(Format fallback) const {
    if (!format.has_value()) return fallback;
    return *format == "csv" ? Format::kCsv : Format::kJson;
  }
};

// A conditional flag requirement CLI11 cannot express.
struct UsageProblem {
  std::string message;
};

using CommandResult = std::variant<absl::StatusOr<std::string>, UsageProblem>;

Json OptionalJson(const std::optional<double>& value) {
  return value.has_value() ? Json(*value) : Json(nullptr);
}

std::string CsvField(const Json& value) {
  if (value.is_null()) return "";
  if (value.is_string()) return value.get<std::string>();
  return value.dump();
}

// A flat record rendered as one JSON object or a header plus one CSV row.
std::string Render(const Json& record, Format format) {
  if (format == Format::kJson) return record.dump(2) + "\n";
  std::string header;
  std::string row;
  for (const auto& [key, value] : record.items()) {
    if (!header.empty()) {
      header += ",";
      row += ",";
    }
    header += key;
    row += CsvField(value);
  }
  return header + "\n" + row + "\n";
}

absl::StatusOr<std::vector<double>> ReadCounterInput(const std::string& path,
                                                     std::istream& in) {
  if (path.empty() || path == "-") return ReadCounters(in);
  return ReadCountersFile(path);
}

// randomize -----------------------------------------------------------------

struct RandomizeArgs {
  double epsilon = 0;
  double m = 0;
  std::string input;
};

absl::StatusOr<std::string> RunRandomize(const RandomizeArgs& args,
                                         const GlobalOptions& global,
                                         std::istream& in) {
  absl::StatusOr<PrivacyBudget> budget = PrivacyBudget::Create(args.epsilon);
  if (!budget.ok()) return budget.status();
  absl::StatusOr<DomainBound> bound = DomainBound::Create(args.m);
  if (!bound.ok()) return bound.status();
  absl::StatusOr<std::vector<double>> counters =
      ReadCounterInput(args.input, in);
  if (!counters.ok()) return counters.status();

  CounterRandomSource rng(global.seed);
  absl::StatusOr<std::vector<LdpBit>> bits =
      OneBitMechanism(*budget, *bound).RandomizeAll(*counters, rng);
  if (!bits.ok()) return bits.status();

  if (global.FormatOr(Format::kCsv) == Format::kJson) {
    Json j;
    j["epsilon"] = args.epsilon;
    j["m"] = args.m;
    j["seed"] = global.seed;
    j["bits"] = *bits;
    return j.dump(2) + "\n";
  }
  std::string out;
  out.reserve(bits->size() * 2);
  for (LdpBit b : *bits) {
    out += static_cast<char>('0' + b);
    out += '\n';
  }
  return out;
}

// estimate ------------------------------------------------------------------

struct EstimateArgs {
  double epsilon1 = 0;
  double epsilon2 = 0;
  double m = 0;
  std::string input;
};

absl::StatusOr<std::string> RunEstimate(const EstimateArgs& args,
                                        const GlobalOptions& global,
                                        std::istream& in) {
  absl::StatusOr<BudgetSplit> split =
      BudgetSplit::Create(args.epsilon1, args.epsilon2);
  if (!split.ok()) return split.status();
  absl::StatusOr<DomainBound> bound = DomainBound::Create(args.m);
  if (!bound.ok()) return bound.status();
  absl::StatusOr<std::vector<double>> counters =
      ReadCounterInput(args.input, in);
  if (!counters.ok()) return counters.status();

  CounterRandomSource rng(global.seed);
  std::vector<LdpBit> first(counters->size());
  std::vector<LdpBit> second(counters->size());
  for (std::size_t i = 0; i < counters->size(); ++i) {
    absl::StatusOr<TwoBitReport> report =
        CollectTwoBit((*counters)[i], *split, *bound, rng);
    if (!report.ok()) return report.status();
    first[i] = report->first;
    second[i] = report->second;
  }
  absl::StatusOr<double> mean = EstimateMean(first, split->first, *bound);
  if (!mean.ok()) return mean.status();
  absl::StatusOr<double> variance =
      EstimateVariance(first, second, *split, *bound);
  if (!variance.ok()) return variance.status();

  Json j;
  j["n"] = counters->size();
  j["epsilon1"] = args.epsilon1;
  j["epsilon2"] = args.epsilon2;
  j["m"] = args.m;
  j["mean"] = *mean;
  j["variance"] = *variance;
  j["mean_clamped"] = ClampEstimatedMean(*mean, *bound);
  j["variance_clamped"] = ClampEstimatedVariance(*variance, *bound);
  return Render(j, global.FormatOr(Format::kJson));
}

// test ----------------------------------------------------------------------

struct TestArgs {
  std::string method;
  std::optional<double> epsilon;
  std::optional<double> epsilon2;
  double m = 0;
  double d0 = 0;
  double alpha = 0.05;
  std::string tail = "two_sided";
  std::string group_a;
  std::string group_b;
  std::string flags_a;
  std::string flags_b;
  bool normal_approximation = false;
};

CommandResult RunTestCommand(const TestArgs& args, const GlobalOptions& global) {
  absl::StatusOr<TestMethod> method = ParseMethod(args.method);
  if (!method.ok()) return method.status();
  if (*method != TestMethod::kWelch && !args.epsilon.has_value()) {
    return UsageProblem{absl::StrCat("--epsilon is required for method ",
                                     args.method)};
  }
  if (*method == TestMethod::kHybrid &&
      (args.flags_a.empty() || args.flags_b.empty())) {
    return UsageProblem{
        "--ldp-flags-a and --ldp-flags-b are required for method mix"};
  }
  absl::StatusOr<DomainBound> bound = DomainBound::Create(args.m);
  if (!bound.ok()) return bound.status();
  absl::StatusOr<Tail> tail = ParseTail(args.tail);
  if (!tail.ok()) return tail.status();
  const Hypothesis h{args.d0, *tail, args.alpha};
  if (absl::Status s = h.Validate(); !s.ok()) return s;
  std::optional<PrivacyBudget> budget;
  if (args.epsilon.has_value()) {
    absl::StatusOr<PrivacyBudget> b = PrivacyBudget::Create(*args.epsilon);
    if (!b.ok()) return b.status();
    budget = *b;
  }

  absl::StatusOr<std::vector<double>> a = ReadCountersFile(args.group_a);
  if (!a.ok()) return a.status();
  absl::StatusOr<std::vector<double>> b = ReadCountersFile(args.group_b);
  if (!b.ok()) return b.status();

  CounterRandomSource rng(global.seed);
  absl::StatusOr<TestResult> result;
  switch (*method) {
    case TestMethod::kWelch:
      result = WelchT(*a, *b, h);
      break;
    case TestMethod::kEstimation: {
      absl::StatusOr<BudgetSplit> split =
          args.epsilon2.has_value()
              ? BudgetSplit::Create(*args.epsilon, *args.epsilon2)
              : BudgetSplit::Even(*args.epsilon);
      if (!split.ok()) return split.status();
      result = EstTest(*a, *b, *split, *bound, h, rng);
      break;
    }
    case TestMethod::kBinary:
      result = BinTest(*a, *b, *budget, *bound, h, rng,
                       {.normal_approximation = args.normal_approximation});
      break;
    case TestMethod::kMcDiarmid:
      result = McDiarmidTest(*a, *b, *budget, *bound, h, rng);
      break;
    case TestMethod::kHybrid: {
      absl::StatusOr<std::vector<bool>> fa = ReadFlagsFile(args.flags_a);
      if (!fa.ok()) return fa.status();
      absl::StatusOr<std::vector<bool>> fb = ReadFlagsFile(args.flags_b);
      if (!fb.ok()) return fb.status();
      result = MixTest(*a, *fa, *b, *fb, *budget, *bound, h, rng);
      break;
    }
  }
  if (!result.ok()) return result.status();

  Json j;
  j["method"] = std::string(MethodName(result->method));
  j["n_a"] = a->size();
  j["n_b"] = b->size();
  j["statistic"] = result->statistic;
  j["df"] = OptionalJson(result->df);
  j["p_value"] = result->p_value;
  j["reject"] = result->reject;
  j["alpha"] = h.alpha;
  j["tail"] = std::string(TailName(h.tail));
  j["d0"] = h.d0;
  j["transformed_null"] = OptionalJson(result->transformed_null);
  j["threshold"] = OptionalJson(result->threshold);
  return absl::StatusOr<std::string>(
      Render(j, global.FormatOr(Format::kJson)));
}

// power ---------------------------------------------------------------------

struct PowerArgs {
  double theta = 0;
  double epsilon = 0;
  double m = 0;
  double alpha = 0.05;
  std::optional<double> beta;
  std::optional<std::int64_t> n_a;
  std::optional<std::int64_t> n_b;
  std::optional<double> sigma_hat;
  std::string tail = "greater";
};

CommandResult RunPower(const PowerArgs& args, const GlobalOptions& global) {
  if (args.n_a.has_value() != args.n_b.has_value()) {
    return UsageProblem{"--nA and --nB must be given together"};
  }
  if (!args.beta.has_value() && !args.n_a.has_value()) {
    return UsageProblem{"give --beta for a sample size, --nA/--nB for power "
                        "bounds, or both"};
  }
  if (args.sigma_hat.has_value() && !args.n_a.has_value()) {
    return UsageProblem{"--sigma-hat needs --nA and --nB"};
  }
  absl::StatusOr<Tail> tail = ParseTail(args.tail);
  if (!tail.ok()) return tail.status();
  absl::StatusOr<PrivacyBudget> budget = PrivacyBudget::Create(args.epsilon);
  if (!budget.ok()) return budget.status();
  absl::StatusOr<DomainBound> bound = DomainBound::Create(args.m);
  if (!bound.ok()) return bound.status();
  absl::StatusOr<EffectSpec> effect =
      EffectSpec::Create(args.theta, *budget, *bound);
  if (!effect.ok()) return effect.status();
  if (*tail == Tail::kTwoSided) {
    *global.err << "warning: power bounds and sample sizes assume a one-sided "
                   "test; a two-sided test at the same alpha has less power\n";
  }

  Json j;
  j["theta"] = args.theta;
  j["epsilon"] = args.epsilon;
  j["m"] = args.m;
  j["alpha"] = args.alpha;
  j["p_theta"] = effect->p_theta();
  if (args.beta.has_value()) {
    absl::StatusOr<double> raw =
        SampleSizeUnrounded(*effect, args.alpha, *args.beta);
    if (!raw.ok()) return raw.status();
    absl::StatusOr<std::int64_t> n = SampleSize(*effect, args.alpha, *args.beta);
    if (!n.ok()) return n.status();
    j["beta"] = *args.beta;
    j["n"] = *n;
    j["n_unrounded"] = *raw;
  }
  if (args.n_a.has_value()) {
    absl::StatusOr<PowerReport> report = PowerBounds(
        *effect, *args.n_a, *args.n_b, args.alpha, args.sigma_hat);
    if (!report.ok()) return report.status();
    j["n_a"] = *args.n_a;
    j["n_b"] = *args.n_b;
    j["bound_mcdiarmid"] = OptionalJson(report->bound_mcdiarmid);
    j["bound_normal_samplevar"] = OptionalJson(report->bound_normal_samplevar);
    j["bound_normal_sizes"] = report->bound_normal_sizes;
    j["best"] = report->best;
  }
  return absl::StatusOr<std::string>(
      Render(j, global.FormatOr(Format::kJson)));
}

// simulate ------------------------------------------------------------------

struct SimulateArgs {
  std::string plan;
  std::optional<int> figure;
  std::string out;
  std::optional<std::int64_t> trials;
  std::optional<int> threads;
  std::optional<double> power_target;
  bool print_plan = false;
};

CommandResult RunSimulate(const SimulateArgs& args, const GlobalOptions& global) {
  if (args.plan.empty() == !args.figure.has_value()) {
    return UsageProblem{"give exactly one of --plan or --figure"};
  }
  absl::StatusOr<std::vector<ExperimentPlan>> plans;
  if (args.figure.has_value()) {
    plans = FigurePlans(*args.figure);
  } else {
    std::ifstream file(args.plan);
    if (!file) {
      return absl::StatusOr<std::string>(
          absl::NotFoundError(absl::StrFormat("cannot open '%s'", args.plan)));
    }
    std::stringstream text;
    text << file.rdbuf();
    plans = ParsePlans(
        text.str(), std::filesystem::path(args.plan).parent_path().string());
  }
  if (!plans.ok()) return plans.status();
  for (ExperimentPlan& plan : *plans) {
    if (args.trials.has_value()) plan.trials = *args.trials;
    if (args.threads.has_value()) plan.threads = *args.threads;
    if (global.seed_given) plan.seed = global.seed;
    if (absl::Status s = plan.Validate(); !s.ok()) return s;
  }

  std::string output;
  if (args.print_plan) {
    output = PlansToJson(*plans);
  } else {
    const Format format = global.FormatOr(Format::kCsv);
    std::string csv = ResultsCsvHeader();
    Json runs = Json::array();
    for (const ExperimentPlan& plan : *plans) {
      absl::StatusOr<std::vector<TrialSummary>> summaries =
          RunExperiment(plan);
      if (!summaries.ok()) return summaries.status();
      std::int64_t failures = 0;
      for (const TrialSummary& s : *summaries) failures += s.failures;
      if (failures > 0) {
        *global.err << absl::StrFormat(
            "warning: %s: %d trials failed on degenerate samples\n",
            plan.label, failures);
      }
      if (global.verbose) {
        *global.err << absl::StrFormat("done: %s (%d grid points)\n",
                                       plan.label, summaries->size());
      }
      csv += ResultsCsvRows(plan, *summaries);

      Json run;
      run["label"] = plan.label;
      run["method"] = std::string(MethodName(plan.method));
      run["epsilon"] = OptionalJson(plan.TotalEpsilon());
      run["theta"] = plan.Theta();
      run["r"] = plan.LdpShare();
      run["alpha"] = plan.hypothesis.alpha;
      run["tail"] = std::string(TailName(plan.hypothesis.tail));
      run["trials"] = plan.trials;
      run["seed"] = plan.seed;
      if (args.power_target.has_value()) {
        std::optional<std::int64_t> n = PowerCurve(*summaries,
                                                   *args.power_target);
        run["power_target"] = *args.power_target;
        run["n_at_target"] = n.has_value() ? Json(*n) : Json(nullptr);
      }
      Json rows = Json::array();
      for (const TrialSummary& s : *summaries) {
        Json row;
        row["n"] = s.n;
        row["rejection_rate"] = s.rejection_rate;
        row["ci_lo"] = s.ci_lo;
        row["ci_hi"] = s.ci_hi;
        row["rejections"] = s.rejections;
        row["completed"] = s.completed;
        row["failures"] = s.failures;
        row["clamp_events"] = s.clamp_events;
        row["mean_runtime_ms"] = s.mean_runtime_ms;
        rows.push_back(row);
      }
      run["summaries"] = rows;
      runs.push_back(run);
    }
    output = format == Format::kCsv ? csv : runs.dump(2) + "\n";
  }

  if (!args.out.empty()) {
    if (absl::Status s = WriteFileAtomically(args.out, output); !s.ok()) {
      return absl::StatusOr<std::string>(s);
    }
    return absl::StatusOr<std::string>(std::string());
  }
  return absl::StatusOr<std::string>(output);
}

}  // namespace

ExitCode ExitCodeFor(const absl::Status& status) {
  switch (status.code()) {
    case absl::StatusCode::kOk:
      return kExitOk;
    case absl::StatusCode::kNotFound:
    case absl::StatusCode::kDataLoss:
    case absl::StatusCode::kUnavailable:
    case absl::StatusCode::kPermissionDenied:
      return kExitIo;
    default:
      return kExitDomain;
  }
}

int ParseAndDispatch(const std::vector<std::string>& args, std::istream& in,
                     std::ostream& out, std::ostream& err) {
  CLI::App app{"Two-sample mean tests under local differential privacy",
               "ldp_ab"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions global;
  global.err = &err;
  app.add_option("--seed", global.seed, "Seed for every randomized step");
  app.add_option("--format", global.format, "Output format")
      ->check(CLI::IsMember({"json", "csv"}));
  app.add_flag("-v,--verbose", global.verbose, "Progress on stderr");

  RandomizeArgs randomize;
  CLI::App* randomize_cmd =
      app.add_subcommand("randomize", "Privatize counters to one bit each");
  randomize_cmd->add_option("--epsilon", randomize.epsilon, "Privacy budget")
      ->required();
  randomize_cmd->add_option("--m", randomize.m, "Domain upper bound")
      ->required();
  randomize_cmd->add_option("--input", randomize.input,
                            "Counter file, one per line (default stdin)");

  EstimateArgs estimate;
  CLI::App* estimate_cmd = app.add_subcommand(
      "estimate", "Estimate mean and variance from two-bit reports");
  estimate_cmd->add_option("--epsilon1", estimate.epsilon1,
                           "Budget of the mean bit")
      ->required();
  estimate_cmd->add_option("--epsilon2", estimate.epsilon2,
                           "Budget of the squared-value bit")
      ->required();
  estimate_cmd->add_option("--m", estimate.m, "Domain upper bound")->required();
  estimate_cmd->add_option("--input", estimate.input,
                           "Counter file (default stdin)");

  TestArgs test;
  CLI::App* test_cmd =
      app.add_subcommand("test", "Compare the means of two groups");
  test_cmd->add_option("--method", test.method)
      ->required()
      ->check(CLI::IsMember({"welch", "est", "bin", "mcdiarmid", "mix"}));
  test_cmd->add_option("--epsilon", test.epsilon,
                       "Budget per user (est: first bit, or total without "
                       "--epsilon2)");
  test_cmd->add_option("--epsilon2", test.epsilon2, "est: second-bit budget");
  test_cmd->add_option("--m", test.m, "Domain upper bound")->required();
  test_cmd->add_option("--d0", test.d0, "Null difference mu_A - mu_B");
  test_cmd->add_option("--alpha", test.alpha, "Significance level (default 0.05)");
  test_cmd->add_option("--tail", test.tail, "two_sided, greater or less");
  test_cmd->add_option("--group-a", test.group_a, "Counter file of group A")
      ->required();
  test_cmd->add_option("--group-b", test.group_b, "Counter file of group B")
      ->required();
  test_cmd->add_option("--ldp-flags-a", test.flags_a, "mix: 0/1 per user");
  test_cmd->add_option("--ldp-flags-b", test.flags_b, "mix: 0/1 per user");
  test_cmd->add_flag("--normal-approximation", test.normal_approximation,
                     "bin: normal instead of Student t p-values");

  PowerArgs power;
  CLI::App* power_cmd = app.add_subcommand(
      "power", "Power bounds and sample sizes for the binary test");
  power_cmd->add_option("--theta", power.theta, "True mean gap minus d0")
      ->required();
  power_cmd->add_option("--epsilon", power.epsilon, "Privacy budget")->required();
  power_cmd->add_option("--m", power.m, "Domain upper bound")->required();
  power_cmd->add_option("--alpha", power.alpha, "Significance level (default 0.05)");
  power_cmd->add_option("--beta", power.beta, "Target type-II error");
  power_cmd->add_option("--nA", power.n_a, "Group A size");
  power_cmd->add_option("--nB", power.n_b, "Group B size");
  power_cmd->add_option("--sigma-hat", power.sigma_hat,
                        "Measured standard error of the rate difference");
  power_cmd->add_option("--tail", power.tail,
                        "Tail of the planned test (bounds are one-sided)");

  SimulateArgs simulate;
  CLI::App* simulate_cmd =
      app.add_subcommand("simulate", "Monte Carlo rejection rates");
  simulate_cmd->add_option("--plan", simulate.plan, "Plan JSON file");
  simulate_cmd->add_option("--figure", simulate.figure, "Preset 1, 2 or 3")
      ->check(CLI::Range(1, 3));
  simulate_cmd->add_option("--out", simulate.out, "Write results here");
  simulate_cmd->add_option("--trials", simulate.trials, "Override trials");
  simulate_cmd->add_option("--threads", simulate.threads,
                           "Override worker threads (0 = auto)");
  simulate_cmd->add_option("--power-target", simulate.power_target,
                           "json: report the smallest n reaching this rate");
  simulate_cmd->add_flag("--print-plan", simulate.print_plan,
                         "Print the plans as JSON instead of running them");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }
  global.seed_given = app.count("--seed") > 0;

  CommandResult result = absl::StatusOr<std::string>(std::string());
  CLI::App* used = nullptr;
  if (randomize_cmd->parsed()) {
    used = randomize_cmd;
    result = RunRandomize(randomize, global, in);
  } else if (estimate_cmd->parsed()) {
    used = estimate_cmd;
    result = RunEstimate(estimate, global, in);
  } else if (test_cmd->parsed()) {
    used = test_cmd;
    result = RunTestCommand(test, global);
  } else if (power_cmd->parsed()) {
    used = power_cmd;
    result = RunPower(power, global);
  } else {
    used = simulate_cmd;
    result = RunSimulate(simulate, global);
  }

  if (const auto* usage = std::get_if<UsageProblem>(&result)) {
    err << "error: " << usage->message << "\n\n" << used->help();
    return kExitUsage;
  }
  const auto& output = std::get<absl::StatusOr<std::string>>(result);
  if (!output.ok()) {
    err << "error: " << output.status().message() << "\n";
    return ExitCodeFor(output.status());
  }
  out << *output;
  out.flush();
  return kExitOk;
}

}  // namespace ldp_ab::cli
