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

#include "ldp_ab/mean_tests.h"

#include <cmath>
#include <vector>

#include "gtest/gtest.h"
#include "ldp_ab/population.h"
#include "ldp_ab/random.h"
#include "test_util.h"

namespace ldp_ab {
namespace {

using ::ldp_ab::testing::IntIn;
using ::ldp_ab::testing::UniformIn;

PrivacyBudget Eps(double e) { return *PrivacyBudget::Create(e); }
DomainBound Bound(double m) { return *DomainBound::Create(m); }

Hypothesis TwoSided(double d0 = 0, double alpha = 0.05) {
  return {d0, Tail::kTwoSided, alpha};
}

std::vector<double> RandomCounters(RandomSource& rng, int n, double m) {
  std::vector<double> v(n);
  for (double& x : v) x = UniformIn(rng, 0, m);
  return v;
}

TEST(NamesTest, RoundTrip) {
  for (Tail t : {Tail::kTwoSided, Tail::kGreater, Tail::kLess}) {
    EXPECT_EQ(*ParseTail(TailName(t)), t);
  }
  for (TestMethod m : {TestMethod::kWelch, TestMethod::kEstimation,
                       TestMethod::kBinary, TestMethod::kMcDiarmid,
                       TestMethod::kHybrid}) {
    EXPECT_EQ(*ParseMethod(MethodName(m)), m);
  }
  EXPECT_FALSE(ParseTail("sideways").ok());
  EXPECT_FALSE(ParseMethod("bayes").ok());
}

TEST(HypothesisTest, Validate) {
  EXPECT_OK(TwoSided().Validate());
  EXPECT_FALSE(TwoSided(0, 0).Validate().ok());
  EXPECT_FALSE(TwoSided(0, 1).Validate().ok());
  EXPECT_FALSE(TwoSided(NAN).Validate().ok());
}

TEST(WelchTTest, IdenticalSamplesAccept) {
  const std::vector<double> a = {1, 4, 2, 8, 5};
  ASSERT_OK_AND_ASSIGN(TestResult r, WelchT(a, a, TwoSided()));
  EXPECT_EQ(r.statistic, 0);
  EXPECT_EQ(r.p_value, 1);
  EXPECT_FALSE(r.reject);
}

TEST(WelchTTest, ShiftedSequences) {
  const std::vector<double> a = {1, 2, 3, 4, 5};
  const std::vector<double> b = {2, 3, 4, 5, 6};
  ASSERT_OK_AND_ASSIGN(TestResult r, WelchT(a, b, TwoSided()));
  EXPECT_NEAR(r.statistic, -1.0, 1e-12);
  ASSERT_TRUE(r.df.has_value());
  EXPECT_NEAR(*r.df, 8.0, 1e-12);
  EXPECT_NEAR(r.p_value, 0.34659350708733416, 1e-12);
  EXPECT_FALSE(r.reject);
  EXPECT_EQ(r.method, TestMethod::kWelch);
}

TEST(WelchTTest, UnequalSizesMatchReference) {
  const std::vector<double> a = {3.1, 4.7, 2.2, 9.9, 5.5, 6.1};
  const std::vector<double> b = {1.0, 2.5, 2.0, 3.3};
  ASSERT_OK_AND_ASSIGN(TestResult r, WelchT(a, b, TwoSided()));
  EXPECT_NEAR(r.statistic, 2.5304160964552755, 1e-12);
  EXPECT_NEAR(*r.df, 6.676562802486458, 1e-10);
  EXPECT_NEAR(r.p_value, 0.04077609511906748, 1e-10);
  EXPECT_TRUE(r.reject);
  ASSERT_OK_AND_ASSIGN(
      TestResult greater, WelchT(a, b, {0, Tail::kGreater, 0.05}));
  EXPECT_NEAR(greater.p_value, 0.02038804755953374, 1e-10);
  ASSERT_OK_AND_ASSIGN(TestResult less, WelchT(a, b, {0, Tail::kLess, 0.05}));
  EXPECT_NEAR(less.p_value, 0.9796119524404663, 1e-10);
  EXPECT_FALSE(less.reject);
}

TEST(WelchTTest, NullAtObservedDifferenceGivesZero) {
  CounterRandomSource rng(41);
  for (int i = 0; i < 100; ++i) {
    std::vector<double> a = RandomCounters(rng, IntIn(rng, 2, 40), 100);
    std::vector<double> b = RandomCounters(rng, IntIn(rng, 2, 40), 100);
    const double d0 = ComputeMoments(a).mean - ComputeMoments(b).mean;
    ASSERT_OK_AND_ASSIGN(TestResult r, WelchT(a, b, TwoSided(d0)));
    EXPECT_NEAR(r.statistic, 0, 1e-9);
  }
}

TEST(WelchTTest, DegenerateAndTooSmall) {
  const std::vector<double> flat = {2, 2, 2};
  EXPECT_EQ(WelchT(flat, flat, TwoSided()).status().code(),
            absl::StatusCode::kFailedPrecondition);
  const std::vector<double> one = {1};
  EXPECT_EQ(WelchT(one, flat, TwoSided()).status().code(),
            absl::StatusCode::kInvalidArgument);
}

TEST(PValueTest, TwoSidedIsTwiceTheSmallerTail) {
  CounterRandomSource rng(42);
  for (int i = 0; i < 500; ++i) {
    const double t = UniformIn(rng, -6, 6);
    const std::optional<double> df =
        rng.NextUniform() < 0.5 ? std::optional<double>(UniformIn(rng, 1, 500))
                                : std::nullopt;
    const double g = PValue(t, df, Tail::kGreater);
    const double l = PValue(t, df, Tail::kLess);
    EXPECT_NEAR(g + l, 1, 1e-12);
    EXPECT_NEAR(PValue(t, df, Tail::kTwoSided), std::min(1.0, 2 * std::min(g, l)),
                1e-12);
  }
}

TEST(EstTestTest, RejectsInvalidBudgets) {
  EXPECT_FALSE(BudgetSplit::Create(0, 1).ok());
  EXPECT_FALSE(BudgetSplit::Create(1, -2).ok());
}

TEST(EstTestTest, RejectsOutOfDomainCounters) {
  ASSERT_OK_AND_ASSIGN(BudgetSplit split, BudgetSplit::Even(2));
  CounterRandomSource rng(1);
  const std::vector<double> a = {1, 2, 30};
  const std::vector<double> b = {1, 2, 3};
  EXPECT_EQ(EstTest(a, b, split, Bound(10), TwoSided(), rng).status().code(),
            absl::StatusCode::kInvalidArgument);
}

// With a huge budget, a point mass at 0 yields all-zero reports, so both
// groups decode to the same mean and the test accepts.
TEST(EstTestTest, IdenticalPointMassesAcceptWithLargeBudget) {
  ASSERT_OK_AND_ASSIGN(BudgetSplit split, BudgetSplit::Create(15, 15));
  const std::vector<double> zeros(1000, 0.0);
  CounterRandomSource rng(43);
  int accepted = 0;
  for (int trial = 0; trial < 100; ++trial) {
    ASSERT_OK_AND_ASSIGN(TestResult r,
                         EstTest(zeros, zeros, split, Bound(100), TwoSided(),
                                 rng));
    EXPECT_EQ(r.method, TestMethod::kEstimation);
    accepted += !r.reject;
  }
  EXPECT_GE(accepted, 95);
}

TEST(EstTestTest, OnReportsMatchesClientSide) {
  ASSERT_OK_AND_ASSIGN(BudgetSplit split, BudgetSplit::Create(1, 2));
  CounterRandomSource data(44);
  const std::vector<double> a = RandomCounters(data, 300, 50);
  const std::vector<double> b = RandomCounters(data, 200, 50);
  CounterRandomSource rng(45);
  ASSERT_OK_AND_ASSIGN(TestResult direct,
                       EstTest(a, b, split, Bound(50), TwoSided(), rng));
  CounterRandomSource replay(45);
  std::vector<TwoBitReport> ra;
  std::vector<TwoBitReport> rb;
  for (double x : a) ra.push_back(*CollectTwoBit(x, split, Bound(50), replay));
  for (double x : b) rb.push_back(*CollectTwoBit(x, split, Bound(50), replay));
  ASSERT_OK_AND_ASSIGN(TestResult server,
                       EstTestOnReports(ra, rb, split, Bound(50), TwoSided()));
  EXPECT_EQ(direct.statistic, server.statistic);
  EXPECT_EQ(direct.p_value, server.p_value);
}

TEST(TransformedNullTest, Examples) {
  EXPECT_EQ(TransformedNull(0, Eps(1), Bound(10)), 0);
  EXPECT_NEAR(TransformedNull(10, Eps(std::log(3.0)), Bound(10)), 0.5, 1e-15);
}

TEST(BinTestTest, ReportsTransformedNull) {
  CounterRandomSource rng(46);
  for (int i = 0; i < 100; ++i) {
    const double m = UniformIn(rng, 1, 1000);
    const double eps = UniformIn(rng, 0.1, 4);
    const double d0 = UniformIn(rng, -m, m);
    const std::vector<double> a = RandomCounters(rng, 50, m);
    const std::vector<double> b = RandomCounters(rng, 60, m);
    absl::StatusOr<TestResult> r =
        BinTest(a, b, Eps(eps), Bound(m), TwoSided(d0), rng);
    if (!r.ok()) {
      EXPECT_EQ(r.status().code(), absl::StatusCode::kFailedPrecondition);
      continue;
    }
    const double e = std::exp(eps);
    ASSERT_TRUE(r->transformed_null.has_value());
    EXPECT_NEAR(*r->transformed_null, d0 / m * (e - 1) / (e + 1), 1e-12);
    EXPECT_EQ(r->method, TestMethod::kBinary);
  }
}

TEST(BinTestTest, MatchesWelchOnTheBits) {
  CounterRandomSource rng(47);
  const std::vector<LdpBit> a = {1, 0, 0, 1, 1, 1, 0};
  const std::vector<LdpBit> b = {0, 0, 1, 0, 0};
  const Hypothesis h = {30, Tail::kGreater, 0.1};
  ASSERT_OK_AND_ASSIGN(TestResult r,
                       BinTestOnBits(a, b, Eps(1), Bound(100), h));
  const std::vector<double> ad(a.begin(), a.end());
  const std::vector<double> bd(b.begin(), b.end());
  ASSERT_OK_AND_ASSIGN(
      TestResult welch,
      WelchT(ad, bd, {TransformedNull(30, Eps(1), Bound(100)), Tail::kGreater,
                      0.1}));
  EXPECT_NEAR(r.statistic, welch.statistic, 1e-12);
  EXPECT_NEAR(*r.df, *welch.df, 1e-9);
  EXPECT_NEAR(r.p_value, welch.p_value, 1e-12);
}

TEST(BinTestTest, ConstantBitsAreDegenerate) {
  const std::vector<LdpBit> ones = {1, 1, 1};
  absl::StatusOr<TestResult> r =
      BinTestOnBits(ones, ones, Eps(1), Bound(1), TwoSided());
  EXPECT_EQ(r.status().code(), absl::StatusCode::kFailedPrecondition);
  EXPECT_NE(r.status().message().find("degenerate"), absl::string_view::npos);
}

TEST(BinTestTest, NormalApproximationChangesOnlyThePValue) {
  const std::vector<LdpBit> a = {1, 0, 1, 1, 0, 1, 1, 1};
  const std::vector<LdpBit> b = {0, 0, 1, 0, 0, 1};
  ASSERT_OK_AND_ASSIGN(TestResult t,
                       BinTestOnBits(a, b, Eps(1), Bound(1), TwoSided()));
  ASSERT_OK_AND_ASSIGN(
      TestResult z, BinTestOnBits(a, b, Eps(1), Bound(1), TwoSided(),
                                  {.normal_approximation = true}));
  EXPECT_EQ(t.statistic, z.statistic);
  EXPECT_LT(z.p_value, t.p_value);
}

// Two-point populations on {0, m} with equal means 0.4 m.
TEST(BinTestTest, TypeIErrorNearAlpha) {
  const double m = 100;
  const PopulationSpec pop{TwoPoint{0.4, 0, m}, Bound(m), 0};
  int rejections = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    CounterRandomSource rng(DeriveSeed(48, 0, trial));
    ASSERT_OK_AND_ASSIGN(DrawnSample a, DrawSample(pop, 2000, rng));
    ASSERT_OK_AND_ASSIGN(DrawnSample b, DrawSample(pop, 2000, rng));
    ASSERT_OK_AND_ASSIGN(TestResult r, BinTest(a.values, b.values, Eps(1),
                                               Bound(m), TwoSided(), rng));
    rejections += r.reject;
  }
  EXPECT_GE(rejections, 30);
  EXPECT_LE(rejections, 70);
}

TEST(McDiarmidTest, ThresholdArithmetic) {
  EXPECT_NEAR(McDiarmidThreshold(50, 50, std::exp(-1.0)), std::sqrt(0.02),
              1e-15);
}

TEST(McDiarmidTest, BoundaryIsInclusive) {
  // z = 1/2 - 0 = 0.5 and z0 = sqrt((1/4 + 1/4) * 0.5) = 0.5 exactly.
  const Hypothesis h{0, Tail::kGreater, std::exp(-0.5)};
  ASSERT_OK_AND_ASSIGN(TestResult r,
                       BinTestMcDiarmid({1, 2}, {0, 2}, Eps(1), Bound(1), h));
  EXPECT_EQ(r.statistic, 0.5);
  EXPECT_EQ(*r.threshold, 0.5);
  EXPECT_TRUE(r.reject);
  EXPECT_NEAR(r.p_value, h.alpha, 1e-15);
}

TEST(McDiarmidTest, LessTailMirrors) {
  const Hypothesis greater{0, Tail::kGreater, 0.05};
  const Hypothesis less{0, Tail::kLess, 0.05};
  ASSERT_OK_AND_ASSIGN(TestResult g, BinTestMcDiarmid({70, 100}, {40, 100},
                                                      Eps(1), Bound(1), greater));
  ASSERT_OK_AND_ASSIGN(TestResult l, BinTestMcDiarmid({40, 100}, {70, 100},
                                                      Eps(1), Bound(1), less));
  EXPECT_EQ(g.statistic, l.statistic);
  EXPECT_EQ(g.reject, l.reject);
  EXPECT_TRUE(g.reject);
}

TEST(McDiarmidTest, TwoSidedIsUnimplemented) {
  EXPECT_EQ(BinTestMcDiarmid({1, 2}, {1, 2}, Eps(1), Bound(1), TwoSided())
                .status()
                .code(),
            absl::StatusCode::kUnimplemented);
  EXPECT_FALSE(BinTestMcDiarmid({3, 2}, {1, 2}, Eps(1), Bound(1),
                                {0, Tail::kGreater, 0.05})
                   .ok());
}

TEST(McDiarmidTest, ConservativeUnderTheNull) {
  const double m = 15000;
  const PopulationSpec pop{TruncatedNormal{3000, 1500}, Bound(m), 0};
  const Hypothesis h{0, Tail::kGreater, 0.05};
  int rejections = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    CounterRandomSource rng(DeriveSeed(49, 0, trial));
    ASSERT_OK_AND_ASSIGN(DrawnSample a, DrawSample(pop, 5000, rng));
    ASSERT_OK_AND_ASSIGN(DrawnSample b, DrawSample(pop, 5000, rng));
    ASSERT_OK_AND_ASSIGN(
        TestResult r, McDiarmidTest(a.values, b.values, Eps(1), Bound(m), h, rng));
    rejections += r.reject;
  }
  EXPECT_LE(rejections, 70);
}

TEST(BinarySigmaHatTest, EqualsWelchStandardError) {
  const std::vector<LdpBit> a = {1, 0, 1, 1, 0};
  const std::vector<LdpBit> b = {0, 0, 1, 0};
  const SampleMoments ma = ComputeMoments(std::vector<double>(a.begin(), a.end()));
  const SampleMoments mb = ComputeMoments(std::vector<double>(b.begin(), b.end()));
  ASSERT_OK_AND_ASSIGN(double sigma,
                       BinarySigmaHat(BinarySampleSummary::FromBits(a),
                                      BinarySampleSummary::FromBits(b)));
  EXPECT_NEAR(sigma, std::sqrt(ma.variance / 5 + mb.variance / 4), 1e-15);
}

TEST(RescaleBitTest, Examples) {
  const double ln3 = std::log(3.0);
  const MixedValue zero = RescaleBit(0, Eps(ln3), Bound(6));
  const MixedValue one = RescaleBit(1, Eps(ln3), Bound(6));
  EXPECT_NEAR(zero.value, -3, 1e-12);
  EXPECT_NEAR(one.value, 9, 1e-12);
  EXPECT_EQ(one.provenance, Provenance::kRescaledBit);
  // x = 3 reports 1 with probability 1/2, so the rescaled mean is 3.
  const double p = *ResponseProbability(3, Eps(ln3), Bound(6));
  EXPECT_NEAR(p * one.value + (1 - p) * zero.value, 3, 1e-12);
}

TEST(RescaleBitTest, ExpectationEqualsCounter) {
  CounterRandomSource rng(50);
  for (int i = 0; i < 1000; ++i) {
    const double m = UniformIn(rng, 0.1, 1e5);
    const double eps = UniformIn(rng, 0.05, 6);
    const double x = UniformIn(rng, 0, m);
    const double p = *ResponseProbability(x, Eps(eps), Bound(m));
    const double mean = p * RescaleBit(1, Eps(eps), Bound(m)).value +
                        (1 - p) * RescaleBit(0, Eps(eps), Bound(m)).value;
    EXPECT_NEAR(mean, x, 1e-9 * m);
  }
}

TEST(MixTestTest, NoFlagsIsExactlyWelch) {
  CounterRandomSource rng(51);
  for (int i = 0; i < 100; ++i) {
    const double m = UniformIn(rng, 1, 1000);
    const std::vector<double> a = RandomCounters(rng, IntIn(rng, 2, 80), m);
    const std::vector<double> b = RandomCounters(rng, IntIn(rng, 2, 80), m);
    const Hypothesis h{UniformIn(rng, -m / 4, m / 4), Tail::kTwoSided, 0.05};
    ASSERT_OK_AND_ASSIGN(
        TestResult mix,
        MixTest(a, std::vector<bool>(a.size(), false), b,
                std::vector<bool>(b.size(), false), Eps(1), Bound(m), h, rng));
    ASSERT_OK_AND_ASSIGN(TestResult welch, WelchT(a, b, h));
    EXPECT_EQ(mix.statistic, welch.statistic);
    EXPECT_EQ(*mix.df, *welch.df);
    EXPECT_EQ(mix.p_value, welch.p_value);
    EXPECT_EQ(mix.reject, welch.reject);
    EXPECT_EQ(mix.method, TestMethod::kHybrid);
  }
}

TEST(MixTestTest, AllFlagsMatchesBinaryStatistic) {
  for (int seed = 0; seed < 100; ++seed) {
    CounterRandomSource data(DeriveSeed(52, 0, seed));
    const double m = UniformIn(data, 1, 1000);
    const double eps = UniformIn(data, 0.2, 3);
    const std::vector<double> a = RandomCounters(data, IntIn(data, 5, 200), m);
    const std::vector<double> b = RandomCounters(data, IntIn(data, 5, 200), m);
    const Hypothesis h = TwoSided();
    CounterRandomSource mix_rng(seed);
    absl::StatusOr<TestResult> mix =
        MixTest(a, std::vector<bool>(a.size(), true), b,
                std::vector<bool>(b.size(), true), Eps(eps), Bound(m), h,
                mix_rng);
    CounterRandomSource bin_rng(seed);
    absl::StatusOr<TestResult> bin =
        BinTest(a, b, Eps(eps), Bound(m), h, bin_rng);
    ASSERT_EQ(mix.ok(), bin.ok()) << seed;
    if (!mix.ok()) continue;
    EXPECT_NEAR(mix->statistic, bin->statistic,
                1e-9 * std::max(1.0, std::fabs(bin->statistic)))
        << seed;
  }
}

TEST(MixTestTest, UnflaggedUsersConsumeNoVariates) {
  const std::vector<double> a = {1, 2, 3, 4};
  const std::vector<double> b = {2, 3, 4};
  CounterRandomSource rng(53);
  ASSERT_OK(MixTest(a, {true, false, true, false}, b, {false, false, true},
                    Eps(1), Bound(10), TwoSided(), rng));
  EXPECT_EQ(rng.position(), 3u);
}

TEST(MixTestTest, RejectsMisalignedFlags) {
  const std::vector<double> a = {1, 2, 3};
  CounterRandomSource rng(1);
  EXPECT_EQ(MixTest(a, {true, false}, a, {true, true, true}, Eps(1),
                    Bound(10), TwoSided(), rng)
                .status()
                .code(),
            absl::StatusCode::kInvalidArgument);
}

TEST(MixTestTest, PerUserBudgets) {
  const std::vector<double> a = {1, 2, 3};
  const std::vector<bool> flags = {true, true, false};
  CounterRandomSource rng(54);
  ASSERT_OK_AND_ASSIGN(
      std::vector<MixedValue> mixed,
      MixSample(a, flags, Eps(1), Bound(10), rng, std::vector<double>{2, 0.5, 9}));
  const double e0 = std::exp(2.0);
  const double e1 = std::exp(0.5);
  EXPECT_TRUE(mixed[0].value == 10 * e0 / (e0 - 1) ||
              mixed[0].value == -10 / (e0 - 1));
  EXPECT_TRUE(mixed[1].value == 10 * e1 / (e1 - 1) ||
              mixed[1].value == -10 / (e1 - 1));
  EXPECT_EQ(mixed[2].value, 3);
  EXPECT_EQ(mixed[2].provenance, Provenance::kExact);

  EXPECT_FALSE(MixSample(a, flags, Eps(1), Bound(10), rng,
                         std::vector<double>{1, 1})
                   .ok());
  EXPECT_FALSE(MixSample(a, flags, Eps(1), Bound(10), rng,
                         std::vector<double>{1, -1, 1})
                   .ok());
}

}  // namespace
}  // namespace ldp_ab
