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

#include <cmath>
#include <fstream>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "ldp_ab/random.h"
#include "test_util.h"

namespace ldp_ab {
namespace {

DomainBound Bound(double m) { return *DomainBound::Create(m); }

double Mean(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

std::string WriteTemp(const std::string& name, const std::string& contents) {
  const std::string path = ::testing::TempDir() + name;
  std::ofstream(path) << contents;
  return path;
}

TEST(DrawSampleTest, PointMassRepeatsTheValue) {
  CounterRandomSource rng(71);
  ASSERT_OK_AND_ASSIGN(DrawnSample s,
                       DrawSample({PointMass{7}, Bound(10), 0}, 5, rng));
  EXPECT_EQ(s.values, std::vector<double>(5, 7.0));
  EXPECT_EQ(s.clamp_events, 0);
  EXPECT_EQ(rng.position(), 0u);
}

TEST(DrawSampleTest, TwoPointMean) {
  const double m = 50;
  const int n = 100000;
  CounterRandomSource rng(72);
  ASSERT_OK_AND_ASSIGN(DrawnSample s,
                       DrawSample({TwoPoint{0.5, 0, m}, Bound(m), 0}, n, rng));
  for (double x : s.values) ASSERT_TRUE(x == 0 || x == m);
  EXPECT_NEAR(Mean(s.values), m / 2, 3 * (m / 2) / std::sqrt(n));
}

TEST(DrawSampleTest, UniformStaysInRange) {
  CounterRandomSource rng(73);
  ASSERT_OK_AND_ASSIGN(
      DrawnSample s, DrawSample({UniformRange{2, 6}, Bound(10), 1}, 50000, rng));
  for (double x : s.values) {
    ASSERT_GE(x, 3);
    ASSERT_LE(x, 7);
  }
  EXPECT_NEAR(Mean(s.values), 5, 3 * std::sqrt(16.0 / 12 / 50000));
  EXPECT_EQ(rng.position(), 50000u);
}

TEST(DrawSampleTest, DegenerateTruncatedNormalIsAPointMass) {
  CounterRandomSource rng(74);
  const PopulationSpec spec{TruncatedNormal{4, 0}, Bound(10), 0};
  ASSERT_OK_AND_ASSIGN(DrawnSample s, DrawSample(spec, 20, rng));
  EXPECT_EQ(s.values, std::vector<double>(20, 4.0));
  EXPECT_EQ(spec.NominalMean(), 4);
}

TEST(DrawSampleTest, TruncatedNormalMatchesNominalMean) {
  const double m = 15000;
  const PopulationSpec spec{TruncatedNormal{3000, 1500}, Bound(m), 0};
  // Truncation at 0 lifts the mean above 3000.
  EXPECT_GT(spec.NominalMean(), 3000);
  CounterRandomSource rng(75);
  ASSERT_OK_AND_ASSIGN(DrawnSample s, DrawSample(spec, 100000, rng));
  for (double x : s.values) {
    ASSERT_GE(x, 0);
    ASSERT_LE(x, m);
  }
  EXPECT_NEAR(Mean(s.values), spec.NominalMean(), 3 * 1500 / std::sqrt(1e5));
}

TEST(DrawSampleTest, ShiftedDrawsAreClampedAndCounted) {
  const double m = 10;
  CounterRandomSource rng(76);
  ASSERT_OK_AND_ASSIGN(
      DrawnSample s,
      DrawSample({TruncatedNormal{9, 2}, Bound(m), 3}, 10000, rng));
  std::int64_t at_top = 0;
  for (double x : s.values) {
    ASSERT_LE(x, m);
    ASSERT_GE(x, 3);
    at_top += x == m;
  }
  EXPECT_GT(s.clamp_events, 0);
  EXPECT_EQ(s.clamp_events, at_top);
}

TEST(DrawSampleTest, SameSeedSameSample) {
  const PopulationSpec spec{TruncatedNormal{30, 20}, Bound(100), 0};
  CounterRandomSource a(77);
  CounterRandomSource b(77);
  EXPECT_EQ(DrawSample(spec, 1000, a)->values, DrawSample(spec, 1000, b)->values);
}

TEST(PopulationSpecTest, Validation) {
  const DomainBound m = Bound(10);
  EXPECT_FALSE((PopulationSpec{PointMass{11}, m, 0}).Validate().ok());
  EXPECT_FALSE((PopulationSpec{PointMass{8}, m, 3}).Validate().ok());
  EXPECT_FALSE((PopulationSpec{TwoPoint{1.5, 0, 10}, m, 0}).Validate().ok());
  EXPECT_FALSE((PopulationSpec{UniformRange{-1, 5}, m, 0}).Validate().ok());
  EXPECT_FALSE((PopulationSpec{UniformRange{6, 5}, m, 0}).Validate().ok());
  EXPECT_FALSE((PopulationSpec{TruncatedNormal{5, -1}, m, 0}).Validate().ok());
  EXPECT_FALSE((PopulationSpec{TruncatedNormal{500, 1}, m, 0}).Validate().ok());
  EXPECT_FALSE((PopulationSpec{Empirical{"x", nullptr}, m, 0}).Validate().ok());
  EXPECT_FALSE((PopulationSpec{PointMass{1}, m, NAN}).Validate().ok());
  EXPECT_OK((PopulationSpec{TwoPoint{0.2, 10, 0}, m, 0}).Validate());
  CounterRandomSource rng(1);
  EXPECT_FALSE(DrawSample({PointMass{1}, m, 0}, 1, rng).ok());
}

TEST(PopulationSpecTest, NominalMeans) {
  const DomainBound m = Bound(10);
  EXPECT_EQ((PopulationSpec{PointMass{3}, m, 1}).NominalMean(), 4);
  EXPECT_EQ((PopulationSpec{TwoPoint{0.25, 2, 6}, m, 0}).NominalMean(), 3);
  EXPECT_EQ((PopulationSpec{UniformRange{2, 6}, m, 0}).NominalMean(), 4);
}

TEST(LoadEmpiricalTest, LoadsAndResamples) {
  const std::string path = WriteTemp("counters.csv", "value\n1\n2\n3\n");
  ASSERT_OK_AND_ASSIGN(Empirical e, LoadEmpirical(path, Bound(5)));
  ASSERT_EQ(e.values->size(), 3u);
  const PopulationSpec spec{e, Bound(5), 0};
  EXPECT_EQ(spec.NominalMean(), 2);
  CounterRandomSource rng(78);
  ASSERT_OK_AND_ASSIGN(DrawnSample s, DrawSample(spec, 30000, rng));
  int counts[4] = {0, 0, 0, 0};
  for (double x : s.values) counts[static_cast<int>(x)] += 1;
  for (int v = 1; v <= 3; ++v) EXPECT_NEAR(counts[v], 10000, 400) << v;
}

TEST(LoadEmpiricalTest, Errors) {
  EXPECT_EQ(LoadEmpirical(::testing::TempDir() + "missing.csv", Bound(5))
                .status()
                .code(),
            absl::StatusCode::kNotFound);
  EXPECT_EQ(LoadEmpirical(WriteTemp("high.csv", "1\n9\n"), Bound(5))
                .status()
                .code(),
            absl::StatusCode::kDataLoss);
  EXPECT_EQ(LoadEmpirical(WriteTemp("empty.csv", "value\n"), Bound(5))
                .status()
                .code(),
            absl::StatusCode::kDataLoss);
}

}  // namespace
}  // namespace ldp_ab
