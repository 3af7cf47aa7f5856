//
// Copyright 2026 The curvmix Authors
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
//

#include "curvmix/workload.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "curvmix/errors.h"
#include "oracles.h"

namespace curvmix {
namespace {

using ::curvmix::testing::ExplicitCurvatureWorkload;

EigenSpectrum Spectrum(std::vector<double> values) {
  EigenSpectrum s;
  s.total_dim = static_cast<std::int64_t>(values.size());
  s.k_measured = s.total_dim;
  s.values = std::move(values);
  return s;
}

std::vector<double> RandomDescending(int p, std::uint64_t seed, double top) {
  // Log-uniform magnitudes in [1e-6, top].
  const Eigen::MatrixXd r = ::curvmix::testing::RandomSymmetric(p, seed);
  std::vector<double> mu;
  for (int i = 0; i < p; ++i) {
    const double u = 0.5 + 0.5 * std::tanh(r(i, 0));
    mu.push_back(top * std::pow(1e-6 / top, u));
  }
  std::sort(mu.rbegin(), mu.rend());
  return mu;
}

double RelFrobenius(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return (a - b).norm() / std::max(b.norm(), 1e-300);
}

TEST(CurvatureWorkloadTest, ZeroSpectrumGivesZeroMatrix) {
  const WorkloadMatrix g = CurvatureWorkload(Spectrum({0, 0, 0}), 0.3, 5);
  EXPECT_EQ(g.entries, Eigen::MatrixXd::Zero(5, 5));
  EXPECT_FALSE(g.divergent);
}

TEST(CurvatureWorkloadTest, SingleEigenvalueHandExpansion) {
  const WorkloadMatrix g = CurvatureWorkload(Spectrum({1.0}), 0.5, 2);
  Eigen::MatrixXd expected(2, 2);
  expected << 0.25, 0.5, 0.5, 1.0;
  EXPECT_LE((g.entries - expected).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_EQ(g.kind, WorkloadKind::kCurvature);
  EXPECT_EQ(g.eta, 0.5);
}

TEST(CurvatureWorkloadTest, SmallSpectrumMatchesExplicitProduct) {
  const WorkloadMatrix g = CurvatureWorkload(Spectrum({2, 1, 0.5}), 0.1, 4);
  EXPECT_LE(RelFrobenius(g.entries, ExplicitCurvatureWorkload({2, 1, 0.5}, 0.1, 4)),
            1e-12);
}

TEST(CurvatureWorkloadTest, MatchesExplicitProductAcrossSizes) {
  std::uint64_t seed = 0;
  for (int p : {1, 2, 9, 30, 50}) {
    for (int T : {1, 2, 5, 11, 16}) {
      const std::vector<double> mu = RandomDescending(p, ++seed, 3.0);
      const double eta = 0.6;
      const WorkloadMatrix g = CurvatureWorkload(Spectrum(mu), eta, T);
      EXPECT_LE(RelFrobenius(g.entries, ExplicitCurvatureWorkload(mu, eta, T)),
                1e-10)
          << "p=" << p << " T=" << T;
    }
  }
}

TEST(CurvatureWorkloadTest, PositiveSemidefinite) {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const std::vector<double> mu = RandomDescending(40, 50 + seed, 1.5);
    const WorkloadMatrix g = CurvatureWorkload(Spectrum(mu), 1.0, 64);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(g.entries);
    EXPECT_GE(eig.eigenvalues().minCoeff(), -1e-9 * g.entries.norm());
    EXPECT_EQ(g.entries, g.entries.transpose());
  }
}

TEST(CurvatureWorkloadTest, LinearInConcatenatedSpectra) {
  const std::vector<double> a = RandomDescending(12, 1, 2.0);
  const std::vector<double> b = RandomDescending(7, 2, 2.0);
  std::vector<double> joined = a;
  joined.insert(joined.end(), b.begin(), b.end());
  std::sort(joined.rbegin(), joined.rend());
  const double eta = 0.4;
  const Eigen::MatrixXd sum = CurvatureWorkload(Spectrum(a), eta, 10).entries +
                              CurvatureWorkload(Spectrum(b), eta, 10).entries;
  EXPECT_LE(RelFrobenius(CurvatureWorkload(Spectrum(joined), eta, 10).entries, sum),
            1e-13);
}

TEST(CurvatureWorkloadTest, SmallStepLimitApproachesTotalCurvature) {
  const std::vector<double> mu = {3.0, 1.0, 0.25};
  const WorkloadMatrix g = CurvatureWorkload(Spectrum(mu), 1e-9, 6);
  EXPECT_LE((g.entries.array() / 4.25 - 1.0).abs().maxCoeff(), 1e-7);
}

TEST(CurvatureWorkloadTest, DivergentRegimeIsFlaggedNotRejected) {
  const WorkloadMatrix g = CurvatureWorkload(Spectrum({4.0, 1.0}), 0.5, 3);
  EXPECT_TRUE(g.divergent);
  EXPECT_LE(RelFrobenius(g.entries, ExplicitCurvatureWorkload({4.0, 1.0}, 0.5, 3)),
            1e-12);
  EXPECT_FALSE(CurvatureWorkload(Spectrum({3.9, 1.0}), 0.5, 3).divergent);
}

TEST(CurvatureWorkloadTest, ArgumentErrors) {
  EXPECT_THROW(CurvatureWorkload(Spectrum({1.0}), 0.0, 3), ArgumentError);
  EXPECT_THROW(CurvatureWorkload(Spectrum({1.0}), -1.0, 3), ArgumentError);
  EXPECT_THROW(CurvatureWorkload(Spectrum({1.0}), 0.1, 0), ArgumentError);
  EXPECT_THROW(CurvatureWorkload(Spectrum({1.0, -0.5}), 0.1, 3), ArgumentError);
}

TEST(CurvatureWorkloadTest, BucketingStaysCloseToExactSum) {
  // A smooth power-law tail of 30000 eigenvalues.
  std::vector<double> mu;
  for (int i = 1; i <= 30000; ++i) mu.push_back(std::pow(i, -1.2));
  const double eta = 0.5;
  for (int T : {8, 64}) {
    const WorkloadMatrix bucketed = CurvatureWorkload(Spectrum(mu), eta, T, true);
    const WorkloadMatrix exact = CurvatureWorkload(Spectrum(mu), eta, T, false);
    EXPECT_LT(RelFrobenius(bucketed.entries, exact.entries), 1e-6) << "T=" << T;
  }
}

TEST(CurvatureWorkloadTest, BitStableAcrossRuns) {
  std::vector<double> mu;
  for (int i = 1; i <= 20000; ++i) mu.push_back(1.0 / i);
  const auto a = CurvatureWorkload(Spectrum(mu), 0.3, 16);
  const auto b = CurvatureWorkload(Spectrum(mu), 0.3, 16);
  EXPECT_EQ(a.entries, b.entries);
}

TEST(IdentityWorkloadTest, Examples) {
  EXPECT_EQ(IdentityWorkload(1).entries, Eigen::MatrixXd::Identity(1, 1));
  EXPECT_EQ(IdentityWorkload(3).entries, Eigen::MatrixXd::Identity(3, 3));
  EXPECT_EQ(IdentityWorkload(3).kind, WorkloadKind::kIdentity);
  EXPECT_THROW(IdentityWorkload(0), ArgumentError);
}

TEST(PrefixWorkloadTest, MatchesLowerOnesGram) {
  for (int T : {1, 2, 3, 10}) {
    const Eigen::MatrixXd a =
        Eigen::MatrixXd::Ones(T, T).triangularView<Eigen::Lower>();
    EXPECT_EQ(PrefixWorkload(T).entries, a.transpose() * a) << T;
  }
  Eigen::MatrixXd three(3, 3);
  three << 3, 2, 1, 2, 2, 1, 1, 1, 1;
  EXPECT_EQ(PrefixWorkload(3).entries, three);
  EXPECT_THROW(PrefixWorkload(0), ArgumentError);
}

TEST(WorkloadKindTest, RoundTripsNames) {
  for (auto kind : {WorkloadKind::kCurvature, WorkloadKind::kIdentity,
                    WorkloadKind::kPrefix}) {
    EXPECT_EQ(ParseWorkloadKind(ToString(kind)), kind);
  }
  EXPECT_THROW(ParseWorkloadKind("banana"), ArgumentError);
}

TEST(AddRidgeTest, ShiftsDiagonalByRelativeMeanTrace) {
  const WorkloadMatrix base = PrefixWorkload(4);  // trace 10
  const WorkloadMatrix ridged = AddRidge(base, 0.2);
  const Eigen::MatrixXd diff = ridged.entries - base.entries;
  EXPECT_TRUE(diff.isApprox(0.5 * Eigen::MatrixXd::Identity(4, 4), 1e-15));
  EXPECT_EQ(ridged.kind, WorkloadKind::kPrefix);
  EXPECT_EQ(AddRidge(base, 0.0).entries, base.entries);
  EXPECT_THROW(AddRidge(base, -1e-3), ArgumentError);
}

TEST(AddRidgeTest, MakesLowRankCurvatureWorkloadFullRank) {
  const std::vector<double> mu = {1.5, 0.4};
  EigenSpectrum s;
  s.values = mu;
  s.total_dim = 2;
  s.k_measured = 2;
  const WorkloadMatrix g = CurvatureWorkload(s, 0.5, 12);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> plain(g.entries);
  EXPECT_LE(plain.eigenvalues()(9), 1e-12 * plain.eigenvalues().maxCoeff());
  const WorkloadMatrix r = AddRidge(g, 1e-4);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ridged(r.entries);
  EXPECT_GE(ridged.eigenvalues().minCoeff(), 0.99e-4 * g.entries.trace() / 12);
}

}  // namespace
}  // namespace curvmix
