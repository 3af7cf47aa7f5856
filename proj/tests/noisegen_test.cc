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

#include "curvmix/noisegen.h"

#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "curvmix/errors.h"
#include "curvmix/rng.h"
#include "oracles.h"

namespace curvmix {
namespace {

using ::curvmix::testing::RandomFeasibleGram;

MixingMatrix TwoByTwo() {
  MixingMatrix c;
  c.entries.resize(2, 2);
  c.entries << 1.0, 0.0, 0.5, std::sqrt(0.75);
  c.band = 2;
  return c;
}

MixingMatrix RandomMixing(Eigen::Index T, Eigen::Index band, std::uint64_t seed) {
  return Factor(RandomFeasibleGram(T, band, seed));
}

// Stacks raw draws column-wise, replayed from the seed.
Eigen::MatrixXd RawDraws(std::uint64_t seed, Eigen::Index p, Eigen::Index T) {
  Eigen::MatrixXd z(p, T);
  for (Eigen::Index t = 0; t < T; ++t) z.col(t) = RawNoise(seed, t, p);
  return z;
}

Eigen::MatrixXd Drain(NoiseStream& stream) {
  Eigen::MatrixXd out(stream.dim(), stream.length());
  for (Eigen::Index t = 0; t < stream.length(); ++t) out.col(t) = stream.Next();
  return out;
}

TEST(NoiseStreamTest, IdentityMixingEmitsScaledRawDraws) {
  NoiseStream stream(MixingMatrix::Identity(5), 7, 3, 2.5);
  const Eigen::MatrixXd out = Drain(stream);
  EXPECT_EQ(out, 2.5 * RawDraws(3, 7, 5));
  EXPECT_EQ(stream.peak_history_size(), 0u);
}

TEST(NoiseStreamTest, TwoByTwoMatchesMaterializedSolve) {
  NoiseStream stream(TwoByTwo(), 6, 9);
  const Eigen::MatrixXd out = Drain(stream);
  const Eigen::MatrixXd z = RawDraws(9, 6, 2);
  // Oracle: Z C^{-T}, formed with a dense inverse.
  const Eigen::MatrixXd expected = z * TwoByTwo().entries.transpose().inverse();
  EXPECT_LE((out - expected).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_EQ(out.col(0), z.col(0));
  EXPECT_LE((out.col(1) - (z.col(1) - 0.5 * z.col(0)) / std::sqrt(0.75))
                .cwiseAbs().maxCoeff(), 1e-14);
}

TEST(NoiseStreamTest, ExactSolveResidualForRandomBandedFactors) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Eigen::Index T = 5 + static_cast<Eigen::Index>(seed) * 3;
    const Eigen::Index band = 1 + static_cast<Eigen::Index>(seed % 4);
    const MixingMatrix c = RandomMixing(T, band, seed);
    NoiseStream stream(c, 13, 100 + seed);
    const Eigen::MatrixXd mixed = Drain(stream);
    const Eigen::MatrixXd z = RawDraws(100 + seed, 13, T);
    EXPECT_LE((mixed * c.entries.transpose() - z).norm(), 1e-10 * z.norm());
  }
}

TEST(NoiseStreamTest, HistoryIsBoundedByBandMinusOne) {
  for (Eigen::Index band : {1, 2, 4, 7}) {
    NoiseStream stream(RandomMixing(60, band, 5), 3, 1);
    for (int t = 0; t < 60; ++t) {
      stream.Next();
      EXPECT_LE(stream.history_size(), static_cast<std::size_t>(band - 1));
    }
    EXPECT_EQ(stream.peak_history_size(), static_cast<std::size_t>(band - 1));
    EXPECT_EQ(stream.step(), 60);
  }
}

TEST(NoiseStreamTest, BandOneUnitDiagonalIsPlainNoise) {
  NoiseStream stream(MixingMatrix::Identity(4), 3, 12, 0.5);
  EXPECT_EQ(Drain(stream), 0.5 * RawDraws(12, 3, 4));
}

TEST(NoiseStreamTest, DeterministicForFixedInputs) {
  const MixingMatrix c = RandomMixing(20, 3, 8);
  NoiseStream a(c, 10, 77, 1.5), b(c, 10, 77, 1.5), other(c, 10, 78, 1.5);
  const Eigen::MatrixXd da = Drain(a);
  EXPECT_EQ(da, Drain(b));
  EXPECT_NE(da, Drain(other));
}

TEST(NoiseStreamTest, Errors) {
  NoiseStream stream(MixingMatrix::Identity(2), 3, 0);
  stream.Next();
  stream.Next();
  EXPECT_THROW(stream.Next(), EndOfStreamError);

  MixingMatrix bad = TwoByTwo();
  bad.entries(1, 1) = 0.0;
  NoiseStream broken(bad, 2, 0);
  EXPECT_NO_THROW(broken.Next());
  EXPECT_THROW(broken.Next(), NumericalError);
}

TEST(CrossCovarianceTest, IdentityMixingGivesIdentity) {
  const std::int64_t p = 50, trials = 2000;
  const Eigen::MatrixXd cov =
      EmpiricalCrossCovariance(MixingMatrix::Identity(4), p, trials, 3);
  EXPECT_LE((cov - Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff(),
            4.0 / std::sqrt(static_cast<double>(p * trials)));
}

// Entrywise check against a covariance target at 5 standard errors.
void ExpectCloseToCovariance(const Eigen::MatrixXd& estimate,
                             const Eigen::MatrixXd& target, double samples) {
  for (Eigen::Index s = 0; s < target.rows(); ++s) {
    for (Eigen::Index t = 0; t < target.cols(); ++t) {
      const double se = std::sqrt(
          (target(s, s) * target(t, t) + target(s, t) * target(s, t)) / samples);
      EXPECT_NEAR(estimate(s, t), target(s, t), 5.0 * se) << s << "," << t;
    }
  }
}

TEST(CrossCovarianceTest, TwoByTwoOffDiagonal) {
  const std::int64_t p = 20, trials = 20000;
  // The literal factor: covariance is the inverse of its own C^T C.
  const MixingMatrix literal = TwoByTwo();
  const Eigen::MatrixXd gram = literal.entries.transpose() * literal.entries;
  ExpectCloseToCovariance(EmpiricalCrossCovariance(literal, p, trials, 4),
                          gram.inverse(), static_cast<double>(p * trials));

  // The factor of X = [[1, 0.5], [0.5, 1]] gives X^{-1}, off-diagonal -2/3.
  BandedGram x = BandedGram::Identity(2, 2);
  x.entries(0, 1) = x.entries(1, 0) = 0.5;
  Eigen::MatrixXd inv(2, 2);
  inv << 1.0 / 0.75, -0.5 / 0.75, -0.5 / 0.75, 1.0 / 0.75;
  ExpectCloseToCovariance(EmpiricalCrossCovariance(Factor(x), p, trials, 5),
                          inv, static_cast<double>(p * trials));
}

TEST(CrossCovarianceTest, ConvergesToInverseGram) {
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const MixingMatrix c = RandomMixing(8, 3, 20 + seed);
    const Eigen::MatrixXd x = c.entries.transpose() * c.entries;
    const std::int64_t p = 16, trials = 10000;
    const Eigen::MatrixXd cov = EmpiricalCrossCovariance(c, p, trials, seed, 2);
    ExpectCloseToCovariance(cov, x.inverse(), static_cast<double>(p * trials));
  }
}

TEST(CrossCovarianceTest, ThreadCountDoesNotChangeBits) {
  const MixingMatrix c = RandomMixing(6, 2, 3);
  EXPECT_EQ(EmpiricalCrossCovariance(c, 5, 999, 1, 1),
            EmpiricalCrossCovariance(c, 5, 999, 1, 3));
}

TEST(CrossCovarianceTest, MarginalVarianceScalesWithSquare) {
  const MixingMatrix c = RandomMixing(5, 2, 31);
  const Eigen::MatrixXd xinv =
      (c.entries.transpose() * c.entries).inverse();
  const std::int64_t p = 40, trials = 4000;
  const double scale = 3.0;
  Eigen::VectorXd second = Eigen::VectorXd::Zero(5);
  for (std::int64_t r = 0; r < trials; ++r) {
    NoiseStream stream(c, p, DeriveSeed(6, r), scale);
    for (int t = 0; t < 5; ++t) second(t) += stream.Next().squaredNorm();
  }
  second /= static_cast<double>(p * trials);
  for (int t = 0; t < 5; ++t) {
    const double expected = xinv(t, t) * scale * scale;
    EXPECT_NEAR(second(t), expected,
                5.0 * expected * std::sqrt(2.0 / static_cast<double>(p * trials)));
  }
}

TEST(CrossCovarianceTest, RejectsZeroTrials) {
  EXPECT_THROW(EmpiricalCrossCovariance(TwoByTwo(), 2, 0, 0), ArgumentError);
}

}  // namespace
}  // namespace curvmix
