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

#ifndef CURVMIX_NOISEGEN_H_
#define CURVMIX_NOISEGEN_H_

#include <cstdint>
#include <deque>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "curvmix/errors.h"
#include "curvmix/mixopt.h"

namespace curvmix {

// Raised when next() is called after all T steps were emitted.
class EndOfStreamError : public ArgumentError {
 public:
  using ArgumentError::ArgumentError;
};

// Raw draw z_t in R^p used at step t of a stream seeded with `seed`.
Eigen::VectorXd RawNoise(std::uint64_t seed, std::int64_t step,
                         std::int64_t p);

// Online generator of correlated noise [z~_0 .. z~_{T-1}] = [z_0 .. z_{T-1}]
// C^{-T}. Row t of C gives the recurrence
//   C[t,t] z~_t = z_t - sum_{j = t-b+1}^{t-1} C[t,j] z~_j,
// so only the last b - 1 outputs are retained. History is kept unscaled;
// `scale` multiplies the emitted vector only.
class NoiseStream {
 public:
  NoiseStream(std::shared_ptr<const MixingMatrix> mixing, std::int64_t p,
              std::uint64_t seed, double scale = 1.0);
  NoiseStream(const MixingMatrix& mixing, std::int64_t p, std::uint64_t seed,
              double scale = 1.0);

  // Emits scale * z~_t and advances the step.
  Eigen::VectorXd Next();

  std::int64_t step() const { return step_; }
  std::int64_t length() const { return mixing_->T(); }
  std::int64_t dim() const { return p_; }
  double scale() const { return scale_; }
  std::size_t history_size() const { return history_.size(); }
  std::size_t peak_history_size() const { return peak_history_; }

 private:
  std::shared_ptr<const MixingMatrix> mixing_;
  std::int64_t p_;
  std::uint64_t seed_;
  double scale_;
  std::int64_t step_ = 0;
  std::deque<Eigen::VectorXd> history_;  // oldest first, unscaled
  std::size_t peak_history_ = 0;
};

// Monte-Carlo estimate of E[z~_s^T z~_t] / p over `trials` independent
// unit-scale streams (trial r uses DeriveSeed(seed, r)). Converges to
// (C^T C)^{-1}.
Eigen::MatrixXd EmpiricalCrossCovariance(const MixingMatrix& mixing,
                                         std::int64_t p, std::int64_t trials,
                                         std::uint64_t seed, int threads = 1);

}  // namespace curvmix

#endif  // CURVMIX_NOISEGEN_H_
