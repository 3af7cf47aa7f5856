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

// Desk-scale private training of linear and logistic models with
// per-example clipping, the band-cyclic batch schedule and correlated noise.

#ifndef CURVMIX_TRAINER_H_
#define CURVMIX_TRAINER_H_

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "curvmix/mixopt.h"

namespace curvmix {

enum class ModelKind { kLinear, kLogistic };

std::string ToString(ModelKind kind);
ModelKind ParseModelKind(const std::string& name);

struct Dataset {
  Eigen::MatrixXd features;  // n x f
  Eigen::VectorXd labels;    // real targets, or {0, 1} for logistic

  std::int64_t n() const { return features.rows(); }
  std::int64_t f() const { return features.cols(); }
  void Validate() const;
};

struct TrainConfig {
  std::int64_t T = 1;
  std::int64_t band = 1;
  std::int64_t batch = 1;
  double clip = 1.0;   // zeta
  double sigma = 0.0;  // noise multiplier
  double eta = 0.1;
  std::uint64_t seed = 0;
  ModelKind model = ModelKind::kLogistic;

  void Validate() const;
};

// Weights for the f features followed by the bias.
struct ModelParams {
  Eigen::VectorXd weights;
};

struct StepLog {
  std::int64_t step = 0;
  double batch_loss = 0.0;
  double grad_norm_mean = 0.0;  // mean unclipped per-example norm
  double clipped_fraction = 0.0;
};

struct TrainResult {
  ModelParams params;
  std::vector<StepLog> log;
  std::vector<std::string> warnings;
};

// Splits a seeded permutation of [0, n) once into `band` parts of
// floor(n / band) indices (the remainder is unused); batch t is a uniform
// sample without replacement of size `batch` from part t mod band.
std::vector<std::vector<std::int64_t>> PartitionSchedule(
    std::int64_t n, std::int64_t band, std::int64_t batch, std::int64_t T,
    std::uint64_t seed);

// g * min(1, zeta / ||g||).
Eigen::VectorXd ClipGradient(const Eigen::VectorXd& g, double zeta);

// Loss and gradient of one example at `weights` (bias last).
double ExampleLoss(ModelKind kind, const Eigen::VectorXd& weights,
                   const Eigen::VectorXd& x, double y);
Eigen::VectorXd ExampleGradient(ModelKind kind, const Eigen::VectorXd& weights,
                                const Eigen::VectorXd& x, double y);
// Mean loss over the whole dataset.
double DatasetLoss(ModelKind kind, const Dataset& data,
                   const ModelParams& params);

// Per step: clip each example gradient to zeta, sum, add zeta * sigma * z~_t
// from the correlated stream, divide by the batch size, take an SGD step.
// The weights start at zero. Throws NumericalError on a non-finite loss.
TrainResult PrivateTrain(const Dataset& data, const TrainConfig& config,
                         const MixingMatrix& mixing);

struct AccountantParams {
  double q = 0.0;
  std::int64_t compositions = 0;
};

// Inputs for an external subsampled-Gaussian accountant:
//   q = batch / floor(n / band),  compositions = ceil(T batch^2 / (q n)).
// The ceiling is computed exactly as ceil(T * batch * floor(n / band) / n).
AccountantParams ComputeAccountantParams(std::int64_t n, std::int64_t batch,
                                         std::int64_t band, std::int64_t T);

// Features ~ N(0, 1) with a few dominant directions, labels drawn from a
// logistic model with a random true weight vector.
Dataset MakeSyntheticLogistic(std::int64_t n, std::int64_t f,
                              std::uint64_t seed);

// Hessian of the mean logistic loss at zero weights, 0.25 * A^T A / n with
// A the features augmented by a bias column. It needs no labels.
Eigen::MatrixXd LogisticHessianAtZero(const Eigen::MatrixXd& features);

}  // namespace curvmix

#endif  // CURVMIX_TRAINER_H_
