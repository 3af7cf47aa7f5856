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

// Quadratic-loss check of the excess-loss formula: closed form versus
// Monte-Carlo simulation of gradient descent with correlated noise.

#ifndef CURVMIX_QUADSIM_H_
#define CURVMIX_QUADSIM_H_

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "curvmix/mixopt.h"
#include "curvmix/spectrum.h"

namespace curvmix {

// L(w) = 1/2 (w - d)^T H (w - d), run for T steps of size eta from w0.
struct QuadProblem {
  Eigen::MatrixXd hessian;
  Eigen::VectorXd target;
  Eigen::VectorXd w0;
  double eta = 0.0;
  std::int64_t T = 1;

  // H = Diag(spectrum). The noise is isotropic, so rotating H does not
  // change the law of the excess loss.
  static QuadProblem FromSpectrum(const EigenSpectrum& spectrum,
                                  Eigen::VectorXd target, Eigen::VectorXd w0,
                                  double eta, std::int64_t T);

  std::int64_t dim() const { return hessian.rows(); }
  double Loss(const Eigen::VectorXd& w) const;
  // Shapes, eta > 0, T >= 1, symmetric PSD hessian.
  void Validate() const;
};

// noise_scale^2 * (eta^2 / 2) * Tr(X^{-1} G) with G the curvature workload
// of the spectrum.
double ClosedFormExcess(const EigenSpectrum& spectrum, double eta,
                        std::int64_t T, const BandedGram& X,
                        double noise_scale = 1.0);
double ClosedFormExcess(const QuadProblem& problem, const BandedGram& X,
                        double noise_scale = 1.0);

struct Trajectory {
  std::vector<Eigen::VectorXd> weights;  // w_0 .. w_T
  double final_loss = 0.0;
};

// w_i = w_{i-1} - eta H (w_{i-1} - d).
Trajectory NoiseFreeDescent(const QuadProblem& problem);

struct SimulationResult {
  double mean = 0.0;
  double std_error = 0.0;
  std::int64_t trials = 0;
  // Largest relative gap, over all trials, between the simulated
  // w^_T - w_T and -eta sum_j (I - eta H)^j z~_{T-j-1}.
  double max_identity_error = 0.0;
};

inline constexpr double kPathIdentityTolerance = 1e-8;

// Runs `trials` noisy trajectories (trial r uses the noise stream seeded by
// DeriveSeed(seed, r), so two calls with the same seed share their raw
// Gaussian draws) and returns the mean and standard error of
// L(w^_T) - L(w_T). Throws NumericalError if the pathwise identity fails
// beyond kPathIdentityTolerance on any trial.
SimulationResult SimulateExcess(const QuadProblem& problem,
                                const MixingMatrix& mixing,
                                double noise_scale, std::int64_t trials,
                                std::uint64_t seed, int threads = 1);

}  // namespace curvmix

#endif  // CURVMIX_QUADSIM_H_
