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

#include "curvmix/quadsim.h"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>

#include "curvmix/errors.h"
#include "curvmix/noisegen.h"
#include "curvmix/parallel.h"
#include "curvmix/rng.h"
#include "curvmix/workload.h"

namespace curvmix {

QuadProblem QuadProblem::FromSpectrum(const EigenSpectrum& spectrum,
                                      Eigen::VectorXd target,
                                      Eigen::VectorXd w0, double eta,
                                      std::int64_t T) {
  spectrum.Validate();
  QuadProblem q;
  const auto p = static_cast<Eigen::Index>(spectrum.values.size());
  q.hessian = Eigen::MatrixXd::Zero(p, p);
  for (Eigen::Index i = 0; i < p; ++i) q.hessian(i, i) = spectrum.values[i];
  q.target = std::move(target);
  q.w0 = std::move(w0);
  q.eta = eta;
  q.T = T;
  return q;
}

double QuadProblem::Loss(const Eigen::VectorXd& w) const {
  const Eigen::VectorXd r = w - target;
  return 0.5 * r.dot(hessian * r);
}

void QuadProblem::Validate() const {
  const Eigen::Index p = hessian.rows();
  Require(p >= 1 && hessian.cols() == p, "hessian must be a square matrix");
  Require(target.size() == p && w0.size() == p,
          "target and w0 must match the hessian dimension");
  Require(eta > 0.0, "eta must be > 0");
  Require(T >= 1, "T must be >= 1");
  const EigenSpectrum s = DenseEigs(hessian);
  const double tol = 1e-9 * std::max(1.0, std::abs(s.values.front()));
  Require(s.values.back() >= -tol, "hessian must be positive semidefinite");
}

double ClosedFormExcess(const EigenSpectrum& spectrum, double eta,
                        std::int64_t T, const BandedGram& X,
                        double noise_scale) {
  const WorkloadMatrix G = CurvatureWorkload(spectrum, eta, T);
  return noise_scale * noise_scale * 0.5 * eta * eta * Objective(X, G);
}

double ClosedFormExcess(const QuadProblem& problem, const BandedGram& X,
                        double noise_scale) {
  problem.Validate();
  const EigenSpectrum s = TruncateNegative(DenseEigs(problem.hessian));
  return ClosedFormExcess(s, problem.eta, problem.T, X, noise_scale);
}

Trajectory NoiseFreeDescent(const QuadProblem& problem) {
  problem.Validate();
  Trajectory out;
  out.weights.reserve(static_cast<std::size_t>(problem.T + 1));
  out.weights.push_back(problem.w0);
  for (std::int64_t i = 0; i < problem.T; ++i) {
    const Eigen::VectorXd& w = out.weights.back();
    out.weights.push_back(w - problem.eta * (problem.hessian * (w - problem.target)));
  }
  out.final_loss = problem.Loss(out.weights.back());
  return out;
}

SimulationResult SimulateExcess(const QuadProblem& problem,
                                const MixingMatrix& mixing,
                                double noise_scale, std::int64_t trials,
                                std::uint64_t seed, int threads) {
  problem.Validate();
  Require(trials >= 2, "simulation needs trials >= 2");
  Require(mixing.T() == problem.T, "mixing matrix size must equal T");

  const std::int64_t T = problem.T;
  const Eigen::Index p = problem.dim();
  const Eigen::MatrixXd& H = problem.hessian;
  const double eta = problem.eta;
  const Eigen::VectorXd w_final = NoiseFreeDescent(problem).weights.back();
  const Eigen::VectorXd gradient_final = H * (w_final - problem.target);

  // (I - eta H)^j for j = 0 .. T-1.
  std::vector<Eigen::MatrixXd> powers;
  powers.reserve(static_cast<std::size_t>(T));
  const Eigen::MatrixXd step_matrix = Eigen::MatrixXd::Identity(p, p) - eta * H;
  powers.push_back(Eigen::MatrixXd::Identity(p, p));
  for (std::int64_t j = 1; j < T; ++j) powers.push_back(step_matrix * powers.back());

  auto shared = std::make_shared<const MixingMatrix>(mixing);
  std::vector<double> excess(static_cast<std::size_t>(trials));
  std::vector<double> identity_error(static_cast<std::size_t>(trials));
  ParallelFor(static_cast<std::size_t>(trials), threads, [&](std::size_t r) {
    NoiseStream stream(shared, p, DeriveSeed(seed, r), noise_scale);
    std::vector<Eigen::VectorXd> noise;
    noise.reserve(static_cast<std::size_t>(T));
    Eigen::VectorXd w_noisy = problem.w0;
    for (std::int64_t i = 0; i < T; ++i) {
      noise.push_back(stream.Next());
      w_noisy = w_noisy - eta * (H * (w_noisy - problem.target) + noise.back());
    }
    const Eigen::VectorXd gap = w_noisy - w_final;

    Eigen::VectorXd predicted = Eigen::VectorXd::Zero(p);
    for (std::int64_t j = 0; j < T; ++j) {
      predicted.noalias() += powers[static_cast<std::size_t>(j)] *
                             noise[static_cast<std::size_t>(T - j - 1)];
    }
    predicted *= -eta;
    const double denom = std::max(predicted.norm(), 1e-300);
    identity_error[r] = predicted.norm() == 0.0 && gap.norm() == 0.0
                            ? 0.0
                            : (gap - predicted).norm() / denom;

    // L(w^) - L(w) = 1/2 e^T H e + e^T H (w - d) with e = w^ - w.
    excess[r] = 0.5 * gap.dot(H * gap) + gap.dot(gradient_final);
  });

  SimulationResult out;
  out.trials = trials;
  out.max_identity_error =
      *std::max_element(identity_error.begin(), identity_error.end());
  if (out.max_identity_error > kPathIdentityTolerance) {
    std::ostringstream msg;
    msg << "pathwise error identity violated: relative error "
        << out.max_identity_error;
    throw NumericalError(msg.str());
  }
  const double n = static_cast<double>(trials);
  out.mean = PairwiseSum(excess) / n;
  std::vector<double> squares(excess.size());
  for (std::size_t r = 0; r < excess.size(); ++r) {
    squares[r] = (excess[r] - out.mean) * (excess[r] - out.mean);
  }
  const double variance = PairwiseSum(squares) / (n - 1.0);
  out.std_error = std::sqrt(variance / n);
  return out;
}

}  // namespace curvmix
