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

// The mixing-matrix problem: minimize Tr(X^{-1} G) over symmetric positive
// definite X with unit diagonal and bandwidth b, then factor X = C^T C with
// C lower triangular.

#ifndef CURVMIX_MIXOPT_H_
#define CURVMIX_MIXOPT_H_

#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "curvmix/workload.h"

namespace curvmix {

// X = C^T C. Entries with |i - j| >= band are zero and the diagonal is one.
struct BandedGram {
  Eigen::MatrixXd entries;
  Eigen::Index band = 1;

  Eigen::Index T() const { return entries.rows(); }
  static BandedGram Identity(Eigen::Index T, Eigen::Index band = 1);
  // Checks symmetry, unit diagonal and the zero pattern exactly (not PD).
  void Validate() const;
};

// Lower-triangular banded C with unit-norm columns and positive diagonal.
struct MixingMatrix {
  Eigen::MatrixXd entries;
  Eigen::Index band = 1;

  Eigen::Index T() const { return entries.rows(); }
  static MixingMatrix Identity(Eigen::Index T);
  // Checks shape, triangularity, band pattern and a positive diagonal.
  void Validate() const;
};

struct SolveReport {
  double objective_value = 0.0;
  int iterations = 0;
  int evaluations = 0;
  // Max-norm of the free-entry gradient of Tr(X^{-1} G / s), where
  // s = Tr(G) / T normalizes G to unit mean diagonal.
  double kkt_residual = 0.0;
  bool converged = false;
};

struct SolveOptions {
  double tol = 1e-7;
  int max_iters = 10000;
  // Number of curvature pairs kept by the limited-memory update.
  int memory = 10;
  // Damped Newton steps are tried first while the number of free entries is
  // at most this; larger problems use limited-memory steps only.
  int newton_max_free = 20000;
  // Called with every accepted iterate and its objective Tr(X^{-1} G).
  std::function<void(const BandedGram&, double)> on_accept;
};

struct MixingSolution {
  BandedGram gram;
  SolveReport report;
};

// Tr(X^{-1} G) via a banded Cholesky solve. Throws
// NotPositiveDefiniteError when X is not PD.
double Objective(const BandedGram& X, const Eigen::MatrixXd& G);
double Objective(const BandedGram& X, const WorkloadMatrix& G);

// -X^{-1} G X^{-1} with the diagonal and out-of-band entries zeroed: the
// derivative of the objective with respect to each single matrix entry on
// the free pattern.
Eigen::MatrixXd ObjectiveGradient(const BandedGram& X,
                                  const Eigen::MatrixXd& G);

// Free parameters are the in-band strict upper-triangle entries ordered by
// diagonal offset d = 1 .. band - 1, then row. Moving one parameter moves
// the symmetric pair (i, j) and (j, i), so its derivative is twice the
// corresponding ObjectiveGradient entry. Empty when band == 1.
std::vector<double> FreeEntries(const BandedGram& X);
BandedGram FromFreeEntries(Eigen::Index T, Eigen::Index band,
                           std::span<const double> free);
std::vector<double> FreeEntryGradient(const BandedGram& X,
                                      const Eigen::MatrixXd& G);

// Projected limited-memory quasi-Newton on the free entries, starting at
// X = I. Steps whose factorization fails (or whose smallest pivot drops
// below 1e-12) are rejected by the backtracking line search.
MixingSolution SolveMixing(const Eigen::MatrixXd& G, Eigen::Index band,
                           const SolveOptions& options = {});
MixingSolution SolveMixing(const WorkloadMatrix& G, Eigen::Index band,
                           const SolveOptions& options = {});

// C lower triangular with C^T C = X, obtained from the Cholesky factor of
// the index-reversed matrix. C keeps the band of X.
MixingMatrix Factor(const BandedGram& X);

// Tr(X_approx^{-1} G) - Tr(X_star^{-1} G).
double ReductionInObjective(const WorkloadMatrix& G,
                            const BandedGram& X_approx,
                            const BandedGram& X_star);

}  // namespace curvmix

#endif  // CURVMIX_MIXOPT_H_
