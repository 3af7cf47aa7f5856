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

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>

#include "curvmix/errors.h"
#include "curvmix/spectrum.h"

namespace curvmix {

SymmetricOperator SymmetricOperator::FromMatrix(const Eigen::MatrixXd& matrix) {
  Require(matrix.rows() == matrix.cols(), "operator matrix must be square");
  auto shared = std::make_shared<const Eigen::MatrixXd>(matrix);
  SymmetricOperator op;
  op.dim = matrix.rows();
  op.apply = [shared](std::span<const double> x, std::span<double> y) {
    const Eigen::Index n = shared->rows();
    Eigen::Map<const Eigen::VectorXd> in(x.data(), n);
    Eigen::Map<Eigen::VectorXd> out(y.data(), n);
    out.noalias() = *shared * in;
  };
  return op;
}

SymmetricOperator SymmetricOperator::Diagonal(std::vector<double> entries) {
  auto shared = std::make_shared<const std::vector<double>>(std::move(entries));
  SymmetricOperator op;
  op.dim = static_cast<std::int64_t>(shared->size());
  op.apply = [shared](std::span<const double> x, std::span<double> y) {
    for (std::size_t i = 0; i < shared->size(); ++i) y[i] = (*shared)[i] * x[i];
  };
  return op;
}

void EigenSpectrum::Validate() const {
  Require(total_dim >= 0, "spectrum total_dim must be non-negative");
  Require(static_cast<std::int64_t>(values.size()) <= total_dim,
          "spectrum has more values than total_dim");
  Require(k_measured >= 0 &&
              k_measured <= static_cast<std::int64_t>(values.size()),
          "spectrum k_measured must lie in [0, len(values)]");
  for (std::size_t i = 0; i < values.size(); ++i) {
    Require(std::isfinite(values[i]), "spectrum values must be finite");
    if (i + 1 < values.size() && values[i] < values[i + 1]) {
      std::ostringstream msg;
      msg << "spectrum values must be non-increasing (index " << i << ")";
      throw ArgumentError(msg.str());
    }
  }
}

EigenSpectrum TruncateNegative(EigenSpectrum spectrum) {
  for (double& v : spectrum.values) v = std::max(v, 0.0);
  return spectrum;
}

EigenSpectrum DenseEigs(const Eigen::MatrixXd& matrix, std::int64_t cap) {
  Require(matrix.rows() == matrix.cols(), "dense_eigs needs a square matrix");
  if (matrix.rows() > cap) {
    std::ostringstream msg;
    msg << "dense_eigs size " << matrix.rows() << " exceeds cap " << cap;
    throw ArgumentError(msg.str());
  }
  const double scale = std::max(1.0, matrix.cwiseAbs().maxCoeff());
  Require((matrix - matrix.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * scale,
          "dense_eigs needs a symmetric matrix");

  EigenSpectrum out;
  out.total_dim = matrix.rows();
  out.k_measured = matrix.rows();
  out.source = "dense";
  if (matrix.rows() == 0) return out;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
      matrix, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("dense symmetric eigensolver did not converge");
  }
  const Eigen::VectorXd& ascending = solver.eigenvalues();
  out.values.assign(ascending.data(), ascending.data() + ascending.size());
  std::reverse(out.values.begin(), out.values.end());
  return out;
}

}  // namespace curvmix
