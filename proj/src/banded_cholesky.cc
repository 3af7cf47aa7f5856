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

#include "curvmix/banded_cholesky.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "curvmix/errors.h"

namespace curvmix {

BandedCholesky::BandedCholesky(const Eigen::MatrixXd& matrix,
                               Eigen::Index band, double min_pivot) {
  if (!Factor(matrix, band, min_pivot)) {
    std::ostringstream msg;
    msg << "matrix is not positive definite (pivot " << min_pivot_seen_
        << " <= " << min_pivot << ")";
    throw NotPositiveDefiniteError(msg.str());
  }
}

std::optional<BandedCholesky> BandedCholesky::TryFactor(
    const Eigen::MatrixXd& matrix, Eigen::Index band, double min_pivot) {
  BandedCholesky out;
  if (!out.Factor(matrix, band, min_pivot)) return std::nullopt;
  return out;
}

bool BandedCholesky::Factor(const Eigen::MatrixXd& matrix, Eigen::Index band,
                            double min_pivot) {
  Require(matrix.rows() == matrix.cols(), "cholesky needs a square matrix");
  const Eigen::Index n = matrix.rows();
  band = std::clamp<Eigen::Index>(band, 1, std::max<Eigen::Index>(n, 1));
  lower_.setZero(n, band);
  min_pivot_seen_ = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index first = std::max<Eigen::Index>(0, i - band + 1);
    for (Eigen::Index j = first; j <= i; ++j) {
      double s = matrix(i, j);
      const Eigen::Index k0 = std::max(first, j - band + 1);
      for (Eigen::Index k = k0; k < j; ++k) {
        s -= lower_(i, i - k) * lower_(j, j - k);
      }
      if (j == i) {
        min_pivot_seen_ = std::min(min_pivot_seen_, s);
        if (!(s > min_pivot)) return false;
        lower_(i, 0) = std::sqrt(s);
      } else {
        lower_(i, i - j) = s / lower_(j, 0);
      }
    }
  }
  return true;
}

Eigen::MatrixXd BandedCholesky::Solve(const Eigen::MatrixXd& rhs) const {
  const Eigen::Index n = size();
  const Eigen::Index b = band();
  Require(rhs.rows() == n, "cholesky solve dimension mismatch");
  // Row-major so each update is a contiguous axpy over all right-hand sides.
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> x = rhs;
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index k0 = std::max<Eigen::Index>(0, i - b + 1);
    for (Eigen::Index k = k0; k < i; ++k) x.row(i) -= lower_(i, i - k) * x.row(k);
    x.row(i) /= lower_(i, 0);
  }
  for (Eigen::Index i = n; i-- > 0;) {
    const Eigen::Index k1 = std::min<Eigen::Index>(n, i + b);
    for (Eigen::Index k = i + 1; k < k1; ++k) x.row(i) -= lower_(k, k - i) * x.row(k);
    x.row(i) /= lower_(i, 0);
  }
  return x;
}

Eigen::MatrixXd BandedCholesky::InverseBand() const {
  const Eigen::Index n = size();
  const Eigen::Index b = band();
  // Takahashi recurrence, from the last row up: only entries of the inverse
  // inside the band are ever needed.
  Eigen::MatrixXd z = Eigen::MatrixXd::Zero(n, b);
  auto at = [&](Eigen::Index i, Eigen::Index j) {
    return i <= j ? z(i, j - i) : z(j, i - j);
  };
  for (Eigen::Index i = n; i-- > 0;) {
    const double pivot = lower_(i, 0);
    const Eigen::Index last = std::min<Eigen::Index>(n, i + b);
    for (Eigen::Index j = last; j-- > i;) {
      double s = i == j ? 1.0 / pivot : 0.0;
      for (Eigen::Index k = i + 1; k < last; ++k) s -= lower_(k, k - i) * at(k, j);
      z(i, j - i) = s / pivot;
    }
  }
  return z;
}

Eigen::MatrixXd BandedCholesky::Lower() const {
  const Eigen::Index n = size();
  Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index d = 0; d < band() && d <= i; ++d) {
      dense(i, i - d) = lower_(i, d);
    }
  }
  return dense;
}

}  // namespace curvmix
