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

#ifndef CURVMIX_BANDED_CHOLESKY_H_
#define CURVMIX_BANDED_CHOLESKY_H_

#include <optional>

#include <Eigen/Dense>

namespace curvmix {

// Pivots below this are treated as a failed factorization.
inline constexpr double kMinPivot = 1e-12;

// Cholesky factor X = L L^T of a symmetric banded matrix, where entries
// with |i - j| >= band are taken to be zero. Storage and work are
// O(n * band); solves cost O(n * band) per right-hand side.
class BandedCholesky {
 public:
  // Throws NotPositiveDefiniteError when a pivot is <= min_pivot.
  BandedCholesky(const Eigen::MatrixXd& matrix, Eigen::Index band,
                 double min_pivot = kMinPivot);

  static std::optional<BandedCholesky> TryFactor(
      const Eigen::MatrixXd& matrix, Eigen::Index band,
      double min_pivot = kMinPivot);

  Eigen::Index size() const { return lower_.rows(); }
  Eigen::Index band() const { return lower_.cols(); }
  double min_pivot() const { return min_pivot_seen_; }

  // X^{-1} rhs.
  Eigen::MatrixXd Solve(const Eigen::MatrixXd& rhs) const;
  // Entries of X^{-1} inside the band: result(i, d) = X^{-1}(i, i + d),
  // zero where i + d runs past the end.
  Eigen::MatrixXd InverseBand() const;
  // Dense copy of L.
  Eigen::MatrixXd Lower() const;

 private:
  BandedCholesky() = default;
  bool Factor(const Eigen::MatrixXd& matrix, Eigen::Index band,
              double min_pivot);

  // lower_(i, d) holds L(i, i - d) for d in [0, band).
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>
      lower_;
  double min_pivot_seen_ = 0.0;
};

}  // namespace curvmix

#endif  // CURVMIX_BANDED_CHOLESKY_H_
