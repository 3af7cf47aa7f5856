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

// Hessian eigenspectrum tools: top-k Lanczos estimation, negative
// truncation, and the anchored power-law tail model used to extend a
// partial spectrum to the full parameter dimension.

#ifndef CURVMIX_SPECTRUM_H_
#define CURVMIX_SPECTRUM_H_

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace curvmix {

// A symmetric linear map given only through matrix-vector products.
// `apply(x, y)` writes A·x into y; both spans have length `dim`.
struct SymmetricOperator {
  std::int64_t dim = 0;
  std::function<void(std::span<const double>, std::span<double>)> apply;

  // Wraps a dense matrix; the operator keeps its own copy.
  static SymmetricOperator FromMatrix(const Eigen::MatrixXd& matrix);
  static SymmetricOperator Diagonal(std::vector<double> entries);
};

// Eigenvalues sorted non-increasing. The list may be partial: only the
// first `k_measured` entries are direct estimates, and `total_dim` is the
// number of model parameters the spectrum describes.
struct EigenSpectrum {
  std::vector<double> values;
  std::int64_t total_dim = 0;
  std::int64_t k_measured = 0;
  std::string source;

  // Throws ArgumentError unless the ordering and size invariants hold.
  void Validate() const;
};

struct LanczosOptions {
  // A Ritz pair counts as converged once its residual norm is at most
  // tol times the running estimate of the operator norm.
  double tol = 1e-10;
};

struct LanczosResult {
  EigenSpectrum spectrum;
  bool converged = false;
  int iterations = 0;
  // Residual norm of each returned Ritz value, same order as the values.
  std::vector<double> residuals;
};

// The k algebraically largest eigenvalues of `op`, via Lanczos with full
// reorthogonalization from a seeded random start vector. An invariant
// subspace (zero beta) triggers a restart with a fresh random vector
// orthogonal to the basis, which recovers repeated eigenvalues such as
// those of the identity. Returns converged = false, with the best Ritz
// values found, when max_iters runs out first.
LanczosResult LanczosTopK(const SymmetricOperator& op, int k, int max_iters,
                          std::uint64_t seed,
                          const LanczosOptions& options = {});

// Eigenvalues of a symmetric tridiagonal matrix (implicit QL with
// Wilkinson-style shifts) together with the last component of each
// normalized eigenvector. Values are returned unsorted.
struct TridiagonalEigen {
  std::vector<double> values;
  std::vector<double> last_components;
};
TridiagonalEigen SolveTridiagonal(std::span<const double> diagonal,
                                  std::span<const double> off_diagonal);

// Replaces every negative eigenvalue by zero.
EigenSpectrum TruncateNegative(EigenSpectrum spectrum);

inline constexpr std::int64_t kDenseEigsDefaultCap = 4096;

// Full spectrum of a dense symmetric matrix. Throws ArgumentError when the
// matrix is not square/symmetric or larger than `cap`.
EigenSpectrum DenseEigs(const Eigen::MatrixXd& matrix,
                        std::int64_t cap = kDenseEigsDefaultCap);

// Anchored tail model
//   log mu_i = coeff_c * (log p_plus - log i)^alpha + log mu_pplus,
// with 1-based index i (i = 1 is the largest eigenvalue). The curve passes
// through (p_plus, mu_pplus) for every coefficient choice.
struct TailFit {
  double coeff_c = 0.0;
  double alpha = 1.0;
  std::int64_t p_plus = 0;
  double mu_pplus = 0.0;
  std::int64_t k_used = 0;

  // Model value at 1-based index i in [1, p_plus].
  double Evaluate(std::int64_t i) const;
};

// Fits (coeff_c, alpha) by linear regression of
//   log(log mu_i - log mu_pplus)  on  log(log p_plus - log i)
// over the measured values. Points with mu_i <= mu_pplus are dropped.
// Identical measured values (or none) give the flat tail (0, 1); fewer
// than two usable points otherwise, or a non-positive fitted alpha, is a
// NumericalError.
TailFit FitTail(const EigenSpectrum& topk, std::int64_t p_plus,
                double mu_pplus);

// Full length-p spectrum: measured values, then the fitted curve up to
// p_plus (clamped so the sequence never increases), then zeros.
EigenSpectrum Extrapolate(const TailFit& fit, const EigenSpectrum& topk,
                          std::int64_t p);

}  // namespace curvmix

#endif  // CURVMIX_SPECTRUM_H_
