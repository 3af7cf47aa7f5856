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
#include <limits>
#include <numeric>
#include <vector>

#include "curvmix/errors.h"
#include "curvmix/rng.h"
#include "curvmix/spectrum.h"

namespace curvmix {
namespace {

using Vector = std::vector<double>;

double Dot(const Vector& a, const Vector& b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
  return sum;
}

double Norm(const Vector& a) { return std::sqrt(Dot(a, a)); }

// Two passes of classical Gram-Schmidt against the whole basis.
void Reorthogonalize(const std::vector<Vector>& basis, Vector& w) {
  for (int pass = 0; pass < 2; ++pass) {
    for (const Vector& q : basis) {
      const double overlap = Dot(q, w);
      for (std::size_t i = 0; i < w.size(); ++i) w[i] -= overlap * q[i];
    }
  }
}

Vector RandomUnitVector(Rng& rng, std::int64_t dim) {
  Vector v(static_cast<std::size_t>(dim));
  for (double& x : v) x = rng.Normal();
  const double norm = Norm(v);
  for (double& x : v) x /= norm;
  return v;
}

// Whether Ritz values should be recomputed at basis size m. Early on every
// step is checked; later the checks thin out so the O(m^2) tridiagonal
// solve does not dominate.
bool ShouldCheck(int m, int k) {
  if (m < k) return false;
  if (m <= 200) return true;
  return m % std::max(1, m / 50) == 0;
}

struct RitzSummary {
  std::vector<double> values;     // descending
  std::vector<double> residuals;  // matching values
};

RitzSummary TopRitz(const Vector& alpha, const Vector& beta, double coupling,
                    int k) {
  const std::size_t m = alpha.size();
  const TridiagonalEigen eig = SolveTridiagonal(
      alpha, std::span<const double>(beta.data(), m - 1));
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return eig.values[a] > eig.values[b];
  });
  RitzSummary out;
  const std::size_t take = std::min<std::size_t>(m, static_cast<std::size_t>(k));
  for (std::size_t j = 0; j < take; ++j) {
    out.values.push_back(eig.values[order[j]]);
    out.residuals.push_back(std::abs(coupling * eig.last_components[order[j]]));
  }
  return out;
}

}  // namespace

TridiagonalEigen SolveTridiagonal(std::span<const double> diagonal,
                                  std::span<const double> off_diagonal) {
  const std::size_t n = diagonal.size();
  Require(n == 0 || off_diagonal.size() + 1 == n,
          "tridiagonal off-diagonal must have n - 1 entries");
  Vector d(diagonal.begin(), diagonal.end());
  Vector e(n, 0.0);
  std::copy(off_diagonal.begin(), off_diagonal.end(), e.begin());
  // Last row of the accumulated rotation matrix.
  Vector z(n, 0.0);
  if (n > 0) z[n - 1] = 1.0;

  constexpr double kEps = std::numeric_limits<double>::epsilon();
  for (std::size_t l = 0; l < n; ++l) {
    int iterations = 0;
    std::size_t m;
    do {
      for (m = l; m + 1 < n; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= kEps * dd) break;
      }
      if (m == l) break;
      if (++iterations > 100) {
        throw NumericalError("tridiagonal QL iteration did not converge");
      }
      double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
      double r = std::hypot(g, 1.0);
      g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
      double s = 1.0, c = 1.0, p = 0.0;
      bool underflow = false;
      for (std::size_t i = m; i-- > l;) {
        const double f = s * e[i];
        const double b = c * e[i];
        r = std::hypot(f, g);
        e[i + 1] = r;
        if (r == 0.0) {
          d[i + 1] -= p;
          e[m] = 0.0;
          underflow = true;
          break;
        }
        s = f / r;
        c = g / r;
        g = d[i + 1] - p;
        r = (d[i] - g) * s + 2.0 * c * b;
        p = s * r;
        d[i + 1] = g + p;
        g = c * r - b;
        const double zf = z[i + 1];
        z[i + 1] = s * z[i] + c * zf;
        z[i] = c * z[i] - s * zf;
      }
      if (underflow) continue;
      d[l] -= p;
      e[l] = g;
      e[m] = 0.0;
    } while (m != l);
  }
  return {std::move(d), std::move(z)};
}

LanczosResult LanczosTopK(const SymmetricOperator& op, int k, int max_iters,
                          std::uint64_t seed, const LanczosOptions& options) {
  Require(op.dim >= 1, "lanczos needs a non-empty operator");
  Require(k >= 1, "lanczos k must be at least 1");
  Require(k <= op.dim, "lanczos k exceeds the operator dimension");
  Require(max_iters >= k, "lanczos max_iters must be at least k");

  const std::size_t n = static_cast<std::size_t>(op.dim);
  const int budget = static_cast<int>(
      std::min<std::int64_t>(max_iters, op.dim));
  Rng rng(seed);

  std::vector<Vector> basis;
  Vector alpha, beta;  // beta[j] couples basis vectors j and j + 1
  Vector q = RandomUnitVector(rng, op.dim);
  Vector w(n);
  double norm_estimate = 0.0;

  LanczosResult result;
  RitzSummary ritz;
  bool converged = false;
  double coupling = 0.0;

  for (int iter = 0; iter < budget; ++iter) {
    basis.push_back(q);
    op.apply(basis.back(), w);
    const double a = Dot(q, w);
    for (std::size_t i = 0; i < n; ++i) w[i] -= a * q[i];
    if (iter > 0 && beta.back() != 0.0) {
      const Vector& prev = basis[basis.size() - 2];
      for (std::size_t i = 0; i < n; ++i) w[i] -= beta.back() * prev[i];
    }
    Reorthogonalize(basis, w);
    coupling = Norm(w);
    alpha.push_back(a);
    norm_estimate = std::max(
        norm_estimate,
        std::abs(a) + coupling + (beta.empty() ? 0.0 : std::abs(beta.back())));

    const int m = iter + 1;
    const bool exhausted = m == budget;
    const bool invariant = coupling <= 1e-12 * norm_estimate;
    // A full basis spans the whole space; the projection is then exact.
    if (static_cast<std::int64_t>(m) == op.dim) coupling = 0.0;

    if (ShouldCheck(m, k) || exhausted || invariant) {
      ritz = TopRitz(alpha, beta, coupling, k);
      if (static_cast<int>(ritz.values.size()) == k) {
        const double bound = options.tol * std::max(norm_estimate, 1e-300);
        converged = std::all_of(ritz.residuals.begin(), ritz.residuals.end(),
                                [&](double r) { return r <= bound; });
        if (converged) break;
      }
    }
    if (exhausted) break;

    if (invariant) {
      // Restart inside the orthogonal complement of the current basis.
      Vector fresh = RandomUnitVector(rng, op.dim);
      Reorthogonalize(basis, fresh);
      const double fresh_norm = Norm(fresh);
      if (fresh_norm <= 1e-8) break;
      for (double& x : fresh) x /= fresh_norm;
      beta.push_back(0.0);
      q = std::move(fresh);
    } else {
      beta.push_back(coupling);
      for (std::size_t i = 0; i < n; ++i) q[i] = w[i] / coupling;
    }
  }

  result.iterations = static_cast<int>(alpha.size());
  result.converged = converged;
  result.residuals = ritz.residuals;
  result.spectrum.values = ritz.values;
  result.spectrum.total_dim = op.dim;
  result.spectrum.k_measured = static_cast<std::int64_t>(ritz.values.size());
  result.spectrum.source = "lanczos";
  return result;
}

}  // namespace curvmix
