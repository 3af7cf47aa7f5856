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

#ifndef CURVMIX_WORKLOAD_H_
#define CURVMIX_WORKLOAD_H_

#include <cstdint>
#include <string>

#include <Eigen/Dense>

#include "curvmix/spectrum.h"

namespace curvmix {

enum class WorkloadKind { kCurvature, kIdentity, kPrefix };

std::string ToString(WorkloadKind kind);
WorkloadKind ParseWorkloadKind(const std::string& name);

// The T x T matrix G in the mixing objective Tr(X^{-1} G).
struct WorkloadMatrix {
  Eigen::MatrixXd entries;
  WorkloadKind kind = WorkloadKind::kIdentity;
  double eta = 0.0;  // learning rate, curvature workloads only
  // Set when eta * max(mu) >= 2: noise-free descent diverges there and the
  // geometric factors grow with T.
  bool divergent = false;

  std::int64_t T() const { return entries.rows(); }
};

// Spectra longer than this are bucketed before summation.
inline constexpr std::size_t kBucketingThreshold = 10000;
inline constexpr int kBucketCount = 1024;

// G[j][l] = sum_i mu_i (1 - eta mu_i)^(2T - j - l - 2), 0-based j and l.
// G is Hankel: it only depends on j + l, so the 2T - 1 distinct values are
// accumulated per eigenvalue with a running power. The spectrum must be
// non-negative (apply TruncateNegative first).
WorkloadMatrix CurvatureWorkload(const EigenSpectrum& spectrum, double eta,
                                 std::int64_t T, bool allow_bucketing = true);

WorkloadMatrix IdentityWorkload(std::int64_t T);

// A^T A for the lower-triangular all-ones A: G[j][l] = T - max(j, l).
WorkloadMatrix PrefixWorkload(std::int64_t T);

// G + relative * (Tr(G) / T) * I. A curvature workload has rank at most the
// number of eigenvalues, so with fewer eigenvalues than steps the optimal
// Gram matrix drifts toward singularity and its noise only cancels under
// the exact model Hessian; a small ridge keeps (C^T C)^{-1} bounded.
WorkloadMatrix AddRidge(WorkloadMatrix workload, double relative);

}  // namespace curvmix

#endif  // CURVMIX_WORKLOAD_H_
