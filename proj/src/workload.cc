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

#include "curvmix/workload.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "curvmix/errors.h"

namespace curvmix {
namespace {

struct WeightedValue {
  double value;
  double weight;
};

// Positive eigenvalues, either verbatim or histogrammed into log-spaced
// buckets. A bucket becomes two nodes at mean -/+ standard deviation with
// half its member count each, so its count, sum and sum of squares are kept.
std::vector<WeightedValue> Collapse(const std::vector<double>& values,
                                    bool bucket) {
  std::vector<WeightedValue> out;
  double lo = 0.0, hi = 0.0;
  for (double v : values) {
    if (v <= 0.0) continue;
    lo = lo == 0.0 ? v : std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (!bucket) {
    for (double v : values) {
      if (v > 0.0) out.push_back({v, 1.0});
    }
    return out;
  }
  if (hi == 0.0) return out;
  const double log_lo = std::log(lo);
  const double width = std::log(hi) - log_lo;
  // Running mean and squared deviation per bucket (Welford).
  std::vector<double> means(kBucketCount, 0.0), squares(kBucketCount, 0.0),
      counts(kBucketCount, 0.0);
  for (double v : values) {
    if (v <= 0.0) continue;
    int b = 0;
    if (width > 0.0) {
      b = static_cast<int>((std::log(v) - log_lo) / width * kBucketCount);
      b = std::clamp(b, 0, kBucketCount - 1);
    }
    counts[b] += 1.0;
    const double delta = v - means[b];
    means[b] += delta / counts[b];
    squares[b] += delta * (v - means[b]);
  }
  for (int b = kBucketCount; b-- > 0;) {
    if (counts[b] == 0.0) continue;
    const double spread = std::sqrt(squares[b] / counts[b]);
    if (spread == 0.0) {
      out.push_back({means[b], counts[b]});
    } else {
      out.push_back({means[b] + spread, 0.5 * counts[b]});
      out.push_back({means[b] - spread, 0.5 * counts[b]});
    }
  }
  return out;
}

}  // namespace

std::string ToString(WorkloadKind kind) {
  switch (kind) {
    case WorkloadKind::kCurvature:
      return "curvature";
    case WorkloadKind::kIdentity:
      return "identity";
    case WorkloadKind::kPrefix:
      return "prefix";
  }
  return "unknown";
}

WorkloadKind ParseWorkloadKind(const std::string& name) {
  if (name == "curvature") return WorkloadKind::kCurvature;
  if (name == "identity") return WorkloadKind::kIdentity;
  if (name == "prefix") return WorkloadKind::kPrefix;
  throw ArgumentError("unknown workload kind '" + name +
                      "' (expected curvature, identity or prefix)");
}

WorkloadMatrix CurvatureWorkload(const EigenSpectrum& spectrum, double eta,
                                 std::int64_t T, bool allow_bucketing) {
  Require(eta > 0.0, "curvature workload needs eta > 0");
  Require(T >= 1, "curvature workload needs T >= 1");
  spectrum.Validate();
  Require(spectrum.values.empty() || spectrum.values.back() >= 0.0,
          "curvature workload needs a non-negative spectrum");

  WorkloadMatrix out;
  out.kind = WorkloadKind::kCurvature;
  out.eta = eta;
  const double mu_max = spectrum.values.empty() ? 0.0 : spectrum.values[0];
  out.divergent = eta * mu_max >= 2.0;

  const bool bucket =
      allow_bucketing && spectrum.values.size() > kBucketingThreshold;
  const std::vector<WeightedValue> terms = Collapse(spectrum.values, bucket);

  // hankel[e] = sum_i w_i mu_i r_i^e for exponents e = 0 .. 2T - 2.
  const std::size_t exponents = static_cast<std::size_t>(2 * T - 1);
  std::vector<double> hankel(exponents, 0.0);
  for (const WeightedValue& term : terms) {
    const double ratio = 1.0 - eta * term.value;
    double power = term.weight * term.value;
    for (std::size_t e = 0; e < exponents; ++e) {
      hankel[e] += power;
      power *= ratio;
    }
  }

  out.entries.resize(T, T);
  for (std::int64_t j = 0; j < T; ++j) {
    for (std::int64_t l = 0; l < T; ++l) {
      out.entries(j, l) = hankel[static_cast<std::size_t>(2 * T - 2 - j - l)];
    }
  }
  return out;
}

WorkloadMatrix IdentityWorkload(std::int64_t T) {
  Require(T >= 1, "identity workload needs T >= 1");
  WorkloadMatrix out;
  out.kind = WorkloadKind::kIdentity;
  out.entries = Eigen::MatrixXd::Identity(T, T);
  return out;
}

WorkloadMatrix PrefixWorkload(std::int64_t T) {
  Require(T >= 1, "prefix workload needs T >= 1");
  WorkloadMatrix out;
  out.kind = WorkloadKind::kPrefix;
  out.entries.resize(T, T);
  for (std::int64_t j = 0; j < T; ++j) {
    for (std::int64_t l = 0; l < T; ++l) {
      out.entries(j, l) = static_cast<double>(T - std::max(j, l));
    }
  }
  return out;
}

WorkloadMatrix AddRidge(WorkloadMatrix workload, double relative) {
  Require(std::isfinite(relative) && relative >= 0.0,
          "ridge must be finite and non-negative");
  const auto T = workload.entries.rows();
  if (T == 0 || relative == 0.0) return workload;
  const double shift = relative * workload.entries.trace() / static_cast<double>(T);
  workload.entries.diagonal().array() += shift;
  return workload;
}

}  // namespace curvmix
