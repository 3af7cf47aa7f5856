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
#include <sstream>

#include "curvmix/errors.h"
#include "curvmix/spectrum.h"

namespace curvmix {

double TailFit::Evaluate(std::int64_t i) const {
  const double depth = std::log(static_cast<double>(p_plus)) -
                       std::log(static_cast<double>(i));
  return mu_pplus * std::exp(coeff_c * std::pow(depth, alpha));
}

TailFit FitTail(const EigenSpectrum& topk, std::int64_t p_plus,
                double mu_pplus) {
  topk.Validate();
  Require(mu_pplus > 0.0, "fit_tail needs mu_pplus > 0");
  Require(p_plus > topk.k_measured, "fit_tail needs p_plus > k_measured");

  TailFit fit;
  fit.p_plus = p_plus;
  fit.mu_pplus = mu_pplus;

  const auto k = static_cast<std::size_t>(topk.k_measured);
  const auto first = topk.values.begin();
  if (std::adjacent_find(first, first + k, std::not_equal_to<>()) ==
      first + k) {
    return fit;  // flat tail: coeff_c = 0, alpha = 1
  }

  // Ordinary least squares of y on x, accumulated around running means.
  const double log_p_plus = std::log(static_cast<double>(p_plus));
  const double log_mu_pplus = std::log(mu_pplus);
  std::vector<double> xs, ys;
  for (std::size_t j = 0; j < k; ++j) {
    const double mu = topk.values[j];
    if (!(mu > mu_pplus)) continue;
    const double i = static_cast<double>(j + 1);
    xs.push_back(std::log(log_p_plus - std::log(i)));
    ys.push_back(std::log(std::log(mu) - log_mu_pplus));
  }
  if (xs.size() < 2) {
    std::ostringstream msg;
    msg << "fit_tail has " << xs.size()
        << " usable points above mu_pplus; need at least 2";
    throw NumericalError(msg.str());
  }

  const double count = static_cast<double>(xs.size());
  double x_mean = 0.0, y_mean = 0.0;
  for (std::size_t j = 0; j < xs.size(); ++j) {
    x_mean += xs[j];
    y_mean += ys[j];
  }
  x_mean /= count;
  y_mean /= count;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t j = 0; j < xs.size(); ++j) {
    sxx += (xs[j] - x_mean) * (xs[j] - x_mean);
    sxy += (xs[j] - x_mean) * (ys[j] - y_mean);
  }
  const double slope = sxy / sxx;
  if (!(slope > 0.0) || !std::isfinite(slope)) {
    std::ostringstream msg;
    msg << "fit_tail produced non-positive exponent alpha = " << slope;
    throw NumericalError(msg.str());
  }
  fit.alpha = slope;
  fit.coeff_c = std::exp(y_mean - slope * x_mean);
  fit.k_used = static_cast<std::int64_t>(xs.size());
  return fit;
}

EigenSpectrum Extrapolate(const TailFit& fit, const EigenSpectrum& topk,
                          std::int64_t p) {
  topk.Validate();
  Require(fit.p_plus >= 1, "extrapolate needs p_plus >= 1");
  Require(p >= fit.p_plus, "extrapolate needs p >= p_plus");
  Require(fit.p_plus >= topk.k_measured,
          "extrapolate needs p_plus >= k_measured");

  EigenSpectrum out;
  out.total_dim = p;
  out.k_measured = topk.k_measured;
  out.source = topk.source.empty() ? "extrapolated"
                                   : topk.source + "+extrapolated";
  out.values.assign(static_cast<std::size_t>(p), 0.0);

  const auto k = static_cast<std::size_t>(topk.k_measured);
  std::copy(topk.values.begin(), topk.values.begin() + k, out.values.begin());
  double ceiling = k > 0 ? topk.values[k - 1]
                         : std::numeric_limits<double>::infinity();
  for (std::int64_t i = topk.k_measured + 1; i <= fit.p_plus; ++i) {
    ceiling = std::min(ceiling, fit.Evaluate(i));
    out.values[static_cast<std::size_t>(i - 1)] = ceiling;
  }
  return out;
}

}  // namespace curvmix
