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

#include "curvmix/trainer.h"

#include <cmath>
#include <numeric>
#include <sstream>

#include "curvmix/errors.h"
#include "curvmix/noisegen.h"
#include "curvmix/rng.h"

namespace curvmix {
namespace {

double Softplus(double z) {
  return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

double Sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double Score(const Eigen::VectorXd& weights, const Eigen::VectorXd& x) {
  const Eigen::Index f = x.size();
  return weights.head(f).dot(x) + weights(f);
}

}  // namespace

std::string ToString(ModelKind kind) {
  return kind == ModelKind::kLinear ? "linear" : "logistic";
}

ModelKind ParseModelKind(const std::string& name) {
  if (name == "linear") return ModelKind::kLinear;
  if (name == "logistic") return ModelKind::kLogistic;
  throw ArgumentError("unknown model kind '" + name +
                      "' (expected linear or logistic)");
}

void Dataset::Validate() const {
  Require(features.rows() == labels.size(),
          "dataset features and labels differ in length");
  Require(features.rows() >= 1 && features.cols() >= 1,
          "dataset must be non-empty");
  Require(features.allFinite() && labels.allFinite(),
          "dataset has missing or non-finite values");
}

void TrainConfig::Validate() const {
  Require(T >= 1, "T must be >= 1");
  Require(band >= 1 && band <= T, "band must lie in [1, T]");
  Require(batch >= 1, "batch must be >= 1");
  Require(clip > 0.0, "clip norm must be > 0");
  Require(sigma >= 0.0, "sigma must be >= 0");
  Require(eta > 0.0, "eta must be > 0");
}

std::vector<std::vector<std::int64_t>> PartitionSchedule(
    std::int64_t n, std::int64_t band, std::int64_t batch, std::int64_t T,
    std::uint64_t seed) {
  Require(band >= 1, "band must be >= 1");
  Require(n >= band, "schedule needs n >= band");
  Require(T >= 0, "T must be >= 0");
  Require(batch >= 1, "batch must be >= 1");
  const std::int64_t part_size = n / band;
  if (batch > part_size) {
    std::ostringstream msg;
    msg << "batch " << batch << " exceeds partition size floor(n / band) = "
        << part_size;
    throw ArgumentError(msg.str());
  }

  Rng rng(seed);
  std::vector<std::int64_t> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  for (std::size_t i = order.size(); i > 1; --i) {
    std::swap(order[i - 1], order[rng.UniformIndex(i)]);
  }

  std::vector<std::vector<std::int64_t>> batches;
  batches.reserve(static_cast<std::size_t>(T));
  for (std::int64_t t = 0; t < T; ++t) {
    const auto begin = order.begin() + (t % band) * part_size;
    std::vector<std::int64_t> part(begin, begin + part_size);
    // Partial Fisher-Yates: the first `batch` slots become the sample.
    for (std::int64_t i = 0; i < batch; ++i) {
      const auto j = i + static_cast<std::int64_t>(
                             rng.UniformIndex(static_cast<std::uint64_t>(part_size - i)));
      std::swap(part[i], part[j]);
    }
    part.resize(static_cast<std::size_t>(batch));
    batches.push_back(std::move(part));
  }
  return batches;
}

Eigen::VectorXd ClipGradient(const Eigen::VectorXd& g, double zeta) {
  Require(zeta > 0.0, "clip norm must be > 0");
  const double norm = g.norm();
  if (norm <= zeta) return g;
  return g * (zeta / norm);
}

double ExampleLoss(ModelKind kind, const Eigen::VectorXd& weights,
                   const Eigen::VectorXd& x, double y) {
  const double z = Score(weights, x);
  if (kind == ModelKind::kLinear) return 0.5 * (z - y) * (z - y);
  return Softplus(z) - y * z;
}

Eigen::VectorXd ExampleGradient(ModelKind kind, const Eigen::VectorXd& weights,
                                const Eigen::VectorXd& x, double y) {
  const double z = Score(weights, x);
  const double residual = kind == ModelKind::kLinear ? z - y : Sigmoid(z) - y;
  Eigen::VectorXd g(x.size() + 1);
  g.head(x.size()) = residual * x;
  g(x.size()) = residual;
  return g;
}

double DatasetLoss(ModelKind kind, const Dataset& data,
                   const ModelParams& params) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < data.features.rows(); ++i) {
    total += ExampleLoss(kind, params.weights,
                         data.features.row(i).transpose(), data.labels(i));
  }
  return total / static_cast<double>(data.n());
}

TrainResult PrivateTrain(const Dataset& data, const TrainConfig& config,
                         const MixingMatrix& mixing) {
  data.Validate();
  config.Validate();
  mixing.Validate();
  Require(mixing.T() == config.T, "mixing matrix must have T rows");
  Require(mixing.band <= config.band,
          "mixing band must not exceed the schedule band");

  TrainResult result;
  if (data.n() % config.band != 0) {
    std::ostringstream msg;
    msg << data.n() % config.band << " records left out of the " << config.band
        << " equal partitions";
    result.warnings.push_back(msg.str());
  }
  if (data.n() < config.band * config.batch) {
    result.warnings.push_back("n is smaller than band * batch");
  }

  const auto schedule = PartitionSchedule(data.n(), config.band, config.batch,
                                          config.T, DeriveSeed(config.seed, 1));
  const std::int64_t dim = data.f() + 1;
  NoiseStream noise(mixing, dim, DeriveSeed(config.seed, 2),
                    config.clip * config.sigma);

  Eigen::VectorXd weights = Eigen::VectorXd::Zero(dim);
  const double batch_size = static_cast<double>(config.batch);
  for (std::int64_t t = 0; t < config.T; ++t) {
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(dim);
    double loss = 0.0, norm_total = 0.0;
    std::int64_t clipped = 0;
    for (std::int64_t index : schedule[static_cast<std::size_t>(t)]) {
      const Eigen::VectorXd x = data.features.row(index).transpose();
      const double y = data.labels(index);
      loss += ExampleLoss(config.model, weights, x, y);
      const Eigen::VectorXd g = ExampleGradient(config.model, weights, x, y);
      const double norm = g.norm();
      norm_total += norm;
      if (norm > config.clip) ++clipped;
      sum += ClipGradient(g, config.clip);
    }
    if (!std::isfinite(loss)) {
      std::ostringstream msg;
      msg << "non-finite batch loss at step " << t
          << " (try a smaller eta or sigma)";
      throw NumericalError(msg.str());
    }
    const Eigen::VectorXd noisy = (sum + noise.Next()) / batch_size;
    weights -= config.eta * noisy;

    result.log.push_back({t, loss / batch_size, norm_total / batch_size,
                          static_cast<double>(clipped) / batch_size});
  }
  result.params.weights = std::move(weights);
  return result;
}

AccountantParams ComputeAccountantParams(std::int64_t n, std::int64_t batch,
                                         std::int64_t band, std::int64_t T) {
  Require(n >= 1 && batch >= 1 && band >= 1 && T >= 1,
          "accountant inputs must be positive");
  const std::int64_t part_size = n / band;
  if (part_size == 0) {
    throw ArgumentError("floor(n / band) is zero; sampling rate undefined");
  }
  Require(part_size >= batch, "batch exceeds floor(n / band)");
  AccountantParams out;
  out.q = static_cast<double>(batch) / static_cast<double>(part_size);
  // T batch^2 / (q n) = T batch part_size / n.
  const unsigned __int128 numerator = static_cast<unsigned __int128>(T) *
                                      static_cast<unsigned __int128>(batch) *
                                      static_cast<unsigned __int128>(part_size);
  const auto denominator = static_cast<unsigned __int128>(n);
  const unsigned __int128 ceiling = (numerator + denominator - 1) / denominator;
  Require(ceiling <= static_cast<unsigned __int128>(INT64_MAX),
          "composition count overflows 64 bits");
  out.compositions = static_cast<std::int64_t>(ceiling);
  return out;
}

Dataset MakeSyntheticLogistic(std::int64_t n, std::int64_t f,
                              std::uint64_t seed) {
  Require(n >= 1 && f >= 1, "synthetic dataset needs n, f >= 1");
  Rng rng(seed);
  Eigen::VectorXd scales(f), truth(f);
  for (std::int64_t j = 0; j < f; ++j) {
    scales(j) = 3.0 * std::pow(static_cast<double>(j + 1), -0.75);
    truth(j) = rng.Normal();
  }
  const double bias = 0.5 * rng.Normal();
  Dataset data;
  data.features.resize(n, f);
  data.labels.resize(n);
  for (std::int64_t i = 0; i < n; ++i) {
    double z = bias;
    for (std::int64_t j = 0; j < f; ++j) {
      data.features(i, j) = scales(j) * rng.Normal();
      z += truth(j) * data.features(i, j);
    }
    data.labels(i) = rng.Uniform() < Sigmoid(z) ? 1.0 : 0.0;
  }
  return data;
}

Eigen::MatrixXd LogisticHessianAtZero(const Eigen::MatrixXd& features) {
  Require(features.rows() >= 1, "hessian needs at least one example");
  Eigen::MatrixXd augmented(features.rows(), features.cols() + 1);
  augmented << features, Eigen::VectorXd::Ones(features.rows());
  Eigen::MatrixXd h = 0.25 * augmented.transpose() * augmented /
                      static_cast<double>(features.rows());
  return 0.5 * (h + h.transpose());
}

}  // namespace curvmix
