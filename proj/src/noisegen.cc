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

#include "curvmix/noisegen.h"

#include <algorithm>
#include <sstream>

#include "curvmix/parallel.h"
#include "curvmix/rng.h"

namespace curvmix {

Eigen::VectorXd RawNoise(std::uint64_t seed, std::int64_t step,
                         std::int64_t p) {
  Eigen::VectorXd z(p);
  FillStandardNormal(seed, static_cast<std::uint64_t>(step),
                     std::span<double>(z.data(), static_cast<std::size_t>(p)));
  return z;
}

NoiseStream::NoiseStream(std::shared_ptr<const MixingMatrix> mixing,
                         std::int64_t p, std::uint64_t seed, double scale)
    : mixing_(std::move(mixing)), p_(p), seed_(seed), scale_(scale) {
  Require(mixing_ != nullptr, "noise stream needs a mixing matrix");
  Require(mixing_->entries.rows() == mixing_->entries.cols(),
          "mixing matrix must be square");
  Require(mixing_->band >= 1, "mixing band must be >= 1");
  Require(p_ >= 1, "noise dimension must be >= 1");
}

NoiseStream::NoiseStream(const MixingMatrix& mixing, std::int64_t p,
                         std::uint64_t seed, double scale)
    : NoiseStream(std::make_shared<const MixingMatrix>(mixing), p, seed,
                  scale) {}

Eigen::VectorXd NoiseStream::Next() {
  if (step_ >= length()) {
    std::ostringstream msg;
    msg << "noise stream exhausted after " << length() << " steps";
    throw EndOfStreamError(msg.str());
  }
  const Eigen::MatrixXd& c = mixing_->entries;
  const std::int64_t t = step_;
  const double pivot = c(t, t);
  if (!(pivot > 0.0)) {
    std::ostringstream msg;
    msg << "mixing matrix has non-positive diagonal at row " << t;
    throw NumericalError(msg.str());
  }

  Eigen::VectorXd z = RawNoise(seed_, t, p_);
  // history_[h] holds z~_{t - size + h}.
  const std::int64_t first = t - static_cast<std::int64_t>(history_.size());
  for (std::size_t h = 0; h < history_.size(); ++h) {
    const double coeff = c(t, first + static_cast<std::int64_t>(h));
    if (coeff != 0.0) z.noalias() -= coeff * history_[h];
  }
  z /= pivot;

  if (mixing_->band > 1) {
    history_.push_back(z);
    if (static_cast<std::int64_t>(history_.size()) > mixing_->band - 1) {
      history_.pop_front();
    }
    peak_history_ = std::max(peak_history_, history_.size());
  }
  ++step_;
  return scale_ * z;
}

Eigen::MatrixXd EmpiricalCrossCovariance(const MixingMatrix& mixing,
                                         std::int64_t p, std::int64_t trials,
                                         std::uint64_t seed, int threads) {
  Require(trials >= 1, "covariance estimate needs trials >= 1");
  const std::int64_t T = mixing.T();
  auto shared = std::make_shared<const MixingMatrix>(mixing);
  // Fixed chunking, reduced in chunk order: thread count never changes bits.
  const std::size_t chunks =
      static_cast<std::size_t>(std::min<std::int64_t>(trials, 256));
  std::vector<Eigen::MatrixXd> partial(chunks, Eigen::MatrixXd::Zero(T, T));
  ParallelFor(chunks, threads, [&](std::size_t chunk) {
    const auto begin = static_cast<std::int64_t>(chunk) * trials /
                       static_cast<std::int64_t>(chunks);
    const auto end = static_cast<std::int64_t>(chunk + 1) * trials /
                     static_cast<std::int64_t>(chunks);
    Eigen::MatrixXd outputs(p, T);
    for (std::int64_t r = begin; r < end; ++r) {
      NoiseStream stream(shared, p, DeriveSeed(seed, r));
      for (std::int64_t t = 0; t < T; ++t) outputs.col(t) = stream.Next();
      partial[chunk].noalias() += outputs.transpose() * outputs;
    }
  });
  Eigen::MatrixXd total = Eigen::MatrixXd::Zero(T, T);
  for (const auto& m : partial) total += m;
  return total / static_cast<double>(p * trials);
}

}  // namespace curvmix
