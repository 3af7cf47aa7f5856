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

#include "curvmix/mixopt.h"

#include <algorithm>
#include <cmath>
#include <deque>
#include <optional>
#include <sstream>

#include "curvmix/banded_cholesky.h"
#include "curvmix/errors.h"

namespace curvmix {
namespace {

void CheckShapes(const BandedGram& X, const Eigen::MatrixXd& G) {
  Require(G.rows() == G.cols(), "workload must be square");
  Require(X.T() == G.rows(), "gram and workload dimensions differ");
}

double MaxAbs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double Dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Objective, free-entry gradient and the exact diagonal of the free-entry
// Hessian at one point, sharing the factor.
struct Evaluation {
  double value = 0.0;
  std::vector<double> gradient;
  std::vector<double> curvature;
  // Dense X^{-1} and X^{-1} G X^{-1}, kept only for Newton steps.
  Eigen::MatrixXd inverse;
  Eigen::MatrixXd sandwich;
};

std::optional<Evaluation> Evaluate(const BandedGram& X,
                                   const Eigen::MatrixXd& G,
                                   bool with_gradient,
                                   bool keep_matrices = false) {
  const auto chol = BandedCholesky::TryFactor(X.entries, X.band);
  if (!chol) return std::nullopt;
  const Eigen::MatrixXd solved = chol->Solve(G);  // X^{-1} G
  Evaluation out;
  out.value = solved.trace();
  if (!with_gradient) return out;
  // X^{-1} G X^{-1} = X^{-1} (X^{-1} G)^T for symmetric G.
  const Eigen::MatrixXd sandwich = chol->Solve(solved.transpose());
  const Eigen::MatrixXd inverse = chol->InverseBand();
  const Eigen::Index T = X.T();
  for (Eigen::Index d = 1; d < X.band; ++d) {
    for (Eigen::Index i = 0; i + d < T; ++i) {
      const Eigen::Index j = i + d;
      const double s_ij = 0.5 * (sandwich(i, j) + sandwich(j, i));
      out.gradient.push_back(-2.0 * s_ij);
      // Second derivative along X(i,j) = X(j,i) = theta.
      const double h = 2.0 * (2.0 * inverse(i, d) * s_ij +
                              inverse(j, 0) * sandwich(i, i) +
                              inverse(i, 0) * sandwich(j, j));
      out.curvature.push_back(h);
    }
  }
  if (keep_matrices) {
    out.inverse = chol->Solve(Eigen::MatrixXd::Identity(T, T));
    out.sandwich = sandwich;
  }
  return out;
}

std::vector<std::pair<Eigen::Index, Eigen::Index>> FreeSlots(Eigen::Index T,
                                                             Eigen::Index band) {
  std::vector<std::pair<Eigen::Index, Eigen::Index>> slots;
  for (Eigen::Index d = 1; d < band; ++d) {
    for (Eigen::Index i = 0; i + d < T; ++i) slots.emplace_back(i, i + d);
  }
  return slots;
}

// Free-entry problems up to this size get a dense Newton system; larger ones
// are solved by preconditioned conjugate gradients on Hessian products.
constexpr std::size_t kDenseNewtonMaxFree = 400;

// -(H + damping * diag(H))^{-1} g with the exact Hessian H over the free
// entries; empty when no descent direction comes out of it.
std::vector<double> NewtonDirection(const Evaluation& at, Eigen::Index T,
                                    Eigen::Index band, double damping) {
  const auto slots = FreeSlots(T, band);
  const auto m = static_cast<Eigen::Index>(slots.size());
  const Eigen::MatrixXd& a = at.inverse;
  const Eigen::MatrixXd& s = at.sandwich;
  const Eigen::Map<const Eigen::VectorXd> g(at.gradient.data(), m);
  Eigen::VectorXd diag(m);
  for (Eigen::Index k = 0; k < m; ++k) {
    diag(k) = (1.0 + damping) * std::max(at.curvature[k], 1e-300);
  }

  Eigen::VectorXd step;
  if (static_cast<std::size_t>(m) <= kDenseNewtonMaxFree) {
    Eigen::MatrixXd hessian(m, m);
    for (Eigen::Index k = 0; k < m; ++k) {
      const auto [i, j] = slots[k];
      for (Eigen::Index l = k; l < m; ++l) {
        const auto [p, q] = slots[l];
        const double h = 2.0 * (a(j, p) * s(i, q) + a(j, q) * s(i, p) +
                                a(i, p) * s(j, q) + a(i, q) * s(j, p));
        hessian(k, l) = h;
        hessian(l, k) = h;
      }
    }
    hessian.diagonal() = diag;
    const Eigen::LLT<Eigen::MatrixXd> llt(hessian);
    if (llt.info() != Eigen::Success) return {};
    step = -llt.solve(g);
  } else {
    // H v = 2 [(A V S)_ij + (A V S)_ji], with V the banded symmetric matrix
    // holding v; W = V A gives (A V S)_ij = W.col(i) . S.col(j).
    Eigen::MatrixXd w(T, T);
    auto apply = [&](const Eigen::VectorXd& v) {
      w.setZero();
      for (Eigen::Index c = 0; c < T; ++c) {
        for (Eigen::Index k = 0; k < m; ++k) {
          const auto [i, j] = slots[k];
          w(i, c) += v(k) * a(j, c);
          w(j, c) += v(k) * a(i, c);
        }
      }
      Eigen::VectorXd out(m);
      for (Eigen::Index k = 0; k < m; ++k) {
        const auto [i, j] = slots[k];
        out(k) = 2.0 * (w.col(i).dot(s.col(j)) + w.col(j).dot(s.col(i))) +
                 damping * std::max(at.curvature[k], 1e-300) * v(k);
      }
      return out;
    };
    // Truncated, diagonally preconditioned conjugate gradients.
    step = Eigen::VectorXd::Zero(m);
    Eigen::VectorXd r = -g;
    Eigen::VectorXd z = r.cwiseQuotient(diag);
    Eigen::VectorXd d = z;
    double rz = r.dot(z);
    const double stop = std::min(1e-2, g.norm()) * g.norm();
    for (int it = 0; it < 1000 && r.norm() > stop; ++it) {
      const Eigen::VectorXd hd = apply(d);
      const double curvature = d.dot(hd);
      if (!(curvature > 0.0)) {
        if (it == 0) step = z;
        break;
      }
      const double alpha = rz / curvature;
      step += alpha * d;
      r -= alpha * hd;
      z = r.cwiseQuotient(diag);
      const double rz_next = r.dot(z);
      d = z + (rz_next / rz) * d;
      rz = rz_next;
    }
  }
  if (!step.allFinite()) return {};
  return {step.data(), step.data() + step.size()};
}

// A point the solver may accept: factorable in both row orders, so the
// mixing matrix can always be recovered from it.
bool Factorable(const BandedGram& X) {
  return BandedCholesky::TryFactor(X.entries.reverse(), X.band).has_value();
}

// Two-loop recursion: returns -H g for the limited-memory inverse Hessian,
// seeded with the inverse of the exact Hessian diagonal.
std::vector<double> Direction(
    const std::vector<double>& g, const std::vector<double>& curvature,
    const std::deque<std::pair<std::vector<double>, std::vector<double>>>&
        pairs) {
  std::vector<double> q = g;
  std::vector<double> rho(pairs.size()), a(pairs.size());
  for (std::size_t k = pairs.size(); k-- > 0;) {
    const auto& [s, y] = pairs[k];
    rho[k] = 1.0 / Dot(y, s);
    a[k] = rho[k] * Dot(s, q);
    for (std::size_t i = 0; i < q.size(); ++i) q[i] -= a[k] * y[i];
  }
  double largest = 0.0;
  for (double h : curvature) largest = std::max(largest, h);
  for (std::size_t i = 0; i < q.size(); ++i) {
    // Guard against vanishing curvature on entries the workload ignores.
    q[i] /= std::max(curvature[i], 1e-12 * largest);
  }
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const auto& [s, y] = pairs[k];
    const double b = rho[k] * Dot(y, q);
    for (std::size_t i = 0; i < q.size(); ++i) q[i] += (a[k] - b) * s[i];
  }
  for (double& x : q) x = -x;
  return q;
}

}  // namespace

BandedGram BandedGram::Identity(Eigen::Index T, Eigen::Index band) {
  return {Eigen::MatrixXd::Identity(T, T), band};
}

void BandedGram::Validate() const {
  const Eigen::Index n = T();
  Require(entries.cols() == n, "gram must be square");
  Require(band >= 1, "gram band must be >= 1");
  for (Eigen::Index i = 0; i < n; ++i) {
    Require(entries(i, i) == 1.0, "gram diagonal must be exactly 1");
    for (Eigen::Index j = 0; j < n; ++j) {
      Require(entries(i, j) == entries(j, i), "gram must be symmetric");
      if (std::abs(i - j) >= band) {
        Require(entries(i, j) == 0.0, "gram has entries outside its band");
      }
    }
  }
}

MixingMatrix MixingMatrix::Identity(Eigen::Index T) {
  return {Eigen::MatrixXd::Identity(T, T), 1};
}

void MixingMatrix::Validate() const {
  const Eigen::Index n = T();
  Require(entries.cols() == n, "mixing matrix must be square");
  Require(band >= 1, "mixing band must be >= 1");
  for (Eigen::Index i = 0; i < n; ++i) {
    Require(entries(i, i) > 0.0, "mixing diagonal must be positive");
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j > i || i - j >= band) {
        Require(entries(i, j) == 0.0,
                "mixing matrix must be banded lower triangular");
      }
    }
  }
}

double Objective(const BandedGram& X, const Eigen::MatrixXd& G) {
  CheckShapes(X, G);
  const BandedCholesky chol(X.entries, X.band);
  return chol.Solve(G).trace();
}

double Objective(const BandedGram& X, const WorkloadMatrix& G) {
  return Objective(X, G.entries);
}

Eigen::MatrixXd ObjectiveGradient(const BandedGram& X,
                                  const Eigen::MatrixXd& G) {
  CheckShapes(X, G);
  const BandedCholesky chol(X.entries, X.band);
  const Eigen::MatrixXd solved = chol.Solve(G);
  Eigen::MatrixXd grad = -chol.Solve(solved.transpose());
  for (Eigen::Index i = 0; i < grad.rows(); ++i) {
    for (Eigen::Index j = 0; j < grad.cols(); ++j) {
      if (i == j || std::abs(i - j) >= X.band) grad(i, j) = 0.0;
    }
  }
  return grad;
}

std::vector<double> FreeEntries(const BandedGram& X) {
  std::vector<double> out;
  for (Eigen::Index d = 1; d < X.band; ++d) {
    for (Eigen::Index i = 0; i + d < X.T(); ++i) {
      out.push_back(X.entries(i, i + d));
    }
  }
  return out;
}

BandedGram FromFreeEntries(Eigen::Index T, Eigen::Index band,
                           std::span<const double> free) {
  BandedGram X = BandedGram::Identity(T, band);
  std::size_t at = 0;
  for (Eigen::Index d = 1; d < band; ++d) {
    for (Eigen::Index i = 0; i + d < T; ++i) {
      Require(at < free.size(), "too few free entries for (T, band)");
      X.entries(i, i + d) = X.entries(i + d, i) = free[at++];
    }
  }
  Require(at == free.size(), "too many free entries for (T, band)");
  return X;
}

std::vector<double> FreeEntryGradient(const BandedGram& X,
                                      const Eigen::MatrixXd& G) {
  CheckShapes(X, G);
  auto eval = Evaluate(X, G, true);
  if (!eval) throw NotPositiveDefiniteError("gram is not positive definite");
  return eval->gradient;
}

MixingSolution SolveMixing(const Eigen::MatrixXd& G, Eigen::Index band,
                           const SolveOptions& options) {
  const Eigen::Index T = G.rows();
  Require(G.cols() == T && T >= 1, "workload must be a non-empty square");
  Require(band >= 1, "band must be >= 1");
  if (band > T) {
    std::ostringstream msg;
    msg << "band " << band << " exceeds T = " << T;
    throw ArgumentError(msg.str());
  }

  MixingSolution out;
  out.gram = BandedGram::Identity(T, band);
  const double scale = G.trace() / static_cast<double>(T);
  if (!(scale > 0.0)) {
    // G = 0 (the only PSD matrix with zero trace): every X is optimal.
    out.report = {0.0, 0, 0, 0.0, true};
    if (options.on_accept) options.on_accept(out.gram, 0.0);
    return out;
  }
  const Eigen::MatrixXd normalized = G / scale;

  std::vector<double> theta = FreeEntries(out.gram);
  const bool newton =
      static_cast<int>(theta.size()) <= options.newton_max_free;
  std::optional<Evaluation> current =
      Evaluate(out.gram, normalized, true, newton);
  int evaluations = 1;
  if (options.on_accept) options.on_accept(out.gram, current->value * scale);

  enum class Step { kNewton, kQuasiNewton, kScaledGradient };
  using Pairs = std::deque<std::pair<std::vector<double>, std::vector<double>>>;
  Pairs pairs;
  const Pairs no_pairs;
  // Levenberg-Marquardt damping of the Newton system: relaxed after full
  // steps, tightened after backtracking.
  double damping = 1.0;
  int iter = 0;
  bool converged = false;
  while (true) {
    if (MaxAbs(current->gradient) <= options.tol) {
      converged = true;
      break;
    }
    if (iter >= options.max_iters) break;

    std::vector<Step> plan;
    if (newton) plan.push_back(Step::kNewton);
    if (!pairs.empty()) plan.push_back(Step::kQuasiNewton);
    plan.push_back(Step::kScaledGradient);

    std::optional<Evaluation> trial;
    std::vector<double> next(theta.size());
    bool accepted = false;
    for (Step kind : plan) {
      const std::vector<double> direction =
          kind == Step::kNewton
              ? NewtonDirection(*current, T, band, damping)
              : Direction(current->gradient, current->curvature,
                          kind == Step::kQuasiNewton ? pairs : no_pairs);
      const double slope = Dot(direction, current->gradient);
      if (direction.empty() || !(slope < 0.0)) {
        if (kind == Step::kNewton) damping = damping * 4.0 + 1e-3;
        continue;
      }
      // A bare diagonal step gets no more than 0.25 per entry at first.
      double step = 1.0;
      if (kind == Step::kScaledGradient) {
        step = std::min(1.0, 0.25 / MaxAbs(direction));
      }
      for (int halving = 0; halving < 60; ++halving, step *= 0.5) {
        for (std::size_t i = 0; i < theta.size(); ++i) {
          next[i] = theta[i] + step * direction[i];
        }
        const BandedGram candidate = FromFreeEntries(T, band, next);
        trial = Evaluate(candidate, normalized, true, newton);
        ++evaluations;
        if (!trial || !Factorable(candidate)) continue;  // left the PD cone
        if (trial->value <= current->value + 1e-4 * step * slope) {
          out.gram = candidate;
          accepted = true;
          break;
        }
      }
      if (kind == Step::kNewton) {
        damping = accepted && step == 1.0 ? damping * 0.25 : damping * 4.0 + 1e-3;
        if (damping < 1e-12) damping = 0.0;
      }
      if (accepted) break;
      if (kind == Step::kQuasiNewton) pairs.clear();
    }
    if (!accepted) break;  // no descent left at working precision

    std::vector<double> s(theta.size()), y(theta.size());
    for (std::size_t i = 0; i < theta.size(); ++i) {
      s[i] = next[i] - theta[i];
      y[i] = trial->gradient[i] - current->gradient[i];
    }
    if (Dot(s, y) > 1e-16 * std::sqrt(Dot(s, s) * Dot(y, y))) {
      pairs.emplace_back(std::move(s), std::move(y));
      if (static_cast<int>(pairs.size()) > options.memory) pairs.pop_front();
    }
    theta = next;
    current = std::move(trial);
    ++iter;
    if (options.on_accept) options.on_accept(out.gram, current->value * scale);
  }

  out.report.objective_value = Objective(out.gram, G);
  out.report.iterations = iter;
  out.report.evaluations = evaluations;
  out.report.kkt_residual = MaxAbs(current->gradient);
  out.report.converged = converged;
  return out;
}

MixingSolution SolveMixing(const WorkloadMatrix& G, Eigen::Index band,
                           const SolveOptions& options) {
  return SolveMixing(G.entries, band, options);
}

MixingMatrix Factor(const BandedGram& X) {
  const Eigen::Index n = X.T();
  Require(X.entries.cols() == n, "gram must be square");
  const Eigen::MatrixXd reversed = X.entries.reverse();
  const Eigen::MatrixXd lower = BandedCholesky(reversed, X.band).Lower();
  // C = J L^T J, so C^T C = J L L^T J = X.
  MixingMatrix out;
  out.band = X.band;
  out.entries = lower.transpose().reverse();
  return out;
}

double ReductionInObjective(const WorkloadMatrix& G,
                            const BandedGram& X_approx,
                            const BandedGram& X_star) {
  Require(X_approx.T() == X_star.T(), "gram dimensions differ");
  return Objective(X_approx, G) - Objective(X_star, G);
}

}  // namespace curvmix
