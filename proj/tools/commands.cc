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

#include "commands.h"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "curvmix/errors.h"
#include "curvmix/io.h"
#include "curvmix/mixopt.h"
#include "curvmix/noisegen.h"
#include "curvmix/parallel.h"
#include "curvmix/quadsim.h"
#include "curvmix/rng.h"
#include "curvmix/spectrum.h"
#include "curvmix/trainer.h"
#include "curvmix/workload.h"

namespace curvmix::cli {
namespace {

struct GlobalOptions {
  std::uint64_t seed = 0;
  int threads = 0;
  std::string out;
};

void Warn(const std::string& message) {
  std::cerr << "curvmix: warning: " << message << '\n';
}

// Writes text to --out, or to stdout when no path was given.
void Emit(const GlobalOptions& g, const std::string& text) {
  if (g.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(g.out);
  if (!out) throw IoError("cannot open '" + g.out + "' for writing");
  out << text;
  if (!out) throw IoError("failed writing '" + g.out + "'");
}

void EmitJson(const GlobalOptions& g, const Json& json) {
  Emit(g, json.dump(2) + "\n");
}

const std::string& RequireOut(const GlobalOptions& g, const char* what) {
  if (g.out.empty()) {
    throw ArgumentError(std::string(what) +
                        " writes a CSV with a sidecar; pass --out PATH");
  }
  return g.out;
}

// ---------------------------------------------------------------- spectrum

void AddSpectrum(CLI::App& app, GlobalOptions& g) {
  CLI::App* cmd = app.add_subcommand("spectrum", "Eigenvalue tooling");
  cmd->require_subcommand(1);

  struct LanczosArgs {
    std::string matrix;
    int k = 10;
    int max_iters = 0;
    double tol = LanczosOptions{}.tol;
  };
  auto lanczos = std::make_shared<LanczosArgs>();
  CLI::App* lz = cmd->add_subcommand("lanczos", "Top-k eigenvalues by Lanczos");
  lz->add_option("--matrix", lanczos->matrix, "Symmetric matrix CSV")->required();
  lz->add_option("--k", lanczos->k, "Number of eigenvalues")->capture_default_str();
  lz->add_option("--max-iters", lanczos->max_iters,
                 "Iteration budget (default: min(dim, max(4k, 100)))");
  lz->add_option("--tol", lanczos->tol, "Relative residual tolerance")
      ->capture_default_str();
  lz->callback([lanczos, &g] {
    const Eigen::MatrixXd m = ReadMatrixCsv(lanczos->matrix);
    const auto dim = static_cast<int>(m.rows());
    const int budget = lanczos->max_iters > 0
                           ? lanczos->max_iters
                           : std::min(dim, std::max(4 * lanczos->k, 100));
    LanczosOptions opts;
    opts.tol = lanczos->tol;
    const LanczosResult r = LanczosTopK(SymmetricOperator::FromMatrix(m),
                                        lanczos->k, budget, g.seed, opts);
    if (!r.converged) {
      Warn("Lanczos did not converge within " + std::to_string(budget) +
           " iterations");
    }
    EmitJson(g, ToJson(r.spectrum));
  });

  auto dense_matrix = std::make_shared<std::string>();
  auto dense_cap = std::make_shared<Eigen::Index>(kDenseEigsDefaultCap);
  CLI::App* dn = cmd->add_subcommand("dense", "Full spectrum of a small matrix");
  dn->add_option("--matrix", *dense_matrix, "Symmetric matrix CSV")->required();
  dn->add_option("--cap", *dense_cap, "Largest accepted dimension")
      ->capture_default_str();
  dn->callback([dense_matrix, dense_cap, &g] {
    EmitJson(g, ToJson(DenseEigs(ReadMatrixCsv(*dense_matrix), *dense_cap)));
  });

  auto trunc_in = std::make_shared<std::string>();
  CLI::App* tr = cmd->add_subcommand("truncate", "Zero out negative eigenvalues");
  tr->add_option("--in", *trunc_in, "Spectrum JSON")->required();
  tr->callback([trunc_in, &g] {
    EmitJson(g, ToJson(TruncateNegative(ReadSpectrum(*trunc_in))));
  });

  struct FitArgs {
    std::string topk;
    std::int64_t p_plus = 0;
    double mu_pplus = 0.0;
  };
  auto fit = std::make_shared<FitArgs>();
  CLI::App* ft = cmd->add_subcommand("fit", "Fit the anchored power-law tail");
  ft->add_option("--topk", fit->topk, "Measured spectrum JSON")->required();
  ft->add_option("--p-plus", fit->p_plus, "Index where the tail ends")->required();
  ft->add_option("--mu-pplus", fit->mu_pplus, "Eigenvalue at the end index")
      ->required();
  ft->callback([fit, &g] {
    EmitJson(g, ToJson(FitTail(ReadSpectrum(fit->topk), fit->p_plus, fit->mu_pplus)));
  });

  struct ExtrapolateArgs {
    std::string fit;
    std::string topk;
    std::int64_t p = 0;
  };
  auto ex = std::make_shared<ExtrapolateArgs>();
  CLI::App* et = cmd->add_subcommand("extrapolate",
                                     "Measured values followed by the fitted tail");
  et->add_option("--fit", ex->fit, "TailFit JSON")->required();
  et->add_option("--topk", ex->topk, "Measured spectrum JSON")->required();
  et->add_option("--p", ex->p, "Total dimension")->required();
  et->callback([ex, &g] {
    EmitJson(g, ToJson(Extrapolate(ReadTailFit(ex->fit), ReadSpectrum(ex->topk), ex->p)));
  });
}

// ---------------------------------------------------------------- workload

void AddWorkload(CLI::App& app, GlobalOptions& g) {
  struct Args {
    std::string kind = "curvature";
    std::string spectrum;
    double eta = 0.0;
    std::int64_t T = 0;
    bool no_bucketing = false;
    double ridge = 0.0;
  };
  auto a = std::make_shared<Args>();
  CLI::App* cmd = app.add_subcommand("workload", "Build a T x T workload matrix");
  cmd->add_option("--kind", a->kind, "curvature | identity | prefix")
      ->capture_default_str();
  cmd->add_option("--spectrum", a->spectrum, "Spectrum JSON (curvature only)");
  cmd->add_option("--eta", a->eta, "Learning rate (curvature only)");
  cmd->add_option("--T", a->T, "Number of iterations")->required();
  cmd->add_flag("--no-bucketing", a->no_bucketing,
                "Sum every eigenvalue even for long spectra");
  cmd->add_option("--ridge", a->ridge,
                  "Add ridge * Tr(G)/T to the diagonal")
      ->capture_default_str();
  cmd->callback([a, &g] {
    const std::string& out = RequireOut(g, "workload");
    WorkloadMatrix w;
    switch (ParseWorkloadKind(a->kind)) {
      case WorkloadKind::kCurvature:
        if (a->spectrum.empty()) {
          throw ArgumentError("curvature workload needs --spectrum");
        }
        w = CurvatureWorkload(ReadSpectrum(a->spectrum), a->eta, a->T,
                              !a->no_bucketing);
        if (w.divergent) {
          Warn("eta * max eigenvalue >= 2: noise-free descent diverges");
        }
        break;
      case WorkloadKind::kIdentity:
        w = IdentityWorkload(a->T);
        break;
      case WorkloadKind::kPrefix:
        w = PrefixWorkload(a->T);
        break;
    }
    WriteWorkload(out, AddRidge(std::move(w), a->ridge));
  });
}

// ---------------------------------------------------------- optimize/factor

void AddOptimize(CLI::App& app, GlobalOptions& g) {
  struct Args {
    std::string workload;
    Eigen::Index band = 1;
    double tol = SolveOptions{}.tol;
    int max_iters = SolveOptions{}.max_iters;
    std::string report;
  };
  auto a = std::make_shared<Args>();
  CLI::App* cmd = app.add_subcommand("optimize", "Solve for the banded Gram matrix");
  cmd->add_option("--workload", a->workload, "Workload CSV")->required();
  cmd->add_option("--band", a->band, "Band size b")->required();
  cmd->add_option("--tol", a->tol, "Stationarity tolerance")->capture_default_str();
  cmd->add_option("--max-iters", a->max_iters, "Iteration cap")->capture_default_str();
  cmd->add_option("--report", a->report, "Also write the solve report here");
  cmd->callback([a, &g] {
    const std::string& out = RequireOut(g, "optimize");
    SolveOptions opts;
    opts.tol = a->tol;
    opts.max_iters = a->max_iters;
    const MixingSolution s = SolveMixing(ReadWorkload(a->workload), a->band, opts);
    if (!s.report.converged) Warn("solver stopped before reaching the tolerance");
    WriteGram(out, s.gram);
    const Json report = ToJson(s.report);
    if (!a->report.empty()) WriteJson(a->report, report);
    std::cout << report.dump(2) << '\n';
  });
}

void AddFactor(CLI::App& app, GlobalOptions& g) {
  auto gram = std::make_shared<std::string>();
  CLI::App* cmd = app.add_subcommand("factor", "Banded mixing matrix C with C^T C = X");
  cmd->add_option("--gram", *gram, "Gram CSV")->required();
  cmd->callback([gram, &g] {
    WriteMixing(RequireOut(g, "factor"), Factor(ReadGram(*gram)));
  });
}

// ------------------------------------------------------------------- noise

void AddNoise(CLI::App& app, GlobalOptions& g) {
  struct Args {
    std::string mixing;
    std::int64_t p = 1;
    std::int64_t steps = -1;
    double scale = 1.0;
  };
  auto a = std::make_shared<Args>();
  CLI::App* cmd = app.add_subcommand("noise", "Dump correlated noise, one row per step");
  cmd->add_option("--mixing", a->mixing, "Mixing CSV")->required();
  cmd->add_option("--p", a->p, "Noise dimension")->capture_default_str();
  cmd->add_option("--steps", a->steps, "Rows to emit (default: T)");
  cmd->add_option("--scale", a->scale, "Output multiplier")->capture_default_str();
  cmd->callback([a, &g] {
    NoiseStream stream(ReadMixing(a->mixing), a->p, g.seed, a->scale);
    const std::int64_t steps = a->steps < 0 ? stream.length() : a->steps;
    Require(steps <= stream.length(), "--steps exceeds the mixing matrix length");
    Eigen::MatrixXd rows(steps, a->p);
    for (std::int64_t t = 0; t < steps; ++t) rows.row(t) = stream.Next().transpose();
    std::ostringstream text;
    WriteMatrixCsv(text, rows);
    Emit(g, text.str());
  });
}

// ---------------------------------------------------------------- simulate

std::vector<Eigen::Index> ParseBands(const std::string& text) {
  std::vector<Eigen::Index> bands;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      const long long v = std::stoll(item, &used);
      if (used != item.size() || v < 1) throw std::invalid_argument(item);
      bands.push_back(static_cast<Eigen::Index>(v));
    } catch (const std::exception&) {
      throw ArgumentError("bad band value '" + item + "' in --bands");
    }
  }
  Require(!bands.empty(), "--bands must list at least one band");
  return bands;
}

QuadProblem RandomProblem(std::int64_t p, std::int64_t T, double eta,
                          std::uint64_t seed) {
  Rng rng(DeriveSeed(seed, 0));
  Eigen::MatrixXd a(p, p);
  for (std::int64_t i = 0; i < p; ++i) {
    for (std::int64_t j = 0; j < p; ++j) a(i, j) = rng.Normal();
  }
  QuadProblem q;
  q.hessian = a.transpose() * a / static_cast<double>(p);
  q.target.resize(p);
  for (std::int64_t i = 0; i < p; ++i) q.target(i) = rng.Normal();
  q.w0 = Eigen::VectorXd::Zero(p);
  q.T = T;
  q.eta = eta;
  return q;
}

void AddSimulate(CLI::App& app, GlobalOptions& g) {
  struct Args {
    std::int64_t p = 4;
    std::int64_t T = 8;
    std::int64_t trials = 10000;
    double eta = 0.0;
    std::string bands = "1";
    std::string spectrum;
    std::string workload_kind = "curvature";
    double noise_scale = 1.0;
    std::string report;
  };
  auto a = std::make_shared<Args>();
  CLI::App* cmd = app.add_subcommand(
      "simulate", "Closed-form vs Monte-Carlo excess loss on a quadratic");
  cmd->add_option("--p", a->p, "Dimension of the random Hessian")->capture_default_str();
  cmd->add_option("--T", a->T, "Iterations")->capture_default_str();
  cmd->add_option("--trials", a->trials, "Monte-Carlo trials")->capture_default_str();
  cmd->add_option("--eta", a->eta, "Learning rate (default: 1 / max eigenvalue)");
  cmd->add_option("--bands", a->bands, "Comma-separated band sizes")
      ->capture_default_str();
  cmd->add_option("--spectrum", a->spectrum,
                  "Use Diag(spectrum) as the Hessian instead of a random one");
  cmd->add_option("--workload-kind", a->workload_kind,
                  "Workload the mixing matrix is optimized for")
      ->capture_default_str();
  cmd->add_option("--noise-scale", a->noise_scale, "Noise multiplier")
      ->capture_default_str();
  cmd->add_option("--report", a->report, "JSON report path");
  cmd->callback([a, &g] {
    const std::vector<Eigen::Index> bands = ParseBands(a->bands);
    QuadProblem q;
    EigenSpectrum spectrum;
    if (!a->spectrum.empty()) {
      spectrum = ReadSpectrum(a->spectrum);
      const auto p = static_cast<std::int64_t>(spectrum.values.size());
      q = QuadProblem::FromSpectrum(spectrum, Eigen::VectorXd::Ones(p),
                                    Eigen::VectorXd::Zero(p), 1.0, a->T);
    } else {
      Require(a->p >= 1, "--p must be >= 1");
      q = RandomProblem(a->p, a->T, 1.0, g.seed);
      spectrum = TruncateNegative(DenseEigs(q.hessian));
    }
    const double top = spectrum.values.empty() ? 0.0 : spectrum.values.front();
    q.eta = a->eta > 0.0 ? a->eta : (top > 0.0 ? 1.0 / top : 1.0);
    q.Validate();

    const WorkloadMatrix curvature = CurvatureWorkload(spectrum, q.eta, q.T);
    if (curvature.divergent) {
      Warn("eta * max eigenvalue >= 2: noise-free descent diverges");
    }
    WorkloadMatrix target;
    switch (ParseWorkloadKind(a->workload_kind)) {
      case WorkloadKind::kCurvature: target = curvature; break;
      case WorkloadKind::kIdentity: target = IdentityWorkload(q.T); break;
      case WorkloadKind::kPrefix: target = PrefixWorkload(q.T); break;
    }

    std::ostringstream csv;
    csv << "band,closed_form,mc_mean,mc_std_error\n";
    Json sweep = Json::array();
    Json last;
    for (Eigen::Index band : bands) {
      const MixingSolution s = SolveMixing(target, band);
      if (!s.report.converged) {
        Warn("solver did not converge for band " + std::to_string(band));
      }
      const double closed = ClosedFormExcess(spectrum, q.eta, q.T, s.gram,
                                             a->noise_scale);
      const SimulationResult r = SimulateExcess(q, Factor(s.gram), a->noise_scale,
                                                a->trials, g.seed, g.threads);
      csv << band << ',' << FormatDouble(closed) << ',' << FormatDouble(r.mean)
          << ',' << FormatDouble(r.std_error) << '\n';
      last = Json{{"band", band},
                  {"closed_form", closed},
                  {"mc_mean", r.mean},
                  {"mc_std_error", r.std_error},
                  {"max_identity_error", r.max_identity_error}};
      sweep.push_back(last);
    }
    Emit(g, csv.str());
    if (!a->report.empty()) {
      Json report = {{"closed_form", last["closed_form"]},
                     {"mc_mean", last["mc_mean"]},
                     {"mc_std_error", last["mc_std_error"]},
                     {"trials", a->trials},
                     {"seed", g.seed},
                     {"params",
                      {{"p", q.dim()},
                       {"T", q.T},
                       {"eta", q.eta},
                       {"band", last["band"]},
                       {"noise_scale", a->noise_scale},
                       {"workload_kind", a->workload_kind},
                       {"spectrum", a->spectrum}}},
                     {"sweep", sweep}};
      WriteJson(a->report, report);
    }
  });
}

// ------------------------------------------------------------------- train

MixingMatrix CurvatureMixing(const Dataset& data, const TrainConfig& cfg,
                             double ridge, int solver_iters) {
  Eigen::MatrixXd h = LogisticHessianAtZero(data.features);
  // Squared loss has four times the curvature of the logistic loss at zero.
  if (cfg.model == ModelKind::kLinear) h *= 4.0;
  const EigenSpectrum s = TruncateNegative(DenseEigs(h));
  const WorkloadMatrix w = AddRidge(CurvatureWorkload(s, cfg.eta, cfg.T), ridge);
  if (w.divergent) Warn("eta * max curvature >= 2 for the training loss");
  SolveOptions opts;
  opts.max_iters = solver_iters;
  const MixingSolution sol = SolveMixing(w, cfg.band, opts);
  if (!sol.report.converged) Warn("mixing solver stopped before the tolerance");
  return Factor(sol.gram);
}

void AddTrain(CLI::App& app, GlobalOptions& g) {
  struct Args {
    std::string data;
    std::string synthetic;
    std::string model = "logistic";
    std::string mixing = "identity";
    std::string log;
    std::string accountant;
    int solver_iters = SolveOptions{}.max_iters;
    double ridge = 1e-4;
    TrainConfig cfg;
  };
  auto a = std::make_shared<Args>();
  a->cfg.T = 100;
  a->cfg.batch = 32;
  CLI::App* cmd = app.add_subcommand("train", "Private SGD with correlated noise");
  auto* source = cmd->add_option_group("source");
  source->add_option("--data", a->data, "Dataset CSV with a label column");
  source->add_option("--synthetic", a->synthetic,
                     "Generate a logistic task of N rows and F features, as N,F");
  source->require_option(1);
  cmd->add_option("--model", a->model, "linear | logistic")->capture_default_str();
  cmd->add_option("--mixing", a->mixing,
                  "Mixing CSV, 'identity', or 'auto' (optimize for the loss curvature)")
      ->capture_default_str();
  cmd->add_option("--T", a->cfg.T, "Iterations")->capture_default_str();
  cmd->add_option("--band", a->cfg.band, "Band / number of partitions")
      ->capture_default_str();
  cmd->add_option("--batch", a->cfg.batch, "Batch size")->capture_default_str();
  cmd->add_option("--clip", a->cfg.clip, "Per-example clip norm")->capture_default_str();
  cmd->add_option("--sigma", a->cfg.sigma, "Noise multiplier")->capture_default_str();
  cmd->add_option("--eta", a->cfg.eta, "Learning rate")->capture_default_str();
  cmd->add_option("--ridge", a->ridge,
                  "Workload ridge for --mixing auto, relative to Tr(G)/T")
      ->capture_default_str();
  cmd->add_option("--solver-iters", a->solver_iters,
                  "Iteration cap for --mixing auto")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd->add_option("--log", a->log, "Per-step training log CSV");
  cmd->add_option("--accountant", a->accountant,
                  "Write the accountant hand-off JSON here");
  cmd->callback([a, &g] {
    TrainConfig cfg = a->cfg;
    cfg.seed = g.seed;
    cfg.model = ParseModelKind(a->model);

    Dataset data;
    if (!a->data.empty()) {
      data = ReadDatasetCsv(a->data);
    } else {
      long long n = 0, f = 0;
      char comma = 0;
      std::istringstream in(a->synthetic);
      if (!(in >> n >> comma >> f) || comma != ',' || !in.eof()) {
        throw ArgumentError("--synthetic expects N,F");
      }
      data = MakeSyntheticLogistic(n, f, DeriveSeed(g.seed, 7));
    }

    MixingMatrix mixing;
    if (a->mixing == "identity") {
      mixing = MixingMatrix::Identity(cfg.T);
    } else if (a->mixing == "auto") {
      mixing = CurvatureMixing(data, cfg, a->ridge, a->solver_iters);
    } else {
      mixing = ReadMixing(a->mixing);
    }

    const TrainResult r = PrivateTrain(data, cfg, mixing);
    for (const std::string& w : r.warnings) Warn(w);
    if (!a->log.empty()) WriteTrainLog(a->log, r.log);
    if (!a->accountant.empty()) {
      const AccountantParams acc =
          ComputeAccountantParams(data.n(), cfg.batch, cfg.band, cfg.T);
      WriteJson(a->accountant, Json{{"q", acc.q},
                                    {"compositions", acc.compositions},
                                    {"sigma", cfg.sigma}});
    }
    Json model = ToJson(r.params, cfg.model);
    model["final_loss"] = DatasetLoss(cfg.model, data, r.params);
    EmitJson(g, model);
  });
}

// ------------------------------------------------------------------ report

void AddReport(CLI::App& app, GlobalOptions& g) {
  CLI::App* cmd = app.add_subcommand("report", "Objective values and accounting");
  cmd->require_subcommand(1);

  struct ObjectiveArgs {
    std::string gram;
    std::string workload;
  };
  auto o = std::make_shared<ObjectiveArgs>();
  CLI::App* obj = cmd->add_subcommand("objective", "Tr(X^-1 G)");
  obj->add_option("--gram", o->gram, "Gram CSV")->required();
  obj->add_option("--workload", o->workload, "Workload CSV")->required();
  obj->callback([o, &g] {
    EmitJson(g, Json{{"objective", Objective(ReadGram(o->gram), ReadWorkload(o->workload))}});
  });

  struct ReductionArgs {
    std::string workload;
    std::string approx;
    std::string star;
  };
  auto r = std::make_shared<ReductionArgs>();
  CLI::App* red = cmd->add_subcommand(
      "reduction", "Objective gap of an approximate Gram matrix against a reference");
  red->add_option("--workload", r->workload, "Reference workload CSV")->required();
  red->add_option("--approx", r->approx, "Approximate Gram CSV")->required();
  red->add_option("--star", r->star, "Reference Gram CSV")->required();
  red->callback([r, &g] {
    const WorkloadMatrix w = ReadWorkload(r->workload);
    const BandedGram approx = ReadGram(r->approx);
    const BandedGram star = ReadGram(r->star);
    EmitJson(g, Json{{"reduction", ReductionInObjective(w, approx, star)},
                     {"approx_objective", Objective(approx, w)},
                     {"star_objective", Objective(star, w)}});
  });

  struct AccountantArgs {
    std::int64_t n = 0;
    std::int64_t batch = 0;
    std::int64_t band = 1;
    std::int64_t T = 0;
    double sigma = 0.0;
  };
  auto acc = std::make_shared<AccountantArgs>();
  CLI::App* ac = cmd->add_subcommand("accountant",
                                     "Sampling rate and composition count");
  ac->add_option("--n", acc->n, "Dataset size")->required();
  ac->add_option("--batch", acc->batch, "Batch size")->required();
  ac->add_option("--band", acc->band, "Band size")->capture_default_str();
  ac->add_option("--T", acc->T, "Iterations")->required();
  ac->add_option("--sigma", acc->sigma, "Noise multiplier to pass along");
  ac->callback([acc, &g] {
    const AccountantParams p = ComputeAccountantParams(acc->n, acc->batch, acc->band, acc->T);
    EmitJson(g, Json{{"q", p.q}, {"compositions", p.compositions}, {"sigma", acc->sigma}});
  });
}

}  // namespace

int Run(int argc, char** argv) {
  CLI::App app("Curvature-aware correlated noise for private SGD", "curvmix");
  app.require_subcommand(1);
  app.fallthrough();
  GlobalOptions g;
  g.threads = DefaultThreads();
  app.add_option("--seed", g.seed, "Random seed")->capture_default_str();
  app.add_option("--threads", g.threads,
                 "Worker threads (default: $CURVMIX_THREADS or all cores)");
  app.add_option("--out", g.out, "Output path (stdout when omitted, where allowed)");

  AddSpectrum(app, g);
  AddWorkload(app, g);
  AddOptimize(app, g);
  AddFactor(app, g);
  AddNoise(app, g);
  AddSimulate(app, g);
  AddTrain(app, g);
  AddReport(app, g);
  for (CLI::App* sub : app.get_subcommands({})) {
    sub->fallthrough();
    for (CLI::App* leaf : sub->get_subcommands({})) leaf->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "curvmix: error: " << e.what() << '\n';
    return ArgumentError("").exit_code();
  } catch (const Error& e) {
    std::cerr << "curvmix: error: " << e.what() << '\n';
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "curvmix: error: " << e.what() << '\n';
    return NumericalError("").exit_code();
  }
  return 0;
}

}  // namespace curvmix::cli
