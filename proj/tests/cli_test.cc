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

#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "curvmix/io.h"
#include "curvmix/mixopt.h"
#include "curvmix/spectrum.h"

namespace curvmix {
namespace {

namespace fs = std::filesystem;

struct Outcome {
  int code = -1;
  std::string out;
  std::string err;
};

std::string Slurp(const fs::path& path) {
  std::ifstream in(path);
  std::stringstream text;
  text << in.rdbuf();
  return text.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("curvmix_cli_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string Path(const std::string& name) const { return (dir_ / name).string(); }

  Outcome Run(const std::string& args) const {
    const fs::path out = dir_ / "stdout.txt";
    const fs::path err = dir_ / "stderr.txt";
    const std::string command = std::string("\"") + CURVMIX_CLI_PATH + "\" " + args +
                                " > \"" + out.string() + "\" 2> \"" + err.string() + "\"";
    const int status = std::system(command.c_str());
    Outcome r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = Slurp(out);
    r.err = Slurp(err);
    return r;
  }

  // Runs a command that must succeed.
  std::string Ok(const std::string& args) const {
    const Outcome r = Run(args);
    EXPECT_EQ(r.code, 0) << args << "\n" << r.err;
    return r.out;
  }

  void WriteSingleEigenvalue(const std::string& name, double mu) const {
    EigenSpectrum s;
    s.values = {mu};
    s.total_dim = 1;
    s.k_measured = 1;
    s.source = "dense";
    WriteSpectrum(Path(name), s);
  }

  fs::path dir_;
};

TEST_F(CliTest, IdentityWorkload) {
  Ok("workload --kind identity --T 3 --out " + Path("w.csv"));
  EXPECT_TRUE(ReadMatrixCsv(Path("w.csv")).isApprox(Eigen::MatrixXd::Identity(3, 3), 0.0));
}

TEST_F(CliTest, CurvatureWorkloadForSingleEigenvalue) {
  WriteSingleEigenvalue("s.json", 1.0);
  Ok("workload --kind curvature --spectrum " + Path("s.json") +
     " --eta 0.5 --T 2 --out " + Path("w.csv"));
  Eigen::MatrixXd expected(2, 2);
  expected << 0.25, 0.5, 0.5, 1.0;
  EXPECT_LE((ReadMatrixCsv(Path("w.csv")) - expected).norm(), 1e-15);
  EXPECT_EQ(ReadWorkload(Path("w.csv")).eta, 0.5);
}

TEST_F(CliTest, PrefixWorkload) {
  Ok("workload --kind prefix --T 2 --out " + Path("w.csv"));
  Eigen::MatrixXd expected(2, 2);
  expected << 2, 1, 1, 1;
  EXPECT_EQ(ReadMatrixCsv(Path("w.csv")), expected);
}

TEST_F(CliTest, BandOneOptimizesToIdentity) {
  WriteSingleEigenvalue("s.json", 1.0);
  Ok("workload --spectrum " + Path("s.json") + " --eta 0.5 --T 5 --out " + Path("w.csv"));
  Ok("optimize --workload " + Path("w.csv") + " --band 1 --out " + Path("x.csv"));
  const BandedGram x = ReadGram(Path("x.csv"));
  EXPECT_EQ(x.band, 1);
  EXPECT_EQ(x.entries, Eigen::MatrixXd::Identity(5, 5));
}

TEST_F(CliTest, OptimizeFactorAndObjectivePipeline) {
  WriteSingleEigenvalue("s.json", 1.0);
  Ok("workload --spectrum " + Path("s.json") + " --eta 0.5 --T 2 --out " + Path("w.csv"));
  const Json report = Json::parse(Ok("optimize --workload " + Path("w.csv") +
                                     " --band 2 --out " + Path("x.csv") + " --report " +
                                     Path("r.json")));
  EXPECT_NEAR(report.at("objective_value").get<double>(), 1.0, 1e-6);
  EXPECT_TRUE(report.at("converged").get<bool>());
  EXPECT_EQ(ReadJson(Path("r.json")), report);
  const BandedGram x = ReadGram(Path("x.csv"));
  EXPECT_NEAR(x.entries(0, 1), 0.5, 1e-6);

  Ok("factor --gram " + Path("x.csv") + " --out " + Path("c.csv"));
  const MixingMatrix c = ReadMixing(Path("c.csv"));
  EXPECT_LE((c.entries.transpose() * c.entries - x.entries).norm(), 1e-12);

  const Json objective = Json::parse(
      Ok("report objective --gram " + Path("x.csv") + " --workload " + Path("w.csv")));
  EXPECT_NEAR(objective.at("objective").get<double>(), 1.0, 1e-6);

  Ok("workload --kind identity --T 2 --out " + Path("i.csv"));
  Ok("optimize --workload " + Path("w.csv") + " --band 1 --out " + Path("x1.csv"));
  const Json reduction =
      Json::parse(Ok("report reduction --workload " + Path("w.csv") + " --approx " +
                     Path("x1.csv") + " --star " + Path("x.csv")));
  EXPECT_NEAR(reduction.at("reduction").get<double>(), 0.25, 1e-6);
}

TEST_F(CliTest, NoiseIsSeedReproducible) {
  Ok("workload --kind prefix --T 6 --out " + Path("w.csv"));
  Ok("optimize --workload " + Path("w.csv") + " --band 3 --out " + Path("x.csv"));
  Ok("factor --gram " + Path("x.csv") + " --out " + Path("c.csv"));
  const std::string base = "noise --mixing " + Path("c.csv") + " --p 4";
  Ok(base + " --seed 5 --out " + Path("a.csv"));
  Ok(base + " --seed 5 --out " + Path("b.csv"));
  Ok(base + " --seed 6 --out " + Path("d.csv"));
  EXPECT_EQ(Slurp(Path("a.csv")), Slurp(Path("b.csv")));
  EXPECT_NE(Slurp(Path("a.csv")), Slurp(Path("d.csv")));
  const Eigen::MatrixXd rows = ReadMatrixCsv(Path("a.csv"));
  EXPECT_EQ(rows.rows(), 6);
  EXPECT_EQ(rows.cols(), 4);
}

TEST_F(CliTest, SpectrumCommandsRoundTrip) {
  Eigen::MatrixXd m(3, 3);
  m << 2, 0, 0, 0, -1, 0, 0, 0, 0.5;
  WriteMatrixCsv(Path("m.csv"), m);
  Ok("spectrum dense --matrix " + Path("m.csv") + " --out " + Path("s.json"));
  const EigenSpectrum s = ReadSpectrum(Path("s.json"));
  ASSERT_EQ(s.values.size(), 3u);
  EXPECT_NEAR(s.values[0], 2.0, 1e-14);
  EXPECT_NEAR(s.values[2], -1.0, 1e-14);

  Ok("spectrum truncate --in " + Path("s.json") + " --out " + Path("t.json"));
  Ok("spectrum truncate --in " + Path("t.json") + " --out " + Path("tt.json"));
  EXPECT_EQ(ReadSpectrum(Path("t.json")).values, (std::vector<double>{2.0, 0.5, 0.0}));
  EXPECT_EQ(Slurp(Path("t.json")), Slurp(Path("tt.json")));
}

TEST_F(CliTest, TailFitFromMeasuredTopK) {
  EigenSpectrum s;
  for (int i = 1; i <= 100; ++i) {
    s.values.push_back(1e-6 * std::exp(2.0 * std::pow(std::log(12000.0) - std::log(i), 1.5)));
  }
  s.total_dim = 20000;
  s.k_measured = 100;
  s.source = "lanczos";
  WriteSpectrum(Path("s.json"), s);
  const Json fit = Json::parse(
      Ok("spectrum fit --topk " + Path("s.json") + " --p-plus 12000 --mu-pplus 1e-6"));
  const TailFit parsed = TailFitFromJson(fit);
  EXPECT_NEAR(parsed.coeff_c, 2.0, 1e-6);
  EXPECT_NEAR(parsed.alpha, 1.5, 1e-6);
  EXPECT_EQ(parsed.p_plus, 12000);
}

TEST_F(CliTest, SimulateAgreesWithClosedForm) {
  Ok("simulate --p 4 --T 8 --trials 50000 --bands 2 --seed 3 --out " + Path("sweep.csv") +
     " --report " + Path("r.json"));
  const Json r = ReadJson(Path("r.json"));
  const double gap =
      std::abs(r.at("mc_mean").get<double>() - r.at("closed_form").get<double>());
  EXPECT_LE(gap, 3.0 * r.at("mc_std_error").get<double>());
  EXPECT_NE(Slurp(Path("sweep.csv")).find("band,closed_form,mc_mean,mc_std_error"),
            std::string::npos);
}

TEST_F(CliTest, TrainWithoutNoiseIsDeterministic) {
  const std::string args = "train --synthetic 300,5 --T 20 --band 2 --batch 10 --sigma 0 "
                           "--seed 11";
  const std::string first = Ok(args);
  const std::string second = Ok(args);
  EXPECT_EQ(first, second);
  EXPECT_NE(Json::parse(first).at("weights").size(), 0u);
}

TEST_F(CliTest, TrainWritesAccountantHandOff) {
  Ok("train --synthetic 200,3 --T 10 --band 2 --batch 20 --sigma 1.5 --accountant " +
     Path("acc.json") + " --log " + Path("log.csv"));
  const Json acc = ReadJson(Path("acc.json"));
  EXPECT_DOUBLE_EQ(acc.at("q").get<double>(), 0.2);
  EXPECT_EQ(acc.at("compositions").get<long long>(), 100);
  EXPECT_EQ(acc.at("sigma").get<double>(), 1.5);
  EXPECT_EQ(Slurp(Path("log.csv")).rfind("step,batch_loss,grad_norm_mean,clipped_fraction", 0),
            0u);
}

TEST_F(CliTest, ExitCodes) {
  const Outcome unknown = Run("workload --kind identity --T 3 --bogus");
  EXPECT_EQ(unknown.code, 2);
  EXPECT_NE(unknown.err.find("curvmix: error:"), std::string::npos);

  EXPECT_EQ(Run("optimize --workload " + Path("missing.csv") + " --band 2 --out " +
                Path("x.csv"))
                .code,
            4);

  Ok("workload --kind identity --T 3 --out " + Path("w.csv"));
  EXPECT_EQ(Run("optimize --workload " + Path("w.csv") + " --band 4 --out " + Path("x.csv"))
                .code,
            2);

  BandedGram singular = BandedGram::Identity(2, 2);
  singular.entries(0, 1) = singular.entries(1, 0) = 1.0;
  WriteGram(Path("bad.csv"), singular);
  EXPECT_EQ(Run("factor --gram " + Path("bad.csv") + " --out " + Path("c.csv")).code, 3);

  EXPECT_EQ(Run("--help").code, 0);
}

}  // namespace
}  // namespace curvmix
