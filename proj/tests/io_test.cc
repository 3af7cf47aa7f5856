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

#include "curvmix/io.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <string>

#include <unistd.h>

#include <gtest/gtest.h>

#include "curvmix/errors.h"
#include "oracles.h"

namespace curvmix {
namespace {

namespace fs = std::filesystem;

class IoTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("curvmix_io_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string Path(const std::string& name) const { return (dir_ / name).string(); }

  void WriteText(const std::string& name, const std::string& text) const {
    std::ofstream(Path(name)) << text;
  }

  fs::path dir_;
};

TEST_F(IoTest, FormatDoubleRoundTripsExactly) {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0, 1e-6}) {
    EXPECT_EQ(std::stod(FormatDouble(v)), v);
  }
}

TEST_F(IoTest, MatrixCsvRoundTrip) {
  const Eigen::MatrixXd m = ::curvmix::testing::RandomSymmetric(7, 3) * 1e-3;
  WriteMatrixCsv(Path("m.csv"), m);
  EXPECT_EQ(ReadMatrixCsv(Path("m.csv")), m);
}

TEST_F(IoTest, SpectrumRoundTrip) {
  EigenSpectrum s;
  s.values = {3.5, 1.0 / 7.0, 0.0};
  s.total_dim = 10;
  s.k_measured = 3;
  s.source = "lanczos";
  WriteSpectrum(Path("s.json"), s);
  const EigenSpectrum back = ReadSpectrum(Path("s.json"));
  EXPECT_EQ(back.values, s.values);
  EXPECT_EQ(back.total_dim, 10);
  EXPECT_EQ(back.k_measured, 3);
  EXPECT_EQ(back.source, "lanczos");
}

TEST_F(IoTest, TailFitRoundTrip) {
  TailFit fit;
  fit.coeff_c = 0.5612;
  fit.alpha = 1.5;
  fit.p_plus = 12000;
  fit.mu_pplus = 1e-6;
  fit.k_used = 199;
  WriteTailFit(Path("f.json"), fit);
  const TailFit back = ReadTailFit(Path("f.json"));
  EXPECT_EQ(back.coeff_c, fit.coeff_c);
  EXPECT_EQ(back.alpha, fit.alpha);
  EXPECT_EQ(back.p_plus, fit.p_plus);
  EXPECT_EQ(back.mu_pplus, fit.mu_pplus);
  EXPECT_EQ(back.k_used, fit.k_used);
  const Json json = ReadJson(Path("f.json"));
  EXPECT_TRUE(json.contains("coeff_C"));
}

TEST_F(IoTest, WorkloadRoundTripWithSidecar) {
  EigenSpectrum s;
  s.values = {2.0, 0.5};
  s.total_dim = s.k_measured = 2;
  const WorkloadMatrix g = CurvatureWorkload(s, 0.3, 5);
  WriteWorkload(Path("g.csv"), g);
  EXPECT_TRUE(fs::exists(SidecarPath(Path("g.csv"))));
  const WorkloadMatrix back = ReadWorkload(Path("g.csv"));
  EXPECT_EQ(back.entries, g.entries);
  EXPECT_EQ(back.kind, WorkloadKind::kCurvature);
  EXPECT_EQ(back.eta, 0.3);
}

TEST_F(IoTest, GramAndMixingRoundTrip) {
  const BandedGram x = ::curvmix::testing::RandomFeasibleGram(9, 3, 5);
  WriteGram(Path("x.csv"), x);
  const BandedGram xb = ReadGram(Path("x.csv"));
  EXPECT_EQ(xb.entries, x.entries);
  EXPECT_EQ(xb.band, 3);

  const MixingMatrix c = Factor(x);
  WriteMixing(Path("c.csv"), c);
  const MixingMatrix cb = ReadMixing(Path("c.csv"));
  EXPECT_EQ(cb.entries, c.entries);
  EXPECT_EQ(cb.band, c.band);
  EXPECT_EQ(ReadJson(SidecarPath(Path("c.csv")))["kind"], "mixing");
}

TEST_F(IoTest, GramReaderRejectsMixingFile) {
  WriteMixing(Path("c.csv"), MixingMatrix::Identity(3));
  EXPECT_THROW(ReadGram(Path("c.csv")), IoError);
}

TEST_F(IoTest, DatasetRoundTrip) {
  const Dataset d = MakeSyntheticLogistic(25, 3, 4);
  WriteDatasetCsv(Path("d.csv"), d);
  const Dataset back = ReadDatasetCsv(Path("d.csv"));
  EXPECT_EQ(back.features, d.features);
  EXPECT_EQ(back.labels, d.labels);
}

TEST_F(IoTest, DatasetLabelColumnMayBeAnywhere) {
  WriteText("d.csv", "a,label,b\n1,0,2\n3,1,4\n");
  const Dataset d = ReadDatasetCsv(Path("d.csv"));
  ASSERT_EQ(d.f(), 2);
  EXPECT_EQ(d.features(1, 0), 3.0);
  EXPECT_EQ(d.features(1, 1), 4.0);
  EXPECT_EQ(d.labels(1), 1.0);
}

TEST_F(IoTest, MalformedInputsRaiseIoError) {
  EXPECT_THROW(ReadMatrixCsv(Path("missing.csv")), IoError);
  WriteText("ragged.csv", "1,2\n3\n");
  EXPECT_THROW(ReadMatrixCsv(Path("ragged.csv")), IoError);
  WriteText("words.csv", "1,x\n3,4\n");
  EXPECT_THROW(ReadMatrixCsv(Path("words.csv")), IoError);
  WriteText("bad.json", "{\"values\": [1, 2");
  EXPECT_THROW(ReadSpectrum(Path("bad.json")), IoError);
  WriteText("nolabel.csv", "a,b\n1,2\n");
  EXPECT_THROW(ReadDatasetCsv(Path("nolabel.csv")), IoError);
  WriteText("nosidecar.csv", "1,0\n0,1\n");
  EXPECT_THROW(ReadGram(Path("nosidecar.csv")), IoError);
}

TEST_F(IoTest, TrainLogAndModelJson) {
  WriteTrainLog(Path("log.csv"), {{0, 0.69, 1.2, 0.5}, {1, 0.6, 1.0, 0.25}});
  std::ifstream in(Path("log.csv"));
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "step,batch_loss,grad_norm_mean,clipped_fraction");
  const Json model = ToJson(ModelParams{Eigen::Vector3d(1, 2, 3)}, ModelKind::kLinear);
  EXPECT_EQ(model["model_kind"], "linear");
  EXPECT_EQ(model["num_features"], 2);
  EXPECT_EQ(model["weights"].size(), 3u);
}

}  // namespace
}  // namespace curvmix
