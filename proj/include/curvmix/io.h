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

// File formats: spectra and tail fits as JSON, matrices as plain CSV with a
// JSON sidecar next to them (<file>.json), datasets as CSV with a header.

#ifndef CURVMIX_IO_H_
#define CURVMIX_IO_H_

#include <ostream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"

#include "curvmix/mixopt.h"
#include "curvmix/spectrum.h"
#include "curvmix/trainer.h"
#include "curvmix/workload.h"

namespace curvmix {

using Json = nlohmann::json;

std::string SidecarPath(const std::string& csv_path);

Json ReadJson(const std::string& path);
void WriteJson(const std::string& path, const Json& value);

// Shortest decimal text that parses back to the same double.
std::string FormatDouble(double value);

Eigen::MatrixXd ReadMatrixCsv(const std::string& path);
void WriteMatrixCsv(const std::string& path, const Eigen::MatrixXd& matrix);
void WriteMatrixCsv(std::ostream& out, const Eigen::MatrixXd& matrix);

Json ToJson(const EigenSpectrum& spectrum);
EigenSpectrum SpectrumFromJson(const Json& json);
EigenSpectrum ReadSpectrum(const std::string& path);
void WriteSpectrum(const std::string& path, const EigenSpectrum& spectrum);

Json ToJson(const TailFit& fit);
TailFit TailFitFromJson(const Json& json);
TailFit ReadTailFit(const std::string& path);
void WriteTailFit(const std::string& path, const TailFit& fit);

// Sidecar {"T", "eta", "kind"}.
WorkloadMatrix ReadWorkload(const std::string& path);
void WriteWorkload(const std::string& path, const WorkloadMatrix& workload);

// Sidecar {"T", "band", "kind": "gram" | "mixing"}.
BandedGram ReadGram(const std::string& path);
void WriteGram(const std::string& path, const BandedGram& gram);
MixingMatrix ReadMixing(const std::string& path);
void WriteMixing(const std::string& path, const MixingMatrix& mixing);

Json ToJson(const SolveReport& report);

// CSV with a header row; the column named `label` holds the labels and
// every other column is a feature.
Dataset ReadDatasetCsv(const std::string& path);
void WriteDatasetCsv(const std::string& path, const Dataset& data);

// step, batch_loss, grad_norm_mean, clipped_fraction
void WriteTrainLog(const std::string& path, const std::vector<StepLog>& log);

Json ToJson(const ModelParams& params, ModelKind kind);

}  // namespace curvmix

#endif  // CURVMIX_IO_H_
