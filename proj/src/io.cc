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

#include <charconv>
#include <fstream>
#include <sstream>

#include "curvmix/errors.h"

namespace curvmix {
namespace {

std::ifstream OpenIn(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  return in;
}

std::ofstream OpenOut(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  return out;
}

std::string Trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> SplitCsvLine(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream stream(line);
  std::string cell;
  while (std::getline(stream, cell, ',')) cells.push_back(Trim(cell));
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

double ParseDouble(const std::string& text, const std::string& where) {
  std::string_view view = text;
  if (!view.empty() && view.front() == '+') view.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] =
      std::from_chars(view.data(), view.data() + view.size(), value);
  if (ec != std::errc() || ptr != view.data() + view.size() || view.empty()) {
    throw IoError("cannot parse number '" + text + "' in " + where);
  }
  return value;
}

// Reads the sidecar and checks its "kind" when `expected_kind` is set.
Json ReadSidecar(const std::string& csv_path, const std::string& expected_kind) {
  const Json meta = ReadJson(SidecarPath(csv_path));
  if (!expected_kind.empty() &&
      meta.value("kind", std::string()) != expected_kind) {
    throw IoError("sidecar of '" + csv_path + "' does not describe a " +
                  expected_kind + " matrix");
  }
  return meta;
}

template <typename T>
T Field(const Json& json, const char* key, const std::string& where) {
  if (!json.contains(key)) {
    throw IoError(std::string("missing field '") + key + "' in " + where);
  }
  try {
    return json.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("bad field '") + key + "' in " + where + ": " +
                  e.what());
  }
}

}  // namespace

std::string SidecarPath(const std::string& csv_path) {
  return csv_path + ".json";
}

Json ReadJson(const std::string& path) {
  std::ifstream in = OpenIn(path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw IoError("invalid JSON in '" + path + "': " + e.what());
  }
}

void WriteJson(const std::string& path, const Json& value) {
  std::ofstream out = OpenOut(path);
  out << value.dump(2) << '\n';
  if (!out) throw IoError("failed writing '" + path + "'");
}

std::string FormatDouble(double value) {
  char buffer[64];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  if (ec != std::errc()) return std::to_string(value);
  return std::string(buffer, ptr);
}

Eigen::MatrixXd ReadMatrixCsv(const std::string& path) {
  std::ifstream in = OpenIn(path);
  std::vector<std::vector<double>> rows;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (Trim(line).empty()) continue;
    std::vector<double> row;
    for (const std::string& cell : SplitCsvLine(line)) {
      row.push_back(ParseDouble(
          cell, path + ":" + std::to_string(line_number)));
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw IoError("ragged row " + std::to_string(line_number) + " in '" +
                    path + "'");
    }
    rows.push_back(std::move(row));
  }
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()),
                      rows.empty() ? 0 : static_cast<Eigen::Index>(rows[0].size()));
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    for (Eigen::Index j = 0; j < out.cols(); ++j) out(i, j) = rows[i][j];
  }
  return out;
}

void WriteMatrixCsv(std::ostream& out, const Eigen::MatrixXd& matrix) {
  for (Eigen::Index i = 0; i < matrix.rows(); ++i) {
    for (Eigen::Index j = 0; j < matrix.cols(); ++j) {
      if (j > 0) out << ',';
      out << FormatDouble(matrix(i, j));
    }
    out << '\n';
  }
}

void WriteMatrixCsv(const std::string& path, const Eigen::MatrixXd& matrix) {
  std::ofstream out = OpenOut(path);
  WriteMatrixCsv(out, matrix);
  if (!out) throw IoError("failed writing '" + path + "'");
}

Json ToJson(const EigenSpectrum& spectrum) {
  return Json{{"total_dim", spectrum.total_dim},
              {"k_measured", spectrum.k_measured},
              {"values", spectrum.values},
              {"source", spectrum.source}};
}

EigenSpectrum SpectrumFromJson(const Json& json) {
  EigenSpectrum s;
  s.values = Field<std::vector<double>>(json, "values", "spectrum");
  s.total_dim = json.contains("total_dim")
                    ? Field<std::int64_t>(json, "total_dim", "spectrum")
                    : static_cast<std::int64_t>(s.values.size());
  s.k_measured = json.contains("k_measured")
                     ? Field<std::int64_t>(json, "k_measured", "spectrum")
                     : static_cast<std::int64_t>(s.values.size());
  s.source = json.value("source", std::string());
  s.Validate();
  return s;
}

EigenSpectrum ReadSpectrum(const std::string& path) {
  return SpectrumFromJson(ReadJson(path));
}

void WriteSpectrum(const std::string& path, const EigenSpectrum& spectrum) {
  WriteJson(path, ToJson(spectrum));
}

Json ToJson(const TailFit& fit) {
  return Json{{"coeff_C", fit.coeff_c},   {"alpha", fit.alpha},
              {"p_plus", fit.p_plus},     {"mu_pplus", fit.mu_pplus},
              {"k_used", fit.k_used}};
}

TailFit TailFitFromJson(const Json& json) {
  TailFit fit;
  fit.coeff_c = Field<double>(json, "coeff_C", "tail fit");
  fit.alpha = Field<double>(json, "alpha", "tail fit");
  fit.p_plus = Field<std::int64_t>(json, "p_plus", "tail fit");
  fit.mu_pplus = Field<double>(json, "mu_pplus", "tail fit");
  fit.k_used = json.value("k_used", std::int64_t{0});
  return fit;
}

TailFit ReadTailFit(const std::string& path) {
  return TailFitFromJson(ReadJson(path));
}

void WriteTailFit(const std::string& path, const TailFit& fit) {
  WriteJson(path, ToJson(fit));
}

WorkloadMatrix ReadWorkload(const std::string& path) {
  const Json meta = ReadSidecar(path, "");
  WorkloadMatrix out;
  out.entries = ReadMatrixCsv(path);
  try {
    out.kind = ParseWorkloadKind(Field<std::string>(meta, "kind", "workload sidecar"));
  } catch (const ArgumentError& e) {
    throw IoError(e.what());
  }
  out.eta = meta.value("eta", 0.0);
  const auto T = Field<std::int64_t>(meta, "T", "workload sidecar");
  if (out.entries.rows() != T || out.entries.cols() != T) {
    throw IoError("workload '" + path + "' is not " + std::to_string(T) +
                  " x " + std::to_string(T));
  }
  return out;
}

void WriteWorkload(const std::string& path, const WorkloadMatrix& workload) {
  WriteMatrixCsv(path, workload.entries);
  WriteJson(SidecarPath(path), Json{{"T", workload.T()},
                                    {"eta", workload.eta},
                                    {"kind", ToString(workload.kind)}});
}

BandedGram ReadGram(const std::string& path) {
  const Json meta = ReadSidecar(path, "gram");
  BandedGram out;
  out.entries = ReadMatrixCsv(path);
  out.band = Field<std::int64_t>(meta, "band", "gram sidecar");
  if (out.entries.rows() != Field<std::int64_t>(meta, "T", "gram sidecar")) {
    throw IoError("gram '" + path + "' size disagrees with its sidecar");
  }
  try {
    out.Validate();
  } catch (const ArgumentError& e) {
    throw IoError("gram '" + path + "': " + e.what());
  }
  return out;
}

void WriteGram(const std::string& path, const BandedGram& gram) {
  WriteMatrixCsv(path, gram.entries);
  WriteJson(SidecarPath(path),
            Json{{"T", gram.T()}, {"band", gram.band}, {"kind", "gram"}});
}

MixingMatrix ReadMixing(const std::string& path) {
  const Json meta = ReadSidecar(path, "mixing");
  MixingMatrix out;
  out.entries = ReadMatrixCsv(path);
  out.band = Field<std::int64_t>(meta, "band", "mixing sidecar");
  if (out.entries.rows() != Field<std::int64_t>(meta, "T", "mixing sidecar")) {
    throw IoError("mixing matrix '" + path + "' size disagrees with its sidecar");
  }
  try {
    out.Validate();
  } catch (const ArgumentError& e) {
    throw IoError("mixing matrix '" + path + "': " + e.what());
  }
  return out;
}

void WriteMixing(const std::string& path, const MixingMatrix& mixing) {
  WriteMatrixCsv(path, mixing.entries);
  WriteJson(SidecarPath(path),
            Json{{"T", mixing.T()}, {"band", mixing.band}, {"kind", "mixing"}});
}

Json ToJson(const SolveReport& report) {
  return Json{{"objective_value", report.objective_value},
              {"iterations", report.iterations},
              {"evaluations", report.evaluations},
              {"kkt_residual", report.kkt_residual},
              {"converged", report.converged}};
}

Dataset ReadDatasetCsv(const std::string& path) {
  std::ifstream in = OpenIn(path);
  std::string line;
  if (!std::getline(in, line)) throw IoError("dataset '" + path + "' is empty");
  const std::vector<std::string> header = SplitCsvLine(line);
  int label_column = -1;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c] == "label") label_column = static_cast<int>(c);
  }
  if (label_column < 0) {
    throw IoError("dataset '" + path + "' has no 'label' column");
  }
  std::vector<std::vector<double>> rows;
  int line_number = 1;
  while (std::getline(in, line)) {
    ++line_number;
    if (Trim(line).empty()) continue;
    const auto cells = SplitCsvLine(line);
    if (cells.size() != header.size()) {
      throw IoError("dataset row " + std::to_string(line_number) +
                    " has the wrong number of columns");
    }
    std::vector<double> row;
    for (const auto& cell : cells) {
      if (cell.empty()) {
        throw IoError("missing value on dataset row " +
                      std::to_string(line_number));
      }
      row.push_back(ParseDouble(cell, path + ":" + std::to_string(line_number)));
    }
    rows.push_back(std::move(row));
  }
  Dataset data;
  const auto n = static_cast<Eigen::Index>(rows.size());
  const auto f = static_cast<Eigen::Index>(header.size()) - 1;
  data.features.resize(n, f);
  data.labels.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::Index col = 0;
    for (std::size_t c = 0; c < header.size(); ++c) {
      if (static_cast<int>(c) == label_column) {
        data.labels(i) = rows[i][c];
      } else {
        data.features(i, col++) = rows[i][c];
      }
    }
  }
  return data;
}

void WriteDatasetCsv(const std::string& path, const Dataset& data) {
  std::ofstream out = OpenOut(path);
  for (Eigen::Index j = 0; j < data.f(); ++j) out << 'x' << j << ',';
  out << "label\n";
  for (Eigen::Index i = 0; i < data.n(); ++i) {
    for (Eigen::Index j = 0; j < data.f(); ++j) {
      out << FormatDouble(data.features(i, j)) << ',';
    }
    out << FormatDouble(data.labels(i)) << '\n';
  }
  if (!out) throw IoError("failed writing '" + path + "'");
}

void WriteTrainLog(const std::string& path, const std::vector<StepLog>& log) {
  std::ofstream out = OpenOut(path);
  out << "step,batch_loss,grad_norm_mean,clipped_fraction\n";
  for (const StepLog& s : log) {
    out << s.step << ',' << FormatDouble(s.batch_loss) << ','
        << FormatDouble(s.grad_norm_mean) << ','
        << FormatDouble(s.clipped_fraction) << '\n';
  }
  if (!out) throw IoError("failed writing '" + path + "'");
}

Json ToJson(const ModelParams& params, ModelKind kind) {
  std::vector<double> w(params.weights.data(),
                        params.weights.data() + params.weights.size());
  return Json{{"model_kind", ToString(kind)},
              {"num_features", static_cast<std::int64_t>(w.size()) - 1},
              {"weights", w}};
}

}  // namespace curvmix
