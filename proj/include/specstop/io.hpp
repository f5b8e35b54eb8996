/**
 * Copyright 2026 The specstop Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */


#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "specstop/criterion.hpp"
#include "specstop/linalg.hpp"
#include "specstop/synth.hpp"

namespace specstop::io {

enum class MatrixFormat { kCsv, kNpy };

/// Format implied by the file extension (.csv or .npy).
MatrixFormat format_from_path(const std::filesystem::path& path);

inline constexpr std::size_t kDefaultMaxShortSide = 8192;

/// CSV: ',' separated, '.' decimal, '\n' rows, one optional header line
/// (detected by a non-numeric first token). NPY: version 1.0, 2-D,
/// little-endian float32/float64, C order.
WeightMatrix load_matrix(const std::filesystem::path& path, std::optional<MatrixFormat> format = std::nullopt,
                         std::size_t max_short_side = kDefaultMaxShortSide);
void write_matrix(const WeightMatrix& m, const std::filesystem::path& path,
                  std::optional<MatrixFormat> format = std::nullopt);

WeightMatrix parse_csv(const std::string& text);
std::string encode_csv(const WeightMatrix& m);
WeightMatrix parse_npy(const std::string& bytes);
std::string encode_npy(std::size_t rows, std::size_t cols, const std::vector<double>& row_major);

/// A matrix file holding a single row or column of eigenvalues.
Spectrum load_spectrum(const std::filesystem::path& path);
void write_spectrum_csv(const Spectrum& s, const std::filesystem::path& path);

/// p feature columns plus a trailing integer label column.
void write_dataset(const LabeledDataset& data, const std::filesystem::path& path,
                   std::optional<MatrixFormat> format = std::nullopt);

struct CheckpointEntry {
  std::int64_t epoch = 0;
  std::filesystem::path path;
  MatrixFormat format = MatrixFormat::kCsv;
};

struct CheckpointSeries {
  std::filesystem::path directory;
  std::vector<CheckpointEntry> entries;  // strictly increasing epochs
};

inline constexpr const char* kDefaultCheckpointPattern = R"(epoch_(\d+)\.(csv|npy))";

/// Files whose whole name matches `pattern` (first capture group = epoch),
/// sorted by epoch. Throws DuplicateEpoch / Empty.
CheckpointSeries scan_checkpoints(const std::filesystem::path& dir,
                                  const std::string& pattern = kDefaultCheckpointPattern);

struct LayerReport {
  std::string name;
  std::vector<CriterionVerdict> verdicts;
  std::optional<std::int64_t> stopped_at;

  friend bool operator==(const LayerReport&, const LayerReport&) = default;
};

struct Report {
  CriterionConfig config;
  std::optional<std::uint64_t> seed;
  std::string version;
  std::vector<LayerReport> layers;
  std::optional<std::int64_t> stopped_at;  // aggregate decision

  friend bool operator==(const Report&, const Report&) = default;
};

inline constexpr int kReportSchema = 1;

nlohmann::json report_to_json(const Report& r);
/// Throws SchemaError on anything that does not match the schema.
Report report_from_json(const nlohmann::json& j);

void write_report(const Report& r, const std::filesystem::path& path);
Report read_report(const std::filesystem::path& path);

nlohmann::json verdict_to_json(const CriterionVerdict& v);

/// Writes `contents` to `path`, creating parent directories.
void write_text(const std::filesystem::path& path, const std::string& contents);
std::string read_text(const std::filesystem::path& path);

}  // namespace specstop::io
