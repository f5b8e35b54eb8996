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


#include "specstop/io.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <regex>
#include <sstream>

#include "specstop/error.hpp"

namespace specstop::io {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr char kNpyMagic[] = "\x93NUMPY";
constexpr std::size_t kNpyMagicLen = 6;

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::optional<double> parse_double(std::string_view tok) {
  tok = trim(tok);
  if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size() || tok.empty()) return std::nullopt;
  return v;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

std::string format_double(double v) {
  char buf[32];
  const int len = std::snprintf(buf, sizeof buf, "%.17g", v);
  return std::string(buf, static_cast<std::size_t>(len));
}

template <class T>
T load_le(const char* p) {
  T v;
  std::memcpy(&v, p, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) {
    auto* b = reinterpret_cast<unsigned char*>(&v);
    std::reverse(b, b + sizeof(T));
  }
  return v;
}

// Value of `'key': <value>` inside an npy header dict, up to the next
// top-level comma or closing brace.
std::string npy_field(const std::string& header, const std::string& key) {
  const std::string quoted = "'" + key + "'";
  const std::size_t k = header.find(quoted);
  if (k == std::string::npos) throw Error(ErrorCode::kParseError, "npy header lacks '" + key + "'");
  std::size_t pos = header.find(':', k + quoted.size());
  if (pos == std::string::npos) throw Error(ErrorCode::kParseError, "npy header is malformed");
  ++pos;
  int depth = 0;
  std::size_t end = pos;
  for (; end < header.size(); ++end) {
    const char ch = header[end];
    if (ch == '(') ++depth;
    if (ch == ')') --depth;
    if (depth == 0 && (ch == ',' || ch == '}')) break;
  }
  return std::string(trim(std::string_view(header).substr(pos, end - pos)));
}

}  // namespace

MatrixFormat format_from_path(const fs::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char ch) { return std::tolower(ch); });
  if (ext == ".csv") return MatrixFormat::kCsv;
  if (ext == ".npy") return MatrixFormat::kNpy;
  throw Error(ErrorCode::kParseError, "cannot infer matrix format from extension '" + ext + "'");
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::kIo, "read failed for " + path.string());
  return ss.str();
}

void write_text(const fs::path& path, const std::string& contents) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot open " + path.string() + " for writing");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw Error(ErrorCode::kIo, "write failed for " + path.string());
}

WeightMatrix parse_csv(const std::string& text) {
  std::vector<double> values;
  std::size_t cols = 0;
  std::size_t rows = 0;
  bool first_line = true;
  std::size_t line_no = 0;
  for (std::string_view line : split(text, '\n')) {
    ++line_no;
    line = trim(line);
    if (line.empty()) continue;
    const auto tokens = split(line, ',');
    if (first_line) {
      first_line = false;
      if (!parse_double(tokens.front())) continue;  // header
    }
    if (cols == 0) cols = tokens.size();
    if (tokens.size() != cols) {
      throw Error(ErrorCode::kParseError, "ragged CSV row at line " + std::to_string(line_no));
    }
    for (std::string_view tok : tokens) {
      const auto v = parse_double(tok);
      if (!v) {
        throw Error(ErrorCode::kParseError,
                    "non-numeric CSV field '" + std::string(trim(tok)) + "' at line " + std::to_string(line_no));
      }
      values.push_back(*v);
    }
    ++rows;
  }
  if (rows == 0) throw Error(ErrorCode::kParseError, "CSV holds no numeric rows");
  return WeightMatrix(rows, cols, std::move(values));
}

std::string encode_csv(const WeightMatrix& m) {
  std::string out;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
      if (c > 0) out += ',';
      out += format_double(m(r, c));
    }
    out += '\n';
  }
  return out;
}

WeightMatrix parse_npy(const std::string& bytes) {
  if (bytes.size() < 10 || bytes.compare(0, kNpyMagicLen, kNpyMagic, kNpyMagicLen) != 0) {
    throw Error(ErrorCode::kParseError, "bad npy magic");
  }
  const auto major = static_cast<unsigned char>(bytes[6]);
  const auto minor = static_cast<unsigned char>(bytes[7]);
  if (major != 1 || minor != 0) {
    throw Error(ErrorCode::kParseError,
                "unsupported npy version " + std::to_string(major) + "." + std::to_string(minor) + " (1.0 required)");
  }
  const std::size_t header_len = load_le<std::uint16_t>(bytes.data() + 8);
  if (bytes.size() < 10 + header_len) throw Error(ErrorCode::kParseError, "truncated npy header");
  const std::string header = bytes.substr(10, header_len);

  const std::string descr = npy_field(header, "descr");
  std::size_t item = 0;
  if (descr == "'<f8'") {
    item = 8;
  } else if (descr == "'<f4'") {
    item = 4;
  } else {
    throw Error(ErrorCode::kParseError, "unsupported dtype " + descr + " (little-endian float32/float64 required)");
  }
  if (npy_field(header, "fortran_order") != "False") {
    throw Error(ErrorCode::kParseError, "Fortran-order arrays are not supported (C order required)");
  }
  std::string shape = npy_field(header, "shape");
  if (shape.size() < 2 || shape.front() != '(' || shape.back() != ')') {
    throw Error(ErrorCode::kParseError, "malformed npy shape " + shape);
  }
  std::vector<std::size_t> dims;
  for (std::string_view tok : split(std::string_view(shape).substr(1, shape.size() - 2), ',')) {
    tok = trim(tok);
    if (tok.empty()) continue;
    std::size_t d = 0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), d);
    if (ec != std::errc() || ptr != tok.data() + tok.size()) {
      throw Error(ErrorCode::kParseError, "malformed npy shape " + shape);
    }
    dims.push_back(d);
  }
  if (dims.size() != 2) throw Error(ErrorCode::kParseError, "2-D required, got " + std::to_string(dims.size()) + "-D");

  const std::size_t count = dims[0] * dims[1];
  const std::size_t offset = 10 + header_len;
  if (bytes.size() - offset != count * item) {
    throw Error(ErrorCode::kParseError, "npy payload size does not match its shape");
  }
  std::vector<double> values(count);
  const char* p = bytes.data() + offset;
  for (std::size_t i = 0; i < count; ++i) {
    values[i] = item == 8 ? load_le<double>(p + 8 * i) : static_cast<double>(load_le<float>(p + 4 * i));
  }
  return WeightMatrix(dims[0], dims[1], std::move(values));
}

std::string encode_npy(std::size_t rows, std::size_t cols, const std::vector<double>& row_major) {
  if (row_major.size() != rows * cols) throw Error(ErrorCode::kInvalidArgument, "payload does not match shape");
  std::string header = "{'descr': '<f8', 'fortran_order': False, 'shape': (" + std::to_string(rows) + ", " +
                       std::to_string(cols) + "), }";
  // Pad so that magic + version + length + header is a multiple of 64.
  const std::size_t unpadded = 10 + header.size() + 1;
  header.append((64 - unpadded % 64) % 64, ' ');
  header += '\n';
  std::string out(kNpyMagic, kNpyMagicLen);
  out += '\x01';
  out += '\x00';
  const auto len = static_cast<std::uint16_t>(header.size());
  out += static_cast<char>(len & 0xFF);
  out += static_cast<char>(len >> 8);
  out += header;
  const std::size_t offset = out.size();
  out.resize(offset + 8 * row_major.size());
  for (std::size_t i = 0; i < row_major.size(); ++i) {
    double v = row_major[i];
    if constexpr (std::endian::native == std::endian::big) {
      auto* b = reinterpret_cast<unsigned char*>(&v);
      std::reverse(b, b + sizeof v);
    }
    std::memcpy(out.data() + offset + 8 * i, &v, sizeof v);
  }
  return out;
}

WeightMatrix load_matrix(const fs::path& path, std::optional<MatrixFormat> format, std::size_t max_short_side) {
  const MatrixFormat fmt = format ? *format : format_from_path(path);
  const std::string bytes = read_text(path);
  WeightMatrix m = fmt == MatrixFormat::kCsv ? parse_csv(bytes) : parse_npy(bytes);
  if (std::min(m.rows(), m.cols()) > max_short_side) {
    throw Error(ErrorCode::kInvalidArgument, "matrix short side " + std::to_string(std::min(m.rows(), m.cols())) +
                                                 " exceeds the cap of " + std::to_string(max_short_side));
  }
  return m;
}

void write_matrix(const WeightMatrix& m, const fs::path& path, std::optional<MatrixFormat> format) {
  const MatrixFormat fmt = format ? *format : format_from_path(path);
  if (fmt == MatrixFormat::kCsv) {
    write_text(path, encode_csv(m));
  } else {
    write_text(path, encode_npy(m.rows(), m.cols(), std::vector<double>(m.entries().begin(), m.entries().end())));
  }
}

Spectrum load_spectrum(const fs::path& path) {
  const WeightMatrix m = load_matrix(path, std::nullopt, SIZE_MAX);
  if (m.rows() != 1 && m.cols() != 1) {
    throw Error(ErrorCode::kParseError, "spectrum file must hold a single row or column");
  }
  return Spectrum(std::vector<double>(m.entries().begin(), m.entries().end()));
}

void write_spectrum_csv(const Spectrum& s, const fs::path& path) {
  std::string out = "eigenvalue\n";
  for (double v : s.values()) {
    out += format_double(v);
    out += '\n';
  }
  write_text(path, out);
}

void write_dataset(const LabeledDataset& data, const fs::path& path, std::optional<MatrixFormat> format) {
  const MatrixFormat fmt = format ? *format : format_from_path(path);
  const std::size_t p = data.dimension;
  if (fmt == MatrixFormat::kCsv) {
    std::string out;
    out.reserve(data.size() * (p + 1) * 12);
    for (std::size_t i = 0; i < data.size(); ++i) {
      for (std::size_t j = 0; j < p; ++j) {
        out += format_double(data.features[i * p + j]);
        out += ',';
      }
      out += std::to_string(data.labels[i]);
      out += '\n';
    }
    write_text(path, out);
    return;
  }
  std::vector<double> flat;
  flat.reserve(data.size() * (p + 1));
  for (std::size_t i = 0; i < data.size(); ++i) {
    flat.insert(flat.end(), data.features.begin() + static_cast<std::ptrdiff_t>(i * p),
                data.features.begin() + static_cast<std::ptrdiff_t>((i + 1) * p));
    flat.push_back(static_cast<double>(data.labels[i]));
  }
  write_text(path, encode_npy(data.size(), p + 1, flat));
}

CheckpointSeries scan_checkpoints(const fs::path& dir, const std::string& pattern) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw Error(ErrorCode::kIo, "not a directory: " + dir.string());
  std::regex re;
  try {
    re = std::regex(pattern);
  } catch (const std::regex_error& e) {
    throw Error(ErrorCode::kInvalidArgument, "bad checkpoint pattern: " + std::string(e.what()));
  }
  std::map<std::int64_t, CheckpointEntry> by_epoch;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const std::string name = entry.path().filename().string();
    std::smatch match;
    if (!std::regex_match(name, match, re) || match.size() < 2) continue;
    const std::string digits = match[1].str();
    std::int64_t epoch = 0;
    const auto [ptr, perr] = std::from_chars(digits.data(), digits.data() + digits.size(), epoch);
    if (perr != std::errc() || ptr != digits.data() + digits.size() || epoch < 0) {
      throw Error(ErrorCode::kParseError, "bad epoch number in " + name);
    }
    CheckpointEntry ce{epoch, entry.path(), format_from_path(entry.path())};
    if (!by_epoch.emplace(epoch, ce).second) {
      throw Error(ErrorCode::kDuplicateEpoch, "epoch " + std::to_string(epoch) + " appears more than once in " +
                                                  dir.string());
    }
  }
  if (by_epoch.empty()) throw Error(ErrorCode::kEmpty, "no checkpoint files in " + dir.string());
  CheckpointSeries series;
  series.directory = dir;
  for (auto& [epoch, ce] : by_epoch) series.entries.push_back(std::move(ce));
  return series;
}

json verdict_to_json(const CriterionVerdict& v) {
  return json{
      {"epoch", v.epoch},
      {"status", v.skipped ? "skipped" : "ok"},
      {"reason", v.skip_reason},
      {"s_hat", v.s_hat},
      {"s_star", v.s_star},
      {"normalized", v.normalized},
      {"n_bulk", v.n_bulk},
      {"bins", v.bins},
      {"hit", v.hit},
      {"consecutive_hits", v.consecutive_hits},
      {"stop", v.stop},
      {"spikes",
       {{"head", v.spikes.head},
        {"tail", v.spikes.tail},
        {"alpha", v.spikes.alpha},
        {"mean_gap", v.spikes.mean_gap},
        {"threshold", v.spikes.threshold}}},
      {"classification",
       {{"bulk_type", std::string(to_string(v.classification.bulk_type))},
        {"m", v.classification.label_m},
        {"n", v.classification.label_n},
        {"label", v.classification.label()}}},
  };
}

namespace {

json optional_int(const std::optional<std::int64_t>& v) { return v ? json(*v) : json(nullptr); }

std::optional<std::int64_t> read_optional_int(const json& j, const char* key) {
  const json& v = j.at(key);
  if (v.is_null()) return std::nullopt;
  if (!v.is_number_integer()) throw Error(ErrorCode::kSchemaError, std::string(key) + " must be an integer or null");
  return v.get<std::int64_t>();
}

CriterionVerdict verdict_from_json(const json& j) {
  CriterionVerdict v;
  v.epoch = j.at("epoch").get<std::int64_t>();
  const std::string status = j.at("status").get<std::string>();
  if (status != "ok" && status != "skipped") throw Error(ErrorCode::kSchemaError, "unknown verdict status " + status);
  v.skipped = status == "skipped";
  v.skip_reason = j.at("reason").get<std::string>();
  v.s_hat = j.at("s_hat").get<double>();
  v.s_star = j.at("s_star").get<double>();
  v.normalized = j.at("normalized").get<double>();
  v.n_bulk = j.at("n_bulk").get<std::size_t>();
  v.bins = j.at("bins").get<std::size_t>();
  v.hit = j.at("hit").get<bool>();
  v.consecutive_hits = j.at("consecutive_hits").get<std::size_t>();
  v.stop = j.at("stop").get<bool>();
  const json& sp = j.at("spikes");
  v.spikes.head = sp.at("head").get<std::size_t>();
  v.spikes.tail = sp.at("tail").get<std::size_t>();
  v.spikes.alpha = sp.at("alpha").get<double>();
  v.spikes.mean_gap = sp.at("mean_gap").get<double>();
  v.spikes.threshold = sp.at("threshold").get<double>();
  const json& cl = j.at("classification");
  v.classification.bulk_type = bulk_type_from_string(cl.at("bulk_type").get<std::string>());
  v.classification.label_m = cl.at("m").get<std::size_t>();
  v.classification.label_n = cl.at("n").get<std::size_t>();
  return v;
}

}  // namespace

json report_to_json(const Report& r) {
  json layers = json::array();
  for (const LayerReport& layer : r.layers) {
    json verdicts = json::array();
    for (const CriterionVerdict& v : layer.verdicts) verdicts.push_back(verdict_to_json(v));
    layers.push_back(json{{"name", layer.name}, {"verdicts", verdicts}, {"stopped_at", optional_int(layer.stopped_at)}});
  }
  return json{
      {"schema", kReportSchema},
      {"kind", "report"},
      {"tool", "specstop"},
      {"version", r.version},
      {"run",
       {{"C", r.config.C},
        {"alpha", r.config.alpha},
        {"tau", r.config.tau},
        {"kappa", r.config.kappa},
        {"required_consecutive", r.config.required_consecutive},
        {"spike_scan", std::string(to_string(r.config.spike_scan))},
        {"seed", r.seed ? json(*r.seed) : json(nullptr)}}},
      {"layers", layers},
      {"stop", r.stopped_at.has_value()},
      {"stopped_at", optional_int(r.stopped_at)},
  };
}

Report report_from_json(const json& j) {
  try {
    if (!j.is_object()) throw Error(ErrorCode::kSchemaError, "report must be a JSON object");
    if (j.at("schema").get<int>() != kReportSchema) {
      throw Error(ErrorCode::kSchemaError, "unsupported report schema " + j.at("schema").dump());
    }
    if (j.at("kind").get<std::string>() != "report") throw Error(ErrorCode::kSchemaError, "not a report document");
    Report r;
    r.version = j.at("version").get<std::string>();
    const json& run = j.at("run");
    r.config.C = run.at("C").get<double>();
    r.config.alpha = run.at("alpha").get<double>();
    r.config.tau = run.at("tau").get<double>();
    r.config.kappa = run.at("kappa").get<double>();
    r.config.required_consecutive = run.at("required_consecutive").get<std::size_t>();
    try {
      r.config.spike_scan = spike_scan_from_string(run.at("spike_scan").get<std::string>());
    } catch (const Error& e) {
      throw Error(ErrorCode::kSchemaError, e.what());
    }
    if (!run.at("seed").is_null()) r.seed = run.at("seed").get<std::uint64_t>();
    for (const json& lj : j.at("layers")) {
      LayerReport layer;
      layer.name = lj.at("name").get<std::string>();
      std::optional<std::int64_t> last;
      for (const json& vj : lj.at("verdicts")) {
        layer.verdicts.push_back(verdict_from_json(vj));
        if (last && layer.verdicts.back().epoch <= *last) {
          throw Error(ErrorCode::kSchemaError, "verdicts must be ordered by epoch");
        }
        last = layer.verdicts.back().epoch;
      }
      layer.stopped_at = read_optional_int(lj, "stopped_at");
      r.layers.push_back(std::move(layer));
    }
    r.stopped_at = read_optional_int(j, "stopped_at");
    if (j.at("stop").get<bool>() != r.stopped_at.has_value()) {
      throw Error(ErrorCode::kSchemaError, "stop flag disagrees with stopped_at");
    }
    return r;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kSchemaError, e.what());
  }
}

void write_report(const Report& r, const fs::path& path) { write_text(path, report_to_json(r).dump(2) + "\n"); }

Report read_report(const fs::path& path) {
  const std::string text = read_text(path);
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kSchemaError, std::string("malformed JSON: ") + e.what());
  }
  return report_from_json(j);
}

}  // namespace specstop::io
