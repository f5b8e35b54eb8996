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


// Command-line front end: analyze, watch, calibrate, rates, synth, sample,
// classify. Exit codes: 0 below threshold / success, 2 above threshold or
// stop, 1 error.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "specstop/criterion.hpp"
#include "specstop/error.hpp"
#include "specstop/io.hpp"
#include "specstop/linalg.hpp"
#include "specstop/mp_law.hpp"
#include "specstop/rng.hpp"
#include "specstop/spectral_stats.hpp"
#include "specstop/synth.hpp"
#include "specstop/validation.hpp"
#include "specstop/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace specstop;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitAbove = 2;
constexpr std::size_t kDensitySamples = 400;

struct CommonFlags {
  CriterionConfig cfg;
  std::string spike_scan = "literal";
  bool json = false;
  std::string out;
};

void add_criterion_flags(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--C", f.cfg.C, "Threshold constant, 0.1 <= C <= 2 (0.4 to 0.6 recommended)")
      ->capture_default_str();
  cmd->add_option("--alpha", f.cfg.alpha, "Spike gap multiplier")->capture_default_str();
  cmd->add_option("--tau", f.cfg.tau, "Bulk-transition separation, in bulk widths")->capture_default_str();
  cmd->add_option("--kappa", f.cfg.kappa, "Rank-collapse ratio of top eigenvalue to bulk edge")
      ->capture_default_str();
  cmd->add_option("--spike-scan", f.spike_scan, "literal or outermost qualifying gap")->capture_default_str();
}

void add_output_flags(CLI::App* cmd, CommonFlags& f, const std::string& out_help) {
  cmd->add_flag("--json", f.json, "Print JSON instead of text");
  cmd->add_option("-o,--out", f.out, out_help);
}

void check_config(CommonFlags& f) {
  f.cfg.spike_scan = spike_scan_from_string(f.spike_scan);
  const CriterionConfig& cfg = f.cfg;
  if (!(cfg.C >= 0.1 && cfg.C <= 2.0)) {
    throw Error(ErrorCode::kInvalidArgument, "C must lie in [0.1, 2]; 0.4 to 0.6 is the recommended range");
  }
}

/// Relative output paths land in $SPECSTOP_OUT_DIR when it is set.
fs::path output_path(const std::string& path) {
  fs::path p(path);
  if (p.is_absolute()) return p;
  if (const char* dir = std::getenv("SPECSTOP_OUT_DIR"); dir != nullptr && *dir != '\0') return fs::path(dir) / p;
  return p;
}

json header(const std::string& kind) {
  return json{{"schema", io::kReportSchema}, {"kind", kind}, {"tool", "specstop"}, {"version", kVersion}};
}

json config_json(const CriterionConfig& cfg) {
  return json{{"C", cfg.C},
              {"alpha", cfg.alpha},
              {"tau", cfg.tau},
              {"kappa", cfg.kappa},
              {"required_consecutive", cfg.required_consecutive},
              {"spike_scan", std::string(to_string(cfg.spike_scan))}};
}

void emit_json(const json& doc) { std::cout << doc.dump(2) << "\n"; }

std::string fmt(double v, int digits = 6) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

std::string csv_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// ---------------------------------------------------------------- analyze

struct AnalyzeArgs {
  CommonFlags common;
  std::string input;
  bool spectrum_input = false;
  std::optional<std::size_t> expected_spikes;
  std::string plot_dir;
};

Spectrum load_input_spectrum(const std::string& path, bool spectrum_input) {
  if (spectrum_input) return io::load_spectrum(path);
  return gram_spectrum(io::load_matrix(path));
}

void write_plot(const fs::path& dir, const DeviationStatistic& stat) {
  std::string hist = "lower,upper,level,mass,contribution\n";
  for (const BinSummary& b : stat.bin_detail) {
    hist += csv_double(b.lower) + "," + csv_double(b.upper) + "," + csv_double(b.level) + "," + csv_double(b.mass) +
            "," + csv_double(b.contribution) + "\n";
  }
  io::write_text(dir / "histogram.csv", hist);
  const MPParams law = MPParams::from_edges(stat.bulk_lower, stat.bulk_upper);
  std::string dens = "x,density\n";
  for (std::size_t i = 0; i <= kDensitySamples; ++i) {
    const double theta = std::numbers::pi * static_cast<double>(i) / static_cast<double>(kDensitySamples);
    const double x = mp_x_of_angle(theta, law.a, law.b);
    dens += csv_double(x) + "," + csv_double(mp_density(x, law)) + "\n";
  }
  io::write_text(dir / "density.csv", dens);
}

int cmd_analyze(AnalyzeArgs& args) {
  check_config(args.common);
  const CriterionConfig& cfg = args.common.cfg;
  const Spectrum s = load_input_spectrum(args.input, args.spectrum_input);
  const DeviationStatistic stat = s_hat(s, cfg.alpha, cfg.spike_scan);
  const Threshold thr = threshold(stat.n_bulk, cfg.C);
  const SpectrumClassification cls = classify_from(s, stat, cfg, args.expected_spikes);
  const EstimatedMPParams fit = estimate_params(s);
  const bool above = stat.value > thr.s_star;

  json doc = header("analysis");
  doc["input"] = args.input;
  doc["config"] = config_json(cfg);
  doc["n"] = s.size();
  doc["lambda_max"] = s.max();
  doc["lambda_min"] = s.min();
  doc["mp_fit"] = {{"a_hat", fit.a_hat}, {"b_hat", fit.b_hat}, {"c_hat", fit.c_hat}, {"sigma2_hat", fit.sigma2_hat}};
  doc["s_hat"] = stat.value;
  doc["s_star"] = thr.s_star;
  doc["normalized"] = stat.normalized;
  doc["n_bulk"] = stat.n_bulk;
  doc["bins"] = stat.bins;
  doc["bulk"] = {{"lower", stat.bulk_lower}, {"upper", stat.bulk_upper}};
  doc["spikes"] = {{"head", stat.spikes.head},
                   {"tail", stat.spikes.tail},
                   {"mean_gap", stat.spikes.mean_gap},
                   {"threshold", stat.spikes.threshold}};
  doc["classification"] = {{"bulk_type", std::string(to_string(cls.bulk_type))},
                           {"m", cls.label_m},
                           {"n", cls.label_n},
                           {"label", cls.label()}};
  doc["above_threshold"] = above;

  if (!args.common.out.empty()) io::write_text(output_path(args.common.out), doc.dump(2) + "\n");
  if (!args.plot_dir.empty()) write_plot(output_path(args.plot_dir), stat);

  if (args.common.json) {
    emit_json(doc);
  } else {
    std::cout << "eigenvalues     " << s.size() << " (bulk " << stat.n_bulk << ", head spikes " << stat.spikes.head
              << ", tail spikes " << stat.spikes.tail << ")\n"
              << "bulk edges      [" << fmt(stat.bulk_lower) << ", " << fmt(stat.bulk_upper) << "]\n"
              << "s_hat           " << fmt(stat.value) << " (normalized " << fmt(stat.normalized) << ")\n"
              << "threshold s*    " << fmt(thr.s_star) << " at C = " << fmt(cfg.C) << "\n"
              << "classification  " << cls.label() << "\n"
              << "verdict         " << (above ? "above threshold" : "below threshold") << "\n";
  }
  return above ? kExitAbove : kExitOk;
}

// ---------------------------------------------------------------- watch

struct WatchArgs {
  CommonFlags common;
  std::vector<std::string> dirs;
  std::string pattern = io::kDefaultCheckpointPattern;
  bool layer_any = false;
  bool follow = false;
  double interval = 5.0;
  std::size_t max_polls = 0;
};

struct Layer {
  std::string name;
  fs::path dir;
  StoppingMonitor monitor;
};

std::string verdict_line(const std::string& layer, const CriterionVerdict& v) {
  std::ostringstream os;
  os << layer << "  epoch " << v.epoch << "  ";
  if (v.skipped) {
    os << "skipped (" << v.skip_reason << ")";
  } else {
    os << "s_hat " << fmt(v.s_hat) << "  s* " << fmt(v.s_star) << "  " << (v.hit ? "hit " : "miss") << "  run "
       << v.consecutive_hits << "  " << v.classification.label();
    if (v.stop) os << "  STOP";
  }
  return os.str();
}

/// Evaluates checkpoints newer than the monitor's last epoch.
void advance(Layer& layer, const std::string& pattern, bool allow_empty, bool quiet) {
  io::CheckpointSeries series;
  try {
    series = io::scan_checkpoints(layer.dir, pattern);
  } catch (const Error& e) {
    if (allow_empty && e.code() == ErrorCode::kEmpty) return;
    throw;
  }
  const auto& hist = layer.monitor.history();
  for (const io::CheckpointEntry& entry : series.entries) {
    if (!hist.empty() && entry.epoch <= hist.back().epoch) continue;
    const Spectrum s = gram_spectrum(io::load_matrix(entry.path, entry.format));
    const CriterionVerdict& v = layer.monitor.evaluate_epoch(entry.epoch, s);
    if (!quiet) std::cout << verdict_line(layer.name, v) << "\n";
  }
}

std::optional<std::int64_t> aggregate_stop(const std::vector<Layer>& layers, bool any) {
  std::optional<std::int64_t> out;
  for (const Layer& l : layers) {
    const auto at = l.monitor.stopped_at();
    if (any) {
      if (at && (!out || *at < *out)) out = at;
    } else {
      if (!at) return std::nullopt;
      if (!out || *at > *out) out = at;
    }
  }
  return out;
}

int cmd_watch(WatchArgs& args) {
  check_config(args.common);
  const CriterionConfig& cfg = args.common.cfg;
  std::vector<Layer> layers;
  std::map<std::string, int> seen;
  for (const std::string& d : args.dirs) {
    fs::path dir(d);
    std::string name = dir.lexically_normal().filename().string();
    if (name.empty()) name = dir.lexically_normal().parent_path().filename().string();
    if (name.empty()) name = d;
    if (const int k = seen[name]++; k > 0) name += "#" + std::to_string(k);
    layers.push_back(Layer{name, dir, StoppingMonitor(cfg)});
  }
  const bool quiet = args.common.json;
  for (Layer& l : layers) advance(l, args.pattern, args.follow, quiet);

  std::size_t polls = 0;
  while (args.follow && !aggregate_stop(layers, args.layer_any) && (args.max_polls == 0 || polls < args.max_polls)) {
    std::this_thread::sleep_for(std::chrono::duration<double>(args.interval));
    ++polls;
    for (Layer& l : layers) advance(l, args.pattern, true, quiet);
  }

  io::Report report;
  report.config = cfg;
  report.version = kVersion;
  for (const Layer& l : layers) report.layers.push_back({l.name, l.monitor.history(), l.monitor.stopped_at()});
  report.stopped_at = aggregate_stop(layers, args.layer_any);

  json doc = io::report_to_json(report);
  doc["run"]["aggregation"] = args.layer_any ? "any" : "all";
  std::string out = args.common.out;
  if (out.empty() && std::getenv("SPECSTOP_OUT_DIR") != nullptr) out = "report.json";
  if (!out.empty()) io::write_text(output_path(out), doc.dump(2) + "\n");

  if (args.common.json) {
    emit_json(doc);
  } else if (report.stopped_at) {
    std::cout << "stop at epoch " << *report.stopped_at << "\n";
  } else {
    std::cout << "no stop\n";
  }
  return report.stopped_at ? kExitAbove : kExitOk;
}

// ---------------------------------------------------------------- calibrate

struct CalibrateArgs {
  CommonFlags common;
  std::vector<double> c_values{0.25, 0.5, 0.9};
  std::vector<std::size_t> n_values{500, 2000};
  std::size_t trials = 50;
  std::uint64_t seed = 1;
  std::string sampler = "iid";
  std::string spike_scan = "literal";
};

NullSampler parse_sampler(const std::string& s) {
  if (s == "iid") return NullSampler::kIid;
  if (s == "wishart") return NullSampler::kWishart;
  throw Error(ErrorCode::kInvalidArgument, "sampler must be iid or wishart");
}

int cmd_calibrate(const CalibrateArgs& args) {
  const TrialGrid grid{args.c_values, args.n_values, args.trials, args.seed, spike_scan_from_string(args.spike_scan)};
  const auto cells = calibrate(grid, parse_sampler(args.sampler));

  json doc = header("calibration");
  doc["sampler"] = args.sampler;
  doc["spike_scan"] = args.spike_scan;
  doc["trials"] = args.trials;
  doc["seed"] = args.seed;
  json jcells = json::array();
  std::string csv = "c,n,trial,normalized,s_hat,removed\n";
  for (const CalibrationCell& c : cells) {
    jcells.push_back({{"c", c.c},
                      {"n", c.n},
                      {"mean", c.mean},
                      {"min", c.min},
                      {"max", c.max},
                      {"q05", c.q05},
                      {"q50", c.q50},
                      {"q95", c.q95},
                      {"mean_removed", c.mean_removed}});
    for (std::size_t t = 0; t < c.normalized.size(); ++t) {
      csv += csv_double(c.c) + "," + std::to_string(c.n) + "," + std::to_string(t) + "," +
             csv_double(c.normalized[t]) + "," + csv_double(c.s_hat[t]) + "," + std::to_string(c.removed[t]) + "\n";
    }
  }
  doc["cells"] = jcells;
  if (!args.common.out.empty()) io::write_text(output_path(args.common.out), csv);

  if (args.common.json) {
    emit_json(doc);
  } else {
    std::printf("%6s %7s %9s %9s %9s %9s\n", "c", "n", "mean", "min", "max", "removed");
    for (const CalibrationCell& c : cells) {
      std::printf("%6.3g %7zu %9.4f %9.4f %9.4f %9.2f\n", c.c, c.n, c.mean, c.min, c.max, c.mean_removed);
    }
  }
  return kExitOk;
}

// ---------------------------------------------------------------- rates

struct RatesArgs {
  CommonFlags common;
  std::string kind = "prop1";
  std::vector<std::size_t> n_values{512, 1024, 2048, 4096, 8192, 16384};
  std::size_t trials = 30;
  std::uint64_t seed = 1;
  double c = 0.5;
  std::size_t bin_factor = 2;
  double spike = 3.0;
  std::size_t n_bbp = 2000;
};

json fit_json(const RateFit& f) {
  return json{{"slope", f.slope},
              {"intercept", f.intercept},
              {"r_squared", f.r_squared},
              {"n", f.n_values},
              {"mean", f.means}};
}

std::string fit_csv(const RateFit& f) {
  std::string csv = "n,mean\n";
  for (std::size_t i = 0; i < f.n_values.size(); ++i) {
    csv += csv_double(f.n_values[i]) + "," + csv_double(f.means[i]) + "\n";
  }
  return csv;
}

int cmd_rates(const RatesArgs& args) {
  json doc = header("rates");
  doc["rate"] = args.kind;
  doc["trials"] = args.trials;
  doc["seed"] = args.seed;
  doc["c"] = args.c;
  std::ostringstream text;
  std::string csv;
  if (args.kind == "prop1") {
    const RateFit f = rate_prop1(args.n_values, args.trials, args.seed, args.c, args.bin_factor);
    doc["bin_factor"] = args.bin_factor;
    doc["fit"] = fit_json(f);
    csv = fit_csv(f);
    text << "slope " << fmt(f.slope) << "  r^2 " << fmt(f.r_squared) << "\n";
  } else if (args.kind == "edge") {
    const EdgeRates e = rate_edge(args.n_values, args.trials, args.seed, args.c);
    doc["lower"] = fit_json(e.lower);
    doc["upper"] = fit_json(e.upper);
    csv = "n,lower_gap,upper_gap\n";
    for (std::size_t i = 0; i < e.lower.n_values.size(); ++i) {
      csv += csv_double(e.lower.n_values[i]) + "," + csv_double(e.lower.means[i]) + "," +
             csv_double(e.upper.means[i]) + "\n";
    }
    text << "lower edge slope " << fmt(e.lower.slope) << "  r^2 " << fmt(e.lower.r_squared) << "\n"
         << "upper edge slope " << fmt(e.upper.slope) << "  r^2 " << fmt(e.upper.r_squared) << "\n";
  } else if (args.kind == "bbp") {
    const BbpRecord r = bbp_check(args.spike, args.c, args.n_bbp, args.trials, args.seed);
    doc["n"] = r.n;
    doc["spike"] = r.alpha;
    doc["psi"] = r.psi;
    doc["mean_top"] = r.mean_top;
    doc["rel_error"] = r.rel_error;
    doc["edge"] = r.edge;
    doc["mean_top_null"] = r.mean_top_null;
    doc["rel_error_null"] = r.rel_error_null;
    doc["detected_fraction"] = r.detected_fraction;
    csv = "spike,c,n,psi,mean_top,rel_error,edge,mean_top_null,rel_error_null\n" + csv_double(r.alpha) + "," +
          csv_double(r.c) + "," + std::to_string(r.n) + "," + csv_double(r.psi) + "," + csv_double(r.mean_top) +
          "," + csv_double(r.rel_error) + "," + csv_double(r.edge) + "," + csv_double(r.mean_top_null) + "," +
          csv_double(r.rel_error_null) + "\n";
    text << "spiked top " << fmt(r.mean_top) << " vs psi " << fmt(r.psi) << " (rel " << fmt(r.rel_error) << ")\n"
         << "null top   " << fmt(r.mean_top_null) << " vs edge " << fmt(r.edge) << " (rel " << fmt(r.rel_error_null)
         << ")\n";
  } else {
    throw Error(ErrorCode::kInvalidArgument, "rate must be prop1, edge or bbp");
  }
  if (!args.common.out.empty()) io::write_text(output_path(args.common.out), csv);
  if (args.common.json) {
    emit_json(doc);
  } else {
    std::cout << text.str();
  }
  return kExitOk;
}

// ---------------------------------------------------------------- synth

struct SynthArgs {
  CommonFlags common;
  std::string variant = "d2";
  std::size_t classes = 2;
  std::size_t dimension = 1000;
  std::size_t per_class = 7500;
  double sigma = 1.0;
  double t = 1.0;
  double delta = 0.05;
  double base_mean = -0.2;
  std::uint64_t seed = 0;
};

int cmd_synth(const SynthArgs& args) {
  GaussianSpec spec;
  spec.classes = args.classes;
  spec.dimension = args.dimension;
  spec.per_class = args.per_class;
  spec.sigma = args.sigma;
  spec.seed = args.seed;
  if (args.variant == "d1") {
    spec.variant = D1Variant{args.delta, args.base_mean};
  } else if (args.variant == "d2") {
    spec.variant = D2Variant{args.t};
  } else {
    throw Error(ErrorCode::kInvalidArgument, "variant must be d1 or d2");
  }
  const auto means = args.variant == "d1" ? d1_means(spec) : d2_means(spec);
  const double ratio = snr(means, spec.sigma);

  json doc = header("synth");
  doc["variant"] = args.variant;
  doc["classes"] = spec.classes;
  doc["dimension"] = spec.dimension;
  doc["per_class"] = spec.per_class;
  doc["sigma"] = spec.sigma;
  doc["seed"] = spec.seed;
  doc["snr"] = ratio;
  if (!args.common.out.empty()) {
    const fs::path path = output_path(args.common.out);
    io::write_dataset(generate(spec), path);
    doc["output"] = args.common.out;
  }
  if (args.common.json) {
    emit_json(doc);
  } else {
    std::cout << "SNR " << fmt(ratio, 12) << "\n";
  }
  return kExitOk;
}

// ---------------------------------------------------------------- sample

struct SampleArgs {
  CommonFlags common;
  double c = 0.5;
  std::size_t n = 1000;
  double sigma2 = 1.0;
  std::uint64_t seed = 1;
  std::string sampler = "iid";
};

double ks_distance(const Spectrum& s, const MPDistribution& dist) {
  const auto n = static_cast<double>(s.size());
  double d = 0.0;
  // Ascending order statistic i has empirical CDF jumping from i/n to (i+1)/n.
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double f = dist.cdf(s[s.size() - 1 - i]);
    d = std::max({d, std::abs(f - static_cast<double>(i) / n), std::abs(static_cast<double>(i + 1) / n - f)});
  }
  return d;
}

int cmd_sample(const SampleArgs& args) {
  const MPParams law = MPParams::from_shape(args.c, args.sigma2);
  const MPDistribution dist(law);
  Rng rng = Rng::derive(args.seed, 0);
  const Spectrum s = parse_sampler(args.sampler) == NullSampler::kIid
                         ? dist.sample(args.n, rng)
                         : wishart_spectrum(args.n, args.c, rng, 1.0, args.sigma2);
  const double ks = ks_distance(s, dist);

  json doc = header("sample");
  doc["sampler"] = args.sampler;
  doc["c"] = args.c;
  doc["sigma2"] = args.sigma2;
  doc["n"] = args.n;
  doc["seed"] = args.seed;
  doc["support"] = {law.a, law.b};
  doc["ks"] = ks;
  if (!args.common.out.empty()) {
    io::write_spectrum_csv(s, output_path(args.common.out));
    doc["output"] = args.common.out;
  }
  if (args.common.json) {
    emit_json(doc);
  } else {
    std::cout << "drew " << s.size() << " eigenvalues on [" << fmt(law.a) << ", " << fmt(law.b) << "], KS "
              << fmt(ks) << "\n";
  }
  return kExitOk;
}

// ---------------------------------------------------------------- classify

int cmd_classify(AnalyzeArgs& args) {
  check_config(args.common);
  const CriterionConfig& cfg = args.common.cfg;
  const Spectrum s = load_input_spectrum(args.input, args.spectrum_input);
  const SpectrumClassification cls = classify_spectrum(s, cfg, args.expected_spikes);
  json doc = header("classification");
  doc["input"] = args.input;
  doc["config"] = config_json(cfg);
  doc["bulk_type"] = std::string(to_string(cls.bulk_type));
  doc["m"] = cls.label_m;
  doc["n"] = cls.label_n;
  doc["label"] = cls.label();
  if (!args.common.out.empty()) io::write_text(output_path(args.common.out), doc.dump(2) + "\n");
  if (args.common.json) {
    emit_json(doc);
  } else {
    std::cout << cls.label() << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral diagnostics and data-free early stopping for weight matrices"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  AnalyzeArgs analyze;
  auto* a = app.add_subcommand("analyze", "Statistic, threshold and classification for one matrix");
  a->add_option("input", analyze.input, "Matrix file (.csv or .npy)")->required();
  a->add_flag("--spectrum", analyze.spectrum_input, "Input holds eigenvalues, one row or column");
  a->add_option("--expected-spikes", analyze.expected_spikes, "Number of head spikes to label (e.g. K classes)");
  a->add_option("--plot-dir", analyze.plot_dir, "Write histogram.csv and density.csv here");
  add_criterion_flags(a, analyze.common);
  add_output_flags(a, analyze.common, "Write the JSON result here");

  WatchArgs watch;
  auto* w = app.add_subcommand("watch", "Run the stopping rule over checkpoint directories");
  w->add_option("dirs", watch.dirs, "One directory per layer")->required();
  w->add_option("--pattern", watch.pattern, "Checkpoint file regex; group 1 is the epoch")->capture_default_str();
  w->add_flag("--layer-any", watch.layer_any, "Stop as soon as any layer stops (default: all layers)");
  w->add_flag("--follow", watch.follow, "Poll for new checkpoints until a stop");
  w->add_option("--interval", watch.interval, "Polling interval in seconds")->capture_default_str();
  w->add_option("--max-polls", watch.max_polls, "Give up following after this many polls (0 = never)");
  add_criterion_flags(w, watch.common);
  add_output_flags(w, watch.common, "Write the JSON report here");

  CalibrateArgs calib;
  auto* c = app.add_subcommand("calibrate", "Monte Carlo calibration of the normalized statistic");
  c->add_option("--c", calib.c_values, "Aspect ratios")->delimiter(',')->capture_default_str();
  c->add_option("--n", calib.n_values, "Spectrum sizes")->delimiter(',')->capture_default_str();
  c->add_option("--trials", calib.trials)->capture_default_str();
  c->add_option("--seed", calib.seed)->capture_default_str();
  c->add_option("--sampler", calib.sampler, "iid or wishart")->capture_default_str();
  c->add_option("--spike-scan", calib.spike_scan, "literal or outermost")->capture_default_str();
  add_output_flags(c, calib.common, "Write the per-trial CSV here");

  RatesArgs rates;
  auto* r = app.add_subcommand("rates", "Convergence-rate and spike-location experiments");
  r->add_option("--rate", rates.kind, "prop1, edge or bbp")->capture_default_str();
  r->add_option("--n", rates.n_values, "Spectrum sizes (prop1, edge)")->delimiter(',')->capture_default_str();
  r->add_option("--trials", rates.trials)->capture_default_str();
  r->add_option("--seed", rates.seed)->capture_default_str();
  r->add_option("--c", rates.c)->capture_default_str();
  r->add_option("--bin-factor", rates.bin_factor, "Bins per floor(n^(1/3)) (prop1)")->capture_default_str();
  r->add_option("--spike", rates.spike, "Population spike (bbp)")->capture_default_str();
  r->add_option("--size", rates.n_bbp, "Spectrum size (bbp)")->capture_default_str();
  add_output_flags(r, rates.common, "Write the series CSV here");

  SynthArgs synth;
  auto* s = app.add_subcommand("synth", "Gaussian-mixture datasets");
  s->add_option("--variant", synth.variant, "d1 or d2")->capture_default_str();
  s->add_option("--k", synth.classes, "Classes")->capture_default_str();
  s->add_option("--p", synth.dimension, "Dimension")->capture_default_str();
  s->add_option("--per-class", synth.per_class)->capture_default_str();
  s->add_option("--sigma", synth.sigma)->capture_default_str();
  s->add_option("--t", synth.t, "Mean scale (d2)")->capture_default_str();
  s->add_option("--delta", synth.delta, "Mean shift (d1)")->capture_default_str();
  s->add_option("--base-mean", synth.base_mean, "Base mean (d1)")->capture_default_str();
  s->add_option("--seed", synth.seed)->capture_default_str();
  add_output_flags(s, synth.common, "Write the dataset here (.csv or .npy)");

  SampleArgs sample;
  auto* sm = app.add_subcommand("sample", "Draw a null spectrum");
  sm->add_option("--c", sample.c)->capture_default_str();
  sm->add_option("--n", sample.n)->capture_default_str();
  sm->add_option("--sigma2", sample.sigma2)->capture_default_str();
  sm->add_option("--seed", sample.seed)->capture_default_str();
  sm->add_option("--sampler", sample.sampler, "iid or wishart")->capture_default_str();
  add_output_flags(sm, sample.common, "Write the spectrum CSV here");

  AnalyzeArgs classify;
  auto* cl = app.add_subcommand("classify", "LT/BT/HT/RankCollapse label of one matrix");
  cl->add_option("input", classify.input, "Matrix file (.csv or .npy)")->required();
  cl->add_flag("--spectrum", classify.spectrum_input, "Input holds eigenvalues, one row or column");
  cl->add_option("--expected-spikes", classify.expected_spikes, "Number of head spikes to label");
  add_criterion_flags(cl, classify.common);
  add_output_flags(cl, classify.common, "Write the JSON result here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitError;
  }

  try {
    if (*a) return cmd_analyze(analyze);
    if (*w) return cmd_watch(watch);
    if (*c) return cmd_calibrate(calib);
    if (*r) return cmd_rates(rates);
    if (*s) return cmd_synth(synth);
    if (*sm) return cmd_sample(sample);
    if (*cl) return cmd_classify(classify);
  } catch (const std::exception& e) {
    std::cerr << "specstop: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
