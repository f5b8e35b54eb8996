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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "specstop/linalg.hpp"
#include "specstop/spectral_stats.hpp"

namespace specstop {

struct Threshold {
  double C = 0.4;
  std::size_t n = 0;
  double s_star = 0.0;
};

/// s* = C sqrt(ln n) / n^(1/3).
Threshold threshold(std::size_t n, double C);

enum class BulkType { kLightTail, kBulkTransition, kHeavyTail, kRankCollapse };

std::string_view to_string(BulkType t);
BulkType bulk_type_from_string(std::string_view s);

/// Bulk type plus the XX(m, n) spike label: n counts the spike group
/// farthest from the bulk, m the group lying between it and the bulk.
struct SpectrumClassification {
  BulkType bulk_type = BulkType::kLightTail;
  std::size_t label_m = 0;
  std::size_t label_n = 0;

  std::string label() const;
  friend bool operator==(const SpectrumClassification&, const SpectrumClassification&) = default;
};

struct CriterionConfig {
  double C = 0.4;
  double alpha = kDefaultSpikeAlpha;
  double tau = 0.5;     // BT needs the head spikes tau * bulk width above the bulk; also the spike-group split
  double kappa = 100.0; // rank collapse when the top eigenvalue exceeds kappa * bulk edge
  std::size_t required_consecutive = 3;
  SpikeScan spike_scan = SpikeScan::kLiteral;

  friend bool operator==(const CriterionConfig&, const CriterionConfig&) = default;
};

/// Classification from an already computed statistic.
SpectrumClassification classify_from(const Spectrum& s, const DeviationStatistic& stat, const CriterionConfig& cfg,
                                     std::optional<std::size_t> expected_spikes = std::nullopt);

SpectrumClassification classify_spectrum(const Spectrum& s, const CriterionConfig& cfg = {},
                                         std::optional<std::size_t> expected_spikes = std::nullopt);

struct CriterionVerdict {
  std::int64_t epoch = 0;
  bool skipped = false;
  std::string skip_reason;  // set for skipped epochs
  double s_hat = 0.0;
  double s_star = 0.0;
  double normalized = 0.0;
  std::size_t n_bulk = 0;
  std::size_t bins = 0;
  bool hit = false;
  std::size_t consecutive_hits = 0;
  bool stop = false;
  SpikeReport spikes;
  SpectrumClassification classification;

  friend bool operator==(const CriterionVerdict&, const CriterionVerdict&) = default;
};

/// Three-consecutive-hit early-stopping state machine. Single writer.
class StoppingMonitor {
 public:
  explicit StoppingMonitor(CriterionConfig cfg = {});

  /// Epoch ids must be strictly increasing. Epochs whose statistic cannot
  /// be computed (too few or tied eigenvalues) are recorded as skipped and
  /// leave the consecutive counter untouched.
  const CriterionVerdict& evaluate_epoch(std::int64_t epoch, const Spectrum& s);

  const CriterionConfig& config() const { return cfg_; }
  std::size_t consecutive_hits() const { return consecutive_hits_; }
  std::optional<std::int64_t> stopped_at() const { return stopped_at_; }
  bool stopped() const { return stopped_at_.has_value(); }
  const std::vector<CriterionVerdict>& history() const { return history_; }

 private:
  CriterionConfig cfg_;
  std::size_t consecutive_hits_ = 0;
  std::optional<std::int64_t> stopped_at_;
  std::vector<CriterionVerdict> history_;
};

}  // namespace specstop
