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


#include "specstop/criterion.hpp"

#include <cmath>

#include "specstop/error.hpp"

namespace specstop {

Threshold threshold(std::size_t n, double C) {
  if (n < 3) throw Error(ErrorCode::kTooSmall, "threshold needs n >= 3");
  if (!(C > 0.0)) throw Error(ErrorCode::kInvalidArgument, "criterion constant C must be positive");
  const double dn = static_cast<double>(n);
  return Threshold{C, n, C * std::sqrt(std::log(dn)) / std::cbrt(dn)};
}

std::string_view to_string(BulkType t) {
  switch (t) {
    case BulkType::kLightTail: return "LT";
    case BulkType::kBulkTransition: return "BT";
    case BulkType::kHeavyTail: return "HT";
    case BulkType::kRankCollapse: return "RankCollapse";
  }
  return "?";
}

BulkType bulk_type_from_string(std::string_view s) {
  if (s == "LT") return BulkType::kLightTail;
  if (s == "BT") return BulkType::kBulkTransition;
  if (s == "HT") return BulkType::kHeavyTail;
  if (s == "RankCollapse") return BulkType::kRankCollapse;
  throw Error(ErrorCode::kSchemaError, "unknown bulk type '" + std::string(s) + "'");
}

std::string SpectrumClassification::label() const {
  return std::string(to_string(bulk_type)) + "(" + std::to_string(label_m) + "," + std::to_string(label_n) + ")";
}

namespace {

void validate(const CriterionConfig& cfg) {
  if (!(cfg.C > 0.0)) throw Error(ErrorCode::kInvalidArgument, "C must be positive");
  if (!(cfg.alpha > 0.0)) throw Error(ErrorCode::kInvalidArgument, "alpha must be positive");
  if (!(cfg.tau >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "tau must be nonnegative");
  if (!(cfg.kappa > 1.0)) throw Error(ErrorCode::kInvalidArgument, "kappa must exceed 1");
  if (cfg.required_consecutive == 0) throw Error(ErrorCode::kInvalidArgument, "required_consecutive must be >= 1");
}

// Splits the head spikes into the far group and the group between it and
// the bulk, at the widest internal gap when that gap is at least
// min_split wide. Returns (m, n).
std::pair<std::size_t, std::size_t> spike_groups(const Spectrum& s, const SpikeReport& spikes,
                                                 std::optional<std::size_t> expected, double min_split) {
  std::size_t h = spikes.head;
  if (expected && h > *expected) h = *expected;
  if (h == 0) return {0, 0};
  std::size_t split = 0;
  double widest = 0.0;
  for (std::size_t j = 1; j < h; ++j) {
    const double gap = s[j - 1] - s[j];
    if (gap > widest) {
      widest = gap;
      split = j;
    }
  }
  if (split == 0 || !(widest > spikes.threshold) || !(widest >= min_split)) return {0, h};
  return {h - split, split};
}

}  // namespace

SpectrumClassification classify_from(const Spectrum& s, const DeviationStatistic& stat, const CriterionConfig& cfg,
                                     std::optional<std::size_t> expected_spikes) {
  validate(cfg);
  SpectrumClassification out;
  const double width = stat.bulk_upper - stat.bulk_lower;
  // Groups must be as far apart as a bulk-transition cluster is from the bulk.
  const auto [m, n] = spike_groups(s, stat.spikes, expected_spikes, cfg.tau * width);
  out.label_m = m;
  out.label_n = n;

  if (s.max() > cfg.kappa * stat.bulk_upper) {
    out.bulk_type = BulkType::kRankCollapse;
    if (out.label_n == 0) out.label_n = 1;
    return out;
  }
  if (stat.value <= threshold(stat.n_bulk, cfg.C).s_star) {
    out.bulk_type = BulkType::kLightTail;
    return out;
  }
  const std::size_t head = stat.spikes.head;
  const double separation = head >= 1 ? s[head - 1] - stat.bulk_upper : 0.0;
  out.bulk_type = (head >= 1 && separation >= cfg.tau * width) ? BulkType::kBulkTransition : BulkType::kHeavyTail;
  return out;
}

SpectrumClassification classify_spectrum(const Spectrum& s, const CriterionConfig& cfg,
                                         std::optional<std::size_t> expected_spikes) {
  if (s.size() < kMinBulk) throw Error(ErrorCode::kTooSmall, "classification needs at least 32 eigenvalues");
  return classify_from(s, s_hat(s, cfg.alpha, cfg.spike_scan), cfg, expected_spikes);
}

StoppingMonitor::StoppingMonitor(CriterionConfig cfg) : cfg_(cfg) { validate(cfg_); }

const CriterionVerdict& StoppingMonitor::evaluate_epoch(std::int64_t epoch, const Spectrum& s) {
  if (!history_.empty() && epoch <= history_.back().epoch) {
    throw Error(ErrorCode::kInvalidArgument, "epoch ids must be strictly increasing");
  }
  CriterionVerdict v;
  v.epoch = epoch;
  try {
    const DeviationStatistic stat = s_hat(s, cfg_.alpha, cfg_.spike_scan);
    const Threshold thr = threshold(stat.n_bulk, cfg_.C);
    v.s_hat = stat.value;
    v.s_star = thr.s_star;
    v.normalized = stat.normalized;
    v.n_bulk = stat.n_bulk;
    v.bins = stat.bins;
    v.spikes = stat.spikes;
    v.classification = classify_from(s, stat, cfg_);
    v.hit = v.s_hat > v.s_star;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kTooSmall && e.code() != ErrorCode::kDegenerate) throw;
    v.skipped = true;
    v.skip_reason = e.what();
  }
  if (!v.skipped) {
    if (v.hit) {
      if (consecutive_hits_ < cfg_.required_consecutive) ++consecutive_hits_;
    } else {
      consecutive_hits_ = 0;
    }
    v.stop = v.hit && consecutive_hits_ >= cfg_.required_consecutive;
    if (v.stop && !stopped_at_) stopped_at_ = epoch;
  }
  v.consecutive_hits = consecutive_hits_;
  history_.push_back(std::move(v));
  return history_.back();
}

}  // namespace specstop
