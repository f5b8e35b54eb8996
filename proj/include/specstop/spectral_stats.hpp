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
#include <string_view>
#include <vector>

#include "specstop/linalg.hpp"
#include "specstop/mp_law.hpp"

namespace specstop {

/// Equal-width histogram density estimate on [edges.front(), edges.back()].
struct HistogramEstimator {
  std::vector<double> edges;    // M + 1, strictly increasing
  std::vector<double> heights;  // M, density units
  std::vector<std::size_t> counts;

  std::size_t bins() const { return heights.size(); }
  double total_mass() const;
};

/// Bins are right-closed, (lo + (j-1)w, lo + jw], except that `lo` itself
/// falls in the first bin.
HistogramEstimator histogram_estimator(const Spectrum& s, std::size_t bins, double lo, double hi);

struct SpikeReport {
  std::size_t head = 0;  // HS: outliers above the bulk
  std::size_t tail = 0;  // TS: outliers below the bulk
  double alpha = 7.0;
  double mean_gap = 0.0;
  double threshold = 0.0;  // alpha * mean_gap

  friend bool operator==(const SpikeReport&, const SpikeReport&) = default;
};

inline constexpr double kDefaultSpikeAlpha = 7.0;

/// Which qualifying gap sets the spike counts.
enum class SpikeScan {
  kLiteral,    // innermost qualifying gap on each side (later loop iterations overwrite)
  kOutermost,  // qualifying gap closest to each end of the spectrum
};

std::string_view to_string(SpikeScan scan);
SpikeScan spike_scan_from_string(std::string_view s);

/// Gap-based outlier detection on the descending spectrum. Any gap larger
/// than alpha times the mean gap marks a split; in literal mode the head
/// count is the last such split in the upper half and the tail count the
/// last one visited in the lower half (scanning downward). Needs at least
/// 4 values.
SpikeReport detect_spikes(const Spectrum& s, double alpha = kDefaultSpikeAlpha,
                          SpikeScan scan = SpikeScan::kLiteral);

/// One equal-count bin of the practical statistic.
struct BinSummary {
  double upper = 0.0;
  double lower = 0.0;
  double level = 0.0;  // histogram height on the bin
  double mass = 0.0;   // fraction of bulk eigenvalues assigned to the bin
  double contribution = 0.0;
};

struct DeviationStatistic {
  double value = 0.0;
  std::size_t n_bulk = 0;
  std::size_t bins = 0;
  double normalized = 0.0;  // value * n^(1/3) / sqrt(ln n)
  std::size_t clipped = 0;  // values moved onto the support (theoretical statistic only)
  SpikeReport spikes;
  double bulk_upper = 0.0;
  double bulk_lower = 0.0;
  std::vector<BinSummary> bin_detail;
};

/// Bin rule shared by both statistics: 2 * floor(n^(1/3)).
std::size_t default_bin_count(std::size_t n);
/// floor(n^(1/3)) without floating-point rounding surprises.
std::size_t integer_cbrt(std::size_t n);
/// value * n^(1/3) / sqrt(ln n).
double normalize_statistic(double value, std::size_t n);

inline constexpr std::size_t kMinBulk = 32;

/// L1 distance between the bulk's equal-count histogram and the MP
/// density whose edges are the bulk's extreme eigenvalues. Spikes found by
/// detect_spikes are removed first. Scale invariant.
DeviationStatistic s_hat(const Spectrum& s, double alpha = kDefaultSpikeAlpha, SpikeScan scan = SpikeScan::kLiteral);

/// L1 distance between the equal-width histogram on the law's support
/// (M bins) and the known MP density. Values outside [a, b] are clipped
/// onto the support and counted.
DeviationStatistic s_n_theoretical(const Spectrum& s, const MPParams& p, std::size_t bins);

/// Integral over [lo, hi] of |f(x) - level|, f the MP density with support
/// [a, b] and [lo, hi] inside it. The interval is split at the (at most
/// two) crossings f = level, then each piece is integrated by adaptive
/// Simpson on the angle grid of mp_x_of_angle.
double mp_bin_l1(double a, double b, double lo, double hi, double level, double tol);

}  // namespace specstop
