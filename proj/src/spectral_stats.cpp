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


#include "specstop/spectral_stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "specstop/error.hpp"
#include "specstop/quadrature.hpp"

namespace specstop {

double HistogramEstimator::total_mass() const {
  double m = 0.0;
  for (std::size_t j = 0; j < heights.size(); ++j) m += heights[j] * (edges[j + 1] - edges[j]);
  return m;
}

HistogramEstimator histogram_estimator(const Spectrum& s, std::size_t bins, double lo, double hi) {
  if (bins == 0) throw Error(ErrorCode::kInvalidArgument, "histogram needs at least one bin");
  if (!(lo < hi)) throw Error(ErrorCode::kEmptyBinRange, "histogram range must satisfy lo < hi");
  const double width = (hi - lo) / static_cast<double>(bins);
  HistogramEstimator h;
  h.edges.resize(bins + 1);
  for (std::size_t j = 0; j <= bins; ++j) h.edges[j] = lo + width * static_cast<double>(j);
  h.edges.back() = hi;
  h.counts.assign(bins, 0);
  for (double x : s.values()) {
    if (x < lo || x > hi) throw Error(ErrorCode::kOutOfRange, "value outside the histogram range");
    // Right-closed bins: x belongs to the first j with x <= edges[j + 1].
    auto j = static_cast<std::ptrdiff_t>(std::ceil((x - lo) / width)) - 1;
    j = std::clamp<std::ptrdiff_t>(j, 0, static_cast<std::ptrdiff_t>(bins) - 1);
    auto ju = static_cast<std::size_t>(j);
    // Floating-point guard for values sitting on an edge.
    while (ju + 1 < bins && x > h.edges[ju + 1]) ++ju;
    while (ju > 0 && x <= h.edges[ju]) --ju;
    ++h.counts[ju];
  }
  const double n = static_cast<double>(s.size());
  h.heights.resize(bins);
  for (std::size_t j = 0; j < bins; ++j) {
    h.heights[j] = static_cast<double>(h.counts[j]) / (n * (h.edges[j + 1] - h.edges[j]));
  }
  return h;
}

std::string_view to_string(SpikeScan scan) { return scan == SpikeScan::kLiteral ? "literal" : "outermost"; }

SpikeScan spike_scan_from_string(std::string_view s) {
  if (s == "literal") return SpikeScan::kLiteral;
  if (s == "outermost") return SpikeScan::kOutermost;
  throw Error(ErrorCode::kInvalidArgument, "spike scan must be literal or outermost");
}

SpikeReport detect_spikes(const Spectrum& s, double alpha, SpikeScan scan) {
  const std::size_t n = s.size();
  if (n < 4) throw Error(ErrorCode::kTooSmall, "spike detection needs at least 4 eigenvalues");
  if (!(alpha > 0.0)) throw Error(ErrorCode::kInvalidArgument, "spike alpha must be positive");
  // gaps[i - 1] is beta_i = lambda_i - lambda_{i+1}, 1-based i.
  std::vector<double> gaps(n - 1);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    gaps[i] = s[i] - s[i + 1];
    total += gaps[i];
  }
  SpikeReport r;
  r.alpha = alpha;
  r.mean_gap = total / static_cast<double>(n - 1);
  r.threshold = alpha * r.mean_gap;
  const bool outermost = scan == SpikeScan::kOutermost;
  for (std::size_t i = 1; 2 * i < n; ++i) {
    if (gaps[i - 1] > r.threshold) {
      r.head = i;
      if (outermost) break;
    }
  }
  for (std::size_t i = n - 1; 2 * i > n; --i) {
    if (gaps[i - 1] > r.threshold) {
      r.tail = n - i;
      if (outermost) break;
    }
  }
  return r;
}

std::size_t integer_cbrt(std::size_t n) {
  auto r = static_cast<std::size_t>(std::cbrt(static_cast<double>(n)));
  while (r > 0 && r * r * r > n) --r;
  while ((r + 1) * (r + 1) * (r + 1) <= n) ++r;
  return r;
}

std::size_t default_bin_count(std::size_t n) { return 2 * integer_cbrt(n); }

double normalize_statistic(double value, std::size_t n) {
  if (n < 2) return 0.0;
  const double dn = static_cast<double>(n);
  return value * std::cbrt(dn) / std::sqrt(std::log(dn));
}

double mp_bin_l1(double a, double b, double lo, double hi, double level, double tol) {
  lo = std::clamp(lo, a, b);
  hi = std::clamp(hi, a, b);
  if (!(hi > lo)) return 0.0;
  const double half = (b - a) / 2.0;
  const double c0 = [&] {
    const double d = std::sqrt(b) - std::sqrt(a);
    return std::numbers::pi * d * d / 2.0;
  }();

  auto excess = [&](double theta) {
    const double x = mp_x_of_angle(theta, a, b);
    if (x <= a) return a == 0.0 ? std::numeric_limits<double>::infinity() : -level;
    if (x >= b) return -level;
    return std::sqrt((b - x) * (x - a)) / (c0 * x) - level;
  };
  auto signed_weight = [&](double theta) {
    return mp_angular_weight(theta, a, b) - level * half * std::sin(theta);
  };

  const double t_lo = mp_angle_of_x(lo, a, b);
  const double t_hi = mp_angle_of_x(hi, a, b);
  std::vector<double> cuts{t_lo};
  // The density rises up to its mode 2ab / (a + b) and falls after it, so
  // each side holds at most one crossing.
  const double t_mode = a > 0.0 ? mp_angle_of_x(2.0 * a * b / (a + b), a, b) : 0.0;
  if (t_mode > t_lo && t_mode < t_hi) cuts.push_back(t_mode);
  cuts.push_back(t_hi);

  std::vector<double> pieces{cuts.front()};
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double p = cuts[k];
    const double q = cuts[k + 1];
    const double ep = excess(p);
    const double eq = excess(q);
    if (ep != 0.0 && eq != 0.0 && (ep > 0.0) != (eq > 0.0)) {
      pieces.push_back(quad::bisect(excess, p, q, 1e-15));
    }
    pieces.push_back(q);
  }

  const double piece_tol = tol / static_cast<double>(pieces.size() - 1);
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < pieces.size(); ++k) {
    total += std::abs(quad::adaptive_simpson(signed_weight, pieces[k], pieces[k + 1], piece_tol));
  }
  return total;
}

DeviationStatistic s_hat(const Spectrum& s, double alpha, SpikeScan scan) {
  const SpikeReport spikes = detect_spikes(s, alpha, scan);
  const std::size_t n = s.size() - spikes.head - spikes.tail;
  if (n < kMinBulk) throw Error(ErrorCode::kTooSmall, "bulk has fewer than 32 eigenvalues after spike removal");

  // gamma(i), 1-based, descending bulk.
  auto gamma = [&](std::size_t i) { return s[spikes.head + i - 1]; };
  const double top = gamma(1);
  const double bottom = gamma(n);
  if (!(top - bottom > 1e-12 * top)) throw Error(ErrorCode::kDegenerate, "bulk has zero width");

  const std::size_t bins = default_bin_count(n);
  const std::size_t per_bin = n / bins;
  const double dn = static_cast<double>(n);

  DeviationStatistic out;
  out.n_bulk = n;
  out.bins = bins;
  out.spikes = spikes;
  out.bulk_upper = top;
  out.bulk_lower = bottom;
  out.bin_detail.reserve(bins);

  auto add_bin = [&](std::size_t ia, std::size_t ib) {
    BinSummary bin;
    bin.upper = gamma(ia);
    bin.lower = gamma(ib);
    bin.mass = static_cast<double>(ib - ia) / dn;
    if (bin.upper > bin.lower) {
      bin.level = bin.mass / (bin.upper - bin.lower);
      bin.contribution = mp_bin_l1(bottom, top, bin.lower, bin.upper, bin.level, 1e-10);
    } else {
      // Tied eigenvalues: the bin is a point mass, which sits at L1 distance
      // equal to its mass from any density. level stays 0 (undefined).
      bin.contribution = bin.mass;
    }
    out.value += bin.contribution;
    out.bin_detail.push_back(bin);
  };
  for (std::size_t i = 1; i < bins; ++i) add_bin((i - 1) * per_bin + 1, i * per_bin + 1);
  add_bin((bins - 1) * per_bin + 1, n);

  out.normalized = normalize_statistic(out.value, n);
  return out;
}

DeviationStatistic s_n_theoretical(const Spectrum& s, const MPParams& p, std::size_t bins) {
  if (!(p.b > p.a)) throw Error(ErrorCode::kDegenerate, "MP support has zero width");
  if (bins == 0) throw Error(ErrorCode::kInvalidArgument, "need at least one bin");
  std::vector<double> clipped_values(s.values().begin(), s.values().end());
  std::size_t clipped = 0;
  for (double& x : clipped_values) {
    if (x < p.a || x > p.b) {
      x = std::clamp(x, p.a, p.b);
      ++clipped;
    }
  }
  const HistogramEstimator h = histogram_estimator(Spectrum(std::move(clipped_values)), bins, p.a, p.b);

  DeviationStatistic out;
  out.n_bulk = s.size();
  out.bins = bins;
  out.clipped = clipped;
  out.bulk_upper = p.b;
  out.bulk_lower = p.a;
  for (std::size_t j = 0; j < bins; ++j) {
    BinSummary bin;
    bin.lower = h.edges[j];
    bin.upper = h.edges[j + 1];
    bin.level = h.heights[j];
    bin.mass = static_cast<double>(h.counts[j]) / static_cast<double>(s.size());
    bin.contribution = mp_bin_l1(p.a, p.b, bin.lower, bin.upper, bin.level, 1e-8);
    out.value += bin.contribution;
    out.bin_detail.push_back(bin);
  }
  out.normalized = normalize_statistic(out.value, s.size());
  return out;
}

}  // namespace specstop
