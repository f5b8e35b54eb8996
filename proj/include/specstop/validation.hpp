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
#include <vector>

#include "specstop/linalg.hpp"
#include "specstop/rng.hpp"
#include "specstop/spectral_stats.hpp"

namespace specstop {

/// How null spectra are drawn.
enum class NullSampler {
  kIid,      // i.i.d. draws from the MP density (inverse CDF)
  kWishart,  // eigenvalues of a real Gaussian sample covariance matrix
};

struct TrialGrid {
  std::vector<double> c_values;
  std::vector<std::size_t> n_values;
  std::size_t trials = 50;  // >= 10
  std::uint64_t seed = 1;
  SpikeScan spike_scan = SpikeScan::kLiteral;
};

struct CalibrationCell {
  double c = 0.0;
  std::size_t n = 0;
  std::vector<double> normalized;  // one per trial
  std::vector<double> s_hat;
  std::vector<std::size_t> removed;  // spikes stripped per trial (HS + TS)
  double min = 0.0;
  double max = 0.0;
  double mean = 0.0;
  double q05 = 0.0;
  double q50 = 0.0;
  double q95 = 0.0;
  double mean_removed = 0.0;
};

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::vector<double> n_values;
  std::vector<double> means;
};

struct EdgeRates {
  RateFit lower;  // X_(1) - a
  RateFit upper;  // b - X_(n)
};

struct BbpRecord {
  double alpha = 0.0;
  double c = 0.0;
  std::size_t n = 0;
  std::size_t trials = 0;
  double psi = 0.0;
  double mean_top = 0.0;
  double rel_error = 0.0;
  double edge = 0.0;  // (1 + sqrt c)^2
  double mean_top_null = 0.0;
  double rel_error_null = 0.0;
  /// Fraction of spiked trials in which detect_spikes reports HS >= 1.
  double detected_fraction = 0.0;
};

struct HarnessOptions {
  bool parallel = true;
};

/// Eigenvalues of (1/N) Y Y^T, Y = Sigma^(1/2) X with X an n x N standard
/// real Gaussian matrix, N = round(n / c) and Sigma = sigma2 * diag(spike, 1, ..., 1).
/// Sampled exactly through the bidiagonal chi-distributed reduction of X,
/// at O(n^2) cost instead of forming X.
Spectrum wishart_spectrum(std::size_t n, double c, Rng& rng, double spike = 1.0, double sigma2 = 1.0);

/// Same law, built the slow way: forms X and calls gram_spectrum.
Spectrum wishart_spectrum_dense(std::size_t n, double c, Rng& rng, double spike = 1.0, double sigma2 = 1.0);

/// Normalized statistic per trial for every (c, n) cell, spikes removed
/// as in s_hat. Needs trials >= 10 and every n >= 64. Output is independent
/// of thread count.
std::vector<CalibrationCell> calibrate(const TrialGrid& grid, NullSampler sampler = NullSampler::kIid,
                                       HarnessOptions opts = {});

/// Least squares of log(y) on log(x).
RateFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y);

/// Mean of s_n / sqrt(ln n) with the true MP(c, 1) law and
/// M = bin_factor * floor(n^(1/3)) bins, regressed on n.
RateFit rate_prop1(const std::vector<std::size_t>& n_values, std::size_t trials, std::uint64_t seed,
                   double c = 0.5, std::size_t bin_factor = 2, HarnessOptions opts = {});

/// Mean distance of the extreme i.i.d. order statistics to the MP edges.
EdgeRates rate_edge(const std::vector<std::size_t>& n_values, std::size_t trials, std::uint64_t seed,
                    double c = 0.5, HarnessOptions opts = {});

/// Mean top eigenvalue of spiked Wishart spectra against psi(alpha), and of
/// unspiked ones against (1 + sqrt c)^2.
BbpRecord bbp_check(double alpha, double c, std::size_t n, std::size_t trials, std::uint64_t seed,
                    HarnessOptions opts = {});

}  // namespace specstop
