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


#include "specstop/validation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "specstop/error.hpp"
#include "specstop/mp_law.hpp"
#include "specstop/parallel.hpp"
#include "specstop/spectral_stats.hpp"

namespace specstop {

namespace {

std::size_t sample_count(std::size_t n, double c) {
  if (!(c > 0.0 && c <= 1.0)) throw Error(ErrorCode::kInvalidArgument, "c must lie in (0, 1]");
  if (n < 1) throw Error(ErrorCode::kInvalidArgument, "n must be >= 1");
  return std::max(n, static_cast<std::size_t>(std::llround(static_cast<double>(n) / c)));
}

template <class T, class Fn>
std::vector<T> run_map(const HarnessOptions& opts, std::size_t count, Fn&& fn) {
  return opts.parallel ? parallel_map<T>(count, fn) : serial_map<T>(count, fn);
}

double quantile_sorted(const std::vector<double>& sorted, double q) {
  if (sorted.size() == 1) return sorted.front();
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

double mean_of(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

void check_rate_grid(const std::vector<std::size_t>& n_values, std::size_t trials) {
  if (n_values.size() < 2) throw Error(ErrorCode::kInvalidArgument, "rate fits need at least two n values");
  if (trials < 1) throw Error(ErrorCode::kInvalidArgument, "need at least one trial");
}

}  // namespace

Spectrum wishart_spectrum(std::size_t n, double c, Rng& rng, double spike, double sigma2) {
  const std::size_t big_n = sample_count(n, c);
  if (!(spike > 0.0) || !(sigma2 > 0.0)) throw Error(ErrorCode::kInvalidArgument, "spike and sigma2 must be positive");
  // X = Q B P with B lower bidiagonal, diag_i ~ chi_{N-i+1}, sub_i ~ chi_{n-i}
  // (1-based). Left reflections only touch rows 2..n, so the population
  // scaling of row 1 commutes with them and lands on B's first row.
  std::vector<double> d(n);
  std::vector<double> e(n > 0 ? n - 1 : 0);
  for (std::size_t i = 0; i < n; ++i) d[i] = rng.chi(static_cast<double>(big_n - i));
  for (std::size_t i = 0; i + 1 < n; ++i) e[i] = rng.chi(static_cast<double>(n - 1 - i));
  d[0] *= std::sqrt(spike);

  const double scale = sigma2 / static_cast<double>(big_n);
  std::vector<double> diag(n);
  std::vector<double> off(n > 0 ? n - 1 : 0);
  for (std::size_t i = 0; i < n; ++i) {
    diag[i] = d[i] * d[i] + (i > 0 ? e[i - 1] * e[i - 1] : 0.0);
    diag[i] *= scale;
  }
  for (std::size_t i = 0; i + 1 < n; ++i) off[i] = d[i] * e[i] * scale;

  std::vector<double> eig = tridiagonal_eigenvalues(diag, off);
  for (double& v : eig) v = std::max(v, 0.0);
  return Spectrum(std::move(eig));
}

Spectrum wishart_spectrum_dense(std::size_t n, double c, Rng& rng, double spike, double sigma2) {
  const std::size_t big_n = sample_count(n, c);
  std::vector<double> x(n * big_n);
  for (double& v : x) v = rng.normal();
  const double row0 = std::sqrt(spike * sigma2);
  const double rest = std::sqrt(sigma2);
  for (std::size_t j = 0; j < big_n; ++j) x[j] *= row0;
  for (std::size_t i = 1; i < n; ++i) {
    for (std::size_t j = 0; j < big_n; ++j) x[i * big_n + j] *= rest;
  }
  return gram_spectrum(WeightMatrix(n, big_n, std::move(x)));
}

std::vector<CalibrationCell> calibrate(const TrialGrid& grid, NullSampler sampler, HarnessOptions opts) {
  if (grid.trials < 10) throw Error(ErrorCode::kInvalidArgument, "calibration needs at least 10 trials per cell");
  for (std::size_t n : grid.n_values) {
    if (n < 64) throw Error(ErrorCode::kInvalidArgument, "calibration needs n >= 64");
  }
  struct Trial {
    double normalized = 0.0;
    double value = 0.0;
    std::size_t removed = 0;
  };
  std::vector<CalibrationCell> cells;
  std::size_t cell_index = 0;
  for (double c : grid.c_values) {
    const MPParams law = MPParams::from_shape(c, 1.0);
    const MPDistribution dist(law);
    for (std::size_t n : grid.n_values) {
      const std::size_t stream = cell_index++;
      auto trials = run_map<Trial>(opts, grid.trials, [&](std::size_t t) {
        Rng rng = Rng::derive(grid.seed, stream, t);
        const Spectrum s = sampler == NullSampler::kIid ? dist.sample(n, rng) : wishart_spectrum(n, c, rng);
        const DeviationStatistic stat = s_hat(s, kDefaultSpikeAlpha, grid.spike_scan);
        return Trial{stat.normalized, stat.value, stat.spikes.head + stat.spikes.tail};
      });
      CalibrationCell cell;
      cell.c = c;
      cell.n = n;
      for (const Trial& t : trials) {
        cell.normalized.push_back(t.normalized);
        cell.s_hat.push_back(t.value);
        cell.removed.push_back(t.removed);
      }
      std::vector<double> sorted = cell.normalized;
      std::sort(sorted.begin(), sorted.end());
      cell.min = sorted.front();
      cell.max = sorted.back();
      cell.mean = mean_of(cell.normalized);
      cell.q05 = quantile_sorted(sorted, 0.05);
      cell.q50 = quantile_sorted(sorted, 0.50);
      cell.q95 = quantile_sorted(sorted, 0.95);
      double removed = 0.0;
      for (std::size_t r : cell.removed) removed += static_cast<double>(r);
      cell.mean_removed = removed / static_cast<double>(cell.removed.size());
      cells.push_back(std::move(cell));
    }
  }
  return cells;
}

RateFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw Error(ErrorCode::kInvalidArgument, "log-log fit needs two equal-length series of length >= 2");
  }
  const std::size_t m = x.size();
  std::vector<double> lx(m);
  std::vector<double> ly(m);
  for (std::size_t i = 0; i < m; ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw Error(ErrorCode::kInvalidArgument, "log-log fit needs positive data");
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
  }
  const double mx = mean_of(lx);
  const double my = mean_of(ly);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  if (!(sxx > 0.0)) throw Error(ErrorCode::kDegenerate, "x values must not all coincide");
  RateFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  // A constant series is fitted exactly.
  fit.r_squared = syy > 0.0 ? std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0) : 1.0;
  fit.n_values = x;
  fit.means = y;
  return fit;
}

RateFit rate_prop1(const std::vector<std::size_t>& n_values, std::size_t trials, std::uint64_t seed, double c,
                   std::size_t bin_factor, HarnessOptions opts) {
  check_rate_grid(n_values, trials);
  if (bin_factor < 1) throw Error(ErrorCode::kInvalidArgument, "bin factor must be >= 1");
  const MPParams law = MPParams::from_shape(c, 1.0);
  const MPDistribution dist(law);
  std::vector<double> xs;
  std::vector<double> ys;
  for (std::size_t k = 0; k < n_values.size(); ++k) {
    const std::size_t n = n_values[k];
    const std::size_t bins = bin_factor * integer_cbrt(n);
    auto values = run_map<double>(opts, trials, [&](std::size_t t) {
      Rng rng = Rng::derive(seed, k, t);
      return s_n_theoretical(dist.sample(n, rng), law, bins).value;
    });
    xs.push_back(static_cast<double>(n));
    ys.push_back(mean_of(values) / std::sqrt(std::log(static_cast<double>(n))));
  }
  return fit_loglog(xs, ys);
}

EdgeRates rate_edge(const std::vector<std::size_t>& n_values, std::size_t trials, std::uint64_t seed, double c,
                    HarnessOptions opts) {
  check_rate_grid(n_values, trials);
  const MPParams law = MPParams::from_shape(c, 1.0);
  const MPDistribution dist(law);
  struct Gaps {
    double lower = 0.0;
    double upper = 0.0;
  };
  std::vector<double> xs;
  std::vector<double> lower;
  std::vector<double> upper;
  for (std::size_t k = 0; k < n_values.size(); ++k) {
    const std::size_t n = n_values[k];
    auto gaps = run_map<Gaps>(opts, trials, [&](std::size_t t) {
      Rng rng = Rng::derive(seed, k, t);
      const Spectrum s = dist.sample(n, rng);
      return Gaps{s.min() - law.a, law.b - s.max()};
    });
    double lo = 0.0, hi = 0.0;
    for (const Gaps& g : gaps) {
      lo += g.lower;
      hi += g.upper;
    }
    xs.push_back(static_cast<double>(n));
    lower.push_back(lo / static_cast<double>(trials));
    upper.push_back(hi / static_cast<double>(trials));
  }
  return EdgeRates{fit_loglog(xs, lower), fit_loglog(xs, upper)};
}

BbpRecord bbp_check(double alpha, double c, std::size_t n, std::size_t trials, std::uint64_t seed,
                    HarnessOptions opts) {
  if (trials < 1) throw Error(ErrorCode::kInvalidArgument, "need at least one trial");
  if (n < 1000) throw Error(ErrorCode::kInvalidArgument, "spike check needs n >= 1000");
  BbpRecord rec;
  rec.alpha = alpha;
  rec.c = c;
  rec.n = n;
  rec.trials = trials;
  rec.psi = psi(alpha, c, 1.0);
  rec.edge = (1.0 + std::sqrt(c)) * (1.0 + std::sqrt(c));
  struct Tops {
    double spiked = 0.0;
    double null = 0.0;
    bool detected = false;
  };
  auto tops = run_map<Tops>(opts, trials, [&](std::size_t t) {
    Rng spiked_rng = Rng::derive(seed, 0, t);
    Rng null_rng = Rng::derive(seed, 1, t);
    const Spectrum spiked = wishart_spectrum(n, c, spiked_rng, alpha);
    const Spectrum null = wishart_spectrum(n, c, null_rng);
    return Tops{spiked.max(), null.max(), detect_spikes(spiked).head >= 1};
  });
  double detected = 0.0;
  for (const Tops& t : tops) {
    rec.mean_top += t.spiked;
    rec.mean_top_null += t.null;
    detected += t.detected ? 1.0 : 0.0;
  }
  const auto dt = static_cast<double>(trials);
  rec.mean_top /= dt;
  rec.mean_top_null /= dt;
  rec.detected_fraction = detected / dt;
  rec.rel_error = std::abs(rec.mean_top - rec.psi) / rec.psi;
  rec.rel_error_null = std::abs(rec.mean_top_null - rec.edge) / rec.edge;
  return rec;
}

}  // namespace specstop
