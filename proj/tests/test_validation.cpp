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


#include "doctest.h"

#include <cmath>
#include <vector>

#include "specstop/error.hpp"
#include "specstop/mp_law.hpp"
#include "specstop/rng.hpp"
#include "specstop/validation.hpp"

using namespace specstop;

namespace {

struct Moments {
  double top = 0.0;
  double top_sq = 0.0;
  double mean = 0.0;
};

template <class Sampler>
Moments moments(Sampler&& draw, int trials) {
  Moments m;
  for (int t = 0; t < trials; ++t) {
    const Spectrum s = draw(t);
    m.top += s.max();
    m.top_sq += s.max() * s.max();
    double sum = 0.0;
    for (double x : s.values()) sum += x;
    m.mean += sum / static_cast<double>(s.size());
  }
  m.top /= trials;
  m.top_sq /= trials;
  m.mean /= trials;
  return m;
}

}  // namespace

TEST_CASE("bidiagonal Wishart sampler matches the dense construction in law") {
  const int trials = 300;
  for (double spike : {1.0, 4.0}) {
    const Moments fast = moments(
        [&](int t) {
          Rng r = Rng::derive(1, 0, static_cast<std::uint64_t>(t));
          return wishart_spectrum(30, 0.5, r, spike, 1.3);
        },
        trials);
    const Moments dense = moments(
        [&](int t) {
          Rng r = Rng::derive(1, 1, static_cast<std::uint64_t>(t));
          return wishart_spectrum_dense(30, 0.5, r, spike, 1.3);
        },
        trials);
    // E[trace / n] = sigma2 (n - 1 + spike) / n.
    const double expected_mean = 1.3 * (29.0 + spike) / 30.0;
    CHECK(fast.mean == doctest::Approx(expected_mean).epsilon(0.02));
    CHECK(dense.mean == doctest::Approx(expected_mean).epsilon(0.02));
    const double sd = std::sqrt(std::max(fast.top_sq - fast.top * fast.top, 1e-12));
    CHECK(std::abs(fast.top - dense.top) < 4.0 * sd * std::sqrt(2.0 / trials));
  }
}

TEST_CASE("Wishart sampler shape handling") {
  Rng r(3);
  const Spectrum s = wishart_spectrum(50, 0.25, r);
  CHECK(s.size() == 50);
  CHECK(s.min() > 0.0);
  Rng q(3);
  CHECK(wishart_spectrum(50, 0.25, q) == s);
  CHECK_THROWS_AS(wishart_spectrum(50, 1.5, r), Error);
  CHECK_THROWS_AS(wishart_spectrum(50, 0.5, r, 0.0), Error);
}

TEST_CASE("calibration table is reproducible and thread-independent") {
  const TrialGrid grid{{0.5}, {200, 300}, 12, 4};
  const auto a = calibrate(grid);
  const auto b = calibrate(grid);
  const auto serial = calibrate(grid, NullSampler::kIid, HarnessOptions{false});
  REQUIRE(a.size() == 2);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].normalized == b[i].normalized);
    CHECK(a[i].normalized == serial[i].normalized);
    CHECK(a[i].normalized.size() == 12);
    CHECK(a[i].min <= a[i].q05);
    CHECK(a[i].q05 <= a[i].q50);
    CHECK(a[i].q50 <= a[i].q95);
    CHECK(a[i].q95 <= a[i].max);
  }
  CHECK(a[0].c == 0.5);
  CHECK(a[1].n == 300);
  const auto w = calibrate(grid, NullSampler::kWishart);
  CHECK(w[0].normalized != a[0].normalized);
}

TEST_CASE("calibration guards") {
  CHECK_THROWS_AS(calibrate(TrialGrid{{0.5}, {200}, 5, 1}), Error);
  CHECK_THROWS_AS(calibrate(TrialGrid{{0.5}, {32}, 10, 1}), Error);
}

TEST_CASE("log-log fit self tests") {
  const std::vector<double> n{512, 1024, 2048, 4096, 8192, 16384};
  std::vector<double> exact(n.size()), flat(n.size(), 3.0);
  for (std::size_t i = 0; i < n.size(); ++i) exact[i] = 5.0 * std::pow(n[i], -2.0 / 3.0);
  const RateFit f = fit_loglog(n, exact);
  CHECK(std::abs(f.slope + 2.0 / 3.0) < 1e-12);
  CHECK(f.intercept == doctest::Approx(std::log(5.0)).epsilon(1e-12));
  CHECK(f.r_squared == doctest::Approx(1.0).epsilon(1e-12));
  const RateFit g = fit_loglog(n, flat);
  CHECK(std::abs(g.slope) < 1e-15);
  CHECK(g.r_squared == 1.0);
  CHECK_THROWS_AS(fit_loglog({1.0}, {1.0}), Error);
  CHECK_THROWS_AS(fit_loglog({1.0, 2.0}, {1.0, -1.0}), Error);
  CHECK_THROWS_AS(fit_loglog({2.0, 2.0}, {1.0, 3.0}), Error);
}

TEST_CASE("rate harnesses on a short grid") {
  const RateFit p = rate_prop1({256, 1024, 4096}, 10, 2);
  CHECK(p.slope < 0.0);
  CHECK(p.r_squared >= 0.0);
  CHECK(p.r_squared <= 1.0);
  const EdgeRates e = rate_edge({256, 1024, 4096}, 10, 2);
  CHECK(e.lower.slope < 0.0);
  CHECK(e.upper.slope < 0.0);
  const RateFit serial = rate_prop1({256, 1024, 4096}, 10, 2, 0.5, 2, HarnessOptions{false});
  CHECK(serial.means == p.means);
}

TEST_CASE("more bins raise the variance term at fixed n") {
  const RateFit m2 = rate_prop1({1000, 2000}, 15, 3, 0.5, 2);
  const RateFit m4 = rate_prop1({1000, 2000}, 15, 3, 0.5, 4);
  CHECK(m4.means[0] > m2.means[0]);
  CHECK(m4.means[1] > m2.means[1]);
}

TEST_CASE("spike map check") {
  CHECK_THROWS_AS(bbp_check(3.0, 0.5, 500, 2, 1), Error);
  try {
    bbp_check(1.5, 0.5, 1000, 2, 1);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kNotDistant);
  }
  const BbpRecord r = bbp_check(3.0, 0.5, 1000, 4, 1);
  CHECK(r.psi == doctest::Approx(3.75));
  CHECK(r.rel_error < 0.03);
  CHECK(r.rel_error_null < 0.03);
  // Just above the threshold the outlier sits on the bulk edge.
  const BbpRecord weak = bbp_check(1.75, 0.5, 1000, 4, 2);
  CHECK(std::abs(weak.mean_top - weak.edge) / weak.edge < 0.02);
}
