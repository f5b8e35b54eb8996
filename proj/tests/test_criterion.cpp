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

#include "specstop/criterion.hpp"
#include "specstop/error.hpp"
#include "specstop/linalg.hpp"
#include "specstop/mp_law.hpp"
#include "specstop/rng.hpp"

using namespace specstop;

namespace {

Spectrum mp_quantiles(double c, std::size_t n) {
  const MPDistribution dist(MPParams::from_shape(c, 1.0));
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = dist.quantile((static_cast<double>(i) + 0.5) / static_cast<double>(n));
  return Spectrum(std::move(v));
}

// Pareto(1.5) quantiles on the lower 80% of probability: heavy-tailed
// shape, no separated outliers.
std::vector<double> pareto_bulk(std::size_t n, double scale = 1.0) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = 0.8 * (static_cast<double>(i) + 0.5) / static_cast<double>(n);
    v[i] = scale * std::pow(1.0 - u, -2.0 / 3.0);
  }
  return v;
}

Spectrum light() { return mp_quantiles(0.25, 500); }
Spectrum heavy() { return Spectrum(pareto_bulk(500)); }

}  // namespace

TEST_CASE("threshold formula") {
  // n = e^3 is not an integer; check the formula at n = 20 and n = 21 and
  // that e^3 sits between them.
  const double at_e3 = 0.4 * std::sqrt(3.0) / std::exp(1.0);
  CHECK(at_e3 == doctest::Approx(0.2548).epsilon(1e-3));
  CHECK(threshold(20, 0.4).s_star > at_e3);
  CHECK(threshold(21, 0.4).s_star < at_e3);
  CHECK(threshold(1000, 0.4).s_star == doctest::Approx(0.10513).epsilon(1e-4));
  CHECK(threshold(1000, 0.8).s_star == doctest::Approx(2.0 * threshold(1000, 0.4).s_star).epsilon(1e-15));
  CHECK_THROWS_AS(threshold(2, 0.4), Error);
  // sqrt(ln n) / n^(1/3) peaks at n = e^1.5, so s* rises from 3 to 5.
  CHECK(threshold(4, 0.4).s_star > threshold(3, 0.4).s_star);
  CHECK(threshold(5, 0.4).s_star > threshold(4, 0.4).s_star);
  double prev = threshold(5, 0.4).s_star;
  for (std::size_t n = 6; n < 5000; n += 7) {
    const double s = threshold(n, 0.4).s_star;
    CHECK(s < prev);
    prev = s;
  }
}

TEST_CASE("bulk type names round trip") {
  for (BulkType t : {BulkType::kLightTail, BulkType::kBulkTransition, BulkType::kHeavyTail, BulkType::kRankCollapse}) {
    CHECK(bulk_type_from_string(to_string(t)) == t);
  }
  CHECK_THROWS_AS(bulk_type_from_string("XX"), Error);
  CHECK(SpectrumClassification{BulkType::kBulkTransition, 1, 4}.label() == "BT(1,4)");
}

TEST_CASE("classification examples") {
  SUBCASE("MP bulk without spikes") {
    CHECK(classify_spectrum(light()) == SpectrumClassification{BulkType::kLightTail, 0, 0});
  }
  SUBCASE("MP bulk plus seven far spikes") {
    const Spectrum base = mp_quantiles(0.5, 1000);
    std::vector<double> v(base.values().begin(), base.values().end());
    for (int i = 0; i < 7; ++i) v.push_back(5.0 * base.max());
    const Spectrum s(v);
    CHECK(classify_spectrum(s).label() == "LT(0,7)");
    CHECK(classify_spectrum(s, {}, 7).label() == "LT(0,7)");
  }
  SUBCASE("heavy-tailed bulk") {
    const Spectrum s(pareto_bulk(1000));
    const DeviationStatistic st = s_hat(s);
    CHECK(st.value > threshold(st.n_bulk, 0.4).s_star);
    CHECK(st.spikes.head == 0);
    CHECK(classify_spectrum(s).label() == "HT(0,0)");
  }
  SUBCASE("heavy-tailed bulk with a separated cluster") {
    auto v = pareto_bulk(1000);
    for (double x : {10.0, 10.2, 10.4}) v.push_back(x);
    CHECK(classify_spectrum(Spectrum(v)).label() == "BT(0,3)");
    // Same cluster pulled close to the bulk: HT.
    auto w = pareto_bulk(1000);
    for (double x : {3.3, 3.32, 3.34}) w.push_back(x);
    CHECK(classify_spectrum(Spectrum(w)).bulk_type == BulkType::kHeavyTail);
  }
  SUBCASE("two spike groups") {
    auto v = pareto_bulk(1000);
    for (double x : {40.0, 10.0, 10.1, 10.2, 10.3}) v.push_back(x);
    CHECK(classify_spectrum(Spectrum(v)).label() == "BT(4,1)");
    // Matching to an expected count keeps only the top spikes.
    CHECK(classify_spectrum(Spectrum(v), {}, 1).label() == "BT(0,1)");
  }
  SUBCASE("rank collapse") {
    Rng rng(3);
    const std::size_t n = 60, big = 120;
    std::vector<double> u(n), w(big), entries(n * big);
    for (double& x : u) x = rng.normal();
    for (double& x : w) x = rng.normal();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < big; ++j) entries[i * big + j] = 100.0 * u[i] * w[j] + 0.01 * rng.normal();
    const SpectrumClassification c = classify_spectrum(gram_spectrum(WeightMatrix(n, big, entries)));
    CHECK(c.bulk_type == BulkType::kRankCollapse);
    CHECK(c.label_n >= 1);
  }
  SUBCASE("too small") { CHECK_THROWS_AS(classify_spectrum(mp_quantiles(0.5, 31)), Error); }
}

TEST_CASE("classification is total and scale invariant") {
  Rng rng(17);
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<double> v(64 + rng.uniform_index(400));
    const double tail = 0.5 + 3.0 * rng.uniform();
    for (double& x : v) x = std::pow(rng.uniform(), -1.0 / tail);
    const Spectrum s(v);
    const SpectrumClassification c = classify_spectrum(s);
    const int type = static_cast<int>(c.bulk_type);
    CHECK(type >= 0);
    CHECK(type <= 3);
    if (c.bulk_type == BulkType::kRankCollapse) CHECK(c.label_n >= 1);
    CHECK(classify_spectrum(s.scaled(3.7)) == c);
  }
}

TEST_CASE("config validation") {
  CriterionConfig cfg;
  cfg.kappa = 1.0;
  CHECK_THROWS_AS(StoppingMonitor{cfg}, Error);
  cfg = {};
  cfg.required_consecutive = 0;
  CHECK_THROWS_AS(StoppingMonitor{cfg}, Error);
}

TEST_CASE("monitor: three consecutive hits stop") {
  StoppingMonitor mon;
  const auto& v1 = mon.evaluate_epoch(1, heavy());
  CHECK(v1.hit);
  CHECK_FALSE(v1.stop);
  mon.evaluate_epoch(2, heavy());
  const auto& v3 = mon.evaluate_epoch(3, heavy());
  CHECK(v3.stop);
  CHECK(v3.consecutive_hits == 3);
  CHECK(mon.stopped_at() == 3);
  // Further hits keep the counter capped.
  CHECK(mon.evaluate_epoch(4, heavy()).consecutive_hits == 3);
  CHECK(mon.stopped_at() == 3);
}

TEST_CASE("monitor: a miss resets the counter") {
  StoppingMonitor mon;
  const std::vector<bool> pattern{true, false, true, true, true};
  for (std::size_t i = 0; i < pattern.size(); ++i) {
    const auto& v = mon.evaluate_epoch(static_cast<std::int64_t>(i + 1), pattern[i] ? heavy() : light());
    CHECK(v.hit == pattern[i]);
    CHECK(v.hit == (v.s_hat > v.s_star));
    CHECK(v.stop == (i == 4));
  }
  CHECK(mon.stopped_at() == 5);
}

TEST_CASE("monitor: skipped epochs neither count nor reset") {
  StoppingMonitor mon;
  mon.evaluate_epoch(0, heavy());
  mon.evaluate_epoch(1, heavy());
  const auto& skipped = mon.evaluate_epoch(2, Spectrum(std::vector<double>(100, 2.0)));
  CHECK(skipped.skipped);
  CHECK_FALSE(skipped.hit);
  CHECK_FALSE(skipped.skip_reason.empty());
  CHECK(skipped.consecutive_hits == 2);
  const auto& small = mon.evaluate_epoch(3, mp_quantiles(0.5, 10));
  CHECK(small.skipped);
  CHECK(mon.evaluate_epoch(4, heavy()).stop);
  CHECK(mon.stopped_at() == 4);
}

TEST_CASE("monitor: epochs must increase") {
  StoppingMonitor mon;
  mon.evaluate_epoch(5, light());
  CHECK_THROWS_AS(mon.evaluate_epoch(5, light()), Error);
  CHECK_THROWS_AS(mon.evaluate_epoch(3, light()), Error);
}

TEST_CASE("monitor: replay determinism and scale invariance") {
  std::vector<Spectrum> series;
  Rng rng(5);
  for (int e = 0; e < 12; ++e) {
    std::vector<double> v(200);
    const double tail = 0.8 + 0.3 * e;
    for (double& x : v) x = std::pow(rng.uniform(), -1.0 / tail);
    series.emplace_back(v);
  }
  StoppingMonitor a, b, scaled;
  for (std::size_t e = 0; e < series.size(); ++e) {
    a.evaluate_epoch(static_cast<std::int64_t>(e), series[e]);
    b.evaluate_epoch(static_cast<std::int64_t>(e), series[e]);
    scaled.evaluate_epoch(static_cast<std::int64_t>(e), series[e].scaled(0.01 * static_cast<double>(e + 1)));
  }
  CHECK(a.history() == b.history());
  for (std::size_t e = 0; e < series.size(); ++e) {
    CHECK(a.history()[e].hit == scaled.history()[e].hit);
    CHECK(a.history()[e].stop == scaled.history()[e].stop);
  }
}
