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

#include "specstop/rng.hpp"

using specstop::Rng;

TEST_CASE("same key replays the same stream") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("derived streams differ from each other and from the parent") {
  Rng p(7);
  Rng s0 = Rng::derive(7, 0);
  Rng s1 = Rng::derive(7, 1);
  Rng s10 = Rng::derive(7, 1, 0);
  Rng s11 = Rng::derive(7, 1, 1);
  const auto x = p.next_u64();
  const auto y0 = s0.next_u64();
  const auto y1 = s1.next_u64();
  CHECK(x != y0);
  CHECK(y0 != y1);
  CHECK(s10.next_u64() != s11.next_u64());
}

TEST_CASE("uniform stays in the open unit interval with mean 1/2") {
  Rng r(1);
  double sum = 0.0;
  int outside = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = r.uniform();
    if (!(u > 0.0 && u < 1.0)) ++outside;
    sum += u;
  }
  CHECK(outside == 0);
  CHECK(sum / n == doctest::Approx(0.5).epsilon(0.005));
}

TEST_CASE("uniform_index covers the range without bias") {
  Rng r(3);
  std::vector<int> counts(7, 0);
  const int n = 70000;
  for (int i = 0; i < n; ++i) ++counts[r.uniform_index(7)];
  for (int c : counts) CHECK(std::abs(c - 10000) < 500);
}

TEST_CASE("normal moments") {
  Rng r(11);
  const int n = 400000;
  double m1 = 0.0, m2 = 0.0, m4 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = r.normal();
    m1 += z;
    m2 += z * z;
    m4 += z * z * z * z;
  }
  CHECK(std::abs(m1 / n) < 0.01);
  CHECK(m2 / n == doctest::Approx(1.0).epsilon(0.01));
  CHECK(m4 / n == doctest::Approx(3.0).epsilon(0.03));
}

TEST_CASE("gamma mean and variance equal the shape") {
  for (double shape : {0.3, 1.0, 2.5, 40.0}) {
    Rng r(static_cast<std::uint64_t>(shape * 100));
    const int n = 200000;
    double m1 = 0.0, m2 = 0.0;
    int negative = 0;
    for (int i = 0; i < n; ++i) {
      const double g = r.gamma(shape);
      if (g < 0.0) ++negative;
      m1 += g;
      m2 += g * g;
    }
    CHECK(negative == 0);
    const double mean = m1 / n;
    const double var = m2 / n - mean * mean;
    CHECK(mean == doctest::Approx(shape).epsilon(0.02));
    CHECK(var == doctest::Approx(shape).epsilon(0.05));
  }
}

TEST_CASE("chi squared has mean equal to the degrees of freedom") {
  Rng r(5);
  const int n = 100000;
  double m = 0.0;
  for (int i = 0; i < n; ++i) {
    const double c = r.chi(17.0);
    m += c * c;
  }
  CHECK(m / n == doctest::Approx(17.0).epsilon(0.01));
}
