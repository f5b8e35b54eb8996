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

#include <atomic>
#include <stdexcept>
#include <string>
#include <vector>

#include "specstop/parallel.hpp"
#include "specstop/rng.hpp"

using namespace specstop;

namespace {

double work(std::size_t i) {
  Rng r = Rng::derive(77, i);
  double acc = 0.0;
  for (int k = 0; k < 1000; ++k) acc += r.normal();
  return acc;
}

}  // namespace

TEST_CASE("parallel map equals serial map") {
  const auto serial = serial_map<double>(257, work);
  const auto parallel = parallel_map<double>(257, work);
  CHECK(parallel == serial);
  CHECK(parallel_map<double>(0, work).empty());
}

TEST_CASE("result does not depend on the thread count") {
  const int saved = max_threads();
  const auto reference = serial_map<double>(64, work);
  for (int t : {1, 2, 3, 8}) {
    set_num_threads(t);
    CHECK(parallel_map<double>(64, work) == reference);
  }
  set_num_threads(saved);
}

TEST_CASE("lowest failing index is rethrown") {
  std::atomic<int> calls{0};
  auto fn = [&](std::size_t i) -> int {
    ++calls;
    if (i == 5 || i == 17 || i == 40) throw std::runtime_error("item " + std::to_string(i));
    return static_cast<int>(i);
  };
  for (int t : {1, 4}) {
    set_num_threads(t);
    try {
      parallel_map<int>(50, fn);
      FAIL("expected throw");
    } catch (const std::runtime_error& e) {
      CHECK(std::string(e.what()) == "item 5");
    }
  }
  try {
    serial_map<int>(50, fn);
    FAIL("expected throw");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()) == "item 5");
  }
}
