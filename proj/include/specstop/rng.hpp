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

#include <cstdint>

namespace specstop {

/// Counter-based generator: the k-th output is a pure function of
/// (key, k), so streams can be split and replayed without carrying state
/// across threads. The mixing function is SplitMix64.
///
/// All distributions below are implemented here instead of using
/// <random> distributions, whose algorithms differ between standard
/// libraries; seeded output is therefore identical on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t key) : key_(key) {}

  /// Independent stream for (key, stream id).
  static Rng derive(std::uint64_t key, std::uint64_t stream);
  static Rng derive(std::uint64_t key, std::uint64_t stream, std::uint64_t substream);

  std::uint64_t next_u64();
  /// Uniform on the open interval (0, 1).
  double uniform();
  /// Uniform integer on [0, bound).
  std::uint64_t uniform_index(std::uint64_t bound);
  /// Standard normal via Box-Muller; the second variate of each pair is cached.
  double normal();
  /// Gamma(shape, 1) by Marsaglia-Tsang.
  double gamma(double shape);
  /// Chi distribution with `dof` degrees of freedom.
  double chi(double dof);

  std::uint64_t key() const { return key_; }
  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace specstop
