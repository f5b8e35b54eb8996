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


#include "specstop/rng.hpp"

#include <cmath>
#include <numbers>

#include "specstop/error.hpp"

namespace specstop {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += kGolden;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

Rng Rng::derive(std::uint64_t key, std::uint64_t stream) {
  return Rng(splitmix64(splitmix64(key) ^ splitmix64(stream + 0x632BE59BD9B4E019ULL)));
}

Rng Rng::derive(std::uint64_t key, std::uint64_t stream, std::uint64_t substream) {
  return derive(derive(key, stream).key(), substream);
}

std::uint64_t Rng::next_u64() {
  return splitmix64(key_ + (counter_++) * kGolden);
}

double Rng::uniform() {
  // 53 random bits, shifted off zero.
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

std::uint64_t Rng::uniform_index(std::uint64_t bound) {
  if (bound == 0) throw Error(ErrorCode::kInvalidArgument, "uniform_index bound must be positive");
  // Rejection on the top of the range removes modulo bias.
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t x;
  do {
    x = next_u64();
  } while (x >= limit);
  return x % bound;
}

double Rng::normal() {
  if (has_cached_normal_) {
    has_cached_normal_ = false;
    return cached_normal_;
  }
  const double u1 = uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  cached_normal_ = radius * std::sin(angle);
  has_cached_normal_ = true;
  return radius * std::cos(angle);
}

double Rng::gamma(double shape) {
  if (!(shape > 0.0)) throw Error(ErrorCode::kInvalidArgument, "gamma shape must be positive");
  if (shape < 1.0) {
    // Gamma(a) = Gamma(a + 1) * U^(1/a)
    const double g = gamma(shape + 1.0);
    return g * std::pow(uniform(), 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x;
    double v;
    do {
      x = normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double Rng::chi(double dof) { return std::sqrt(2.0 * gamma(0.5 * dof)); }

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNonSymmetric: return "NonSymmetric";
    case ErrorCode::kNonFinite: return "NonFinite";
    case ErrorCode::kEmptySpectrum: return "EmptySpectrum";
    case ErrorCode::kDegenerate: return "Degenerate";
    case ErrorCode::kNotDistant: return "NotDistant";
    case ErrorCode::kEmptyBinRange: return "EmptyBinRange";
    case ErrorCode::kOutOfRange: return "OutOfRange";
    case ErrorCode::kTooSmall: return "TooSmall";
    case ErrorCode::kOddDimension: return "OddDimension";
    case ErrorCode::kDimensionTooSmall: return "DimensionTooSmall";
    case ErrorCode::kSingleClass: return "SingleClass";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kIo: return "Io";
    case ErrorCode::kDuplicateEpoch: return "DuplicateEpoch";
    case ErrorCode::kEmpty: return "Empty";
    case ErrorCode::kSchemaError: return "SchemaError";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace specstop
